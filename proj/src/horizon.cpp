#include "rbv/horizon.hpp"

namespace rbv {

int HorizonClassifier::label(const VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("HorizonClassifier: point dimension mismatch");
  const double level = boundary(drop_axis(x, axis));
  const bool below = x[axis] <= level;
  const bool above = level <= x[axis];
  return (orientation == Orientation::BelowGraph ? below : above) ? 1 : 0;
}

HorizonClassifier horizon_on_last_axis(BoundaryFunction boundary, Orientation orientation) {
  const Eigen::Index axis = boundary.dim;
  return HorizonClassifier{std::move(boundary), axis, orientation};
}

}  // namespace rbv
