#pragma once

#include "rbv/netcore.hpp"
#include "rbv/radon.hpp"

namespace rbv {

/// Binary classifier whose decision boundary is the graph of `boundary` over
/// the coordinates other than `axis` (0-based).
struct HorizonClassifier {
  BoundaryFunction boundary;
  Eigen::Index axis = 0;
  Orientation orientation = Orientation::BelowGraph;

  int dim() const { return boundary.dim + 1; }
  int label(const VectorXd& x) const;
};

/// Classifier on the last coordinate, the layout used by the experiments.
HorizonClassifier horizon_on_last_axis(BoundaryFunction boundary,
                                       Orientation orientation = Orientation::BelowGraph);

}  // namespace rbv
