#pragma once

#include <stdexcept>
#include <string>

namespace rbv {

class EmptySliceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A norm too close to zero to normalize by.
class DegenerateFunctionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rbv
