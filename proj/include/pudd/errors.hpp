#pragma once

#include <stdexcept>
#include <string>

namespace pudd {

/// A contingency table has a row or column that sums to zero.
struct ZeroMarginal : std::domain_error {
  using std::domain_error::domain_error;
};

/// Not enough samples to run a procedure (centroid init, table building).
struct TooFewSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct EmptyWindow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UntrainedClass : std::logic_error {
  using std::logic_error::logic_error;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LabelOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pudd
