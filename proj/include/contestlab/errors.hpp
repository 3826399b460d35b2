#pragma once

#include <stdexcept>
#include <string>

namespace contestlab {

/// Rejected argument: non-finite or non-positive power, bad config, malformed
/// partition, and the like.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerics sanity check failed (e.g. computed probabilities do not sum to
/// one within the promised bound). Carries the achieved residual.
class numerical_failure_error : public std::runtime_error {
 public:
  numerical_failure_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Instance exceeds a configured tractability cap (exact-rational path).
class unsupported_size_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace contestlab
