#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "contestlab/errors.hpp"

namespace contestlab {

/// Computational powers of the contestants (candidates verified per unit
/// time). Stored sorted ascending; `original_index()` maps each sorted slot
/// back to its position in the input sequence, so results can be reported in
/// the caller's order.
class PowerProfile {
 public:
  explicit PowerProfile(std::vector<double> powers) {
    if (powers.empty()) {
      throw invalid_input_error("PowerProfile: at least one power required");
    }
    for (double x : powers) {
      if (!std::isfinite(x) || x <= 0.0) {
        throw invalid_input_error(
            "PowerProfile: powers must be finite and strictly positive");
      }
    }
    original_index_.resize(powers.size());
    std::iota(original_index_.begin(), original_index_.end(), std::size_t{0});
    std::stable_sort(original_index_.begin(), original_index_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return powers[a] < powers[b];
                     });
    sorted_.reserve(powers.size());
    for (std::size_t idx : original_index_) sorted_.push_back(powers[idx]);
  }

  std::size_t size() const noexcept { return sorted_.size(); }

  /// Powers in ascending order.
  const std::vector<double>& sorted() const noexcept { return sorted_; }

  /// original_index()[j] = input position of the j-th smallest power.
  const std::vector<std::size_t>& original_index() const noexcept {
    return original_index_;
  }

  double max_power() const noexcept { return sorted_.back(); }

  /// Sum of all powers (accumulated in ascending order).
  double total() const noexcept {
    double s = 0.0;
    for (double x : sorted_) s += x;
    return s;
  }

  std::vector<double> in_input_order() const {
    std::vector<double> out(sorted_.size());
    for (std::size_t j = 0; j < sorted_.size(); ++j) {
      out[original_index_[j]] = sorted_[j];
    }
    return out;
  }

  /// Scatter sorted-order values back to input order.
  template <class T>
  std::vector<T> to_input_order(const std::vector<T>& sorted_values) const {
    std::vector<T> out(sorted_values.size());
    for (std::size_t j = 0; j < sorted_values.size(); ++j) {
      out[original_index_[j]] = sorted_values[j];
    }
    return out;
  }

 private:
  std::vector<double> sorted_;
  std::vector<std::size_t> original_index_;
};

/// A winner-take-all search contest: powers plus the number of solutions
/// hidden in the candidate space.
struct ContestSpec {
  PowerProfile profile;
  std::int64_t n_solutions;

  ContestSpec(PowerProfile p, std::int64_t n)
      : profile(std::move(p)), n_solutions(n) {
    if (n < 1) {
      throw invalid_input_error("ContestSpec: n_solutions must be >= 1");
    }
  }
};

/// Finite-candidate-set variant: N candidates, of which n are solutions.
struct DiscreteContestSpec {
  ContestSpec spec;
  std::int64_t candidate_count;

  DiscreteContestSpec(ContestSpec s, std::int64_t big_n)
      : spec(std::move(s)), candidate_count(big_n) {
    if (candidate_count < spec.n_solutions) {
      throw invalid_input_error(
          "DiscreteContestSpec: candidate_count must be >= n_solutions");
    }
  }
};

enum class ProbMethod { quadrature, exact_rational, monte_carlo };

inline const char* to_string(ProbMethod m) noexcept {
  switch (m) {
    case ProbMethod::quadrature: return "quadrature";
    case ProbMethod::exact_rational: return "exact-rational";
    case ProbMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

/// Per-player winning probabilities, reported in input order.
struct WinProbabilities {
  std::vector<double> p;
  ProbMethod method = ProbMethod::quadrature;
  double abs_error_bound = 0.0;
};

struct QuadratureConfig {
  int max_nodes = 16384;
  double target_abs_error = 1e-12;
};

inline void validate(const QuadratureConfig& cfg) {
  if (cfg.max_nodes < 2) {
    throw invalid_input_error("QuadratureConfig: max_nodes must be >= 2");
  }
  if (!(cfg.target_abs_error > 0.0)) {
    throw invalid_input_error(
        "QuadratureConfig: target_abs_error must be positive");
  }
}

/// The product-form integrand of the winning-probability formula:
/// pi(z) = prod_j (1 - ratios[j] * z), with ratios[j] = x_j / x_m sorted
/// ascending (last ratio is exactly 1) and `exponent` the solution count.
struct PolyFactors {
  std::vector<double> ratios;
  std::int64_t exponent = 1;

  static PolyFactors from_spec(const ContestSpec& spec) {
    PolyFactors f;
    f.exponent = spec.n_solutions;
    const auto& xs = spec.profile.sorted();
    const double xm = xs.back();
    f.ratios.reserve(xs.size());
    for (double x : xs) f.ratios.push_back(x / xm);
    f.ratios.back() = 1.0;  // x_m / x_m, exact
    return f;
  }

  std::size_t player_count() const noexcept { return ratios.size(); }

  /// Polynomial degree of pi_{-i}(z) * pi(z)^(exponent-1).
  std::int64_t integrand_degree() const noexcept {
    return static_cast<std::int64_t>(ratios.size()) * exponent - 1;
  }
};

}  // namespace contestlab
