#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "contestlab/contest.hpp"
#include "contestlab/errors.hpp"
#include "contestlab/gauss_legendre.hpp"

namespace contestlab {

namespace detail {

// Below this value of the smallest factor 1 - r_j z, (1 - rz)^n is evaluated
// in log space: the direct product underflows for large exponents while the
// per-player ratio pi_{-i} = pi / factor_i can still be order one.
inline constexpr double kDirectPathCutoff = 1e-3;

// exp underflows to zero near -745; below this the integrand contributes
// nothing at the absolute accuracy this library targets.
inline constexpr double kExpUnderflowArg = -744.0;

/// Add the quadrature contributions of one panel [a, b] to the per-player
/// integrals of pi_{-i}(z) * pi(z)^(n-1). acc/comp form a Kahan-compensated
/// accumulator per player; vals is caller-provided scratch of size m.
inline void accumulate_panel(const PolyFactors& f,
                             const GaussLegendreRule& rule, double a, double b,
                             std::vector<double>& acc, std::vector<double>& comp,
                             std::vector<double>& vals) {
  const std::size_t m = f.player_count();
  const double n_d = static_cast<double>(f.exponent);
  const double width = b - a;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double z = a + width * rule.nodes[q];
    const double w = width * rule.weights[q];
    // Ratios ascend, so the last factor 1 - r_{m-1} z = 1 - z is smallest.
    const double f_min = std::fma(-f.ratios[m - 1], z, 1.0);
    if (f_min > kDirectPathCutoff) {
      double prod = 1.0;
      for (std::size_t j = 0; j < m; ++j) {
        vals[j] = std::fma(-f.ratios[j], z, 1.0);
        prod *= vals[j];
      }
      // val_i = pi^n / factor_i. pow may underflow to 0 for huge n; the true
      // contribution is far below any absolute target by then.
      const double prod_n = std::pow(prod, n_d);
      for (std::size_t j = 0; j < m; ++j) vals[j] = prod_n / vals[j];
    } else {
      double logsum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        vals[j] = std::log1p(-f.ratios[j] * z);
        logsum += vals[j];
      }
      const double n_logsum = n_d * logsum;
      for (std::size_t j = 0; j < m; ++j) {
        const double arg = n_logsum - vals[j];
        vals[j] = arg < kExpUnderflowArg ? 0.0 : std::exp(arg);
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double y = w * vals[j] - comp[j];
      const double t = acc[j] + y;
      comp[j] = (t - acc[j]) - y;
      acc[j] = t;
    }
  }
}

/// Integrate over [0, 1] split into `panels` equal panels with one rule.
inline std::vector<double> integrate_factors(const PolyFactors& f,
                                             const GaussLegendreRule& rule,
                                             int panels) {
  const std::size_t m = f.player_count();
  std::vector<double> acc(m, 0.0), comp(m, 0.0), vals(m);
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    accumulate_panel(f, rule, a, b, acc, comp, vals);
  }
  return acc;
}

// Rounding-noise allowance for the normalization check when the rule is in
// its exactness class: the only error left is floating-point accumulation,
// which grows slowly with the integrand degree m*n.
inline double normalization_floor(double mn) {
  return 4e-12 * std::sqrt(mn);
}

}  // namespace detail

/// Winning probability of every player: p_i = n * (x_i/x_m) *
/// Integral_0^1 pi_{-i}(z) * pi(z)^(n-1) dz, evaluated by Gauss-Legendre
/// quadrature sized to integrate the degree-(mn-1) polynomial exactly.
/// Above cfg.max_nodes the capped rule is applied on composite panels and a
/// panel-refinement difference serves as the error estimate. The result is
/// checked against sum(p) = 1 and reported in input order.
inline WinProbabilities win_probabilities(const ContestSpec& spec,
                                          const QuadratureConfig& cfg = {}) {
  validate(cfg);
  const std::size_t m = spec.profile.size();
  if (m == 1) {
    // Single player: wins with certainty, no integration.
    return WinProbabilities{{1.0}, ProbMethod::quadrature, 0.0};
  }

  const PolyFactors f = PolyFactors::from_spec(spec);
  const double mn =
      static_cast<double>(m) * static_cast<double>(f.exponent);
  const std::int64_t k_target =
      (static_cast<std::int64_t>(m) * f.exponent + 1) / 2 + 1;

  std::vector<double> integrals;
  double est_error = 0.0;  // composite-path refinement estimate, p units
  const bool exact_class = k_target <= cfg.max_nodes;
  if (exact_class) {
    int k = quantize_node_count(static_cast<int>(k_target));
    if (k > cfg.max_nodes) k = cfg.max_nodes;  // still >= k_target
    integrals = detail::integrate_factors(f, gauss_legendre_rule(k), 1);
  } else {
    const auto& rule = gauss_legendre_rule(cfg.max_nodes);
    const int panels =
        static_cast<int>((k_target + cfg.max_nodes - 1) / cfg.max_nodes);
    const auto coarse = detail::integrate_factors(f, rule, panels);
    integrals = detail::integrate_factors(f, rule, panels + 1);
    const double n_d = static_cast<double>(f.exponent);
    for (std::size_t j = 0; j < m; ++j) {
      est_error = std::max(est_error, n_d * f.ratios[j] *
                                          std::abs(integrals[j] - coarse[j]));
    }
  }

  const double n_d = static_cast<double>(f.exponent);
  std::vector<double> p_sorted(m);
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    p_sorted[j] = n_d * f.ratios[j] * integrals[j];
    const double y = p_sorted[j] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  double bound = std::max(cfg.target_abs_error, detail::normalization_floor(mn));
  if (!exact_class) bound = std::max(bound, 8.0 * est_error);
  const double residual = std::abs(sum - 1.0);
  if (!(residual <= bound)) {
    throw numerical_failure_error(
        "win_probabilities: probabilities failed the normalization check",
        residual);
  }

  WinProbabilities out;
  out.p = spec.profile.to_input_order(p_sorted);
  out.method = ProbMethod::quadrature;
  out.abs_error_bound = bound;
  return out;
}

/// Per-unit-power return p_i / x_i (input order) — the quantity whose
/// monotonicity in x_i is the Matthew effect.
inline std::vector<double> efficiency(const ContestSpec& spec,
                                      const QuadratureConfig& cfg = {}) {
  const WinProbabilities wp = win_probabilities(spec, cfg);
  const std::vector<double> xs = spec.profile.in_input_order();
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = wp.p[i] / xs[i];
  return out;
}

/// Two-player single-solution closed form: the weaker player wins with
/// probability x_weak / (2 x_strong). Accepts either order and answers in
/// input order.
inline std::pair<double, double> two_player_closed_form(double x1, double x2) {
  if (!std::isfinite(x1) || !std::isfinite(x2) || x1 <= 0.0 || x2 <= 0.0) {
    throw invalid_input_error(
        "two_player_closed_form: powers must be finite and strictly positive");
  }
  if (x1 <= x2) {
    const double p1 = x1 / (2.0 * x2);
    return {p1, 1.0 - p1};
  }
  const double p2 = x2 / (2.0 * x1);
  return {1.0 - p2, p2};
}

}  // namespace contestlab
