#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "contestlab/contest.hpp"
#include "contestlab/errors.hpp"
#include "contestlab/win_probabilities.hpp"

namespace contestlab {

/// Distance between winning probabilities and proportional power shares as a
/// function of the solution count n.
struct GapCurve {
  std::vector<std::int64_t> n_values;               // strictly increasing
  std::vector<double> max_gap;                      // per n
  std::vector<std::vector<double>> per_player_gap;  // [point][player], input order
};

inline GapCurve gap_curve(const PowerProfile& profile,
                          const std::vector<std::int64_t>& n_values,
                          const QuadratureConfig& cfg = {}) {
  if (n_values.empty()) {
    throw invalid_input_error("gap_curve: need at least one n value");
  }
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    if (n_values[k] < 1) {
      throw invalid_input_error("gap_curve: every n must be >= 1");
    }
    if (k > 0 && n_values[k] <= n_values[k - 1]) {
      throw invalid_input_error("gap_curve: n values must be strictly increasing");
    }
  }
  const std::vector<double> x = profile.in_input_order();
  const double total = profile.total();
  GapCurve curve;
  curve.n_values = n_values;
  curve.max_gap.reserve(n_values.size());
  curve.per_player_gap.reserve(n_values.size());
  for (const std::int64_t n : n_values) {
    const WinProbabilities wp = win_probabilities(ContestSpec(profile, n), cfg);
    std::vector<double> gaps(x.size());
    double mx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      gaps[i] = std::abs(wp.p[i] - x[i] / total);
      if (gaps[i] > mx) mx = gaps[i];
    }
    curve.per_player_gap.push_back(std::move(gaps));
    curve.max_gap.push_back(mx);
  }
  return curve;
}

struct DecayFit {
  double slope = 0.0;      // least-squares slope of log gap vs log n
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares on (ln n, ln max_gap). A clean power law C * n^a
/// comes back with slope a; a poly-log factor drags the fitted slope toward
/// zero, which is why callers assert a window rather than an exact value.
inline DecayFit fit_decay_slope(const GapCurve& curve) {
  const std::size_t k = curve.n_values.size();
  if (k < 4) {
    throw invalid_input_error("fit_decay_slope: need at least 4 points");
  }
  for (const double g : curve.max_gap) {
    if (!(g > 0.0)) {
      throw invalid_input_error(
          "fit_decay_slope: zero gap has no logarithm — drop symmetric profiles");
    }
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sx += std::log(static_cast<double>(curve.n_values[i]));
    sy += std::log(curve.max_gap[i]);
  }
  const double mean_x = sx / static_cast<double>(k);
  const double mean_y = sy / static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(static_cast<double>(curve.n_values[i])) - mean_x;
    const double dy = std::log(curve.max_gap[i]) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  const double ss_res = syy - fit.slope * sxy;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace contestlab
