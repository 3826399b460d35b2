#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "contestlab/errors.hpp"

namespace contestlab {

/// Gauss-Legendre rule on [0, 1]. A k-node rule integrates polynomials of
/// degree <= 2k - 1 exactly, which is what makes fixed-order quadrature an
/// *exact* method for the polynomial integrands in this library (up to
/// floating-point rounding).
struct GaussLegendreRule {
  std::vector<double> nodes;    // in (0, 1), ascending
  std::vector<double> weights;  // sum to 1
};

namespace detail {

/// Evaluate the Legendre polynomial P_k and its derivative at x via the
/// three-term recurrence. long double keeps the recurrence and the Newton
/// polish below well under 1 ulp of double for the node counts we use.
inline void legendre_pair(int k, long double x, long double& p,
                          long double& dp) {
  long double p0 = 1.0L;  // P_0
  long double p1 = x;     // P_1
  for (int j = 2; j <= k; ++j) {
    long double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  // P_k'(x) = k (x P_k - P_{k-1}) / (x^2 - 1)
  dp = k * (x * p1 - p0) / (x * x - 1.0L);
}

/// Compute the k-node rule on [-1, 1] and map it to [0, 1]. Nodes come in
/// symmetric pairs, so only the lower half is solved for.
inline GaussLegendreRule make_rule(int k) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(k));
  rule.weights.resize(static_cast<std::size_t>(k));
  const long double pi = 3.14159265358979323846264338327950288L;
  for (int i = 0; i < (k + 1) / 2; ++i) {
    // Tricomi-style initial guess, then Newton.
    long double x = std::cos(pi * (i + 0.75L) / (k + 0.5L));
    long double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(k, x, p, dp);
      long double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L * (1.0L + std::abs(x))) break;
    }
    legendre_pair(k, x, p, dp);
    long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    // x is the i-th node from the +1 end of [-1, 1]; map t = (1 + x) / 2.
    std::size_t hi = static_cast<std::size_t>(k - 1 - i);
    std::size_t lo = static_cast<std::size_t>(i);
    rule.nodes[hi] = static_cast<double>((1.0L + x) / 2.0L);
    rule.nodes[lo] = static_cast<double>((1.0L - x) / 2.0L);
    rule.weights[hi] = static_cast<double>(w / 2.0L);
    rule.weights[lo] = rule.weights[hi];
  }
  return rule;
}

}  // namespace detail

/// Round a requested node count up to the next rung of a geometric ladder
/// (1, 1.5, 2, 3, 4, 6, 8, ...). Exactness only improves with more nodes, so
/// rounding up is always safe, and the coarse grid means repeated queries for
/// nearby sizes share one cached rule.
inline int quantize_node_count(int k_min) {
  if (k_min < 2) return 2;
  int base = 2;
  while (true) {
    if (base >= k_min) return base;
    int mid = base + base / 2;
    if (mid >= k_min) return mid;
    if (base > (1 << 29)) {
      throw unsupported_size_error("quantize_node_count: request too large");
    }
    base *= 2;
  }
}

/// Process-wide cache of computed rules, keyed by (quantized) node count.
/// Rules are immutable once built; the mutex only guards the map itself.
inline const GaussLegendreRule& gauss_legendre_rule(int k) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  if (k < 2) {
    throw invalid_input_error("gauss_legendre_rule: need at least 2 nodes");
  }
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) {
    auto rule = std::make_unique<GaussLegendreRule>(detail::make_rule(k));
    it = cache.emplace(k, std::move(rule)).first;
  }
  return *it->second;
}

}  // namespace contestlab
