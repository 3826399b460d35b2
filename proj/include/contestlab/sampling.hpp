#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "contestlab/contest.hpp"
#include "contestlab/counter_rng.hpp"
#include "contestlab/errors.hpp"

namespace contestlab {

struct McConfig {
  std::int64_t trials = 1000000;
  std::uint64_t seed = 0;
  double confidence_z = 3.0;
};

inline void validate(const McConfig& cfg) {
  if (cfg.trials < 1) {
    throw invalid_input_error("McConfig: trials must be >= 1");
  }
  if (!(cfg.confidence_z > 0.0)) {
    throw invalid_input_error("McConfig: confidence_z must be positive");
  }
}

/// Seeded simulation result. win_count is the authoritative tally — the
/// integers sum to `trials` exactly (every trial crowns exactly one winner);
/// p_hat and half_width are its floating-point view.
struct McEstimate {
  std::vector<double> p_hat;
  std::vector<double> half_width;  // confidence_z * sqrt(p(1-p)/trials)
  std::vector<std::uint64_t> win_count;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// Worker-thread cap: the CONTEST_LAB_THREADS environment variable when set,
/// otherwise the hardware concurrency. Because randomness is counter-based
/// and tallies are integers, the cap affects speed only, never results.
inline unsigned thread_cap_from_env() {
  if (const char* cap = std::getenv("CONTEST_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && v >= 1) {
      return static_cast<unsigned>(std::min(v, 1024L));
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Run fn(lo, hi, counts) over disjoint trial ranges on worker threads and
/// sum the per-chunk integer tallies. Integer addition commutes, so the total
/// is independent of thread count and scheduling.
template <class Fn>
std::vector<std::uint64_t> parallel_trial_counts(std::int64_t trials,
                                                 std::size_t bins, Fn fn) {
  unsigned workers = thread_cap_from_env();
  if (static_cast<std::int64_t>(workers) > trials) {
    workers = static_cast<unsigned>(trials);
  }
  std::vector<std::vector<std::uint64_t>> partial(
      workers, std::vector<std::uint64_t>(bins, 0));
  if (workers <= 1) {
    fn(std::int64_t{0}, trials, partial[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::int64_t lo = trials * w / workers;
      const std::int64_t hi = trials * (w + 1) / workers;
      pool.emplace_back(
          [&fn, &partial, lo, hi, w] { fn(lo, hi, partial[w]); });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> total(bins, 0);
  for (const auto& part : partial) {
    for (std::size_t b = 0; b < bins; ++b) total[b] += part[b];
  }
  return total;
}

inline McEstimate estimate_from_counts(std::vector<std::uint64_t> counts,
                                       const McConfig& cfg) {
  McEstimate est;
  est.trials = cfg.trials;
  est.seed = cfg.seed;
  est.win_count = std::move(counts);
  est.p_hat.reserve(est.win_count.size());
  est.half_width.reserve(est.win_count.size());
  const double t = static_cast<double>(cfg.trials);
  for (const std::uint64_t c : est.win_count) {
    const double p = static_cast<double>(c) / t;
    est.p_hat.push_back(p);
    est.half_width.push_back(cfg.confidence_z * std::sqrt(p * (1.0 - p) / t));
  }
  return est;
}

// Stream reserved for the tie-break draw of a trial; players use streams
// 0..m-1.
inline constexpr std::uint64_t kTieStream = ~std::uint64_t{0};

/// Winner of one trial: argmin t_i / x_i, compared in cross-multiplied form
/// (powers are positive), ties broken uniformly from the trial's dedicated
/// tie stream. tie_scratch is reusable scratch to keep the hot loop
/// allocation-free.
inline std::size_t winner_of_scores(const std::vector<double>& t,
                                    const std::vector<double>& x,
                                    std::uint64_t seed, std::uint64_t trial,
                                    std::vector<std::size_t>& tie_scratch) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] * x[best] < t[best] * x[i]) best = i;
  }
  tie_scratch.clear();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] * x[best] == t[best] * x[i]) tie_scratch.push_back(i);
  }
  if (tie_scratch.size() <= 1) return best;
  CounterRng tie_rng(seed, trial, kTieStream);
  return tie_scratch[tie_rng.next_index(tie_scratch.size())];
}

}  // namespace detail

/// Index of the first solution found by one player searching a continuum:
/// the minimum of n i.i.d. uniforms, sampled by inverse CDF as
/// t = 1 - u^(1/n), in a form stable for large n.
inline double sample_first_hit_continuous(std::int64_t n, double u) {
  if (n < 1) {
    throw invalid_input_error("sample_first_hit_continuous: n must be >= 1");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw invalid_input_error("sample_first_hit_continuous: u must lie in (0, 1)");
  }
  return -std::expm1(std::log(u) / static_cast<double>(n));
}

/// One seeded winner draw for an arbitrary power vector (the stochastic
/// dynamics round uses this with trial = round index).
inline std::size_t draw_winner_continuous(const std::vector<double>& powers,
                                          std::int64_t n_solutions,
                                          std::uint64_t seed,
                                          std::uint64_t trial) {
  const double n_inv = 1.0 / static_cast<double>(n_solutions);
  std::vector<double> t(powers.size());
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    CounterRng rng(seed, trial, i);
    t[i] = -std::expm1(std::log(rng.next_u01()) * n_inv);
  }
  return detail::winner_of_scores(t, powers, seed, trial, ties);
}

/// Monte Carlo estimate of the winning probabilities under the continuous
/// order-statistics model: per trial, each player draws a first-hit index and
/// the minimum of t_i / x_i wins. Bit-identical for equal (spec, trials,
/// seed) at any thread count.
inline McEstimate simulate_contest_continuous(const ContestSpec& spec,
                                              const McConfig& mc) {
  validate(mc);
  const std::vector<double> x = spec.profile.in_input_order();
  const std::size_t m = x.size();
  const double n_inv = 1.0 / static_cast<double>(spec.n_solutions);
  auto counts = detail::parallel_trial_counts(
      mc.trials, m,
      [&](std::int64_t lo, std::int64_t hi, std::vector<std::uint64_t>& out) {
        std::vector<double> t(m);
        std::vector<std::size_t> ties;
        for (std::int64_t trial = lo; trial < hi; ++trial) {
          const auto trial_u = static_cast<std::uint64_t>(trial);
          for (std::size_t i = 0; i < m; ++i) {
            CounterRng rng(mc.seed, trial_u, i);
            t[i] = -std::expm1(std::log(rng.next_u01()) * n_inv);
          }
          ++out[detail::winner_of_scores(t, x, mc.seed, trial_u, ties)];
        }
      });
  return detail::estimate_from_counts(std::move(counts), mc);
}

/// Inverse-CDF sampler for the first solution position when n solutions hide
/// uniformly among N candidates: Pr[pos > k] = C(N-k, n) / C(N, n). For
/// moderate N the tail is tabulated once by the exact multiplicative
/// recurrence; for huge N it is evaluated on demand in log space.
class DiscreteFirstHitSampler {
 public:
  DiscreteFirstHitSampler(std::int64_t candidate_count,
                          std::int64_t n_solutions)
      : big_n_(candidate_count), n_(n_solutions) {
    if (n_ < 1 || big_n_ < n_) {
      throw invalid_input_error(
          "DiscreteFirstHitSampler: need 1 <= n_solutions <= candidate_count");
    }
    if (big_n_ - n_ + 1 <= kTableLimit) {
      tail_.resize(static_cast<std::size_t>(big_n_ - n_ + 1));
      tail_[0] = 1.0;
      for (std::int64_t k = 1; k <= big_n_ - n_; ++k) {
        // tail(k) = tail(k-1) * (N - k + 1 - n) / (N - k + 1)
        tail_[static_cast<std::size_t>(k)] =
            tail_[static_cast<std::size_t>(k - 1)] *
            (static_cast<double>(big_n_ - k + 1 - n_) /
             static_cast<double>(big_n_ - k + 1));
      }
    } else {
      log_falling_ = std::lgamma(static_cast<double>(big_n_ + 1)) -
                     std::lgamma(static_cast<double>(big_n_ - n_ + 1));
    }
  }

  std::int64_t candidate_count() const noexcept { return big_n_; }

  /// Smallest position k in {1 .. N-n+1} with tail(k) <= u; u uniform in
  /// (0, 1) yields exactly the first-hit distribution.
  std::int64_t sample(double u) const {
    if (!tail_.empty()) {
      const auto it = std::lower_bound(tail_.begin() + 1, tail_.end(), u,
                                       std::greater<double>());
      if (it == tail_.end()) return big_n_ - n_ + 1;
      return static_cast<std::int64_t>(it - tail_.begin());
    }
    const double log_u = std::log(u);
    std::int64_t lo = 1, hi = big_n_ - n_ + 1;  // tail(N-n+1) = 0 <= u always
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (log_tail(mid) <= log_u) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  // 2^21 doubles (16 MiB) covers every desk-scale N; beyond that the
  // log-space path costs two lgamma calls per bisection step instead.
  static constexpr std::int64_t kTableLimit = std::int64_t{1} << 21;

  double log_tail(std::int64_t k) const {
    if (k > big_n_ - n_) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(big_n_ - k + 1)) -
           std::lgamma(static_cast<double>(big_n_ - k - n_ + 1)) -
           log_falling_;
  }

  std::int64_t big_n_;
  std::int64_t n_;
  std::vector<double> tail_;
  double log_falling_ = 0.0;
};

/// Discrete finite-candidate-set analogue of simulate_contest_continuous:
/// first-hit positions in {1..N}, winner argmin position / x_i, ties (now
/// genuinely possible) broken uniformly.
inline McEstimate simulate_contest_discrete(const DiscreteContestSpec& dspec,
                                            const McConfig& mc) {
  validate(mc);
  const std::vector<double> x = dspec.spec.profile.in_input_order();
  const std::size_t m = x.size();
  const DiscreteFirstHitSampler sampler(dspec.candidate_count,
                                        dspec.spec.n_solutions);
  auto counts = detail::parallel_trial_counts(
      mc.trials, m,
      [&](std::int64_t lo, std::int64_t hi, std::vector<std::uint64_t>& out) {
        std::vector<double> t(m);
        std::vector<std::size_t> ties;
        for (std::int64_t trial = lo; trial < hi; ++trial) {
          const auto trial_u = static_cast<std::uint64_t>(trial);
          for (std::size_t i = 0; i < m; ++i) {
            CounterRng rng(mc.seed, trial_u, i);
            t[i] = static_cast<double>(sampler.sample(rng.next_u01()));
          }
          ++out[detail::winner_of_scores(t, x, mc.seed, trial_u, ties)];
        }
      });
  return detail::estimate_from_counts(std::move(counts), mc);
}

/// Sample points uniformly on the standard simplex (exponential spacings)
/// and classify each by the winner rule argmin t_i / x_i. The class
/// frequencies estimate the section volumes, expected to match x_i / sum(x).
/// Scaling by the exponentials' sum is skipped because the classifier is
/// scale-invariant.
inline McEstimate simplex_section_shares(const PowerProfile& profile,
                                         const McConfig& mc) {
  validate(mc);
  if (profile.size() < 2) {
    throw invalid_input_error("simplex_section_shares: need at least two players");
  }
  const std::vector<double> x = profile.in_input_order();
  const std::size_t m = x.size();
  auto counts = detail::parallel_trial_counts(
      mc.trials, m,
      [&](std::int64_t lo, std::int64_t hi, std::vector<std::uint64_t>& out) {
        std::vector<double> e(m);
        std::vector<std::size_t> ties;
        for (std::int64_t trial = lo; trial < hi; ++trial) {
          const auto trial_u = static_cast<std::uint64_t>(trial);
          for (std::size_t i = 0; i < m; ++i) {
            CounterRng rng(mc.seed, trial_u, i);
            e[i] = -std::log(rng.next_u01());
          }
          ++out[detail::winner_of_scores(e, x, mc.seed, trial_u, ties)];
        }
      });
  return detail::estimate_from_counts(std::move(counts), mc);
}

}  // namespace contestlab
