#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "contestlab/contest.hpp"
#include "contestlab/errors.hpp"
#include "contestlab/pooling.hpp"
#include "contestlab/sampling.hpp"
#include "contestlab/win_probabilities.hpp"

namespace contestlab {

enum class DynamicsMode {
  expected,   // deterministic: every player banks eta * p_i per round
  stochastic  // one seeded winner draw per round takes the whole eta
};

enum class PoolingPolicy {
  none,           // everyone solo; rewards follow win probabilities
  fixed,          // a fixed action profile, re-weighted as powers drift
  re_equilibrate  // predicted_equilibrium recomputed every round
};

struct DynamicsConfig {
  std::int64_t rounds = 1;
  double eta = 1.0;  // power gained per unit of expected reward
  DynamicsMode mode = DynamicsMode::expected;
  PoolingPolicy pooling = PoolingPolicy::none;
  ActionProfile fixed_actions;  // consulted only when pooling == fixed
  std::uint64_t seed = 0;       // consulted only in stochastic mode
};

inline void validate(const DynamicsConfig& cfg) {
  if (cfg.rounds < 1) {
    throw invalid_input_error("DynamicsConfig: rounds must be >= 1");
  }
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
    throw invalid_input_error("DynamicsConfig: eta must be positive and finite");
  }
}

/// One recorded state of the repeated contest. `reward` is the unit reward
/// distribution paid when leaving this state — win probabilities or pool
/// utilities in expected mode, the realized winner's split in stochastic
/// mode — and is empty on the final record, which no round leaves.
struct DynamicsRecord {
  std::int64_t round = 0;  // 0 is the initial state
  std::vector<double> powers;
  std::vector<double> share;
  double max_share = 0.0;
  double herfindahl = 0.0;
  double power_spread = 1.0;  // max power / min power
  std::vector<double> reward;
};

struct DynamicsTrace {
  std::vector<DynamicsRecord> records;  // rounds + 1 entries
};

/// One deterministic reinvestment step: x_i + eta * p_i in input order.
inline PowerProfile step_expected(const ContestSpec& spec, double eta,
                                  const QuadratureConfig& cfg = {}) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw invalid_input_error("step_expected: eta must be positive and finite");
  }
  const WinProbabilities wp = win_probabilities(spec, cfg);
  std::vector<double> x = spec.profile.in_input_order();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += eta * wp.p[i];
  return PowerProfile(std::move(x));
}

namespace detail {

inline void fill_state_metrics(DynamicsRecord& rec) {
  const std::size_t m = rec.powers.size();
  double total = 0.0, x_min = rec.powers[0], x_max = rec.powers[0];
  for (const double v : rec.powers) {
    total += v;
    if (v < x_min) x_min = v;
    if (v > x_max) x_max = v;
  }
  rec.share.resize(m);
  rec.max_share = 0.0;
  rec.herfindahl = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    rec.share[i] = rec.powers[i] / total;
    if (rec.share[i] > rec.max_share) rec.max_share = rec.share[i];
    rec.herfindahl += rec.share[i] * rec.share[i];
  }
  rec.power_spread = x_max / x_min;
}

}  // namespace detail

/// Iterate the reinvestment dynamics for the configured number of rounds and
/// record every state. Stochastic traces are a pure function of the seed.
inline DynamicsTrace run(const ContestSpec& spec, const DynamicsConfig& dcfg,
                         const QuadratureConfig& qcfg = {}) {
  validate(dcfg);
  const std::size_t m = spec.profile.size();
  if (dcfg.pooling == PoolingPolicy::fixed &&
      dcfg.fixed_actions.actions.size() != m) {
    throw invalid_input_error("run: fixed pooling needs one action per player");
  }

  std::vector<double> x = spec.profile.in_input_order();
  DynamicsTrace trace;
  trace.records.reserve(static_cast<std::size_t>(dcfg.rounds) + 1);
  for (std::int64_t r = 0; r <= dcfg.rounds; ++r) {
    DynamicsRecord rec;
    rec.round = r;
    rec.powers = x;
    detail::fill_state_metrics(rec);
    if (r == dcfg.rounds) {
      trace.records.push_back(std::move(rec));
      break;
    }

    const PowerProfile prof(x);
    const ContestSpec current(prof, spec.n_solutions);
    std::vector<double> reward(m, 0.0);
    if (dcfg.pooling == PoolingPolicy::none) {
      if (dcfg.mode == DynamicsMode::expected) {
        reward = win_probabilities(current, qcfg).p;
      } else {
        const std::size_t winner = draw_winner_continuous(
            x, spec.n_solutions, dcfg.seed, static_cast<std::uint64_t>(r));
        reward[winner] = 1.0;
      }
    } else {
      const ActionProfile actions = dcfg.pooling == PoolingPolicy::fixed
                                        ? dcfg.fixed_actions
                                        : predicted_equilibrium(prof);
      const PoolPartition part = partition_from_actions(prof, actions);
      if (dcfg.mode == DynamicsMode::expected) {
        reward = pool_utilities(current, part, qcfg).u;
      } else {
        std::size_t wg = 0;
        if (part.groups.size() > 1) {
          wg = draw_winner_continuous(part.group_power, spec.n_solutions,
                                      dcfg.seed, static_cast<std::uint64_t>(r));
        }
        for (const std::size_t i : part.groups[wg]) {
          reward[i] = x[i] / part.group_power[wg];
        }
      }
    }

    rec.reward = reward;
    trace.records.push_back(std::move(rec));
    for (std::size_t i = 0; i < m; ++i) x[i] += dcfg.eta * reward[i];
  }
  return trace;
}

struct DominanceSummary {
  std::vector<double> max_share;   // per record
  std::vector<double> herfindahl;  // per record
  double threshold = 0.51;
  std::optional<std::int64_t> rounds_to_threshold;  // first crossing, if any
};

/// Concentration metrics of a trace: per-round maximum share, Herfindahl
/// index, and the first round at which the leader crosses the threshold.
inline DominanceSummary dominance_metrics(const DynamicsTrace& trace,
                                          double threshold = 0.51) {
  if (trace.records.empty()) {
    throw invalid_input_error("dominance_metrics: empty trace");
  }
  DominanceSummary out;
  out.threshold = threshold;
  out.max_share.reserve(trace.records.size());
  out.herfindahl.reserve(trace.records.size());
  for (const DynamicsRecord& rec : trace.records) {
    out.max_share.push_back(rec.max_share);
    out.herfindahl.push_back(rec.herfindahl);
    if (!out.rounds_to_threshold && rec.max_share >= threshold) {
      out.rounds_to_threshold = rec.round;
    }
  }
  return out;
}

}  // namespace contestlab
