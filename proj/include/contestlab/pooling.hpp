#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contestlab/contest.hpp"
#include "contestlab/errors.hpp"
#include "contestlab/win_probabilities.hpp"

namespace contestlab {

/// A move in the pool-choosing game: one of the m pool labels (0-based) or
/// independence. Labels are anonymous meeting points — a pool exists exactly
/// when at least one player currently names its label, so deviating to a
/// label nobody else uses leaves the deviator alone, just like independence.
struct PoolAction {
  std::optional<std::size_t> label;

  static PoolAction independent() noexcept { return {}; }
  static PoolAction pool(std::size_t k) noexcept { return {k}; }
  bool is_independent() const noexcept { return !label.has_value(); }
  friend bool operator==(const PoolAction&, const PoolAction&) = default;
};

struct ActionProfile {
  std::vector<PoolAction> actions;  // one per player, input order
};

/// Disjoint nonempty groups covering all players, each with its aggregated
/// power. Groups are ordered by smallest member; members ascend.
struct PoolPartition {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> group_power;
};

inline void validate_partition(const PoolPartition& part, std::size_t m) {
  if (part.group_power.size() != part.groups.size()) {
    throw invalid_input_error("PoolPartition: one power per group required");
  }
  std::vector<char> seen(m, 0);
  std::size_t covered = 0;
  for (const auto& g : part.groups) {
    if (g.empty()) throw invalid_input_error("PoolPartition: empty group");
    for (const std::size_t i : g) {
      if (i >= m) throw invalid_input_error("PoolPartition: player index out of range");
      if (seen[i]) throw invalid_input_error("PoolPartition: player appears twice");
      seen[i] = 1;
      ++covered;
    }
  }
  if (covered != m) {
    throw invalid_input_error("PoolPartition: every player must appear in a group");
  }
}

/// Players naming the same label form one group; independents are singleton
/// groups; unused labels produce nothing.
inline PoolPartition partition_from_actions(const PowerProfile& profile,
                                            const ActionProfile& ap) {
  const std::size_t m = profile.size();
  if (ap.actions.size() != m) {
    throw invalid_input_error("partition_from_actions: one action per player required");
  }
  const std::vector<double> x = profile.in_input_order();
  PoolPartition part;
  std::map<std::size_t, std::size_t> group_of_label;
  for (std::size_t i = 0; i < m; ++i) {
    const PoolAction& a = ap.actions[i];
    if (a.label) {
      if (*a.label >= m) {
        throw invalid_input_error("partition_from_actions: pool label out of range");
      }
      const auto [it, fresh] = group_of_label.try_emplace(*a.label, part.groups.size());
      if (fresh) part.groups.emplace_back();
      part.groups[it->second].push_back(i);
    } else {
      part.groups.push_back({i});
    }
  }
  part.group_power.reserve(part.groups.size());
  for (const auto& g : part.groups) {
    double s = 0.0;
    for (const std::size_t i : g) s += x[i];
    part.group_power.push_back(s);
  }
  return part;
}

/// Expected reward per player under proportional splitting. Sums to 1.
struct UtilityVector {
  std::vector<double> u;  // input order
};

/// Each group competes as a super-player with its aggregated power (same n);
/// a group's win probability is then split among members in proportion to
/// contributed power. A single group wins with certainty — no integration.
inline UtilityVector pool_utilities(const ContestSpec& spec,
                                    const PoolPartition& part,
                                    const QuadratureConfig& cfg = {}) {
  const std::size_t m = spec.profile.size();
  validate_partition(part, m);
  const std::vector<double> x = spec.profile.in_input_order();
  std::vector<double> group_p;
  if (part.groups.size() == 1) {
    group_p = {1.0};
  } else {
    const ContestSpec reduced(PowerProfile(part.group_power), spec.n_solutions);
    group_p = win_probabilities(reduced, cfg).p;
  }
  UtilityVector out;
  out.u.assign(m, 0.0);
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    for (const std::size_t i : part.groups[g]) {
      out.u[i] = x[i] / part.group_power[g] * group_p[g];
    }
  }
  return out;
}

namespace detail {

inline double utility_of_action(const ContestSpec& spec, ActionProfile ap,
                                std::size_t player, const PoolAction& action,
                                const QuadratureConfig& cfg) {
  ap.actions[player] = action;
  return pool_utilities(spec, partition_from_actions(spec.profile, ap), cfg)
      .u[player];
}

}  // namespace detail

/// Utility change for one specific unilateral deviation, holding everyone
/// else fixed.
inline double deviation_gain(const ContestSpec& spec, const ActionProfile& ap,
                             std::size_t player, const PoolAction& alternative,
                             const QuadratureConfig& cfg = {}) {
  if (ap.actions.size() != spec.profile.size() || player >= ap.actions.size()) {
    throw invalid_input_error("deviation_gain: profile/player mismatch");
  }
  const double current =
      detail::utility_of_action(spec, ap, player, ap.actions[player], cfg);
  return detail::utility_of_action(spec, ap, player, alternative, cfg) - current;
}

struct BestResponse {
  PoolAction action;
  double utility_gain;  // over the current action; 0 when already best
};

/// Evaluate all m+1 actions (independence plus every label) for one player,
/// holding the rest of the profile fixed. Ties go to the current action
/// first, then independence, then the lowest label, so a deviation onto an
/// unused label is never reported when opting out does the same job.
inline BestResponse best_response(const ContestSpec& spec,
                                  const ActionProfile& ap, std::size_t player,
                                  const QuadratureConfig& cfg = {}) {
  const std::size_t m = spec.profile.size();
  if (ap.actions.size() != m) {
    throw invalid_input_error("best_response: one action per player required");
  }
  if (player >= m) throw invalid_input_error("best_response: player index out of range");
  const double current =
      detail::utility_of_action(spec, ap, player, ap.actions[player], cfg);
  BestResponse best{ap.actions[player], 0.0};
  double best_u = current;
  for (std::size_t k = 0; k <= m; ++k) {
    const PoolAction cand =
        k == 0 ? PoolAction::independent() : PoolAction::pool(k - 1);
    if (cand == ap.actions[player]) continue;  // the baseline itself
    const double u = detail::utility_of_action(spec, ap, player, cand, cfg);
    if (u > best_u) {
      best_u = u;
      best = BestResponse{cand, u - current};
    }
  }
  return best;
}

struct DeviationViolation {
  std::size_t player;
  PoolAction better_action;
  double utility_gain;
};

struct EquilibriumReport {
  bool is_equilibrium = false;
  std::vector<DeviationViolation> violations;
  double epsilon = 0.0;
};

/// Nash certification by exhaustive single-player deviation: the profile is
/// an equilibrium iff no player gains more than epsilon by switching.
inline EquilibriumReport is_nash(const ContestSpec& spec,
                                 const ActionProfile& ap, double epsilon = 1e-9,
                                 const QuadratureConfig& cfg = {}) {
  if (!(epsilon >= 0.0)) {
    throw invalid_input_error("is_nash: epsilon must be nonnegative");
  }
  EquilibriumReport report;
  report.epsilon = epsilon;
  for (std::size_t player = 0; player < spec.profile.size(); ++player) {
    const BestResponse br = best_response(spec, ap, player, cfg);
    if (br.utility_gain > epsilon) {
      report.violations.push_back({player, br.action, br.utility_gain});
    }
  }
  report.is_equilibrium = report.violations.empty();
  return report;
}

/// The equilibrium profile the theory predicts: the grand pool when the
/// strongest player is at most the rest combined (ties included), otherwise
/// everyone pooled except the strongest player (ties for strongest broken by
/// lowest input index), who stays independent.
inline ActionProfile predicted_equilibrium(const PowerProfile& profile) {
  const std::size_t m = profile.size();
  ActionProfile ap;
  ap.actions.assign(m, PoolAction::pool(0));
  const double x_max = profile.max_power();
  if (x_max <= profile.total() - x_max) return ap;
  const std::vector<double> x = profile.in_input_order();
  std::size_t strongest = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (x[i] > x[strongest]) strongest = i;
  }
  ap.actions[strongest] = PoolAction::independent();
  return ap;
}

struct SuperadditivityCheck {
  double pool_p;    // the group's win probability when pooled, others solo
  double solo_sum;  // sum of members' solo win probabilities
};

/// Pooling never hurts a coalition: its pooled win probability is at least
/// the sum of its members' solo probabilities.
inline SuperadditivityCheck check_superadditivity(
    const ContestSpec& spec, const std::vector<std::size_t>& group,
    const QuadratureConfig& cfg = {}) {
  const std::size_t m = spec.profile.size();
  if (group.empty()) {
    throw invalid_input_error("check_superadditivity: group must be nonempty");
  }
  std::vector<char> in_group(m, 0);
  for (const std::size_t i : group) {
    if (i >= m) throw invalid_input_error("check_superadditivity: player index out of range");
    if (in_group[i]) throw invalid_input_error("check_superadditivity: duplicate player in group");
    in_group[i] = 1;
  }

  const WinProbabilities solo = win_probabilities(spec, cfg);
  double solo_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (in_group[i]) solo_sum += solo.p[i];
  }

  // Partition = the group plus singletons, ordered by smallest member.
  PoolPartition part;
  std::size_t group_slot = 0;
  bool group_added = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (in_group[i]) {
      if (!group_added) {
        group_slot = part.groups.size();
        part.groups.emplace_back();
        for (std::size_t j = 0; j < m; ++j) {
          if (in_group[j]) part.groups.back().push_back(j);
        }
        group_added = true;
      }
    } else {
      part.groups.push_back({i});
    }
  }
  const std::vector<double> x = spec.profile.in_input_order();
  for (const auto& g : part.groups) {
    double s = 0.0;
    for (const std::size_t i : g) s += x[i];
    part.group_power.push_back(s);
  }

  double pool_p = 1.0;  // the grand pool always wins
  if (part.groups.size() > 1) {
    const ContestSpec reduced(PowerProfile(part.group_power), spec.n_solutions);
    pool_p = win_probabilities(reduced, cfg).p[group_slot];
  }
  return {pool_p, solo_sum};
}

struct MergeGains {
  double u_i_gain;
  double u_j_gain;
};

/// Utility change for two players from pooling with each other versus both
/// staying solo (everyone else solo throughout). Defined only under the
/// hypothesis x_i + x_j <= max power among the other players; outside it the
/// claim being checked says nothing, so the input is rejected.
inline MergeGains check_merge_lemma(const ContestSpec& spec, std::size_t i,
                                    std::size_t j,
                                    const QuadratureConfig& cfg = {}) {
  const std::size_t m = spec.profile.size();
  if (i >= m || j >= m || i == j) {
    throw invalid_input_error("check_merge_lemma: need two distinct valid players");
  }
  const std::vector<double> x = spec.profile.in_input_order();
  double others_max = 0.0;
  bool has_other = false;
  for (std::size_t k = 0; k < m; ++k) {
    if (k != i && k != j && x[k] > others_max) {
      others_max = x[k];
      has_other = true;
    }
  }
  if (!has_other || !(x[i] + x[j] <= others_max)) {
    throw invalid_input_error(
        "check_merge_lemma: hypothesis x_i + x_j <= max other power fails");
  }

  const WinProbabilities solo = win_probabilities(spec, cfg);

  ActionProfile ap;
  ap.actions.assign(m, PoolAction::independent());
  const std::size_t lo = i < j ? i : j;
  ap.actions[i] = PoolAction::pool(lo);
  ap.actions[j] = PoolAction::pool(lo);
  const UtilityVector pooled =
      pool_utilities(spec, partition_from_actions(spec.profile, ap), cfg);
  return {pooled.u[i] - solo.p[i], pooled.u[j] - solo.p[j]};
}

}  // namespace contestlab
