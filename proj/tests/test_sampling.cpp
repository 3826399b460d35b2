#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "contestlab/contestlab.hpp"

using namespace contestlab;

namespace
{
  // Exact survival function of the minimum of n draws without replacement
  // from {1..N}: P(min > k) — evaluated directly, independent of the sampler.
  double discrete_tail(std::int64_t candidates, std::int64_t draws, std::int64_t k)
  {
    double value = 1.0;
    for (std::int64_t j = 0; j < draws; ++j)
      value *= static_cast<double>(candidates - k - j) / static_cast<double>(candidates - j);
    return value;
  }

  double three_sigma(double p, std::int64_t trials)
  {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }

  std::uint64_t total_wins(const McEstimate& est)
  {
    return std::accumulate(est.win_count.begin(), est.win_count.end(),
                           std::uint64_t{0});
  }
}

TEST_CASE("Counter RNG is a pure function of its coordinates", "[sampling]")
{
  CounterRng a(42, 7, 3);
  CounterRng b(42, 7, 3);
  CounterRng c(42, 7, 4);
  bool saw_difference = false;
  for (int i = 0; i < 64; ++i)
  {
    const double u = a.next_u01();
    REQUIRE(u == b.next_u01());
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    saw_difference = saw_difference || (u != c.next_u01());
  }
  REQUIRE(saw_difference);

  CounterRng idx(1, 2, 3);
  for (int i = 0; i < 1000; ++i)
    REQUIRE(idx.next_index(7) < 7);
}

TEST_CASE("First-hit transform inverts the race CDF", "[sampling]")
{
  SECTION("worked examples")
  {
    REQUIRE(std::abs(sample_first_hit_continuous(1, 0.25) - 0.75) <= 1e-15);
    REQUIRE(std::abs(sample_first_hit_continuous(4, 1.0 / 16.0) - 0.5) <= 1e-15);
  }

  SECTION("domain checks")
  {
    REQUIRE_THROWS_AS(sample_first_hit_continuous(0, 0.5), invalid_input_error);
    REQUIRE_THROWS_AS(sample_first_hit_continuous(1, 0.0), invalid_input_error);
    REQUIRE_THROWS_AS(sample_first_hit_continuous(1, 1.0), invalid_input_error);
  }

  SECTION("Kolmogorov-Smirnov distance against the analytic CDF")
  {
    constexpr std::int64_t kSamples = 1000000;
    constexpr std::int64_t kSolutions = 3;
    std::vector<double> t(kSamples);
    CounterRng rng(20260401, 0, 0);
    for (auto& v : t)
      v = sample_first_hit_continuous(kSolutions, rng.next_u01());
    std::sort(t.begin(), t.end());
    double dist = 0.0;
    for (std::int64_t i = 0; i < kSamples; ++i)
    {
      const double cdf = 1.0 - std::pow(1.0 - t[i], kSolutions);
      dist = std::max(dist, std::abs(cdf - static_cast<double>(i) / kSamples));
      dist = std::max(dist, std::abs(static_cast<double>(i + 1) / kSamples - cdf));
    }
    // 0.002 is well above the 0.1% critical value 1.95 / sqrt(1e6).
    REQUIRE(dist < 0.002);
  }
}

TEST_CASE("Continuous contest simulation brackets the exact probabilities", "[sampling]")
{
  McConfig cfg;
  cfg.trials = 400000;
  cfg.seed = 71;

  SECTION("two players, 2:1 power split")
  {
    const auto est = simulate_contest_continuous(ContestSpec(PowerProfile({2.0, 1.0}), 1), cfg);
    REQUIRE(total_wins(est) == static_cast<std::uint64_t>(cfg.trials));
    REQUIRE(std::abs(est.p_hat[0] - 0.75) <= est.half_width[0]);
    REQUIRE(std::abs(est.p_hat[1] - 0.25) <= est.half_width[1]);
    // Half-width is z * sqrt(p(1-p)/T); for p near 0.75 and T = 4e5 that is
    // close to 2.1e-3 and can never exceed the p = 1/2 worst case.
    REQUIRE(est.half_width[0] >= 0.0015);
    REQUIRE(est.half_width[0] <= three_sigma(0.5, cfg.trials));
  }

  SECTION("three players with frozen exact answer")
  {
    const auto est =
        simulate_contest_continuous(ContestSpec(PowerProfile({1.0, 1.0, 2.0}), 1), cfg);
    REQUIRE(std::abs(est.p_hat[0] - 5.0 / 24.0) <= est.half_width[0]);
    REQUIRE(std::abs(est.p_hat[1] - 5.0 / 24.0) <= est.half_width[1]);
    REQUIRE(std::abs(est.p_hat[2] - 7.0 / 12.0) <= est.half_width[2]);
  }

  SECTION("equal powers give each player one third")
  {
    const auto est =
        simulate_contest_continuous(ContestSpec(PowerProfile({5.0, 5.0, 5.0}), 4), cfg);
    double p_total = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
    {
      REQUIRE(std::abs(est.p_hat[i] - 1.0 / 3.0) <= est.half_width[i]);
      p_total += est.p_hat[i];
    }
    REQUIRE(total_wins(est) == static_cast<std::uint64_t>(cfg.trials));
    REQUIRE(std::abs(p_total - 1.0) <= 1e-12);
  }

  SECTION("configuration validation")
  {
    McConfig bad;
    bad.trials = 0;
    REQUIRE_THROWS_AS(validate(bad), invalid_input_error);
    bad = McConfig{};
    bad.confidence_z = 0.0;
    REQUIRE_THROWS_AS(validate(bad), invalid_input_error);
  }
}

TEST_CASE("Simulation results are reproducible and thread-count independent", "[sampling]")
{
  const ContestSpec contest(PowerProfile({1.0, 2.0, 3.0}), 2);
  McConfig cfg;
  cfg.trials = 100000;
  cfg.seed = 1234;

  const auto base = simulate_contest_continuous(contest, cfg);

  SECTION("same seed, same counts")
  {
    const auto again = simulate_contest_continuous(contest, cfg);
    REQUIRE(again.win_count == base.win_count);
  }

  SECTION("different seed, different counts")
  {
    McConfig other = cfg;
    other.seed = 1235;
    const auto again = simulate_contest_continuous(contest, other);
    REQUIRE(again.win_count != base.win_count);
  }

  SECTION("worker count does not leak into the counts")
  {
    ::setenv("CONTEST_LAB_THREADS", "1", 1);
    const auto serial = simulate_contest_continuous(contest, cfg);
    ::setenv("CONTEST_LAB_THREADS", "7", 1);
    const auto wide = simulate_contest_continuous(contest, cfg);
    ::unsetenv("CONTEST_LAB_THREADS");
    REQUIRE(serial.win_count == base.win_count);
    REQUIRE(wide.win_count == base.win_count);
  }
}

TEST_CASE("Discrete candidate pools converge toward the continuous race", "[sampling]")
{
  McConfig cfg;
  cfg.trials = 1000000;
  cfg.seed = 2024;

  // For powers (2,1) with one candidate each, the discrete win probability is
  // exactly 0.75 + 1/(4N) (candidate positions tie half the time at k1=2*k2),
  // so the bias shrinks linearly in the pool size.
  auto discrete_p1 = [&](std::int64_t pool) {
    const auto est = simulate_contest_discrete(
        DiscreteContestSpec(ContestSpec(PowerProfile({2.0, 1.0}), 1), pool), cfg);
    return est.p_hat[0];
  };

  const double p_100 = discrete_p1(100);
  const double p_1000 = discrete_p1(1000);
  const double p_100000 = discrete_p1(100000);

  REQUIRE(std::abs(p_100 - 0.7525) <= three_sigma(0.7525, cfg.trials));
  REQUIRE(std::abs(p_1000 - 0.75025) <= three_sigma(0.75025, cfg.trials));
  REQUIRE(std::abs(p_100000 - 0.75) <= three_sigma(0.75, cfg.trials) + 1e-5);

  const double gap_100 = std::abs(p_100 - 0.75);
  const double gap_1000 = std::abs(p_1000 - 0.75);
  const double gap_100000 = std::abs(p_100000 - 0.75);
  REQUIRE(gap_100 > gap_1000);
  REQUIRE(gap_100 > gap_100000);
}

TEST_CASE("Discrete edge cases behave exactly", "[sampling]")
{
  SECTION("single-candidate pools force a fair tie-break")
  {
    McConfig cfg;
    cfg.trials = 200000;
    cfg.seed = 5;
    const auto est = simulate_contest_discrete(
        DiscreteContestSpec(ContestSpec(PowerProfile({1.0, 1.0}), 1), 1), cfg);
    REQUIRE(total_wins(est) == static_cast<std::uint64_t>(cfg.trials));
    REQUIRE(std::abs(est.p_hat[0] - 0.5) <= three_sigma(0.5, cfg.trials));
  }

  SECTION("frozen three-player reference with a deep pool")
  {
    McConfig cfg;
    cfg.trials = 400000;
    cfg.seed = 99;
    const auto est = simulate_contest_discrete(
        DiscreteContestSpec(ContestSpec(PowerProfile({1.0, 2.0}), 2), 100000), cfg);
    // Continuous value is 7/24; pool depth 1e5 perturbs it far below the noise.
    REQUIRE(std::abs(est.p_hat[0] - 7.0 / 24.0) <= est.half_width[0]);
  }
}

TEST_CASE("Discrete first-hit sampler inverts the hypergeometric tail", "[sampling]")
{
  SECTION("table-backed pools")
  {
    DiscreteFirstHitSampler sampler(10, 2);
    // Exhaustive inverse check on a fine grid of quantiles.
    for (int i = 1; i < 1000; ++i)
    {
      const double u = i / 1000.0;
      const std::int64_t pos = sampler.sample(u);
      REQUIRE(pos >= 1);
      REQUIRE(pos <= 9);
      REQUIRE(discrete_tail(10, 2, pos) <= u + 1e-12);
      REQUIRE(discrete_tail(10, 2, pos - 1) > u - 1e-12);
    }
  }

  SECTION("pools beyond the table limit use the same distribution")
  {
    // 3e6 candidates exceeds the precomputed-table cutoff, exercising the
    // log-gamma bisection path.
    DiscreteFirstHitSampler sampler(3000000, 3);
    for (double u : {0.9, 0.5, 0.1, 0.01, 1e-6})
    {
      const std::int64_t pos = sampler.sample(u);
      REQUIRE(discrete_tail(3000000, 3, pos) <= u * (1.0 + 1e-9));
      REQUIRE(discrete_tail(3000000, 3, pos - 1) >= u * (1.0 - 1e-9));
    }
  }

  SECTION("empirical mean matches the analytic mean")
  {
    // E[min of 2 of {1..10}] = (10+1)/(2+1) = 11/3.
    DiscreteFirstHitSampler sampler(10, 2);
    CounterRng rng(8, 0, 0);
    constexpr std::int64_t kSamples = 1000000;
    double acc = 0.0;
    for (std::int64_t i = 0; i < kSamples; ++i)
      acc += static_cast<double>(sampler.sample(rng.next_u01()));
    const double mean = acc / kSamples;
    REQUIRE(std::abs(mean - 11.0 / 3.0) <= 0.01);
  }
}

TEST_CASE("Simplex sections land players proportionally to power", "[sampling]")
{
  McConfig cfg;
  cfg.trials = 400000;
  cfg.seed = 314;

  SECTION("two players split 1:2")
  {
    const auto est = simplex_section_shares(PowerProfile({1.0, 2.0}), cfg);
    REQUIRE(std::abs(est.p_hat[0] - 1.0 / 3.0) <= est.half_width[0]);
    REQUIRE(std::abs(est.p_hat[1] - 2.0 / 3.0) <= est.half_width[1]);
  }

  SECTION("three players split 1:2:3")
  {
    const auto est = simplex_section_shares(PowerProfile({1.0, 2.0, 3.0}), cfg);
    REQUIRE(std::abs(est.p_hat[0] - 1.0 / 6.0) <= est.half_width[0]);
    REQUIRE(std::abs(est.p_hat[1] - 1.0 / 3.0) <= est.half_width[1]);
    REQUIRE(std::abs(est.p_hat[2] - 1.0 / 2.0) <= est.half_width[2]);
    REQUIRE(total_wins(est) == static_cast<std::uint64_t>(cfg.trials));
  }

  SECTION("equal powers are symmetric")
  {
    const auto est = simplex_section_shares(PowerProfile({4.0, 4.0, 4.0, 4.0}), cfg);
    for (std::size_t i = 0; i < 4; ++i)
      REQUIRE(std::abs(est.p_hat[i] - 0.25) <= est.half_width[i]);
  }

  SECTION("a section needs at least two players")
  {
    REQUIRE_THROWS_AS(simplex_section_shares(PowerProfile({1.0}), McConfig{}),
                      invalid_input_error);
  }
}
