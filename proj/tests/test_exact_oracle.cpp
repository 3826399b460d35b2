#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "contestlab/contestlab.hpp"
#include "golden_specs.hpp"

using namespace contestlab;

TEST_CASE("Exact rational results reproduce the frozen references", "[exact-oracle]")
{
  for (const auto& spec : golden::specs())
  {
    const ContestSpec contest(PowerProfile(spec.powers), spec.n_solutions);
    const auto exact = win_probabilities_exact(contest);
    REQUIRE(exact.p.size() == spec.win_p.size());

    Rational total = 0;
    for (std::size_t i = 0; i < exact.p.size(); ++i)
    {
      INFO("players=" << spec.powers.size() << " n=" << spec.n_solutions
                      << " player=" << i);
      REQUIRE(exact.p[i] == Rational(spec.win_p[i]));
      total += exact.p[i];
    }
    REQUIRE(total == Rational(1));
  }
}

TEST_CASE("Exact and quadrature paths agree on every supported size", "[exact-oracle]")
{
  for (const auto& spec : golden::specs())
  {
    const ContestSpec contest(PowerProfile(spec.powers), spec.n_solutions);
    const auto quad = win_probabilities(contest);
    const auto exact = win_probabilities_exact(contest).rounded();
    REQUIRE(exact.method == ProbMethod::exact_rational);
    REQUIRE(exact.abs_error_bound == 0.0);
    for (std::size_t i = 0; i < quad.p.size(); ++i)
      REQUIRE(std::abs(quad.p[i] - exact.p[i]) <= 1e-12);
  }
}

TEST_CASE("Exact oracle handles edge sizes and enforces its cap", "[exact-oracle]")
{
  SECTION("worked two-player example")
  {
    const auto exact = win_probabilities_exact(ContestSpec(PowerProfile({1.0, 3.0}), 1));
    REQUIRE(exact.p[0] == Rational(1, 6));
    REQUIRE(exact.p[1] == Rational(5, 6));
  }

  SECTION("a single player bypasses the size cap entirely")
  {
    const auto exact = win_probabilities_exact(ContestSpec(PowerProfile({5.0}), 1000));
    REQUIRE(exact.p.size() == 1);
    REQUIRE(exact.p[0] == Rational(1));
  }

  SECTION("the polynomial degree cap is enforced")
  {
    // m*n = 66 exceeds the default cap of 64.
    REQUIRE_THROWS_AS(win_probabilities_exact(ContestSpec(PowerProfile({1.0, 2.0}), 33)),
                      unsupported_size_error);
    // ... and exactly 64 still works.
    REQUIRE_NOTHROW(win_probabilities_exact(ContestSpec(PowerProfile({1.0, 2.0}), 32)));
    // A caller may raise the cap explicitly.
    REQUIRE_NOTHROW(win_probabilities_exact(ContestSpec(PowerProfile({1.0, 2.0}), 33), 80));
  }
}

TEST_CASE("Doubles lift into rationals without loss", "[exact-oracle]")
{
  SECTION("dyadic inputs lift to the obvious fractions")
  {
    const auto exact = win_probabilities_exact(ContestSpec(PowerProfile({1.0, 2.0, 2.5}), 1));
    Rational total = 0;
    for (const auto& p : exact.p)
      total += p;
    REQUIRE(total == Rational(1));
    REQUIRE(exact.p[0] == Rational(11, 75));
    REQUIRE(exact.p[1] == Rational(26, 75));
    REQUIRE(exact.p[2] == Rational(38, 75));
  }

  SECTION("rational-to-double round trips")
  {
    REQUIRE(rational_to_double(Rational(1, 2)) == 0.5);
    REQUIRE(rational_to_double(Rational(1, 3)) == 1.0 / 3.0);
    REQUIRE(rational_to_double(Rational(7, 12)) == 7.0 / 12.0);
  }

  SECTION("rational rendering")
  {
    REQUIRE(rational_to_string(Rational(5, 24)) == "5/24");
    REQUIRE(rational_to_string(Rational(3)) == "3");
    REQUIRE(rational_to_string(Rational(6, 4)) == "3/2");
  }
}

TEST_CASE("Decimal strings parse to exact rationals", "[exact-oracle]")
{
  SECTION("plain and fractional forms")
  {
    REQUIRE(parse_decimal_rational("3") == Rational(3));
    REQUIRE(parse_decimal_rational("2.5") == Rational(5, 2));
    REQUIRE(parse_decimal_rational("-0.125") == Rational(-1, 8));
    REQUIRE(parse_decimal_rational("0.1") == Rational(1, 10));
    REQUIRE(parse_decimal_rational("10.") == Rational(10));
  }

  SECTION("scientific notation")
  {
    REQUIRE(parse_decimal_rational("1e-3") == Rational(1, 1000));
    REQUIRE(parse_decimal_rational("2.5e2") == Rational(250));
    REQUIRE(parse_decimal_rational("2.5E+1") == Rational(25));
  }

  SECTION("malformed strings are rejected")
  {
    REQUIRE_THROWS_AS(parse_decimal_rational(""), invalid_input_error);
    REQUIRE_THROWS_AS(parse_decimal_rational("abc"), invalid_input_error);
    REQUIRE_THROWS_AS(parse_decimal_rational("1.2.3"), invalid_input_error);
    REQUIRE_THROWS_AS(parse_decimal_rational("."), invalid_input_error);
    REQUIRE_THROWS_AS(parse_decimal_rational("+"), invalid_input_error);
    REQUIRE_THROWS_AS(parse_decimal_rational("1e"), invalid_input_error);
    REQUIRE_THROWS_AS(parse_decimal_rational("1 2"), invalid_input_error);
  }

  SECTION("parsed rationals drive the exact computation")
  {
    const std::vector<Rational> powers = {
      parse_decimal_rational("1"), parse_decimal_rational("2"),
      parse_decimal_rational("2.5")};
    const auto exact = win_probabilities_exact(powers, 1);
    REQUIRE(exact.p[2] == Rational(38, 75));
  }
}
