#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "contestlab/contest.hpp"
#include "contestlab/errors.hpp"

namespace contestlab {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

// Dense polynomial over the rationals; coefficient of z^d at index d.
using RatPoly = std::vector<Rational>;

inline RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
  RatPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace detail

/// Round a rational to the nearest double through a 50-decimal-digit float;
/// the intermediate is accurate enough that the final rounding step decides.
inline double rational_to_double(const Rational& q) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big num(boost::multiprecision::numerator(q));
  const Big den(boost::multiprecision::denominator(q));
  return static_cast<double>(num / den);
}

/// "num/den" in lowest terms; plain "num" when the denominator is 1.
inline std::string rational_to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  std::string out = num.str();
  if (den != 1) {
    out += '/';
    out += den.str();
  }
  return out;
}

/// Parse a decimal literal ([+-]digits[.digits][(e|E)[+-]digits]) into the
/// exact rational it denotes, e.g. "2.5" -> 5/2 and "1e-3" -> 1/1000. This is
/// how the command line hands exact inputs to the oracle without a detour
/// through binary floating point.
inline Rational parse_decimal_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  const auto fail = [&text]() -> Rational {
    throw invalid_input_error("not a decimal number: '" + text + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  cpp_int mantissa = 0;
  std::int64_t frac_digits = 0;
  bool any_digit = false;
  for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
    mantissa = mantissa * 10 + (text[pos] - '0');
    any_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
      mantissa = mantissa * 10 + (text[pos] - '0');
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) return fail();
  std::int64_t exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos == text.size()) return fail();
    for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 100000) return fail();  // no use case needs more
    }
    if (exp_negative) exponent = -exponent;
  }
  if (pos != text.size()) return fail();

  if (negative) mantissa = -mantissa;
  cpp_int num = mantissa, den = 1;
  const std::int64_t shift = exponent - frac_digits;
  cpp_int ten_pow = 1;
  for (std::int64_t i = 0; i < (shift < 0 ? -shift : shift); ++i) ten_pow *= 10;
  if (shift >= 0) num *= ten_pow; else den = ten_pow;
  return Rational(num, den);
}

/// Exact winning probabilities in lowest terms, with a rounded-double view.
struct ExactWinProbabilities {
  std::vector<Rational> p;  // input order

  WinProbabilities rounded() const {
    WinProbabilities out;
    out.p.reserve(p.size());
    for (const Rational& q : p) out.p.push_back(rational_to_double(q));
    out.method = ProbMethod::exact_rational;
    out.abs_error_bound = 0.0;
    return out;
  }
};

/// Ground-truth oracle: expands n * r_i * pi_{-i}(z) * pi(z)^(n-1) into
/// rational coefficients and integrates term by term. Tractable only while
/// the polynomial degree m*n stays small, hence the size cap.
inline ExactWinProbabilities win_probabilities_exact(
    const std::vector<Rational>& powers, std::int64_t n_solutions,
    std::int64_t size_cap = 64) {
  const std::size_t m = powers.size();
  if (m == 0) throw invalid_input_error("win_probabilities_exact: at least one power required");
  for (const Rational& x : powers) {
    if (x <= 0) throw invalid_input_error("win_probabilities_exact: powers must be strictly positive");
  }
  if (n_solutions < 1) throw invalid_input_error("win_probabilities_exact: n_solutions must be >= 1");
  if (m == 1) return ExactWinProbabilities{{Rational(1)}};  // certain winner, any n
  if (static_cast<std::int64_t>(m) * n_solutions > size_cap) {
    throw unsupported_size_error(
        "win_probabilities_exact: m*n = " +
        std::to_string(static_cast<std::int64_t>(m) * n_solutions) +
        " exceeds the exact-path cap " + std::to_string(size_cap));
  }

  Rational x_max = powers[0];
  for (const Rational& x : powers) if (x > x_max) x_max = x;
  std::vector<Rational> r(m);
  for (std::size_t i = 0; i < m; ++i) r[i] = powers[i] / x_max;

  // pi(z)^(n-1)
  detail::RatPoly pi{Rational(1)};
  for (std::size_t j = 0; j < m; ++j) pi = detail::poly_mul(pi, {Rational(1), -r[j]});
  detail::RatPoly pi_n1{Rational(1)};
  for (std::int64_t e = 1; e < n_solutions; ++e) pi_n1 = detail::poly_mul(pi_n1, pi);

  ExactWinProbabilities out;
  out.p.resize(m);
  Rational sum(0);
  for (std::size_t i = 0; i < m; ++i) {
    detail::RatPoly poly = pi_n1;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) poly = detail::poly_mul(poly, {Rational(1), -r[j]});
    }
    Rational integral(0);
    for (std::size_t d = 0; d < poly.size(); ++d) {
      integral += poly[d] / Rational(d + 1);
    }
    out.p[i] = Rational(n_solutions) * r[i] * integral;
    sum += out.p[i];
  }
  if (sum != 1) {
    // Exact arithmetic: anything but 1 is an implementation defect.
    throw numerical_failure_error(
        "win_probabilities_exact: exact probabilities do not sum to 1",
        std::abs(rational_to_double(sum) - 1.0));
  }
  return out;
}

/// Spec-level entry point: every finite double is an exact binary rational,
/// so the powers lift losslessly.
inline ExactWinProbabilities win_probabilities_exact(const ContestSpec& spec,
                                                     std::int64_t size_cap = 64) {
  std::vector<Rational> xs;
  xs.reserve(spec.profile.size());
  for (double x : spec.profile.in_input_order()) xs.emplace_back(x);
  return win_probabilities_exact(xs, spec.n_solutions, size_cap);
}

}  // namespace contestlab
