#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace avoid {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument on
// malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical "p/q" rendering (denominator kept even when it is 1).
std::string format_rational(const Rational& r);

BigInt pow2(std::uint64_t e);

// Smallest integer >= r.
BigInt ceil_rational(const Rational& r);

// floor(x^(1/q)) for x >= 0, q >= 1.
BigInt floor_root(const BigInt& x, unsigned long q);

// Floor division / modulo with the sign convention of mathematics,
// not of C++ (result of floor_mod is always in [0, |b|)).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  std::int64_t r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  return a - floor_div(a, b) * b;
}

}  // namespace avoid
