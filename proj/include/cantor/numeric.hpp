#pragma once

// Scalar tower shared by every module: exact rationals (GMP) when the input
// data is rational, IEEE doubles otherwise.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace cantor {

using Rational = mpq_class;
using BigInt = mpz_class;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

/// Default absolute tolerance for float-mode fixed-point solves.
inline constexpr double kFloatTolerance = 1e-12;

inline double to_double(double x) { return x; }
/// Nearest double (GMP's own conversion truncates).
double to_double(const Rational& x);

/// Canonical rational p/q. Throws std::invalid_argument on q == 0.
Rational make_rational(long long num, long long den = 1);

template <Scalar T>
T ratio(long long num, long long den) {
  if constexpr (is_exact_v<T>) {
    return make_rational(num, den);
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

template <Scalar T>
T abs_value(const T& x) {
  return x < 0 ? T(-x) : x;
}

template <Scalar T>
T from_double(double x) {
  return T(x);
}

/// Largest integer <= x.
std::int64_t floor_to_int(const Rational& x);
std::int64_t floor_to_int(double x);
/// Smallest integer >= x.
std::int64_t ceil_to_int(const Rational& x);
std::int64_t ceil_to_int(double x);

/// Parses "p/q", an integer, or a plain decimal ("0.45", "-1e-3") exactly.
/// Throws std::invalid_argument when the text is not a number.
Rational parse_rational(std::string_view text);

/// "p/q" (or "p" when integral) for rationals; shortest round-trip text for doubles.
std::string format_number(const Rational& x);
std::string format_number(double x);

/// Integer power for a non-negative exponent.
template <Scalar T>
T power(const T& base, int exponent) {
  T result(1);
  T b = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

}  // namespace cantor
