#include "cantor/numeric.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace cantor {

Rational make_rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(static_cast<signed long>(num), static_cast<signed long>(den));
  r.canonicalize();
  return r;
}

std::int64_t floor_to_int(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return static_cast<std::int64_t>(q.get_si());
}

std::int64_t floor_to_int(double x) { return static_cast<std::int64_t>(std::floor(x)); }

std::int64_t ceil_to_int(const Rational& x) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return static_cast<std::int64_t>(q.get_si());
}

std::int64_t ceil_to_int(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

mpz_class parse_integer(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) {
      throw std::invalid_argument("bad integer '" + s + "'");
    }
  }
  return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
}

Rational parse_decimal(const std::string& s) {
  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    exponent = parse_integer(s.substr(e + 1)).get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa = mantissa.substr(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    frac_digits = static_cast<long>(mantissa.size() - dot - 1);
  } else {
    digits = mantissa;
  }
  if (digits.empty()) throw std::invalid_argument("bad number '" + s + "'");
  Rational r(parse_integer(digits));
  long shift = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0) {
    r *= ten_pow;
  } else {
    r /= ten_pow;
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num = parse_integer(trim(s.substr(0, slash)));
    mpz_class den = parse_integer(trim(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(s);
}

double to_double(const Rational& x) {
  double d = x.get_d();  // truncated toward zero
  if (!std::isfinite(d) || Rational(d) == x) return d;
  double away = std::nextafter(d, x > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return d;
  Rational gap_d = abs_value(Rational(x - d));
  Rational gap_away = abs_value(Rational(away - x));
  if (gap_away < gap_d) return away;
  if (gap_d < gap_away) return d;
  // tie: even mantissa
  std::uint64_t bits = 0;
  std::memcpy(&bits, &d, sizeof bits);
  return (bits & 1U) == 0 ? d : away;
}

std::string format_number(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

}  // namespace cantor
