#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpa {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

// Every finite double is dyadic, so this conversion is exact.
inline Rat rat_from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("rat_from_double: non-finite value");
  return Rat(d);
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline int rat_sign(const Rat& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

inline Rat rat_pow2(long k) {
  Rat r(1);
  BigInt p = BigInt(1) << static_cast<unsigned>(k < 0 ? -k : k);
  return k >= 0 ? Rat(p) : Rat(1, p);
}

namespace detail {
// cpp_int's string constructor honors C literal prefixes (leading 0 means octal),
// so integers are accumulated digit by digit instead.
inline BigInt parse_integer(std::string_view s) {
  int sign = 1;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) sign = (s[i++] == '-') ? -1 : 1;
  if (i == s.size()) throw std::invalid_argument("parse_integer: empty");
  BigInt n = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("parse_integer: bad digit");
    n = n * 10 + (s[i] - '0');
  }
  return sign < 0 ? BigInt(-n) : n;
}
}  // namespace detail

// Accepts "n", "-n", "n/d", decimal ("0.125") and scientific ("2.5e-3") literals.
inline Rat parse_rational(std::string_view s) {
  auto bad = [&] { throw std::invalid_argument("parse_rational: bad literal '" + std::string(s) + "'"); };
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) bad();
  s = s.substr(b, e - b + 1);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    try {
      BigInt n = detail::parse_integer(s.substr(0, slash));
      BigInt d = detail::parse_integer(s.substr(slash + 1));
      if (d == 0) bad();
      return Rat(n, d);
    } catch (const std::invalid_argument&) {
      bad();
    }
  }

  int sign = 1;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) sign = (s[i++] == '-') ? -1 : 1;
  std::string digits;
  long frac_len = 0, exp10 = 0;
  bool saw_digit = false, saw_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      saw_digit = true;
      if (saw_dot) ++frac_len;
    } else if (c == '.') {
      if (saw_dot) bad();
      saw_dot = true;
    } else if (c == 'e' || c == 'E') {
      if (!saw_digit) bad();
      std::string ex(s.substr(i + 1));
      if (ex.empty() || ex.find_first_not_of("+-0123456789") != std::string::npos) bad();
      try {
        exp10 = std::stol(ex);
      } catch (...) {
        bad();
      }
      break;
    } else {
      bad();
    }
  }
  if (!saw_digit) bad();
  BigInt n = detail::parse_integer(digits.empty() ? "0" : digits);
  if (sign < 0) n = -n;
  long k = exp10 - frac_len;
  BigInt p10 = 1;
  for (long t = 0; t < (k < 0 ? -k : k); ++t) p10 *= 10;
  return k >= 0 ? Rat(n * p10) : Rat(n, p10);
}

inline std::string format_rational(const Rat& r) {
  BigInt n = boost::multiprecision::numerator(r);
  BigInt d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

// Raised by operations whose configured resource limits (nodes, cases, subsets) run out.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an input object fails structural validation.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fpa
