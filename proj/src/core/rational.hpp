#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "core/errors.hpp"

namespace fsc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p", "-p" or "p/q" with q > 0 after sign normalization.
inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) fail(ErrorCode::parse, "rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::parse, "malformed rational: '" + s + "'");
  }
}

// "p" when the denominator is 1, "p/q" otherwise.
inline std::string format_rational(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline BigInt catalan_number(int n) {
  // C_n = binom(2n, n) / (n + 1)
  BigInt c = 1;
  for (int i = 0; i < n; ++i) c = c * BigInt(2 * n - i) / BigInt(i + 1);
  return c / BigInt(n + 1);
}

}  // namespace fsc
