#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace rank1check {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

/// Always "p/q" with q >= 1, e.g. "0/1", "3/8".
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace rank1check
