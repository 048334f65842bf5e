#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace streamrelay {

/// Exact, arbitrary-precision rational. All rate and symbol-count arithmetic
/// goes through this type; floating point only appears when printing.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);
std::int64_t floor_to_int(const Rational& r);
std::int64_t ceil_to_int(const Rational& r);
double to_double(const Rational& r);

/// "p/q" (or a plain integer "p"). Decimal notation is rejected so that a
/// value like 0.3 can never be silently rounded.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& r);

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

}  // namespace streamrelay
