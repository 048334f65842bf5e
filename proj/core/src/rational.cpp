#include "streamrelay/rational.hpp"

#include <cctype>
#include <cmath>

#include "streamrelay/error.hpp"

namespace streamrelay {

BigInt floor(const Rational& r) {
  BigInt num = numerator_of(r);
  BigInt den = denominator_of(r);
  BigInt q = num / den;  // truncates toward zero
  if (num % den != 0 && num < 0) --q;
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt num = numerator_of(r);
  BigInt den = denominator_of(r);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

std::int64_t floor_to_int(const Rational& r) { return floor(r).convert_to<std::int64_t>(); }
std::int64_t ceil_to_int(const Rational& r) { return ceil(r).convert_to<std::int64_t>(); }

double to_double(const Rational& r) {
  // cpp_rational -> double goes through the exact quotient.
  return r.convert_to<double>();
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw Error(ErrorCode::Parse, "empty integer in '" + std::string(whole) + "'");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw Error(ErrorCode::Parse, "bad rational '" + std::string(whole) + "'");
  BigInt value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::Parse, "bad rational '" + std::string(whole) + "' (use p/q, decimals are rejected)");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const BigInt num = parse_integer(text.substr(0, slash), text);
  const BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

}  // namespace streamrelay
