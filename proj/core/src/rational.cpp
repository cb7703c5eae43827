#include "flatcone/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "flatcone/error.hpp"

namespace flatcone {
namespace {

[[noreturn]] void BadRational(std::string_view text) {
  throw Error(ErrorKind::kInvalidArgument, "cannot parse rational '" + std::string(text) + "'");
}

BigInt PowerOfTen(unsigned exponent) {
  BigInt result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational ParseDecimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt digits = 0;
  int fraction_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++fraction_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) BadRational(text);
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') BadRational(text);
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (pos == text.size()) BadRational(text);
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) BadRational(text);
      exponent = exponent * 10 + (text[pos] - '0');
      if (exponent > 4000) BadRational(text);
    }
    if (exp_negative) exponent = -exponent;
  }
  exponent -= fraction_digits;
  Rational result = exponent >= 0 ? Rational(digits * PowerOfTen(static_cast<unsigned>(exponent)))
                                  : Rational(digits, PowerOfTen(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-result) : result;
}

std::string_view Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  text = Trim(text);
  if (text.empty()) BadRational(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return ParseDecimal(text);
  const Rational numerator = ParseDecimal(Trim(text.substr(0, slash)));
  const Rational denominator = ParseDecimal(Trim(text.substr(slash + 1)));
  if (denominator == 0) BadRational(text);
  return numerator / denominator;
}

Rational RationalFromDouble(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kInvalidArgument, "non-finite value has no rational form");
  }
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, std::numeric_limits<double>::digits));
  exponent -= std::numeric_limits<double>::digits;
  Rational result(scaled);
  if (exponent >= 0) {
    result *= Rational(BigInt(1) << exponent);
  } else {
    result /= Rational(BigInt(1) << -exponent);
  }
  return result;
}

std::string ToString(const Rational& value) { return value.str(); }

}  // namespace flatcone
