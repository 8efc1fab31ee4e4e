#pragma once

// Exact rational scalar for the elimination routines, plus decimal parsing so
// that inputs such as "0.05" become exactly 1/20.

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "cwc/errors.hpp"

namespace cwc {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Parses an optionally signed decimal ("-0.125", "3", "2.5e-2") exactly.
inline Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  Integer digits = 0;
  int scale = 0;
  bool any = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++scale;
      any = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any) throw InvalidArgument("not a decimal number: '" + std::string(text) + "'");
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    bool exp_any = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exponent = exponent * 10 + (text[i] - '0');
      exp_any = true;
      if (exponent > 4000) throw InvalidArgument("decimal exponent out of range");
    }
    if (!exp_any) throw InvalidArgument("malformed exponent in '" + std::string(text) + "'");
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) throw InvalidArgument("not a decimal number: '" + std::string(text) + "'");
  const int net = exponent - scale;
  Integer pow10 = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(net < 0 ? -net : net));
  Rational value = net >= 0 ? Rational(digits * pow10) : Rational(digits, pow10);
  return negative ? Rational(-value) : value;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Scales a rational vector by a positive factor so that its entries are
/// coprime integers. The zero vector is returned unchanged.
inline std::vector<Rational> primitive_integer_row(const std::vector<Rational>& row) {
  Integer lcm_den = 1;
  for (const auto& v : row) {
    if (v != 0) lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(v));
  }
  Integer gcd_num = 0;
  for (const auto& v : row) {
    if (v == 0) continue;
    const Integer n = boost::multiprecision::numerator(v) * (lcm_den / boost::multiprecision::denominator(v));
    gcd_num = boost::multiprecision::gcd(gcd_num, n < 0 ? Integer(-n) : n);
  }
  if (gcd_num == 0) return row;
  std::vector<Rational> out;
  out.reserve(row.size());
  for (const auto& v : row) out.push_back(v * Rational(lcm_den) / Rational(gcd_num));
  return out;
}

}  // namespace cwc
