#include "krspec/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace krs {

namespace {

using boost::multiprecision::mpz_int;

mpz_int pow10(unsigned exponent) {
  mpz_int result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= 10;
  return result;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("not a number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) bad_number(text);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) bad_number(text);
    std::string den_digits(den_text);
    den_digits.erase(0, std::min(den_digits.find_first_not_of('0'), den_digits.size() - 1));
    mpz_int den{den_digits};
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    if (denominator(num) != 1) bad_number(text);
    return Rational(numerator(num), den);
  }

  std::string_view rest = text;
  bool negative = false;
  if (rest.front() == '+' || rest.front() == '-') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = rest.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad_number(text);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    rest = rest.substr(0, e);
  }

  std::string digits;
  long fraction_digits = 0;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = rest.substr(0, dot);
    std::string_view frac_part = rest.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad_number(text);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
      bad_number(text);
    digits = std::string(int_part) + std::string(frac_part);
    fraction_digits = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(rest)) bad_number(text);
    digits = std::string(rest);
  }

  // Leading zeros would select octal in the mpz string constructor.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  mpz_int mantissa{digits};
  if (negative) mantissa = -mantissa;
  long scale = exponent - fraction_digits;
  if (scale >= 0) return Rational(mantissa * pow10(static_cast<unsigned>(scale)));
  return Rational(mantissa, pow10(static_cast<unsigned>(-scale)));
}

std::string to_string(const Rational& value) {
  mpz_int den = denominator(value);
  mpz_int num = numerator(value);
  if (den == 1) return num.str();

  unsigned twos = 0;
  unsigned fives = 0;
  mpz_int rest = den;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return num.str() + "/" + den.str();

  unsigned places = std::max(twos, fives);
  mpz_int scaled = num * pow10(places) / den;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  std::string out = digits.substr(0, digits.size() - places) + "." + digits.substr(digits.size() - places);
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return negative ? "-" + out : out;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational round_decimal(double value, int digits) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return parse_rational(buffer);
}

}  // namespace krs
