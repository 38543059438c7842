#include "aivf/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "aivf/error.hpp"

namespace aivf {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(Errc::Parse, "not a number: '" + std::string(whole) + "'");
  Integer z(std::string(s), 10);
  return negative ? Integer(-z) : z;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Integer ez = parse_integer(s.substr(e + 1), whole);
    if (!ez.fits_slong_p()) throw Error(Errc::Parse, "exponent out of range: '" + std::string(whole) + "'");
    exponent = ez.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  long fraction_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      throw Error(Errc::Parse, "not a number: '" + std::string(whole) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    fraction_digits = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw Error(Errc::Parse, "not a number: '" + std::string(whole) + "'");
    digits = std::string(s);
  }
  Rational r{Integer(digits, 10)};
  long scale = exponent - fraction_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0) {
    r /= Rational(ten_pow);
  } else {
    r *= Rational(ten_pow);
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(Errc::Parse, "empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), text);
    Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(Errc::Parse, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text, text);
}

std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_decimal_string(const Rational& r, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const bool negative = sgn(r) < 0;
  Integer num = r.get_num();
  if (negative) num = -num;
  // round(|r| * 10^digits) with ties away from zero: floor((2*num*scale + den) / (2*den))
  Integer scaled = (2 * num * scale + r.get_den()) / (2 * r.get_den());
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && scaled != 0) s.insert(0, "-");
  return s;
}

std::size_t bit_length(const Integer& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

std::size_t bit_size(const Rational& r) {
  return std::max(bit_length(r.get_num()), bit_length(r.get_den()));
}

}  // namespace aivf
