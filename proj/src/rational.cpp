#include "fedsim/rational.hpp"

#include <stdexcept>

namespace fedsim {

BigInt rational_floor(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);  // always > 0, normalized
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

std::string decimal_string(const Rational& r, int fractional_digits) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;

  BigInt scale = 1;
  for (int i = 0; i < fractional_digits; ++i) scale *= 10;

  BigInt t = num * scale;
  BigInt q = t / den;
  BigInt rem = t % den;
  BigInt twice = rem * 2;
  if (twice > den || (twice == den && (q % 2) != 0)) ++q;

  BigInt whole = q / scale;
  BigInt frac = q % scale;

  std::string fs = frac.str();
  if ((int)fs.size() < fractional_digits)
    fs.insert(fs.begin(), fractional_digits - fs.size(), '0');

  std::string out;
  if (neg && (whole != 0 || frac != 0)) out += '-';
  out += whole.str();
  if (fractional_digits > 0) {
    out += '.';
    out += fs;
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return std::runtime_error("not a rational: '" + text + "'"); };
  const auto digits = [](const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
  };
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(s.begin());
  }
  Rational value;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!digits(num) || !digits(den)) throw bad();
    BigInt d(den);
    if (d == 0) throw bad();
    value = Rational(BigInt(num), d);
  } else if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !digits(whole)) ||
        (!frac.empty() && !digits(frac))) {
      throw bad();
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(BigInt(whole.empty() ? "0" : whole) * scale +
                         BigInt(frac.empty() ? "0" : frac),
                     scale);
  } else {
    if (!digits(s)) throw bad();
    value = Rational(BigInt(s));
  }
  return neg ? Rational(-value) : value;
}

}  // namespace fedsim
