#include "ultralevy/numeric.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

#include <boost/multiprecision/miller_rabin.hpp>

namespace ultralevy {

namespace {

std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}

// Boost reads a leading 0 as an octal prefix; digits here are always decimal.
Natural decimal_natural(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Natural(std::string(digits));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  // Optional decimal exponent, e.g. 1e-12 or 2.5E3, applied exactly.
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos && body.find('/') == std::string_view::npos) {
    std::string_view digits = body.substr(e + 1);
    bool negative_exponent = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
      negative_exponent = digits.front() == '-';
      digits.remove_prefix(1);
    }
    if (!all_digits(digits) || digits.size() > 6) throw ValidationError("malformed exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(digits));
    if (negative_exponent) exponent = -exponent;
    body = body.substr(0, e);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw ValidationError("malformed rational '" + std::string(text) + "'");
    }
    Natural d = decimal_natural(den);
    if (d == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    value = Rational(decimal_natural(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw ValidationError("malformed decimal '" + std::string(text) + "'");
    }
    Natural scale = boost::multiprecision::pow(Natural(10), static_cast<unsigned>(frac.size()));
    const Natural digits = decimal_natural(std::string(whole) + std::string(frac) + (whole.empty() && frac.empty() ? "0" : ""));
    value = Rational(digits, scale);
  } else {
    if (!all_digits(body)) throw ValidationError("malformed rational '" + std::string(text) + "'");
    value = Rational(decimal_natural(body));
  }
  if (exponent != 0) {
    const Natural scale = boost::multiprecision::pow(Natural(10), static_cast<unsigned>(std::labs(exponent)));
    value = exponent > 0 ? Rational(value * scale) : Rational(value / scale);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_decimal(const Real& x, unsigned digits) {
  std::ostringstream os;
  os << std::setprecision(static_cast<int>(digits)) << x;
  return os.str();
}

bool is_probable_prime(std::uint64_t n) {
  if (n < 2) return false;
  return boost::multiprecision::miller_rabin_test(Natural(n), 32);
}

PrecisionScope::PrecisionScope(unsigned digits10)
    : lock_(precision_mutex()), previous_(Real::default_precision()), digits_(digits10) {
  Real::default_precision(digits10);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_); }

Real to_real(const Rational& r) {
  Real out;
  mpfr_set_q(out.backend().data(), r.backend().data(), MPFR_RNDN);
  return out;
}

}  // namespace ultralevy
