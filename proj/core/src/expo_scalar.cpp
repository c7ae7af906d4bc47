#include "ultralevy/expo_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace ultralevy {

namespace {

// Integral parts of exponents are materialized as integers; keep them bounded.
constexpr double kMaxPowerBits = 1u << 28;

Natural floor_div(const Natural& num, const Natural& den) {
  Natural q;
  mpz_fdiv_q(q.backend().data(), num.backend().data(), den.backend().data());
  return q;
}

Rational p_power(std::uint64_t p, const Natural& k) {
  if (k == 0) return Rational(1);
  Natural magnitude = k < 0 ? Natural(-k) : k;
  double bits = magnitude.convert_to<double>() * std::log2(static_cast<double>(p));
  if (!(bits <= kMaxPowerBits)) {
    throw Error("power p^" + k.str() + " is too large for exact arithmetic");
  }
  Natural value = boost::multiprecision::pow(Natural(p), magnitude.convert_to<unsigned>());
  return k < 0 ? Rational(Natural(1), value) : Rational(value);
}

}  // namespace

ExpoScalar::ExpoScalar(const Rational& constant) {
  if (constant != 0) terms_.emplace(Rational(0), constant);
}

ExpoScalar ExpoScalar::q_power(QBase base, const Rational& exponent, const Rational& coeff) {
  if (base.unset() || base.kappa == 0) throw std::invalid_argument("q_power needs a fixed base");
  ExpoScalar out;
  out.base_ = base;
  if (coeff == 0) return out;
  Rational in_p = exponent * base.kappa;
  Natural k = floor_div(numerator(in_p), denominator(in_p));
  Rational frac = in_p - Rational(k);
  out.terms_.emplace(frac, coeff * p_power(base.p, k));
  return out;
}

ExpoScalar ExpoScalar::from_terms(QBase base, std::span<const Term> terms) {
  ExpoScalar out;
  out.base_ = base;
  for (const auto& t : terms) out += q_power(base, t.exponent, t.coeff);
  return out;
}

std::vector<ExpoScalar::Term> ExpoScalar::terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [frac, coeff] : terms_) {
    Rational exponent = base_.kappa == 0 ? frac : Rational(frac / base_.kappa);
    out.push_back({coeff, exponent});
  }
  return out;
}

bool ExpoScalar::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Rational ExpoScalar::as_rational() const {
  if (!is_rational()) throw Error("value " + str() + " is irrational");
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

ExpoScalar ExpoScalar::times_q_power(const Rational& exponent) const {
  if (is_zero()) return *this;
  if (base_.unset()) throw std::invalid_argument("times_q_power on a scalar without base");
  return *this * q_power(base_, exponent);
}

QBase ExpoScalar::merge_base(QBase a, QBase b) {
  if (a.unset()) return b;
  if (b.unset()) return a;
  if (!(a == b)) throw std::invalid_argument("ExpoScalar operands use different bases");
  return a;
}

void ExpoScalar::add_term(const Rational& frac, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(frac, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

ExpoScalar& ExpoScalar::operator+=(const ExpoScalar& rhs) {
  base_ = merge_base(base_, rhs.base_);
  for (const auto& [frac, coeff] : rhs.terms_) add_term(frac, coeff);
  return *this;
}

ExpoScalar& ExpoScalar::operator-=(const ExpoScalar& rhs) {
  base_ = merge_base(base_, rhs.base_);
  for (const auto& [frac, coeff] : rhs.terms_) add_term(frac, Rational(-coeff));
  return *this;
}

ExpoScalar& ExpoScalar::operator*=(const ExpoScalar& rhs) {
  QBase base = merge_base(base_, rhs.base_);
  ExpoScalar out;
  out.base_ = base;
  for (const auto& [fa, ca] : terms_) {
    for (const auto& [fb, cb] : rhs.terms_) {
      Rational frac = fa + fb;
      Rational coeff = ca * cb;
      if (frac >= 1) {
        frac -= 1;
        coeff *= base.p;
      }
      out.add_term(frac, coeff);
    }
  }
  *this = std::move(out);
  return *this;
}

ExpoScalar operator-(const ExpoScalar& a) {
  ExpoScalar out;
  out.base_ = a.base_;
  for (const auto& [frac, coeff] : a.terms_) out.terms_.emplace(frac, Rational(-coeff));
  return out;
}

bool operator==(const ExpoScalar& a, const ExpoScalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.is_rational() && !b.is_rational() && !(a.base_ == b.base_)) {
    throw std::invalid_argument("comparing ExpoScalars with different bases");
  }
  return a.terms_ == b.terms_;
}

int ExpoScalar::sign() const {
  if (is_zero()) return 0;
  if (is_rational()) return terms_.begin()->second > 0 ? 1 : -1;
  return evaluate(10) > 0 ? 1 : -1;
}

Real ExpoScalar::evaluate(unsigned digits10) const {
  if (digits10 == 0) digits10 = 1;
  if (is_zero()) {
    PrecisionScope scope(digits10);
    return Real(0);
  }
  unsigned working = digits10 + 12;
  for (;;) {
    PrecisionScope scope(working);
    std::vector<Real> values;
    values.reserve(terms_.size());
    for (const auto& [frac, coeff] : terms_) {
      Real v = to_real(coeff);
      if (frac != 0) {
        Real radical = boost::multiprecision::pow(Real(base_.p), to_real(frac));
        v *= radical;
      }
      values.push_back(std::move(v));
    }
    std::sort(values.begin(), values.end(),
              [](const Real& x, const Real& y) { return abs(x) < abs(y); });
    Real sum = 0;
    Real magnitude = 0;
    for (const auto& v : values) {
      sum += v;
      magnitude += abs(v);
    }
    Real bound = magnitude * boost::multiprecision::pow(Real(10), -static_cast<int>(working) + 3);
    if (abs(sum) > 4 * bound) {
      PrecisionScope out_scope(digits10);
      Real out = sum;
      out.precision(digits10);
      return out;
    }
    if (working > (1u << 22)) throw Error("cannot resolve the sign of " + str());
    working *= 2;
  }
}

double ExpoScalar::to_double() const { return evaluate(20).convert_to<double>(); }

std::string ExpoScalar::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [frac, coeff] : terms_) {
    Rational magnitude = coeff < 0 ? Rational(-coeff) : coeff;
    if (first) {
      if (coeff < 0) os << "-";
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    first = false;
    os << to_string(magnitude);
    if (frac != 0) os << "*" << base_.p << "^(" << to_string(frac) << ")";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExpoScalar& x) { return os << x.str(); }

}  // namespace ultralevy
