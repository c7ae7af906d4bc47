#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ultralevy/numeric.hpp"

namespace ultralevy {

/// The base q = p^kappa of every power appearing in an ExpoScalar.
struct QBase {
  std::uint64_t p = 0;  // 0 means "not yet fixed" (pure rational constants)
  unsigned kappa = 0;

  bool unset() const { return p == 0; }
  friend bool operator==(const QBase&, const QBase&) = default;
};

/**
 * Exact finite sum  sum_i c_i * q^{e_i}  with rational coefficients and rational
 * exponents.
 *
 * Internally every power is rewritten in base p as p^{k + r} with integer k and
 * 0 <= r < 1; the integral part is folded into the coefficient. Since x^d - p is
 * irreducible over Q (Eisenstein), the radicals p^r for distinct r in [0, 1) are
 * linearly independent over Q, so the canonical form is unique and equality of
 * canonical forms coincides with equality of real values.
 *
 * Exposed terms use q-units: exponent in [0, 1/kappa).
 */
class ExpoScalar {
 public:
  struct Term {
    Rational coeff;
    Rational exponent;  // power of q
  };

  ExpoScalar() = default;
  explicit ExpoScalar(const Rational& constant);
  explicit ExpoScalar(long constant) : ExpoScalar(Rational(constant)) {}

  /// coeff * q^exponent.
  static ExpoScalar q_power(QBase base, const Rational& exponent, const Rational& coeff = Rational(1));

  /// Canonicalizes an arbitrary (possibly repetitive, possibly zero) term list.
  static ExpoScalar from_terms(QBase base, std::span<const Term> terms);

  bool is_zero() const { return terms_.empty(); }
  QBase base() const { return base_; }
  std::size_t size() const { return terms_.size(); }

  /// Canonical terms, ascending in exponent.
  std::vector<Term> terms() const;

  /// The value if it is rational (a single q^0 term or zero).
  bool is_rational() const;
  Rational as_rational() const;

  /// Exact product with q^exponent.
  ExpoScalar times_q_power(const Rational& exponent) const;

  ExpoScalar& operator+=(const ExpoScalar& rhs);
  ExpoScalar& operator-=(const ExpoScalar& rhs);
  ExpoScalar& operator*=(const ExpoScalar& rhs);

  friend ExpoScalar operator+(ExpoScalar a, const ExpoScalar& b) { return a += b; }
  friend ExpoScalar operator-(ExpoScalar a, const ExpoScalar& b) { return a -= b; }
  friend ExpoScalar operator*(ExpoScalar a, const ExpoScalar& b) { return a *= b; }
  friend ExpoScalar operator-(const ExpoScalar& a);
  friend bool operator==(const ExpoScalar& a, const ExpoScalar& b);

  /// Exact sign, -1/0/+1.
  int sign() const;

  /**
   * Value rounded to `digits10` significant decimal digits. Terms are summed in
   * ascending order of magnitude, and the working precision is raised until the
   * rounding error bound is below the magnitude of the sum, so the sign of the
   * result always matches the exact sign.
   */
  Real evaluate(unsigned digits10 = kDefaultDigits) const;

  /// Nearest double; may be +-inf for very large values.
  double to_double() const;

  /// Exact rendering, e.g. "16 - 1*2^(1/2)" (powers shown in base p).
  std::string str() const;

 private:
  static QBase merge_base(QBase a, QBase b);
  void add_term(const Rational& frac, const Rational& coeff);

  QBase base_;
  std::map<Rational, Rational> terms_;  // fractional p-exponent in [0,1) -> coefficient
};

std::ostream& operator<<(std::ostream& os, const ExpoScalar& x);

}  // namespace ultralevy
