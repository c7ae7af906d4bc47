#pragma once

#include <cstddef>
#include <vector>

#include "ultralevy/expo_scalar.hpp"
#include "ultralevy/tower.hpp"

namespace ultralevy {

/// Values phi_0..phi_N of a radial function on the dual group: phi_n is the constant
/// value on the dual shell V_n^perp \ V_{n-1}^perp. Entries past N are zero.
template <class T>
struct RadialSequence {
  std::vector<T> values;

  std::size_t support() const { return values.empty() ? 0 : values.size() - 1; }
  T at(std::size_t n) const { return n < values.size() ? values[n] : T(0); }
};

/// Values F(0)..F(Lf) of a function on V that is constant on each shell
/// V_l \ V_{l+1} for l < Lf and constant on all of V_{Lf}.
template <class T>
struct RadialFunction {
  std::vector<T> values;

  std::size_t resolution() const { return values.empty() ? 0 : values.size() - 1; }
  /// Value on the shell of level l (levels past the resolution lie inside V_Lf).
  const T& at(std::size_t l) const { return values[l < values.size() ? l : values.size() - 1]; }
};

/// Level bookkeeping for V_n^perp \ V_{n-1}^perp: its size and the bound r(theta) <= n.
struct DualShell {
  std::size_t level = 0;
  Natural multiplicity;  // M(n) - M(n-1), with M(-1) = 0
  Rational r_bound;
};

std::vector<DualShell> dual_shells(const TowerProfile& profile, std::size_t top_level);

/// Eigenvalue of D^alpha on the dual shell of level n: q^{alpha n m_n}, and 0 for n = 0.
ExpoScalar eigenvalue(const TowerProfile& profile, const Rational& alpha, std::size_t n);

/// F(l) = sum_{n<=l} (phi_n - phi_{n+1}) q^{n m_n}; resolution equals the support of phi.
RadialFunction<ExpoScalar> radial_fourier(const TowerProfile& profile,
                                          const RadialSequence<ExpoScalar>& phi);
/// Floating versions work at `digits` significant digits.
RadialFunction<Real> radial_fourier(const TowerProfile& profile, const RadialSequence<Real>& phi,
                                    unsigned digits = kDefaultDigits);

/// Fourier coefficients of a radial function, one per dual shell:
///   phi_0 = sum_{l<Lf} F(l) |shell_l| + F(Lf) mu(V_Lf)
///   phi_n = -F(n-1) mu(V_n) + sum_{n<=l<Lf} F(l) |shell_l| + F(Lf) mu(V_Lf),  1 <= n <= Lf.
RadialSequence<ExpoScalar> inverse_radial_fourier(const TowerProfile& profile,
                                                  const RadialFunction<ExpoScalar>& f);
RadialSequence<Real> inverse_radial_fourier(const TowerProfile& profile, const RadialFunction<Real>& f,
                                            unsigned digits = kDefaultDigits);

/// Density of the jump kernel of D^alpha on the shell V_l \ V_{l+1} (any rational alpha).
ExpoScalar jump_density(const TowerProfile& profile, const Rational& alpha, std::size_t l);

/// Heat kernel G_alpha(t, z) for z in V_l \ V_{l+1}; needs l + 1 <= depth.
Real heat_kernel(const TowerProfile& profile, const Rational& alpha, const Real& t, std::size_t l,
                 unsigned digits = kDefaultDigits);

/// P(xi_alpha(t) in V_n) for the process started at the identity.
Real ball_probability(const TowerProfile& profile, const Rational& alpha, const Real& t, std::size_t n,
                      unsigned digits = kDefaultDigits);

/// e^{-t D^alpha} u, computed by multiplying Fourier coefficients by e^{-t phi_n}.
RadialFunction<Real> apply_semigroup(const TowerProfile& profile, const Rational& alpha, const Real& t,
                                     const RadialFunction<Real>& u, unsigned digits = kDefaultDigits);

/// Result of integrating the heat kernel against Haar measure with a certified tail.
struct KernelNormalization {
  Real mass;                      // sum_{l<L*} G(t,l)|shell_l| + G(t,L*) mu(V_{L*})
  Real tail_bound;                // |mass - 1| <= tail_bound
  std::size_t truncation_level = 0;  // L*
};

/// Chooses the first L* with e^{-t phi_{L*+1}} q^{(L*+1) m_{L*+1}} < epsilon/2 whose next
/// term is at most half as large, and bounds the omitted mass by twice that term times
/// mu(V_{L*}). Throws DepthError if the profile is too shallow to certify the bound.
KernelNormalization kernel_normalization(const TowerProfile& profile, const Rational& alpha, const Real& t,
                                         const Real& epsilon, unsigned digits = kDefaultDigits);

enum class SummabilityMode { l1, l2 };

struct SummabilityReport {
  bool summable = false;
  std::vector<Real> partial_sums;  // partial_sums[N] = sum_{n<=N} |phi_n|^k q^{n m_n}
};

/// A finitely supported sequence is always summable; partial sums are still reported.
SummabilityReport summability_check(const TowerProfile& profile, const RadialSequence<ExpoScalar>& phi,
                                    SummabilityMode mode, unsigned digits = kDefaultDigits);

/// The symbol phi_n = q^{alpha n m_n} (n >= 1), phi_0 = 0, extended to every level:
/// summable iff the exponent (k alpha + 1) is negative. Partial sums cover the profile depth.
SummabilityReport summability_check_symbol(const TowerProfile& profile, const Rational& alpha,
                                           SummabilityMode mode, unsigned digits = kDefaultDigits);

}  // namespace ultralevy
