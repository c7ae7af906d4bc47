#include "ultralevy/spectral.hpp"

namespace ultralevy {

namespace {

constexpr unsigned kGuardDigits = 12;

void require_positive_alpha(const Rational& alpha) {
  if (alpha <= 0) throw ValidationError("alpha must be positive");
}

void require_nonnegative_time(const Real& t) {
  if (t < 0) throw ValidationError("t must be nonnegative");
}

// Scalar-type adapters so the transforms are written once.
ExpoScalar lift(const ExpoScalar& x, unsigned) { return x; }
Real lift_real(const ExpoScalar& x, unsigned digits) { return x.evaluate(digits); }

template <class T>
T as_scalar(const ExpoScalar& x, unsigned digits) {
  if constexpr (std::is_same_v<T, ExpoScalar>) {
    return lift(x, digits);
  } else {
    return lift_real(x, digits);
  }
}

template <class T>
RadialFunction<T> forward_impl(const TowerProfile& profile, const RadialSequence<T>& phi, unsigned digits) {
  const std::size_t top = phi.support();
  profile.require_level(top, "radial Fourier transform");
  RadialFunction<T> out;
  out.values.reserve(top + 1);
  T running(0);
  for (std::size_t n = 0; n <= top; ++n) {
    T increment = phi.at(n) - phi.at(n + 1);
    increment *= as_scalar<T>(index_M(profile, n), digits);
    running += increment;
    out.values.push_back(running);
  }
  return out;
}

template <class T>
RadialSequence<T> inverse_impl(const TowerProfile& profile, const RadialFunction<T>& f, unsigned digits) {
  if (f.values.empty()) throw ValidationError("radial function has no values");
  const std::size_t top = f.resolution();
  profile.require_level(top, "inverse radial Fourier transform");

  // suffix[l] = sum_{l<=j<Lf} F(j)|shell_j| + F(Lf) mu(V_Lf), i.e. the integral of F over V_l.
  std::vector<T> suffix(top + 1, T(0));
  suffix[top] = f.values[top] * as_scalar<T>(haar_ball(profile, top), digits);
  for (std::size_t l = top; l-- > 0;) {
    suffix[l] = suffix[l + 1] + f.values[l] * as_scalar<T>(shell_measure(profile, l), digits);
  }

  RadialSequence<T> out;
  out.values.reserve(top + 1);
  out.values.push_back(suffix[0]);
  for (std::size_t n = 1; n <= top; ++n) {
    T coefficient = suffix[n] - f.values[n - 1] * as_scalar<T>(haar_ball(profile, n), digits);
    out.values.push_back(std::move(coefficient));
  }
  return out;
}

// Eigenvalues phi_0..phi_top evaluated at the working precision.
std::vector<Real> eigenvalues_real(const TowerProfile& profile, const Rational& alpha, std::size_t top,
                                   unsigned digits) {
  std::vector<Real> out;
  out.reserve(top + 1);
  for (std::size_t n = 0; n <= top; ++n) out.push_back(eigenvalue(profile, alpha, n).evaluate(digits));
  return out;
}

// e^{-t a} - e^{-t b} for a <= b without cancellation.
Real exp_gap(const Real& t, const Real& a, const ExpoScalar& gap, unsigned digits) {
  Real lead = exp(Real(-t * a));
  Real spread = t * gap.evaluate(digits);
  Real factor = -expm1(Real(-spread));
  return Real(lead * factor);
}

}  // namespace

std::vector<DualShell> dual_shells(const TowerProfile& profile, std::size_t top_level) {
  profile.require_level(top_level, "dual shells");
  std::vector<DualShell> out;
  Natural previous = 0;
  for (std::size_t n = 0; n <= top_level; ++n) {
    Natural index = index_natural(profile, n);
    out.push_back({n, Natural(index - previous), Rational(static_cast<long>(n))});
    previous = index;
  }
  return out;
}

ExpoScalar eigenvalue(const TowerProfile& profile, const Rational& alpha, std::size_t n) {
  profile.require_level(n, "eigenvalue");
  if (n == 0) return ExpoScalar();
  return ExpoScalar::q_power(profile.base(), alpha * profile.level_exponent(n));
}

RadialFunction<ExpoScalar> radial_fourier(const TowerProfile& profile, const RadialSequence<ExpoScalar>& phi) {
  return forward_impl(profile, phi, 0);
}

RadialFunction<Real> radial_fourier(const TowerProfile& profile, const RadialSequence<Real>& phi, unsigned digits) {
  PrecisionScope scope(digits);
  return forward_impl(profile, phi, digits);
}

RadialSequence<ExpoScalar> inverse_radial_fourier(const TowerProfile& profile,
                                                  const RadialFunction<ExpoScalar>& f) {
  return inverse_impl(profile, f, 0);
}

RadialSequence<Real> inverse_radial_fourier(const TowerProfile& profile, const RadialFunction<Real>& f,
                                            unsigned digits) {
  PrecisionScope scope(digits);
  return inverse_impl(profile, f, digits);
}

ExpoScalar jump_density(const TowerProfile& profile, const Rational& alpha, std::size_t l) {
  profile.require_level(l + 1, "jump density");
  const QBase base = profile.base();
  ExpoScalar out = -ExpoScalar::q_power(base, alpha);
  for (std::size_t n = 1; n <= l; ++n) {
    ExpoScalar bracket = ExpoScalar::q_power(base, alpha * profile.level_exponent(n)) -
                         ExpoScalar::q_power(base, alpha * profile.level_exponent(n + 1));
    out += bracket.times_q_power(profile.level_exponent(n));
  }
  return out;
}

Real heat_kernel(const TowerProfile& profile, const Rational& alpha, const Real& t, std::size_t l,
                 unsigned digits) {
  require_positive_alpha(alpha);
  profile.require_level(l + 1, "heat kernel");
  const unsigned working = digits + kGuardDigits;
  PrecisionScope scope(working);
  Real time = t;
  require_nonnegative_time(time);
  std::vector<Real> phi = eigenvalues_real(profile, alpha, l + 1, working);
  Real sum = 0;
  for (std::size_t n = 0; n <= l; ++n) {
    ExpoScalar gap = eigenvalue(profile, alpha, n + 1) - eigenvalue(profile, alpha, n);
    Real weight = index_M(profile, n).evaluate(working);
    sum += exp_gap(time, phi[n], gap, working) * weight;
  }
  PrecisionScope out_scope(digits);
  Real out = sum;
  out.precision(digits);
  return out;
}

Real ball_probability(const TowerProfile& profile, const Rational& alpha, const Real& t, std::size_t n,
                      unsigned digits) {
  require_positive_alpha(alpha);
  profile.require_level(n, "ball probability");
  const unsigned working = digits + kGuardDigits;
  PrecisionScope scope(working);
  Real time = t;
  require_nonnegative_time(time);
  Real sum = 0;
  for (const auto& shell : dual_shells(profile, n)) {
    Real phi = eigenvalue(profile, alpha, shell.level).evaluate(working);
    Real multiplicity = shell.multiplicity.convert_to<Real>();
    sum += multiplicity * exp(Real(-time * phi));
  }
  sum *= haar_ball(profile, n).evaluate(working);
  PrecisionScope out_scope(digits);
  Real out = sum;
  out.precision(digits);
  return out;
}

RadialFunction<Real> apply_semigroup(const TowerProfile& profile, const Rational& alpha, const Real& t,
                                     const RadialFunction<Real>& u, unsigned digits) {
  require_positive_alpha(alpha);
  const unsigned working = digits + kGuardDigits;
  PrecisionScope scope(working);
  Real time = t;
  require_nonnegative_time(time);
  RadialSequence<Real> coefficients = inverse_radial_fourier(profile, u, working);
  for (std::size_t n = 1; n < coefficients.values.size(); ++n) {
    Real phi = eigenvalue(profile, alpha, n).evaluate(working);
    coefficients.values[n] *= exp(Real(-time * phi));
  }
  RadialFunction<Real> out = radial_fourier(profile, coefficients, working);
  PrecisionScope out_scope(digits);
  for (auto& v : out.values) v.precision(digits);
  return out;
}

KernelNormalization kernel_normalization(const TowerProfile& profile, const Rational& alpha, const Real& t,
                                         const Real& epsilon, unsigned digits) {
  require_positive_alpha(alpha);
  const unsigned working = digits + kGuardDigits;
  PrecisionScope scope(working);
  Real time = t;
  require_nonnegative_time(time);
  Real eps = epsilon;

  auto omitted = [&](std::size_t level) {
    Real phi = eigenvalue(profile, alpha, level).evaluate(working);
    return Real(exp(Real(-time * phi)) * index_M(profile, level).evaluate(working));
  };

  std::size_t cut = 0;
  Real first_omitted;
  for (;; ++cut) {
    if (cut + 2 > profile.depth()) {
      throw DepthError("profile depth " + std::to_string(profile.depth()) +
                       " is too shallow to certify the kernel tail at t = " + to_decimal(time, 8));
    }
    first_omitted = omitted(cut + 1);
    if (first_omitted < eps / 2 && omitted(cut + 2) <= first_omitted / 2) break;
  }

  Real mass = 0;
  for (std::size_t l = 0; l < cut; ++l) {
    mass += heat_kernel(profile, alpha, time, l, working) * shell_measure(profile, l).evaluate(working);
  }
  Real inner = haar_ball(profile, cut).evaluate(working);
  mass += heat_kernel(profile, alpha, time, cut, working) * inner;

  KernelNormalization out;
  out.mass = mass;
  out.tail_bound = 2 * first_omitted * inner;
  out.truncation_level = cut;
  return out;
}

namespace {

SummabilityReport partial_sums(const std::vector<ExpoScalar>& weights, unsigned digits) {
  SummabilityReport out;
  ExpoScalar running;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    running += weights[n];
    out.partial_sums.push_back(running.evaluate(digits));
  }
  return out;
}

ExpoScalar magnitude_power(const ExpoScalar& x, SummabilityMode mode) {
  ExpoScalar magnitude = x.sign() < 0 ? -x : x;
  return mode == SummabilityMode::l1 ? magnitude : magnitude * magnitude;
}

}  // namespace

SummabilityReport summability_check(const TowerProfile& profile, const RadialSequence<ExpoScalar>& phi,
                                    SummabilityMode mode, unsigned digits) {
  profile.require_level(phi.support(), "summability check");
  std::vector<ExpoScalar> weights;
  for (std::size_t n = 0; n < phi.values.size(); ++n) {
    weights.push_back(magnitude_power(phi.values[n], mode) * index_M(profile, n));
  }
  SummabilityReport out = partial_sums(weights, digits);
  out.summable = true;
  return out;
}

SummabilityReport summability_check_symbol(const TowerProfile& profile, const Rational& alpha,
                                           SummabilityMode mode, unsigned digits) {
  std::vector<ExpoScalar> weights;
  for (std::size_t n = 0; n <= profile.depth(); ++n) {
    weights.push_back(magnitude_power(eigenvalue(profile, alpha, n), mode) * index_M(profile, n));
  }
  SummabilityReport out = partial_sums(weights, digits);
  // Terms are q^{(k alpha + 1) n m_n} with n m_n -> infinity.
  Rational growth = (mode == SummabilityMode::l1 ? alpha : Rational(2 * alpha)) + 1;
  out.summable = growth < 0;
  return out;
}

}  // namespace ultralevy
