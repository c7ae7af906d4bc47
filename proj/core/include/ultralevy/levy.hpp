#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ultralevy/expo_scalar.hpp"
#include "ultralevy/tower.hpp"

namespace ultralevy {

/// Levy density nu_n on the shell V_n \ V_{n+1}, direct form. Needs n + 1 <= depth.
ExpoScalar shell_density(const TowerProfile& profile, const Rational& alpha, std::size_t n);

/// The same density after summation by parts; equal to shell_density as an ExpoScalar.
ExpoScalar shell_density_abel(const TowerProfile& profile, const Rational& alpha, std::size_t n);

/// nu(V \ V_n) = sum_{j<n} nu_j |shell_j|; tail(0) = 0. Needs n <= depth.
ExpoScalar tail(const TowerProfile& profile, const Rational& alpha, std::size_t n);

struct AsymptoticRecord {
  std::size_t n = 0;
  Real tail_ratio;     // tail(n) / q^{alpha n m_n}
  Real density_ratio;  // nu_n / q^{n m_n + alpha (n+1) m_{n+1}}
};

/// Ratio records for n = 1..n_max (n_max + 1 <= depth).
std::vector<AsymptoticRecord> asymptotic_diagnostics(const TowerProfile& profile, const Rational& alpha,
                                                     std::size_t n_max, unsigned digits = kDefaultDigits);

struct EvansReport {
  std::size_t n = 0;
  Real ratio;                 // [tail(n)/M(n)] [M(n-1)/tail(n-1)]
  Rational trend_exponent;    // (alpha - 1)(n m_n - (n-1) m_{n-1})
  Real trend;                 // q^{trend_exponent}
  bool condition_established = false;  // alpha < 1: the ratio decays to 0
};

/// Needs 2 <= n <= depth.
EvansReport evans_ratio(const TowerProfile& profile, const Rational& alpha, std::size_t n,
                        unsigned digits = kDefaultDigits);

/**
 * Per-shell jump data for the quotient chain on V/V_N: for l < N the density nu_l,
 * the Haar measure of the shell, the jump rate r_l = nu_l |shell_l|, and cumulative
 * tails tail(n) = sum_{j<n} r_j. Immutable once built.
 */
class ShellTable {
 public:
  const TowerProfile& profile() const { return profile_; }
  const Rational& alpha() const { return alpha_; }
  std::size_t levels() const { return densities_.size(); }  // N

  const ExpoScalar& density(std::size_t l) const { return densities_.at(l); }
  const ExpoScalar& shell(std::size_t l) const { return shells_.at(l); }
  const ExpoScalar& rate(std::size_t l) const { return rates_.at(l); }
  /// tail(n) for 0 <= n <= N.
  const ExpoScalar& cumulative(std::size_t n) const { return tails_.at(n); }
  /// lambda_N = tail(N), the total jump rate of the quotient chain.
  const ExpoScalar& total_rate() const { return tails_.back(); }

  /// Floating quantities for the sampler, evaluated once at construction.
  double total_rate_value() const { return total_rate_value_; }
  const std::string& total_rate_decimal() const { return total_rate_decimal_; }
  /// cumulative_choice()[j] = sum_{i<=j} r_i / lambda_N, last entry exactly 1.
  const std::vector<double>& cumulative_choice() const { return cumulative_choice_; }
  /// Digit alphabets s_1..s_N (index j-1 holds s_j).
  const std::vector<Natural>& alphabets() const { return alphabets_; }

 private:
  friend ShellTable build_shell_table(const TowerProfile&, const Rational&, std::size_t, unsigned);
  TowerProfile profile_;
  Rational alpha_;
  std::vector<ExpoScalar> densities_;
  std::vector<ExpoScalar> shells_;
  std::vector<ExpoScalar> rates_;
  std::vector<ExpoScalar> tails_;
  std::vector<Natural> alphabets_;
  double total_rate_value_ = 0;
  std::string total_rate_decimal_;
  std::vector<double> cumulative_choice_;
};

/// Needs 1 <= N <= depth and alpha > 0.
ShellTable build_shell_table(const TowerProfile& profile, const Rational& alpha, std::size_t levels,
                             unsigned digits = kDefaultDigits);

}  // namespace ultralevy
