#include "ultralevy/levy.hpp"

namespace ultralevy {

namespace {

ExpoScalar qp(const TowerProfile& profile, const Rational& exponent) {
  return ExpoScalar::q_power(profile.base(), exponent);
}

}  // namespace

ExpoScalar shell_density(const TowerProfile& profile, const Rational& alpha, std::size_t n) {
  profile.require_level(n + 1, "shell density");
  ExpoScalar out = qp(profile, alpha);
  for (std::size_t l = 1; l <= n; ++l) {
    ExpoScalar bracket = qp(profile, alpha * profile.level_exponent(l + 1)) -
                         qp(profile, alpha * profile.level_exponent(l));
    out += bracket.times_q_power(profile.level_exponent(l));
  }
  return out;
}

ExpoScalar shell_density_abel(const TowerProfile& profile, const Rational& alpha, std::size_t n) {
  profile.require_level(n + 1, "shell density");
  const ExpoScalar q_alpha = qp(profile, alpha);
  ExpoScalar out = q_alpha;
  out += qp(profile, profile.level_exponent(n)) * (qp(profile, alpha * profile.level_exponent(n + 1)) - q_alpha);
  for (std::size_t i = 1; i + 1 <= n; ++i) {
    ExpoScalar measure_step = qp(profile, profile.level_exponent(i + 1)) - qp(profile, profile.level_exponent(i));
    ExpoScalar symbol_step = qp(profile, alpha * profile.level_exponent(i + 1)) - q_alpha;
    out -= measure_step * symbol_step;
  }
  return out;
}

ExpoScalar tail(const TowerProfile& profile, const Rational& alpha, std::size_t n) {
  profile.require_level(n, "Levy tail");
  ExpoScalar out;
  for (std::size_t j = 0; j < n; ++j) out += shell_density(profile, alpha, j) * shell_measure(profile, j);
  return out;
}

std::vector<AsymptoticRecord> asymptotic_diagnostics(const TowerProfile& profile, const Rational& alpha,
                                                     std::size_t n_max, unsigned digits) {
  profile.require_level(n_max + 1, "asymptotic diagnostics");
  std::vector<AsymptoticRecord> out;
  ExpoScalar running;
  for (std::size_t n = 0; n <= n_max; ++n) {
    ExpoScalar density = shell_density(profile, alpha, n);
    if (n >= 1) {
      AsymptoticRecord record;
      record.n = n;
      record.tail_ratio = running.times_q_power(-alpha * profile.level_exponent(n)).evaluate(digits);
      record.density_ratio =
          density.times_q_power(-(profile.level_exponent(n) + alpha * profile.level_exponent(n + 1)))
              .evaluate(digits);
      out.push_back(std::move(record));
    }
    running += density * shell_measure(profile, n);
  }
  return out;
}

EvansReport evans_ratio(const TowerProfile& profile, const Rational& alpha, std::size_t n, unsigned digits) {
  if (n < 2) throw ValidationError("the Evans ratio needs n >= 2");
  profile.require_level(n, "Evans ratio");
  EvansReport out;
  out.n = n;
  const Rational step = profile.level_exponent(n) - profile.level_exponent(n - 1);
  ExpoScalar upper = tail(profile, alpha, n).times_q_power(-step);
  ExpoScalar lower = tail(profile, alpha, n - 1);
  {
    PrecisionScope scope(digits + 10);
    Real ratio = upper.evaluate(digits + 10) / lower.evaluate(digits + 10);
    PrecisionScope out_scope(digits);
    out.ratio = ratio;
    out.ratio.precision(digits);
  }
  out.trend_exponent = (alpha - 1) * step;
  out.trend = qp(profile, out.trend_exponent).evaluate(digits);
  out.condition_established = alpha < 1;
  return out;
}

ShellTable build_shell_table(const TowerProfile& profile, const Rational& alpha, std::size_t levels,
                             unsigned digits) {
  if (alpha <= 0) throw ValidationError("alpha must be positive");
  if (levels < 1) throw ValidationError("the quotient level N must be at least 1");
  profile.require_level(levels, "shell table");

  ShellTable table;
  table.profile_ = profile;
  table.alpha_ = alpha;
  table.tails_.push_back(ExpoScalar());
  for (std::size_t l = 0; l < levels; ++l) {
    table.densities_.push_back(shell_density(profile, alpha, l));
    table.shells_.push_back(shell_measure(profile, l));
    table.rates_.push_back(table.densities_.back() * table.shells_.back());
    table.tails_.push_back(table.tails_.back() + table.rates_.back());
    table.alphabets_.push_back(digit_alphabet(profile, l + 1));
  }

  PrecisionScope scope(digits + 10);
  Real lambda = table.total_rate().evaluate(digits + 10);
  table.total_rate_value_ = lambda.convert_to<double>();
  table.total_rate_decimal_ = to_decimal(lambda, digits);
  for (std::size_t j = 0; j + 1 < levels; ++j) {
    Real share = table.tails_[j + 1].evaluate(digits + 10) / lambda;
    table.cumulative_choice_.push_back(share.convert_to<double>());
  }
  table.cumulative_choice_.push_back(1.0);
  return table;
}

}  // namespace ultralevy
