#include "ultralevy/tower.hpp"

#include <numeric>

namespace ultralevy {

std::uint64_t TowerProfile::m(std::size_t n) const {
  if (n == 0) return 0;
  require_level(n, "ramification index");
  return m_[n - 1];
}

Rational TowerProfile::level_exponent(std::size_t n) const {
  return Rational(Natural(n) * Natural(m(n)));
}

void TowerProfile::require_level(std::size_t n, const char* what) const {
  if (n > depth()) {
    throw DepthError(std::string(what) + " needs level " + std::to_string(n) +
                     " but the profile depth is " + std::to_string(depth()));
  }
}

TowerProfile validate_profile(const RawProfile& raw) {
  if (!is_probable_prime(raw.p)) {
    throw ValidationError("p = " + std::to_string(raw.p) + " is not prime");
  }
  if (raw.kappa < 1) throw ValidationError("kappa must be a positive integer");

  std::vector<std::uint64_t> m = raw.m;
  if (raw.rule) {
    if (!raw.m.empty()) throw ValidationError("give either m or m_rule, not both");
    if (raw.rule->ratio < 2) throw ValidationError("m_rule ratio must be an integer >= 2");
    if (raw.rule->count < 1) throw ValidationError("m_rule count must be positive");
    std::uint64_t value = 1;
    for (std::size_t i = 0; i < raw.rule->count; ++i) {
      m.push_back(value);
      if (i + 1 < raw.rule->count && value > UINT64_MAX / raw.rule->ratio) {
        throw ValidationError("m_rule overflows 64-bit ramification indices");
      }
      value *= raw.rule->ratio;
    }
  }
  if (m.empty()) throw ValidationError("the ramification sequence m is empty");
  if (m.front() != 1) throw ValidationError("m_1 must equal 1");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (std::gcd(m[i], raw.p) != 1) {
      throw ValidationError("gcd(m_" + std::to_string(i + 1) + ", p) = " +
                            std::to_string(std::gcd(m[i], raw.p)) + " != 1 (tame ramification)");
    }
    if (i > 0) {
      if (m[i] % m[i - 1] != 0) {
        throw ValidationError("m_" + std::to_string(i) + " does not divide m_" + std::to_string(i + 1));
      }
      if (m[i] / m[i - 1] < 2) {
        throw ValidationError("m_" + std::to_string(i + 1) + "/m_" + std::to_string(i) + " < 2");
      }
    }
  }

  std::uint64_t q = 1;
  for (unsigned i = 0; i < raw.kappa; ++i) {
    if (q > UINT64_MAX / raw.p) throw ValidationError("q = p^kappa overflows 64 bits");
    q *= raw.p;
  }

  TowerProfile out;
  out.p_ = raw.p;
  out.kappa_ = raw.kappa;
  out.q_ = q;
  out.m_ = std::move(m);
  return out;
}

ExpoScalar index_M(const TowerProfile& profile, std::size_t n) {
  profile.require_level(n, "index M(n)");
  return ExpoScalar::q_power(profile.base(), profile.level_exponent(n));
}

ExpoScalar haar_ball(const TowerProfile& profile, std::size_t n) {
  profile.require_level(n, "Haar ball measure");
  return ExpoScalar::q_power(profile.base(), -profile.level_exponent(n));
}

ExpoScalar shell_measure(const TowerProfile& profile, std::size_t l) {
  profile.require_level(l + 1, "shell measure");
  return haar_ball(profile, l) - haar_ball(profile, l + 1);
}

Natural index_natural(const TowerProfile& profile, std::size_t n) {
  return numerator(index_M(profile, n).as_rational());
}

Natural digit_alphabet(const TowerProfile& profile, std::size_t n) {
  if (n == 0) throw DepthError("digit alphabets start at level 1");
  profile.require_level(n, "digit alphabet");
  Rational exponent = profile.level_exponent(n) - profile.level_exponent(n - 1);
  return numerator(ExpoScalar::q_power(profile.base(), exponent).as_rational());
}

}  // namespace ultralevy
