#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ultralevy/expo_scalar.hpp"

namespace ultralevy {

/// Geometric ramification rule m_n = ratio^{n-1}, n = 1..count.
struct GrowthRule {
  std::uint64_t ratio = 0;
  std::size_t count = 0;
};

/// Unvalidated profile data as read from a file or the command line.
struct RawProfile {
  std::uint64_t p = 0;
  unsigned kappa = 0;
  std::vector<std::uint64_t> m;
  std::optional<GrowthRule> rule;
};

/**
 * Arithmetic skeleton of a tamely ramified tower: residue characteristic p,
 * q = p^kappa, and ramification indices m_1 < m_2 < ... < m_L with m_1 = 1,
 * m_n | m_{n+1}, m_{n+1}/m_n >= 2 and gcd(m_n, p) = 1.
 *
 * Levels are 0-based filtration indices; m(0) = 0. The depth L is explicit and every
 * level-dependent quantity checks it.
 */
class TowerProfile {
 public:
  std::uint64_t p() const { return p_; }
  unsigned kappa() const { return kappa_; }
  std::uint64_t q() const { return q_; }
  QBase base() const { return {p_, kappa_}; }
  std::size_t depth() const { return m_.size(); }

  /// m_n for 0 <= n <= depth(), with m_0 = 0.
  std::uint64_t m(std::size_t n) const;
  const std::vector<std::uint64_t>& ramification() const { return m_; }

  /// n * m_n as an exact exponent of q.
  Rational level_exponent(std::size_t n) const;

  /// Throws DepthError unless n <= depth().
  void require_level(std::size_t n, const char* what) const;

  friend bool operator==(const TowerProfile&, const TowerProfile&) = default;

 private:
  friend TowerProfile validate_profile(const RawProfile& raw);
  std::uint64_t p_ = 0;
  unsigned kappa_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> m_;
};

TowerProfile validate_profile(const RawProfile& raw);

/// M(n) = q^{n m_n} = [V : V_n]; M(0) = 1.
ExpoScalar index_M(const TowerProfile& profile, std::size_t n);

/// Haar measure of V_n, q^{-n m_n}.
ExpoScalar haar_ball(const TowerProfile& profile, std::size_t n);

/// Haar measure of the shell V_l \ V_{l+1}; needs l + 1 <= depth.
ExpoScalar shell_measure(const TowerProfile& profile, std::size_t l);

/// s_n = [V_{n-1} : V_n] = q^{n m_n - (n-1) m_{n-1}} for 1 <= n <= depth.
Natural digit_alphabet(const TowerProfile& profile, std::size_t n);

/// Exact M(n) as an integer.
Natural index_natural(const TowerProfile& profile, std::size_t n);

/// Parses the profile JSON document ({"p","kappa","m"} or {"p","kappa","m_rule"}).
RawProfile parse_profile_json(const std::string& text);
TowerProfile load_profile(const std::string& path);
std::string profile_to_json(const TowerProfile& profile);

}  // namespace ultralevy
