#pragma once

#include <string>
#include <vector>

#include "ultralevy/tower.hpp"

namespace testing_support {

inline ultralevy::TowerProfile make_profile(std::uint64_t p, unsigned kappa, std::vector<std::uint64_t> m) {
  ultralevy::RawProfile raw;
  raw.p = p;
  raw.kappa = kappa;
  raw.m = std::move(m);
  return ultralevy::validate_profile(raw);
}

inline ultralevy::TowerProfile make_rule_profile(std::uint64_t p, unsigned kappa, std::uint64_t ratio,
                                                 std::size_t count) {
  ultralevy::RawProfile raw;
  raw.p = p;
  raw.kappa = kappa;
  raw.rule = ultralevy::GrowthRule{ratio, count};
  return ultralevy::validate_profile(raw);
}

/// The default tower q = 2, m = (1, 3, 9, 27).
inline ultralevy::TowerProfile default_tower() { return make_profile(2, 1, {1, 3, 9, 27}); }

inline ultralevy::Rational R(const char* text) { return ultralevy::parse_rational(text); }

inline double to_d(const ultralevy::Real& x) { return x.convert_to<double>(); }

}  // namespace testing_support
