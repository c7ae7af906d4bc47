#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "support.hpp"
#include "ultralevy/levy.hpp"
#include "ultralevy/spectral.hpp"

using namespace ultralevy;
using testing_support::default_tower;
using testing_support::make_profile;
using testing_support::make_rule_profile;
using testing_support::R;
using testing_support::to_d;

namespace {

// Direct MPFR evaluation of nu_n = q^a + sum_{l=1}^{n} q^{l m_l}(q^{a(l+1)m_{l+1}} - q^{a l m_l}).
Real direct_density(const TowerProfile& t, double alpha, std::size_t n) {
  PrecisionScope scope(80);
  const Real q(static_cast<double>(t.q()));
  const Real a(alpha);
  Real sum = pow(q, a);
  for (std::size_t l = 1; l <= n; ++l) {
    const Real e = Real(static_cast<double>(l * t.m(l)));
    const Real e1 = Real(static_cast<double>((l + 1) * t.m(l + 1)));
    sum += pow(q, e) * (pow(q, a * e1) - pow(q, a * e));
  }
  return sum;
}

Real direct_tail(const TowerProfile& t, double alpha, std::size_t n) {
  PrecisionScope scope(80);
  const Real q(static_cast<double>(t.q()));
  Real sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Real shell = pow(q, -Real(static_cast<double>(j * t.m(j)))) -
                       pow(q, -Real(static_cast<double>((j + 1) * t.m(j + 1))));
    sum += direct_density(t, alpha, j) * shell;
  }
  return sum;
}

double rel(const Real& a, const Real& b) { return to_d(abs(a - b) / abs(b)); }

}  // namespace

TEST(ShellDensity, HandValues) {
  const TowerProfile t = make_profile(2, 1, {1, 3, 9});
  const ExpoScalar root2 = ExpoScalar::q_power(t.base(), R("1/2"));
  EXPECT_EQ(shell_density(t, R("1/2"), 0), root2);
  EXPECT_EQ(shell_density(t, R("1/2"), 1), ExpoScalar(16) - root2);
  EXPECT_NEAR(shell_density(t, R("1/2"), 2).to_double(), 740957.8, 0.05);
  // 16 - sqrt2 + 64 (2^{13.5} - 8)
  EXPECT_EQ(shell_density(t, R("1/2"), 2),
            ExpoScalar(16) - root2 + ExpoScalar(64) * (ExpoScalar::q_power(t.base(), R("27/2")) - ExpoScalar(8)));
  EXPECT_THROW(shell_density(t, R("1/2"), 3), DepthError);
}

TEST(ShellDensity, MatchesDirectEvaluation) {
  for (const TowerProfile& t : {default_tower(), make_rule_profile(3, 1, 2, 6), make_profile(5, 2, {1, 2, 4})}) {
    for (double alpha : {0.5, 0.75, 2.0}) {
      const Rational a(alpha);
      for (std::size_t n = 0; n + 1 <= t.depth(); ++n) {
        EXPECT_LT(rel(shell_density(t, a, n).evaluate(60), direct_density(t, alpha, n)), 1e-50);
      }
    }
  }
}

TEST(ShellDensity, AbelFormIsIdenticalOnSmallLevels) {
  const TowerProfile t = make_profile(2, 1, {1, 3, 9});
  const Rational a = R("1/2");
  EXPECT_EQ(shell_density_abel(t, a, 0), ExpoScalar::q_power(t.base(), a));
  // n = 1: q^a + q (q^{2 a m_2} - q^a)
  const ExpoScalar qa = ExpoScalar::q_power(t.base(), a);
  EXPECT_EQ(shell_density_abel(t, a, 1), qa + ExpoScalar(2) * (ExpoScalar::q_power(t.base(), 2 * a * 3) - qa));
}

class AbelIdentity : public ::testing::TestWithParam<std::tuple<int, std::string>> {};

TEST_P(AbelIdentity, HoldsExactly) {
  const auto& [tower, alpha_text] = GetParam();
  const char* alpha = alpha_text.c_str();
  const TowerProfile t = tower == 0 ? make_rule_profile(2, 1, 3, 11) : make_rule_profile(3, 1, 2, 11);
  for (std::size_t n = 0; n <= 10; ++n) {
    const ExpoScalar direct = shell_density(t, R(alpha), n);
    EXPECT_EQ(direct, shell_density_abel(t, R(alpha), n)) << "n=" << n;
    EXPECT_EQ(direct, -jump_density(t, R(alpha), n)) << "n=" << n;
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, AbelIdentity,
                         ::testing::Combine(::testing::Values(0, 1),
                                            ::testing::Values(std::string("1/2"), std::string("3/4"), std::string("2"),
                                                              std::string("1/3"))),
                         [](const auto& info) {
                           std::string alpha = std::get<1>(info.param);
                           std::replace(alpha.begin(), alpha.end(), '/', '_');
                           return std::string(std::get<0>(info.param) == 0 ? "q2" : "q3") + "_alpha" + alpha;
                         });

TEST(Tail, HandValues) {
  const TowerProfile small = make_profile(2, 1, {1, 3});
  EXPECT_EQ(tail(small, R("1/2"), 0), ExpoScalar());
  EXPECT_EQ(tail(small, R("1/2"), 1), ExpoScalar::q_power(small.base(), R("1/2"), R("1/2")));
  EXPECT_NEAR(tail(small, R("1/2"), 1).to_double(), 0.70711, 1e-5);
  EXPECT_NEAR(tail(small, R("1/2"), 2).to_double(), 7.7721, 1e-4);
  // 0.70711 + (16 - sqrt2) 31/64
  EXPECT_NEAR(tail(small, R("1/2"), 2).to_double(), std::sqrt(2.0) / 2 + (16 - std::sqrt(2.0)) * 31 / 64, 1e-12);
}

TEST(Tail, DefaultTowerLevelThree) {
  // Independent evaluation gives 11585.2320 (adding nu_2 (1/64 - 2^-27) to tail(2)).
  const TowerProfile t = default_tower();
  EXPECT_LT(rel(tail(t, R("1/2"), 3).evaluate(40), direct_tail(t, 0.5, 3)), 1e-35);
  EXPECT_NEAR(tail(t, R("1/2"), 3).to_double(), 11585.2320, 1e-3);
}

TEST(Tail, StrictlyIncreasingWithExactIncrements) {
  const TowerProfile t = make_rule_profile(3, 1, 2, 7);
  const ShellTable table = build_shell_table(t, R("3/4"), 7);
  for (std::size_t n = 1; n <= 7; ++n) {
    EXPECT_EQ(tail(t, R("3/4"), n) - tail(t, R("3/4"), n - 1), table.rate(n - 1));
    EXPECT_EQ((table.cumulative(n) - table.cumulative(n - 1)).sign(), 1);
    EXPECT_EQ(table.cumulative(n), tail(t, R("3/4"), n));
  }
}

TEST(AsymptoticDiagnostics, DefaultTowerRatios) {
  const auto records = asymptotic_diagnostics(default_tower(), R("1/2"), 3);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_NEAR(to_d(records[1].tail_ratio), 0.9715, 1e-4);
  EXPECT_NEAR(to_d(records[1].density_ratio), 0.999329, 1e-6);
  // Independent value 0.99999952; the reference 0.99952 agrees to 5e-4.
  EXPECT_NEAR(to_d(records[2].tail_ratio), 0.99999952, 1e-8);
  EXPECT_NEAR(to_d(records[2].tail_ratio), 0.99952, 1e-3 * 0.99952);
  for (const auto& r : records) {
    EXPECT_GT(r.tail_ratio, 0);
    EXPECT_LE(r.tail_ratio, 1);
  }
}

TEST(AsymptoticDiagnostics, WithinFivePercentFromLevelThree) {
  for (const TowerProfile& t : {make_rule_profile(2, 1, 3, 6), make_rule_profile(3, 1, 2, 7)}) {
    for (const char* alpha : {"1/4", "1/2", "3/4"}) {
      const auto records = asymptotic_diagnostics(t, R(alpha), t.depth() - 1);
      for (const auto& r : records) {
        EXPECT_GT(r.tail_ratio, 0);
        EXPECT_LE(r.tail_ratio, 1);
        if (r.n >= 3) EXPECT_LT(to_d(abs(r.tail_ratio - 1)), 0.05) << alpha << " n=" << r.n;
      }
    }
  }
}

TEST(EvansRatio, ReferenceValueAndTrend) {
  const EvansReport r = evans_ratio(default_tower(), R("1/2"), 2);
  // (7.7721 / 64) (2 / 0.70711)
  EXPECT_NEAR(to_d(r.ratio), 0.3435, 1e-4);
  EXPECT_EQ(r.trend_exponent, R("-5/2"));
  EXPECT_TRUE(r.condition_established);
  EXPECT_THROW(evans_ratio(default_tower(), R("1/2"), 1), ValidationError);
  EXPECT_THROW(evans_ratio(default_tower(), R("1/2"), 5), DepthError);
}

TEST(EvansRatio, AlphaOneIsNotEstablished) {
  const EvansReport r = evans_ratio(default_tower(), R("1"), 2);
  EXPECT_EQ(r.trend_exponent, 0);
  EXPECT_EQ(r.trend, 1);
  EXPECT_FALSE(r.condition_established);
}

TEST(EvansRatio, BelowOneAndDecreasingForSmallAlpha) {
  for (const TowerProfile& t : {default_tower(), make_rule_profile(3, 1, 2, 6)}) {
    for (const char* alpha : {"1/4", "1/2", "3/4"}) {
      Real previous = 1;
      for (std::size_t n = 2; n + 1 <= t.depth(); ++n) {
        const Real ratio = evans_ratio(t, R(alpha), n).ratio;
        EXPECT_LT(ratio, 1);
        EXPECT_LT(ratio, previous);
        previous = ratio;
      }
    }
  }
}

TEST(ShellTable, SingleShell) {
  const TowerProfile t = default_tower();
  const ShellTable table = build_shell_table(t, R("1/2"), 1);
  EXPECT_EQ(table.levels(), 1u);
  // lambda_1 = nu_0 (1 - 1/q)
  EXPECT_EQ(table.total_rate(), shell_density(t, R("1/2"), 0) * ExpoScalar(Rational(1, 2)));
  EXPECT_EQ(table.cumulative_choice(), std::vector<double>{1.0});
}

TEST(ShellTable, DefaultTowerRatesAndShares) {
  const TowerProfile t = default_tower();
  const ShellTable table = build_shell_table(t, R("1/2"), 3);
  ExpoScalar sum;
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_EQ(table.rate(l), table.density(l) * table.shell(l));
    EXPECT_EQ(table.rate(l).sign(), 1);
    sum += table.rate(l);
  }
  EXPECT_EQ(sum, table.total_rate());
  EXPECT_NEAR(table.total_rate_value(), 11585.2320, 1e-3);
  EXPECT_EQ(table.total_rate_decimal().substr(0, 12), "11585.231982");
  const auto& c = table.cumulative_choice();
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0], 6.1035e-5, 1e-8);
  EXPECT_NEAR(c[1] - c[0], 6.0982e-4, 1e-8);
  EXPECT_NEAR(1 - c[1], 0.99933, 1e-5);
  EXPECT_EQ(c[2], 1.0);
  EXPECT_EQ(table.alphabets(), (std::vector<Natural>{2, 32, 2097152}));
}

TEST(ShellTable, Preconditions) {
  const TowerProfile t = default_tower();
  EXPECT_THROW(build_shell_table(t, R("0"), 2), ValidationError);
  EXPECT_THROW(build_shell_table(t, R("-1/2"), 2), ValidationError);
  EXPECT_THROW(build_shell_table(t, R("1/2"), 0), ValidationError);
  EXPECT_THROW(build_shell_table(t, R("1/2"), 5), DepthError);
  EXPECT_NO_THROW(build_shell_table(t, R("1/2"), 4));
}
