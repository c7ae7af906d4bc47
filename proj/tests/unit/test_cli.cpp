#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"
#include "ultralevy/process.hpp"
#include "ultralevy/spectral.hpp"

using namespace ultralevy;
using testing_support::default_tower;
using testing_support::R;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    profile_ = ::testing::TempDir() + "cli_profile.json";
    std::ofstream(profile_) << R"({"p":2,"kappa":1,"m":[1,3,9,27]})";
  }
  void TearDown() override { std::remove(profile_.c_str()); }

  Result run(std::vector<std::string> args) const {
    for (auto& a : args) {
      if (a == "@profile") a = profile_;
    }
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
  }

  std::string profile_;
};

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> result;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    if (line.find(": PASS") != std::string::npos || line.find(": FAIL") != std::string::npos) continue;
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    result.push_back(cells);
  }
  return result;
}

}  // namespace

TEST_F(Cli, SpectrumRows) {
  const auto r = run({"spectrum", "--profile", "@profile", "--alpha", "1/2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 5u);
  EXPECT_EQ(table[0][1], "0");
  EXPECT_EQ(table[0][2], "1");
  EXPECT_NEAR(std::stod(table[1][1]), 1.41421356, 1e-8);
  EXPECT_EQ(table[1][2], "1");
  EXPECT_EQ(table[2][1], "8");
  EXPECT_EQ(table[2][2], "62");
  EXPECT_NE(r.out.find("n,eigenvalue,multiplicity"), std::string::npos);
}

TEST_F(Cli, ValidateReportsProfileQuantities) {
  const auto r = run({"validate", "--profile", "@profile"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 5u);
  EXPECT_EQ(table[2][1], "3");   // m_2
  EXPECT_EQ(table[2][2], "32");  // s_2
  EXPECT_EQ(table[2][3], "64");  // M(2)
}

TEST_F(Cli, RejectsBadArguments) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"spectrum", "--profile", "@profile", "--alpha", "0"},
        {"spectrum", "--profile", "@profile", "--alpha", "-1"},
        {"spectrum", "--profile", "/nonexistent/profile.json"},
        {"simulate", "--profile", "@profile", "--N", "3", "--t-end", "1", "--paths", "0"},
        {"simulate", "--profile", "@profile", "--N", "9", "--t-end", "1"},
        {"simulate", "--profile", "@profile", "--N", "3", "--t-end", "1000", "--budget", "10"},
        {"evans", "--profile", "@profile", "--n", "1"},
        {"nonsense"},
        {}}) {
    const auto r = run(args);
    EXPECT_NE(r.status, 0) << (args.empty() ? "(none)" : args[0]);
    EXPECT_FALSE(r.err.empty());
  }
}

TEST_F(Cli, LevyCheckPasses) {
  const auto r = run({"levy", "--profile", "@profile", "--check"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("abel-identity: PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const auto table = rows(r.out);
  // Row n = 3 reports the tail lambda_3.
  EXPECT_NEAR(std::stod(table[3][2]), 11585.232, 1e-3);
}

TEST_F(Cli, EvansRatio) {
  const auto r = run({"evans", "--profile", "@profile", "--n", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_NEAR(std::stod(table[0][1]), 0.3435, 1e-4);
  EXPECT_EQ(table[0][4], "established");
}

TEST_F(Cli, KernelAtTimeZeroVanishes) {
  const auto r = run({"kernel", "--profile", "@profile", "--t", "0,1", "--levels", "2", "--check"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  for (const auto& row : rows(r.out)) {
    if (row[1] == "0") EXPECT_EQ(row[2], "0");
  }
}

TEST_F(Cli, FourierRoundTripAgreesWithTheLibrary) {
  const auto r = run({"fourier", "--profile", "@profile", "--values", "0,1,2,3", "--check"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const RadialSequence<ExpoScalar> phi{{ExpoScalar(0), ExpoScalar(1), ExpoScalar(2), ExpoScalar(3)}};
  const auto expected = radial_fourier(default_tower(), phi).values;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), expected.size());
  for (std::size_t l = 0; l < expected.size(); ++l) EXPECT_EQ(table[l][2], expected[l].str());
}

TEST_F(Cli, SimulateIsDeterministicAndMatchesTheLibrary) {
  const std::vector<std::string> args = {"simulate", "--profile", "@profile", "--N", "3", "--t-end", "0.002", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const ShellTable table = build_shell_table(default_tower(), R("1/2"), 3);
  EXPECT_EQ(a.out, trajectory_to_csv(sample_path(table, 0.002, 7, 0)));
}

TEST_F(Cli, SimulateWritesFiles) {
  const std::string path = ::testing::TempDir() + "cli_traj.csv";
  const auto r = run({"simulate", "--profile", "@profile", "--N", "2", "--t-end", "0.5", "--seed", "1", "--out", path});
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  const ShellTable table = build_shell_table(default_tower(), R("1/2"), 2);
  EXPECT_EQ(content.str(), trajectory_to_csv(sample_path(table, 0.5, 1, 0)));
  std::remove(path.c_str());
}

TEST_F(Cli, JsonOutput) {
  const auto r = run({"levy", "--profile", "@profile", "--json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("command"), "levy");
  EXPECT_EQ(doc.at("alpha"), "1/2");
  ASSERT_TRUE(doc.at("rows").is_array());
  EXPECT_EQ(doc.at("rows")[0].at("n"), "0");
}

TEST_F(Cli, DimensionAndExitStatistics) {
  const auto d = run({"dimension", "--profile", "@profile", "--N", "3", "--t", "1", "--seed", "1", "--json"});
  ASSERT_EQ(d.status, 0) << d.err;
  const auto doc = nlohmann::json::parse(d.out);
  EXPECT_NEAR(doc.at("slope").get<double>(), 0.5, 0.1);
  const auto e = run({"exitstats", "--profile", "@profile", "--N", "3", "--t-end", "30", "--paths", "100", "--seed", "3"});
  ASSERT_EQ(e.status, 0) << e.err;
  EXPECT_NE(e.out.find("Q_hat"), std::string::npos);
}
