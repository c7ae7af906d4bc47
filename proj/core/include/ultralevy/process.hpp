#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ultralevy/levy.hpp"
#include "ultralevy/random.hpp"

namespace ultralevy {

/// A coset of V_N in V written as digits d_1..d_N with 0 <= d_j < s_j; d_j labels the
/// coset of V_j inside V_{j-1}. All zeros is the identity.
struct DigitState {
  std::vector<Natural> digits;

  bool is_identity() const;
  /// True iff d_1 = ... = d_n = 0, i.e. the state lies in V_n.
  bool in_ball(std::size_t n) const;
  /// min{j : d_j != 0} - 1, or N for the identity.
  std::size_t level() const;

  friend bool operator==(const DigitState&, const DigitState&) = default;
};

/// One jump of the quotient chain at `shell` (0-based): digits 1..shell are untouched,
/// digit shell+1 changes, deeper digits are redrawn. `before`/`after` hold positions
/// shell+1..N.
struct JumpEvent {
  double time = 0;
  std::size_t shell = 0;
  std::vector<Natural> before;
  std::vector<Natural> after;
};

struct Trajectory {
  TowerProfile profile;
  Rational alpha;
  std::size_t levels = 0;  // N
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  double t_end = 0;
  std::string total_rate;  // lambda_N, decimal
  DigitState initial;
  std::vector<JumpEvent> events;

  /// State after every jump with time <= t.
  DigitState state_at(double t) const;
};

struct SimulationOptions {
  std::uint64_t event_budget = 10'000'000;  // per path
  unsigned threads = 0;                     // 0: hardware concurrency
};

/**
 * Exact sampler of the projection of the process onto V/V_N, started at the identity.
 * Jump times form a Poisson process of rate lambda_N; a jump picks shell j with
 * probability r_j / lambda_N, moves d_{j+1} to a uniformly chosen different value and
 * redraws d_{j+2}..d_N uniformly. Randomness is addressed by (seed, path_index, event),
 * so a path does not depend on which other paths are simulated.
 */
Trajectory sample_path(const ShellTable& table, double t_end, std::uint64_t seed, std::uint64_t path_index = 0,
                       const SimulationOptions& options = {});

/// Exact draw of the state at time t alone, via the Poisson thinning of the jump
/// process by shell (no path is generated). Used where full paths are too long.
DigitState sample_state(const ShellTable& table, double t, std::uint64_t seed, std::uint64_t path_index);

/// Paths 0..paths-1 of one seed, generated on demand and never stored.
struct PathEnsemble {
  const ShellTable* table = nullptr;
  double t_end = 0;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  SimulationOptions options;
};

std::vector<Trajectory> sample_paths(const PathEnsemble& ensemble);

struct Estimate {
  double value = 0;
  double standard_error = 0;
  std::size_t samples = 0;
};

/// Fraction of paths whose state at time t lies in V_n, with binomial standard error.
Estimate empirical_ball_probability(std::span<const Trajectory> paths, double t, std::size_t n);
Estimate empirical_ball_probability(const PathEnsemble& ensemble, double t, std::size_t n);

/// Number of distinct level-n balls (prefixes d_1..d_n) visited during [0, t_window].
std::size_t ball_count(const Trajectory& path, double t_window, std::size_t n);

/// Per-path ball counts at each requested level (rows: paths, columns: levels).
std::vector<std::vector<std::size_t>> ball_counts(const PathEnsemble& ensemble, double t_window,
                                                  std::span<const std::size_t> levels);

/// Balls V_n have diameter M(n)^{-index_power}; index_power = 1 is the default metric.
struct MetricConvention {
  double index_power = 1.0;
};

struct DimensionEstimate {
  double slope = 0;
  double standard_error = 0;
  std::size_t runs = 0;
  std::vector<std::size_t> levels;
  std::vector<double> mean_counts;  // per level
  std::vector<double> path_slopes;
};

/// Least-squares slope of log(ball count) against log(1/diameter) over the levels,
/// fitted per path and averaged. Throws EstimationError if every path is degenerate
/// (all counts equal to 1) or fewer than two levels are given.
DimensionEstimate dimension_estimate(std::span<const Trajectory> paths, double t,
                                     std::span<const std::size_t> levels, MetricConvention metric = {});
DimensionEstimate dimension_estimate(const PathEnsemble& ensemble, double t, std::span<const std::size_t> levels,
                                     MetricConvention metric = {});

struct ExitStatistics {
  std::size_t level = 0;        // n
  std::size_t outer_level = 0;  // N_outer < n
  std::vector<double> exit_times;        // pi(n) per path that left V_n
  std::vector<double> outer_exit_times;  // pi(N_outer) per path that left V_{N_outer}
  std::size_t used = 0;                  // paths with pi(N_outer) <= t_end
  std::size_t excluded = 0;              // paths that never left V_{N_outer}
  std::size_t avoided = 0;               // used paths that stayed outside V_n on [pi(n), pi(N_outer))
  double q_hat = 0;
  double q_standard_error = 0;
};

/// Exit times and the avoidance fraction Q-hat(n, N_outer) for paths started at the identity.
ExitStatistics exit_statistics(std::span<const Trajectory> paths, std::size_t n, std::size_t outer);
ExitStatistics exit_statistics(const PathEnsemble& ensemble, std::size_t n, std::size_t outer);

/// Trajectory export: a "# {json}" header line then CSV rows
/// event_index,time,shell,digits_changed_from,digits_changed_to (digits joined by ':').
std::string trajectory_to_csv(const Trajectory& path);

}  // namespace ultralevy
