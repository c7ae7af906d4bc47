#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "ultralevy/levy.hpp"
#include "ultralevy/process.hpp"
#include "ultralevy/spectral.hpp"
#include "ultralevy/tower.hpp"

namespace ultralevy::cli {

namespace {

using nlohmann::ordered_json;

struct CommonOptions {
  std::string profile_path;
  std::string alpha = "1/2";
  unsigned precision = kDefaultDigits;
  std::uint64_t seed = 1;
  std::string out_path;
  bool json = false;
  bool check = false;
};

/// A result table: metadata, named columns and rows of already formatted cells.
struct Table {
  ordered_json meta = ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;   // trailing "# ..." lines in CSV, "notes" in JSON
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> check_details;
};

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string render(const Table& table, bool as_json) {
  std::ostringstream os;
  if (as_json) {
    ordered_json doc = table.meta;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json record = ordered_json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) record[table.columns[i]] = row[i];
      rows.push_back(std::move(record));
    }
    doc["rows"] = std::move(rows);
    if (!table.notes.empty()) doc["notes"] = table.notes;
    if (!table.checks.empty()) {
      ordered_json checks = ordered_json::object();
      for (std::size_t i = 0; i < table.checks.size(); ++i) {
        checks[table.checks[i].first] = {{"pass", table.checks[i].second}, {"detail", table.check_details[i]}};
      }
      doc["checks"] = std::move(checks);
    }
    os << doc.dump(2) << '\n';
    return os.str();
  }
  os << "# " << table.meta.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  for (const auto& note : table.notes) os << "# " << note << '\n';
  return os.str();
}

std::string check_lines(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.checks.size(); ++i) {
    out += table.checks[i].first + ": " + (table.checks[i].second ? "PASS" : "FAIL") + " (" +
           table.check_details[i] + ")\n";
  }
  return out;
}

void emit(const Table& table, const CommonOptions& common, std::ostream& out) {
  const std::string body = render(table, common.json);
  if (common.out_path.empty()) {
    out << body;
  } else {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + common.out_path + "'");
    file << body;
    if (!file) throw Error("failed writing output file '" + common.out_path + "'");
  }
  if (!common.json) out << check_lines(table);
}

TowerProfile require_profile(const CommonOptions& common) {
  if (common.profile_path.empty()) throw ValidationError("--profile is required");
  return load_profile(common.profile_path);
}

Rational require_alpha(const CommonOptions& common) {
  Rational alpha = parse_rational(common.alpha);
  if (alpha <= 0) throw ValidationError("alpha must be positive");
  return alpha;
}

ordered_json profile_meta(const TowerProfile& profile) {
  return ordered_json::parse(profile_to_json(profile));
}

std::string decimal(const ExpoScalar& x, unsigned digits) { return to_decimal(x.evaluate(digits), digits); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) out.push_back(item);
  return out;
}

std::vector<std::size_t> parse_levels(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || item.front() == '-') {
      throw ValidationError(std::string(what) + " must be a comma-separated list of nonnegative integers");
    }
    out.push_back(static_cast<std::size_t>(value));
  }
  if (out.empty()) throw ValidationError(std::string(what) + " must not be empty");
  return out;
}

double parse_time(const std::string& text, const char* what) {
  const Rational value = parse_rational(text);
  if (value < 0) throw ValidationError(std::string(what) + " must be nonnegative");
  return value.convert_to<double>();
}

void require_positive(std::size_t value, const char* what) {
  if (value == 0) throw ValidationError(std::string(what) + " must be positive");
}

std::string fmt_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

// Estimates carry far fewer meaningful digits than times do.
std::string fmt_stat(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

// ---- commands ----

Table cmd_validate(const CommonOptions& common) {
  const TowerProfile profile = require_profile(common);
  Table table;
  table.meta = {{"command", "validate"}, {"profile", profile_meta(profile)}, {"q", profile.q()},
                {"depth", profile.depth()}};
  table.columns = {"n", "m_n", "s_n", "M_n", "haar_ball"};
  for (std::size_t n = 0; n <= profile.depth(); ++n) {
    const Natural M = index_natural(profile, n);
    table.rows.push_back({std::to_string(n), std::to_string(profile.m(n)),
                          n == 0 ? "" : digit_alphabet(profile, n).str(), M.str(), to_string(Rational(1, M))});
  }
  return table;
}

Table cmd_spectrum(const CommonOptions& common, std::optional<std::size_t> levels) {
  const TowerProfile profile = require_profile(common);
  const Rational alpha = require_alpha(common);
  const std::size_t top = levels.value_or(profile.depth());
  profile.require_level(top, "spectrum");
  Table table;
  table.meta = {{"command", "spectrum"}, {"profile", profile_meta(profile)}, {"alpha", to_string(alpha)},
                {"levels", top}};
  table.columns = {"n", "eigenvalue", "multiplicity", "eigenvalue_exact"};
  const auto shells = dual_shells(profile, top);
  for (std::size_t n = 0; n <= top; ++n) {
    const ExpoScalar phi = eigenvalue(profile, alpha, n);
    table.rows.push_back({std::to_string(n), decimal(phi, common.precision), shells[n].multiplicity.str(), phi.str()});
  }
  return table;
}

std::vector<ExpoScalar> parse_exact_values(const std::string& text, const char* what) {
  std::vector<ExpoScalar> out;
  for (const auto& item : split_list(text)) out.emplace_back(parse_rational(item));
  if (out.empty()) throw ValidationError(std::string(what) + " must not be empty");
  return out;
}

Table cmd_fourier(const CommonOptions& common, const std::string& values, bool inverse) {
  const TowerProfile profile = require_profile(common);
  Table table;
  table.meta = {{"command", "fourier"}, {"profile", profile_meta(profile)},
                {"direction", inverse ? "inverse" : "forward"}};
  if (!inverse) {
    RadialSequence<ExpoScalar> phi{parse_exact_values(values, "--values")};
    profile.require_level(phi.support(), "radial Fourier transform");
    const auto f = radial_fourier(profile, phi);
    table.columns = {"l", "F", "F_exact"};
    for (std::size_t l = 0; l < f.values.size(); ++l) {
      table.rows.push_back({std::to_string(l), decimal(f.values[l], common.precision), f.values[l].str()});
    }
    if (common.check) {
      const bool ok = inverse_radial_fourier(profile, f).values == phi.values;
      table.checks.emplace_back("round-trip", ok);
      table.check_details.push_back("inverse of forward, exact");
    }
  } else {
    RadialFunction<ExpoScalar> f{parse_exact_values(values, "--values")};
    profile.require_level(f.resolution(), "inverse radial Fourier transform");
    const auto phi = inverse_radial_fourier(profile, f);
    table.columns = {"n", "phi", "phi_exact"};
    for (std::size_t n = 0; n < phi.values.size(); ++n) {
      table.rows.push_back({std::to_string(n), decimal(phi.values[n], common.precision), phi.values[n].str()});
    }
    if (common.check) {
      const bool ok = radial_fourier(profile, phi).values == f.values;
      table.checks.emplace_back("round-trip", ok);
      table.check_details.push_back("forward of inverse, exact");
    }
  }
  return table;
}

/// Exact identities of the jump kernel on levels 0..top.
void add_identity_checks(Table& table, const TowerProfile& profile, const Rational& alpha, std::size_t top) {
  bool abel = true;
  bool symbol = true;
  for (std::size_t n = 0; n <= top; ++n) {
    const ExpoScalar density = shell_density(profile, alpha, n);
    abel = abel && density == shell_density_abel(profile, alpha, n);
    symbol = symbol && density == -jump_density(profile, alpha, n);
  }
  table.checks.emplace_back("abel-identity", abel);
  table.check_details.push_back("n ≤ " + std::to_string(top));
  table.checks.emplace_back("symbol-identity", symbol);
  table.check_details.push_back("l ≤ " + std::to_string(top));
}

std::size_t deepest_shell(const TowerProfile& profile) {
  if (profile.depth() < 1) throw DepthError("the profile needs depth at least 1");
  return profile.depth() - 1;
}

Table cmd_kernel(const CommonOptions& common, const std::string& times, std::optional<std::size_t> levels,
                 const std::string& epsilon_text) {
  const TowerProfile profile = require_profile(common);
  const Rational alpha = require_alpha(common);
  const std::size_t top = levels.value_or(deepest_shell(profile));
  profile.require_level(top + 1, "heat kernel");
  Table table;
  table.meta = {{"command", "kernel"}, {"profile", profile_meta(profile)}, {"alpha", to_string(alpha)},
                {"levels", top}};
  table.columns = {"level", "t", "value"};
  std::vector<Rational> t_values;
  for (const auto& item : split_list(times)) {
    Rational t = parse_rational(item);
    if (t < 0) throw ValidationError("t must be nonnegative");
    t_values.push_back(t);
  }
  if (t_values.empty()) throw ValidationError("--t must not be empty");
  PrecisionScope scope(common.precision + 10);
  for (const auto& t : t_values) {
    const Real t_real = to_real(t);
    for (std::size_t l = 0; l <= top; ++l) {
      table.rows.push_back({std::to_string(l), to_string(t),
                            to_decimal(heat_kernel(profile, alpha, t_real, l, common.precision), common.precision)});
    }
  }
  if (common.check) {
    add_identity_checks(table, profile, alpha, deepest_shell(profile));
    const Real epsilon = to_real(parse_rational(epsilon_text));
    for (const auto& t : t_values) {
      if (t == 0) continue;
      const std::string name = "kernel-normalization t=" + to_string(t);
      try {
        const auto norm = kernel_normalization(profile, alpha, to_real(t), epsilon, common.precision);
        const Real error = abs(norm.mass - 1);
        const bool ok = norm.tail_bound <= epsilon && error <= epsilon;
        table.checks.emplace_back(name, ok);
        table.check_details.push_back("|mass-1| = " + to_decimal(error, 6) + ", L* = " +
                                      std::to_string(norm.truncation_level) + ", bound " +
                                      to_decimal(norm.tail_bound, 6));
      } catch (const DepthError& e) {
        table.checks.emplace_back(name, false);
        table.check_details.push_back(e.what());
      }
    }
  }
  return table;
}

Table cmd_levy(const CommonOptions& common, std::optional<std::size_t> levels) {
  const TowerProfile profile = require_profile(common);
  const Rational alpha = require_alpha(common);
  const std::size_t top = levels.value_or(deepest_shell(profile));
  profile.require_level(top + 1, "Levy measure");
  Table table;
  table.meta = {{"command", "levy"}, {"profile", profile_meta(profile)}, {"alpha", to_string(alpha)},
                {"levels", top}};
  table.columns = {"n", "nu_n", "tail", "tail_ratio", "nu_ratio", "evans_ratio", "shell_measure", "shell_rate",
                   "nu_n_exact"};
  const auto diagnostics = asymptotic_diagnostics(profile, alpha, top, common.precision);
  for (std::size_t n = 0; n <= top; ++n) {
    const ExpoScalar density = shell_density(profile, alpha, n);
    const ExpoScalar shell = shell_measure(profile, n);
    std::string tail_ratio, density_ratio, evans;
    if (n >= 1) {
      tail_ratio = to_decimal(diagnostics[n - 1].tail_ratio, common.precision);
      density_ratio = to_decimal(diagnostics[n - 1].density_ratio, common.precision);
    }
    if (n >= 2) evans = to_decimal(evans_ratio(profile, alpha, n, common.precision).ratio, common.precision);
    table.rows.push_back({std::to_string(n), decimal(density, common.precision),
                          decimal(tail(profile, alpha, n), common.precision), tail_ratio, density_ratio, evans,
                          shell.str(), decimal(density * shell, common.precision), density.str()});
  }
  if (common.check) add_identity_checks(table, profile, alpha, top);
  return table;
}

Table cmd_evans(const CommonOptions& common, const std::string& levels_text) {
  const TowerProfile profile = require_profile(common);
  const Rational alpha = require_alpha(common);
  std::vector<std::size_t> levels;
  if (levels_text.empty()) {
    for (std::size_t n = 2; n <= profile.depth(); ++n) levels.push_back(n);
  } else {
    levels = parse_levels(levels_text, "--n");
  }
  Table table;
  table.meta = {{"command", "evans"}, {"profile", profile_meta(profile)}, {"alpha", to_string(alpha)}};
  table.columns = {"n", "ratio", "trend_exponent", "trend", "condition"};
  for (auto n : levels) {
    const EvansReport report = evans_ratio(profile, alpha, n, common.precision);
    table.rows.push_back({std::to_string(n), to_decimal(report.ratio, common.precision),
                          to_string(report.trend_exponent), to_decimal(report.trend, common.precision),
                          report.condition_established ? "established" : "not established"});
  }
  if (alpha >= 1) table.notes.push_back("alpha >= 1: the dimension estimate targets alpha only for alpha < 1");
  if (common.check) add_identity_checks(table, profile, alpha, deepest_shell(profile));
  return table;
}

struct SimulationArgs {
  std::size_t levels = 0;
  std::string t_end = "1";
  std::size_t paths = 1;
  std::uint64_t path_index = 0;
  std::uint64_t budget = SimulationOptions{}.event_budget;
  unsigned threads = 0;
};

ShellTable simulation_table(const CommonOptions& common, const SimulationArgs& args, TowerProfile& profile) {
  profile = require_profile(common);
  const Rational alpha = require_alpha(common);
  require_positive(args.levels, "--N");
  return build_shell_table(profile, alpha, args.levels, common.precision);
}

ordered_json simulation_meta(const char* command, const ShellTable& shells, const CommonOptions& common,
                             const SimulationArgs& args) {
  return {{"command", command},
          {"profile", profile_meta(shells.profile())},
          {"alpha", to_string(shells.alpha())},
          {"N", shells.levels()},
          {"seed", common.seed},
          {"paths", args.paths},
          {"t_end", args.t_end},
          {"lambda_N", shells.total_rate_decimal()}};
}

int cmd_simulate(const CommonOptions& common, const SimulationArgs& args, std::ostream& out) {
  TowerProfile profile;
  const ShellTable shells = simulation_table(common, args, profile);
  require_positive(args.paths, "paths");
  const double t_end = parse_time(args.t_end, "t_end");
  const SimulationOptions options{args.budget, args.threads};
  std::vector<Trajectory> paths;
  if (args.paths == 1) {
    paths.push_back(sample_path(shells, t_end, common.seed, args.path_index, options));
  } else {
    paths = sample_paths(PathEnsemble{&shells, t_end, common.seed, args.paths, options});
  }
  std::string body;
  if (common.json) {
    ordered_json doc = simulation_meta("simulate", shells, common, args);
    ordered_json list = ordered_json::array();
    for (const auto& path : paths) {
      ordered_json events = ordered_json::array();
      for (const auto& e : path.events) {
        ordered_json before = ordered_json::array(), after = ordered_json::array();
        for (const auto& d : e.before) before.push_back(d.str());
        for (const auto& d : e.after) after.push_back(d.str());
        events.push_back({{"time", fmt_double(e.time)}, {"shell", e.shell}, {"from", before}, {"to", after}});
      }
      list.push_back({{"path_index", path.path_index}, {"events", std::move(events)}});
    }
    doc["trajectories"] = std::move(list);
    body = doc.dump(2) + "\n";
  } else {
    for (const auto& path : paths) body += trajectory_to_csv(path);
  }
  if (common.out_path.empty()) {
    out << body;
  } else {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + common.out_path + "'");
    file << body;
    if (!file) throw Error("failed writing output file '" + common.out_path + "'");
    std::size_t events = 0;
    for (const auto& path : paths) events += path.events.size();
    out << "wrote " << paths.size() << " trajectories (" << events << " jumps) to " << common.out_path << '\n';
  }
  return 0;
}

Table cmd_dimension(const CommonOptions& common, const SimulationArgs& args, const std::string& levels_text,
                    double index_power) {
  TowerProfile profile;
  const ShellTable shells = simulation_table(common, args, profile);
  require_positive(args.paths, "paths");
  const double t = parse_time(args.t_end, "t");
  if (t == 0) throw ValidationError("t must be positive");
  if (!(index_power > 0)) throw ValidationError("the metric index power must be positive");
  const auto levels = parse_levels(levels_text, "--levels");
  const PathEnsemble ensemble{&shells, t, common.seed, args.paths, {args.budget, args.threads}};
  const DimensionEstimate estimate = dimension_estimate(ensemble, t, levels, MetricConvention{index_power});

  Table table;
  table.meta = simulation_meta("dimension", shells, common, args);
  table.meta["t"] = args.t_end;
  table.meta["index_power"] = index_power;
  table.meta["slope"] = estimate.slope;
  table.meta["standard_error"] = estimate.standard_error;
  table.meta["target"] = to_string(shells.alpha());
  table.columns = {"level", "mean_ball_count", "slope", "stderr"};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    table.rows.push_back({std::to_string(levels[i]), fmt_stat(estimate.mean_counts[i]), fmt_stat(estimate.slope),
                          fmt_stat(estimate.standard_error)});
  }
  std::ostringstream note;
  note << "slope " << estimate.slope << " ± " << estimate.standard_error << " over " << estimate.runs
       << " runs; target alpha = " << to_string(shells.alpha());
  if (shells.alpha() >= 1) note << " (alpha >= 1: the slope need not approach alpha)";
  table.notes.push_back(note.str());
  return table;
}

Table cmd_exitstats(const CommonOptions& common, const SimulationArgs& args, std::size_t n, std::size_t outer) {
  TowerProfile profile;
  const ShellTable shells = simulation_table(common, args, profile);
  require_positive(args.paths, "paths");
  const double t_end = parse_time(args.t_end, "t_end");
  const PathEnsemble ensemble{&shells, t_end, common.seed, args.paths, {args.budget, args.threads}};
  const ExitStatistics stats = exit_statistics(ensemble, n, outer);

  Table table;
  table.meta = simulation_meta("exitstats", shells, common, args);
  table.meta["n"] = n;
  table.meta["N_outer"] = outer;
  table.meta["used"] = stats.used;
  table.meta["excluded"] = stats.excluded;
  table.meta["Q_hat"] = stats.q_hat;
  table.meta["Q_hat_stderr"] = stats.q_standard_error;
  table.columns = {"statistic", "count", "mean", "stderr", "reference"};
  auto summary = [&](const std::string& name, const std::vector<double>& xs, const std::string& reference) {
    double mean = 0, var = 0;
    for (double x : xs) mean += x;
    if (!xs.empty()) mean /= static_cast<double>(xs.size());
    for (double x : xs) var += (x - mean) * (x - mean);
    const double se = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size())) : 0.0;
    table.rows.push_back({name, std::to_string(xs.size()), fmt_stat(mean), fmt_stat(se), reference});
  };
  // pi(k) is exponential with rate tail(k) for a path started at the identity.
  auto exit_reference = [&](std::size_t k) {
    PrecisionScope scope(common.precision + 10);
    return to_decimal(1 / tail(profile, shells.alpha(), k).evaluate(common.precision + 10), common.precision);
  };
  summary("pi(" + std::to_string(n) + ")", stats.exit_times, exit_reference(n));
  summary("pi(" + std::to_string(outer) + ")", stats.outer_exit_times, exit_reference(outer));
  table.rows.push_back({"Q_hat", std::to_string(stats.used), fmt_stat(stats.q_hat),
                        fmt_stat(stats.q_standard_error), ""});
  if (stats.excluded > 0) {
    table.notes.push_back(std::to_string(stats.excluded) + " paths never left V_" + std::to_string(outer) +
                          " before t_end and were excluded");
  }
  return table;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral data, Levy measures and exact quotient-chain simulation for D^alpha on tower unit groups",
               "ultralevy"};
  app.require_subcommand(1);
  CommonOptions common;

  auto add_common = [&](CLI::App* sub, bool alpha) {
    sub->add_option("--profile", common.profile_path, "Tower profile JSON file");
    if (alpha) sub->add_option("--alpha", common.alpha, "Order alpha as an exact rational")->capture_default_str();
    sub->add_option("--precision", common.precision, "Significant decimal digits")->capture_default_str();
    sub->add_option("--out", common.out_path, "Write the table to this file");
    sub->add_flag("--json", common.json, "Structured JSON instead of CSV");
    sub->add_flag("--check", common.check, "Also run the exact identities");
  };

  std::optional<std::size_t> levels;
  std::string values, times = "1", epsilon = "1e-12", n_list, dim_levels = "2,3";
  bool inverse = false;
  double index_power = 1.0;
  std::size_t exit_n = 3, exit_outer = 1;
  SimulationArgs sim;

  auto* validate = app.add_subcommand("validate", "Validate a profile and list its level data");
  add_common(validate, false);
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and their multiplicities");
  add_common(spectrum, true);
  spectrum->add_option("--levels", levels, "Highest level (default: profile depth)");
  auto* fourier = app.add_subcommand("fourier", "Radial Fourier transform of exact values");
  add_common(fourier, false);
  fourier->add_option("--values", values, "Comma-separated rationals: phi_0..phi_N (or F(0)..F(L) with --inverse)")
      ->required();
  fourier->add_flag("--inverse", inverse, "Transform a radial function to its coefficients");
  auto* kernel = app.add_subcommand("kernel", "Heat kernel values per shell");
  add_common(kernel, true);
  kernel->add_option("--t", times, "Comma-separated times (exact rationals or decimals)")->capture_default_str();
  kernel->add_option("--levels", levels, "Highest shell level (default: depth - 1)");
  kernel->add_option("--epsilon", epsilon, "Normalization tolerance used by --check")->capture_default_str();
  auto* levy = app.add_subcommand("levy", "Shell densities, tails and asymptotic ratios");
  add_common(levy, true);
  levy->add_option("--levels", levels, "Highest shell level (default: depth - 1)");
  auto* evans = app.add_subcommand("evans", "Evans ratio per level");
  add_common(evans, true);
  evans->add_option("--n", n_list, "Comma-separated levels (default: 2..depth)");

  auto add_simulation = [&](CLI::App* sub, const char* time_flag, const char* time_help) {
    add_common(sub, true);
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--N", sim.levels, "Quotient level N")->required();
    sub->add_option(time_flag, sim.t_end, time_help)->capture_default_str();
    sub->add_option("--paths", sim.paths, "Number of paths")->capture_default_str();
    sub->add_option("--budget", sim.budget, "Event budget per path")->capture_default_str();
    sub->add_option("--threads", sim.threads, "Worker threads (0: all cores)")->capture_default_str();
  };
  auto* simulate = app.add_subcommand("simulate", "Sample trajectories of the quotient chain");
  add_simulation(simulate, "--t-end", "Time horizon");
  simulate->add_option("--path-index", sim.path_index, "Path index when sampling a single path")
      ->capture_default_str();
  auto* dimension = app.add_subcommand("dimension", "Estimate the image dimension from ball counts");
  sim.paths = 20;
  add_simulation(dimension, "--t", "Time window [0, t]");
  dimension->add_option("--levels", dim_levels, "Comma-separated ball levels")->capture_default_str();
  dimension->add_option("--index-power", index_power, "Metric: diam(V_n) = M(n)^-power")->capture_default_str();
  auto* exitstats = app.add_subcommand("exitstats", "Exit times and the avoidance fraction Q-hat");
  add_simulation(exitstats, "--t-end", "Time horizon");
  exitstats->add_option("--n", exit_n, "Inner level n")->capture_default_str();
  exitstats->add_option("--outer", exit_outer, "Outer level N_outer < n")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  // Defaults that differ per subcommand.
  if (simulate->parsed() && simulate->count("--paths") == 0) sim.paths = 1;
  if (exitstats->parsed() && exitstats->count("--paths") == 0) sim.paths = 1000;

  try {
    if (validate->parsed()) emit(cmd_validate(common), common, out);
    if (spectrum->parsed()) emit(cmd_spectrum(common, levels), common, out);
    if (fourier->parsed()) emit(cmd_fourier(common, values, inverse), common, out);
    if (kernel->parsed()) emit(cmd_kernel(common, times, levels, epsilon), common, out);
    if (levy->parsed()) emit(cmd_levy(common, levels), common, out);
    if (evans->parsed()) emit(cmd_evans(common, n_list), common, out);
    if (simulate->parsed()) cmd_simulate(common, sim, out);
    if (dimension->parsed()) {
      const Table table = cmd_dimension(common, sim, dim_levels, index_power);
      emit(table, common, out);
      if (!common.out_path.empty()) out << table.notes.front() << '\n';
    }
    if (exitstats->parsed()) emit(cmd_exitstats(common, sim, exit_n, exit_outer), common, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ultralevy::cli
