#include "ultralevy/process.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <string_view>
#include <thread>
#include <unordered_set>

namespace ultralevy {

bool DigitState::is_identity() const { return in_ball(digits.size()); }

bool DigitState::in_ball(std::size_t n) const {
  if (n > digits.size()) throw DepthError("ball level exceeds the quotient level");
  return std::all_of(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(n),
                     [](const Natural& d) { return d == 0; });
}

std::size_t DigitState::level() const {
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] != 0) return j;
  }
  return digits.size();
}

DigitState Trajectory::state_at(double t) const {
  DigitState state = initial;
  for (const auto& event : events) {
    if (event.time > t) break;
    std::copy(event.after.begin(), event.after.end(),
              state.digits.begin() + static_cast<std::ptrdiff_t>(event.shell));
  }
  return state;
}

namespace {

// Digits and coset keys are plain 64-bit words when M(N) < 2^63, arbitrary precision otherwise.
template <class Word>
struct ChainSetup {
  std::size_t levels = 0;
  std::vector<Word> alphabets;  // s_1..s_N
  std::vector<Word> places;     // s_1 * ... * s_{j-1}: mixed-radix weight of digit j
  std::vector<double> cumulative;
  double lambda = 0;
};

struct NaturalHash {
  std::size_t operator()(const Natural& x) const {
    const auto* data = x.backend().data();
    std::string_view bytes(reinterpret_cast<const char*>(data->_mp_d),
                           sizeof(mp_limb_t) * static_cast<std::size_t>(std::abs(data->_mp_size)));
    return std::hash<std::string_view>{}(bytes);
  }
};

template <class Word>
using KeySet = std::conditional_t<std::is_same_v<Word, Natural>, std::unordered_set<Natural, NaturalHash>,
                                  std::unordered_set<std::uint64_t>>;

template <class Word>
Word word_from(const Natural& x) {
  if constexpr (std::is_same_v<Word, Natural>) {
    return x;
  } else {
    return x.convert_to<std::uint64_t>();
  }
}

template <class Word>
Natural to_natural(const Word& w) {
  if constexpr (std::is_same_v<Word, Natural>) {
    return w;
  } else {
    return Natural(w);
  }
}

template <class Word>
ChainSetup<Word> make_setup(const ShellTable& table) {
  ChainSetup<Word> setup;
  setup.levels = table.levels();
  Natural place = 1;
  for (const auto& s : table.alphabets()) {
    setup.alphabets.push_back(word_from<Word>(s));
    setup.places.push_back(word_from<Word>(place));
    place *= s;
  }
  setup.cumulative = table.cumulative_choice();
  setup.lambda = table.total_rate_value();
  return setup;
}

bool compact_words(const ShellTable& table) {
  return index_natural(table.profile(), table.levels()) < (Natural(1) << 63);
}

template <class Fn>
decltype(auto) with_setup(const ShellTable& table, Fn&& fn) {
  if (compact_words(table)) return fn(make_setup<std::uint64_t>(table));
  return fn(make_setup<Natural>(table));
}

void check_budget(const ShellTable& table, double t_end, const SimulationOptions& options) {
  if (!(t_end > 0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive and finite");
  const double expected = table.total_rate_value() * t_end;
  if (!(expected <= static_cast<double>(options.event_budget))) {
    throw BudgetError("expected " + std::to_string(expected) + " jumps (lambda_N * t_end) exceeds the event budget " +
                      std::to_string(options.event_budget));
  }
}

std::size_t choose_shell(const std::vector<double>& cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

/// Applies one jump at `shell` drawn from the (seed, path, event) streams.
template <class Word>
void apply_jump(const ChainSetup<Word>& setup, std::vector<Word>& digits, std::size_t shell, std::uint64_t seed,
                std::uint64_t path, std::uint64_t event) {
  RandomStream moved(seed, path, event, StreamField::moved_digit);
  Word& digit = digits[shell];
  Word next = moved.uniform_below(Word(setup.alphabets[shell] - 1));
  if (next >= digit) next += 1;
  digit = next;
  if (shell + 1 < setup.levels) {
    RandomStream fresh(seed, path, event, StreamField::fresh_digits);
    for (std::size_t i = shell + 1; i < setup.levels; ++i) digits[i] = fresh.uniform_below(setup.alphabets[i]);
  }
}

/**
 * Runs one path. Observer hooks:
 *   void start(const std::vector<Word>&)
 *   bool before_jump(double time, const std::vector<Word>&)    // false stops the path
 *   bool after_jump(double time, std::size_t shell, const std::vector<Word>&)
 */
template <class Word, class Observer>
void run_path(const ChainSetup<Word>& setup, double t_end, std::uint64_t seed, std::uint64_t path,
              std::uint64_t budget, Observer& observer) {
  std::vector<Word> digits(setup.levels, Word(0));
  observer.start(digits);
  double time = 0;
  for (std::uint64_t event = 0;; ++event) {
    RandomStream timing(seed, path, event, StreamField::timing);
    time += -std::log(timing.next_open_unit()) / setup.lambda;
    if (!(time < t_end)) return;
    if (event >= budget) {
      throw BudgetError("path " + std::to_string(path) + " exceeded the event budget of " + std::to_string(budget));
    }
    if (!observer.before_jump(time, digits)) return;
    const std::size_t shell = choose_shell(setup.cumulative, timing.next_unit());
    apply_jump(setup, digits, shell, seed, path, event);
    if (!observer.after_jump(time, shell, digits)) return;
  }
}

/// Feeds a recorded trajectory to the same observers.
template <class Observer>
void replay_path(const Trajectory& path, Observer& observer) {
  std::vector<Natural> digits = path.initial.digits;
  observer.start(digits);
  for (const auto& event : path.events) {
    if (!observer.before_jump(event.time, digits)) return;
    std::copy(event.after.begin(), event.after.end(), digits.begin() + static_cast<std::ptrdiff_t>(event.shell));
    if (!observer.after_jump(event.time, event.shell, digits)) return;
  }
}

template <class Word>
class Recorder {
 public:
  explicit Recorder(Trajectory& out) : out_(out) {}
  void start(const std::vector<Word>& digits) {
    out_.initial.digits.clear();
    for (const auto& d : digits) out_.initial.digits.push_back(to_natural(d));
  }
  bool before_jump(double, const std::vector<Word>& digits) {
    previous_ = digits;
    return true;
  }
  bool after_jump(double time, std::size_t shell, const std::vector<Word>& digits) {
    JumpEvent event;
    event.time = time;
    event.shell = shell;
    for (std::size_t i = shell; i < digits.size(); ++i) {
      event.before.push_back(to_natural(previous_[i]));
      event.after.push_back(to_natural(digits[i]));
    }
    out_.events.push_back(std::move(event));
    return true;
  }

 private:
  Trajectory& out_;
  std::vector<Word> previous_;
};

template <class Word>
bool prefix_is_zero(const std::vector<Word>& digits, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    if (digits[j] != 0) return false;
  }
  return true;
}

template <class Word>
class BallMembership {
 public:
  BallMembership(double t, std::size_t n) : t_(t), n_(n) {}
  void start(const std::vector<Word>& digits) { inside_ = prefix_is_zero(digits, n_); }
  bool before_jump(double time, const std::vector<Word>&) { return time <= t_; }
  bool after_jump(double, std::size_t, const std::vector<Word>& digits) {
    inside_ = prefix_is_zero(digits, n_);
    return true;
  }
  bool inside() const { return inside_; }

 private:
  double t_;
  std::size_t n_;
  bool inside_ = true;
};

template <class Word>
class BallCounter {
 public:
  BallCounter(double window, std::span<const std::size_t> levels, const std::vector<Word>& places)
      : window_(window), levels_(levels.begin(), levels.end()), places_(places), seen_(levels.size()) {}

  void start(const std::vector<Word>& digits) { record(digits, 0); }
  bool before_jump(double time, const std::vector<Word>&) { return time <= window_; }
  bool after_jump(double, std::size_t shell, const std::vector<Word>& digits) {
    record(digits, shell);
    return true;
  }
  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> out;
    for (const auto& s : seen_) out.push_back(s.size());
    return out;
  }

 private:
  // A jump that kept d_1..d_unchanged cannot produce a new prefix of length <= unchanged.
  void record(const std::vector<Word>& digits, std::size_t unchanged) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const std::size_t n = levels_[i];
      if (n <= unchanged && !seen_[i].empty()) continue;
      Word key(0);
      for (std::size_t j = 0; j < n; ++j) key += digits[j] * places_[j];
      seen_[i].insert(key);
    }
  }

  double window_;
  std::vector<std::size_t> levels_;
  std::vector<Word> places_;
  std::vector<KeySet<Word>> seen_;
};

struct ExitRecord {
  bool left_inner = false;
  bool left_outer = false;
  bool returned = false;
  double inner_time = 0;
  double outer_time = 0;
};

template <class Word>
class ExitTracker {
 public:
  ExitTracker(std::size_t n, std::size_t outer) : n_(n), outer_(outer) {}
  void start(const std::vector<Word>& digits) {
    if (!prefix_is_zero(digits, digits.size())) throw ValidationError("exit statistics need paths from the identity");
  }
  bool before_jump(double, const std::vector<Word>&) { return true; }
  bool after_jump(double time, std::size_t shell, const std::vector<Word>& digits) {
    if (!record_.left_inner) {
      if (shell < n_) {
        record_.left_inner = true;
        record_.inner_time = time;
      }
    } else if (shell >= outer_ && prefix_is_zero(digits, n_)) {
      record_.returned = true;
    }
    if (shell < outer_) {
      record_.left_outer = true;
      record_.outer_time = time;
      return false;
    }
    return true;
  }
  const ExitRecord& record() const { return record_; }

 private:
  std::size_t n_;
  std::size_t outer_;
  ExitRecord record_;
};

template <class Result, class Fn>
std::vector<Result> map_paths(std::size_t paths, unsigned threads, Fn&& fn) {
  std::vector<Result> results(paths);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= paths) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(paths);
      }
    }
  };
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, paths));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

const ShellTable& ensemble_table(const PathEnsemble& ensemble) {
  if (ensemble.table == nullptr) throw ValidationError("path ensemble has no shell table");
  if (ensemble.paths == 0) throw ValidationError("the number of paths must be positive");
  check_budget(*ensemble.table, ensemble.t_end, ensemble.options);
  return *ensemble.table;
}

Estimate binomial(std::size_t hits, std::size_t total) {
  if (total == 0) throw EstimationError("no paths to estimate from");
  Estimate out;
  out.samples = total;
  out.value = static_cast<double>(hits) / static_cast<double>(total);
  out.standard_error = std::sqrt(out.value * (1 - out.value) / static_cast<double>(total));
  return out;
}

double log_inverse_diameter(const TowerProfile& profile, std::size_t n, const MetricConvention& metric) {
  return metric.index_power * profile.level_exponent(n).convert_to<double>() *
         std::log(static_cast<double>(profile.q()));
}

DimensionEstimate fit_dimension(const TowerProfile& profile, const std::vector<std::vector<std::size_t>>& counts,
                                std::span<const std::size_t> levels, const MetricConvention& metric) {
  if (levels.size() < 2) throw EstimationError("the dimension fit needs at least two levels");
  if (counts.empty()) throw EstimationError("no paths to estimate from");
  std::vector<double> x;
  for (auto n : levels) x.push_back(log_inverse_diameter(profile, n, metric));
  double x_mean = 0;
  for (double v : x) x_mean += v;
  x_mean /= static_cast<double>(x.size());
  double sxx = 0;
  for (double v : x) sxx += (v - x_mean) * (v - x_mean);
  if (!(sxx > 0)) throw EstimationError("dimension levels must be distinct");

  DimensionEstimate out;
  out.levels.assign(levels.begin(), levels.end());
  out.mean_counts.assign(levels.size(), 0.0);
  std::size_t degenerate = 0;
  for (const auto& row : counts) {
    double y_mean = 0;
    bool all_one = true;
    for (std::size_t i = 0; i < row.size(); ++i) {
      y_mean += std::log(static_cast<double>(row[i]));
      out.mean_counts[i] += static_cast<double>(row[i]);
      all_one = all_one && row[i] == 1;
    }
    if (all_one) ++degenerate;
    y_mean /= static_cast<double>(row.size());
    double sxy = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      sxy += (x[i] - x_mean) * (std::log(static_cast<double>(row[i])) - y_mean);
    }
    out.path_slopes.push_back(sxy / sxx);
  }
  if (degenerate == counts.size()) {
    throw EstimationError("degenerate fit: every path has ball count 1 at all levels");
  }
  for (auto& c : out.mean_counts) c /= static_cast<double>(counts.size());
  out.runs = counts.size();
  double mean = 0;
  for (double s : out.path_slopes) mean += s;
  mean /= static_cast<double>(out.runs);
  double var = 0;
  for (double s : out.path_slopes) var += (s - mean) * (s - mean);
  out.slope = mean;
  out.standard_error = out.runs > 1 ? std::sqrt(var / static_cast<double>(out.runs - 1) / static_cast<double>(out.runs)) : 0.0;
  return out;
}

ExitStatistics summarize_exits(const std::vector<ExitRecord>& records, std::size_t n, std::size_t outer) {
  ExitStatistics out;
  out.level = n;
  out.outer_level = outer;
  for (const auto& r : records) {
    if (r.left_inner) out.exit_times.push_back(r.inner_time);
    if (!r.left_outer) {
      ++out.excluded;
      continue;
    }
    out.outer_exit_times.push_back(r.outer_time);
    ++out.used;
    if (!r.returned) ++out.avoided;
  }
  if (out.used > 0) {
    const Estimate q = binomial(out.avoided, out.used);
    out.q_hat = q.value;
    out.q_standard_error = q.standard_error;
  }
  return out;
}

void check_exit_levels(std::size_t n, std::size_t outer, std::size_t levels) {
  if (!(outer < n)) throw ValidationError("exit statistics need N_outer < n");
  if (n > levels) throw DepthError("exit level exceeds the quotient level N");
}

void check_levels(std::span<const std::size_t> levels, std::size_t top) {
  for (auto n : levels) {
    if (n > top) throw DepthError("ball level " + std::to_string(n) + " exceeds the quotient level N");
  }
}

// Zero-truncated Poisson(mu) draw.
std::uint64_t positive_poisson(double mu, RandomStream& rng) {
  if (mu < 8) {
    const double u = rng.next_unit() * -std::expm1(-mu);
    double pmf = std::exp(-mu) * mu;
    double cdf = pmf;
    std::uint64_t k = 1;
    while (u >= cdf && k < 4096) {
      ++k;
      pmf *= mu / static_cast<double>(k);
      cdf += pmf;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> poisson(mu);
  for (;;) {
    const std::uint64_t k = poisson(rng);
    if (k > 0) return k;
  }
}

}  // namespace

Trajectory sample_path(const ShellTable& table, double t_end, std::uint64_t seed, std::uint64_t path_index,
                       const SimulationOptions& options) {
  check_budget(table, t_end, options);
  Trajectory out;
  out.profile = table.profile();
  out.alpha = table.alpha();
  out.levels = table.levels();
  out.seed = seed;
  out.path_index = path_index;
  out.t_end = t_end;
  out.total_rate = table.total_rate_decimal();
  with_setup(table, [&](const auto& setup) {
    using Word = typename std::decay_t<decltype(setup.alphabets)>::value_type;
    Recorder<Word> recorder(out);
    run_path(setup, t_end, seed, path_index, options.event_budget, recorder);
  });
  return out;
}

DigitState sample_state(const ShellTable& table, double t, std::uint64_t seed, std::uint64_t path_index) {
  if (!(t >= 0) || !std::isfinite(t)) throw ValidationError("t must be nonnegative and finite");
  const std::size_t levels = table.levels();
  DigitState state;
  state.digits.assign(levels, Natural(0));
  RandomStream rng(seed, path_index, 0, StreamField::marginal);
  PrecisionScope scope(30);
  for (std::size_t j = 0; j < levels; ++j) {
    // Jumps at shell j form an independent Poisson process of rate r_j.
    const double mu = table.rate(j).evaluate(30).convert_to<double>() * t;
    if (mu == 0 || rng.next_unit() < std::exp(-mu)) continue;
    // j is the lowest shell with a jump: d_1..d_j stay 0, d_{j+1} performs k moves to a
    // uniform different value, and the first jump already made d_{j+2}.. uniform.
    const std::uint64_t k = positive_poisson(mu, rng);
    const Natural& s = table.alphabets()[j];
    const double s_value = s.convert_to<double>();
    const double p_zero = 1 / s_value + (1 - 1 / s_value) * std::pow(-1 / (s_value - 1), static_cast<double>(k));
    if (!(rng.next_unit() < p_zero)) state.digits[j] = 1 + rng.uniform_below(Natural(s - 1));
    for (std::size_t i = j + 1; i < levels; ++i) state.digits[i] = rng.uniform_below(table.alphabets()[i]);
    break;
  }
  return state;
}

std::vector<Trajectory> sample_paths(const PathEnsemble& ensemble) {
  const ShellTable& table = ensemble_table(ensemble);
  return map_paths<Trajectory>(ensemble.paths, ensemble.options.threads, [&](std::size_t i) {
    return sample_path(table, ensemble.t_end, ensemble.seed, i, ensemble.options);
  });
}

Estimate empirical_ball_probability(std::span<const Trajectory> paths, double t, std::size_t n) {
  if (paths.empty()) throw EstimationError("empty path set");
  std::size_t hits = 0;
  for (const auto& path : paths) {
    if (t > path.t_end) throw ValidationError("query time exceeds the path horizon t_end");
    if (n > path.levels) throw DepthError("ball level exceeds the quotient level N");
    BallMembership<Natural> membership(t, n);
    replay_path(path, membership);
    hits += membership.inside() ? 1 : 0;
  }
  return binomial(hits, paths.size());
}

Estimate empirical_ball_probability(const PathEnsemble& ensemble, double t, std::size_t n) {
  const ShellTable& table = ensemble_table(ensemble);
  if (t > ensemble.t_end) throw ValidationError("query time exceeds the path horizon t_end");
  if (n > table.levels()) throw DepthError("ball level exceeds the quotient level N");
  auto inside = with_setup(table, [&](const auto& setup) {
    using Word = typename std::decay_t<decltype(setup.alphabets)>::value_type;
    return map_paths<char>(ensemble.paths, ensemble.options.threads, [&](std::size_t i) {
      BallMembership<Word> membership(t, n);
      run_path(setup, ensemble.t_end, ensemble.seed, i, ensemble.options.event_budget, membership);
      return static_cast<char>(membership.inside());
    });
  });
  return binomial(static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1)), inside.size());
}

std::size_t ball_count(const Trajectory& path, double t_window, std::size_t n) {
  if (n > path.levels) throw DepthError("ball level exceeds the quotient level N");
  std::vector<Natural> places;
  Natural place = 1;
  for (std::size_t j = 1; j <= path.levels; ++j) {
    places.push_back(place);
    place *= digit_alphabet(path.profile, j);
  }
  const std::size_t levels[] = {n};
  BallCounter<Natural> counter(t_window, levels, places);
  replay_path(path, counter);
  return counter.counts().front();
}

std::vector<std::vector<std::size_t>> ball_counts(const PathEnsemble& ensemble, double t_window,
                                                  std::span<const std::size_t> levels) {
  const ShellTable& table = ensemble_table(ensemble);
  check_levels(levels, table.levels());
  const double horizon = std::min(t_window, ensemble.t_end);
  return with_setup(table, [&](const auto& setup) {
    using Word = typename std::decay_t<decltype(setup.alphabets)>::value_type;
    return map_paths<std::vector<std::size_t>>(ensemble.paths, ensemble.options.threads, [&](std::size_t i) {
      BallCounter<Word> counter(horizon, levels, setup.places);
      run_path(setup, ensemble.t_end, ensemble.seed, i, ensemble.options.event_budget, counter);
      return counter.counts();
    });
  });
}

DimensionEstimate dimension_estimate(std::span<const Trajectory> paths, double t,
                                     std::span<const std::size_t> levels, MetricConvention metric) {
  if (paths.empty()) throw EstimationError("empty path set");
  std::vector<std::vector<std::size_t>> counts;
  for (const auto& path : paths) {
    check_levels(levels, path.levels);
    std::vector<std::size_t> row;
    for (auto n : levels) row.push_back(ball_count(path, t, n));
    counts.push_back(std::move(row));
  }
  return fit_dimension(paths.front().profile, counts, levels, metric);
}

DimensionEstimate dimension_estimate(const PathEnsemble& ensemble, double t, std::span<const std::size_t> levels,
                                     MetricConvention metric) {
  return fit_dimension(ensemble_table(ensemble).profile(), ball_counts(ensemble, t, levels), levels, metric);
}

ExitStatistics exit_statistics(std::span<const Trajectory> paths, std::size_t n, std::size_t outer) {
  if (paths.empty()) throw EstimationError("empty path set");
  std::vector<ExitRecord> records;
  for (const auto& path : paths) {
    check_exit_levels(n, outer, path.levels);
    ExitTracker<Natural> tracker(n, outer);
    replay_path(path, tracker);
    records.push_back(tracker.record());
  }
  return summarize_exits(records, n, outer);
}

ExitStatistics exit_statistics(const PathEnsemble& ensemble, std::size_t n, std::size_t outer) {
  const ShellTable& table = ensemble_table(ensemble);
  check_exit_levels(n, outer, table.levels());
  auto records = with_setup(table, [&](const auto& setup) {
    using Word = typename std::decay_t<decltype(setup.alphabets)>::value_type;
    return map_paths<ExitRecord>(ensemble.paths, ensemble.options.threads, [&](std::size_t i) {
      ExitTracker<Word> tracker(n, outer);
      run_path(setup, ensemble.t_end, ensemble.seed, i, ensemble.options.event_budget, tracker);
      return tracker.record();
    });
  });
  return summarize_exits(records, n, outer);
}

}  // namespace ultralevy
