#include "secrank/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "secrank/errors.hpp"
#include "secrank/metrics.hpp"

namespace secrank {

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

Position MRule::m_for(std::size_t n, std::size_t size_index) const {
  switch (kind) {
    case Kind::kEqualN:
      return n;
    case Kind::kMultiplier:
      return static_cast<Position>(std::ceil(
          value * static_cast<double>(n) * std::log(static_cast<double>(n))));
    case Kind::kPower:
      return static_cast<Position>(
          std::ceil(std::pow(static_cast<double>(n), value)));
    case Kind::kExplicit:
      if (size_index >= values.size()) {
        throw ConfigError("m_rule: explicit list shorter than n_values");
      }
      return values[size_index];
  }
  throw ConfigError("m_rule: unknown kind");
}

namespace {

MRule::Kind m_rule_kind_from_string(std::string_view name) {
  if (name == "equal-n") return MRule::Kind::kEqualN;
  if (name == "multiplier") return MRule::Kind::kMultiplier;
  if (name == "power") return MRule::Kind::kPower;
  if (name == "explicit") return MRule::Kind::kExplicit;
  throw ConfigError("unknown m_rule kind: " + std::string(name));
}

const char* to_string(MRule::Kind kind) {
  switch (kind) {
    case MRule::Kind::kEqualN: return "equal-n";
    case MRule::Kind::kMultiplier: return "multiplier";
    case MRule::Kind::kPower: return "power";
    case MRule::Kind::kExplicit: return "explicit";
  }
  return "unknown";
}

}  // namespace

void ExperimentConfig::validate() const {
  const Algorithm algorithm_id = algorithm_from_string(algorithm);
  arrival_mode_from_string(arrival_mode);
  if (n_values.empty()) throw ConfigError("config: n_values must be non-empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0) throw ConfigError("config: n must be >= 1");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw ConfigError("config: n_values must be strictly increasing");
    }
  }
  if (trials == 0) throw ConfigError("config: trials must be >= 1");
  if (m_rule.kind == MRule::Kind::kExplicit &&
      m_rule.values.size() != n_values.size()) {
    throw ConfigError("config: explicit m list must match n_values length");
  }
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const std::size_t n = n_values[i];
    const Position m = m_rule.m_for(n, i);
    if (m < n) throw ConfigError("config: m rule yields m < n");
    // Also rejects algorithm/shape mismatches (m = n requirements, sparse
    // power-of-two shape, hybrid block feasibility).
    RankerOptions options;
    options.height = height;
    if (algorithm_id == Algorithm::kGeneral && height) {
      if (*height < 1 || *height > 62 || (m >> *height) < 2) {
        throw ConfigError("config: height leaves no block width");
      }
      options.width = (m >> *height) - 1;
    }
    (void)make_ranker(algorithm_id, n, m, options);
  }
}

ExperimentConfig config_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig config;
  config.algorithm = j.value("algorithm", config.algorithm);
  if (j.contains("n_values")) {
    config.n_values = j.at("n_values").get<std::vector<std::size_t>>();
  }
  if (j.contains("m_rule")) {
    const auto& rule = j.at("m_rule");
    config.m_rule.kind =
        m_rule_kind_from_string(rule.value("kind", "equal-n"));
    config.m_rule.value = rule.value("value", 0.0);
    if (rule.contains("values")) {
      config.m_rule.values =
          rule.at("values").get<std::vector<std::uint64_t>>();
    }
  }
  config.arrival_mode = j.value("arrival_mode", config.arrival_mode);
  config.trials = j.value("trials", config.trials);
  config.master_seed = j.value("master_seed", config.master_seed);
  if (j.contains("height") && !j.at("height").is_null()) {
    config.height = j.at("height").get<unsigned>();
  }
  config.record_wall_time = j.value("record_wall_time", config.record_wall_time);
  config.output_csv = j.value("output_csv", config.output_csv);
  config.output_json = j.value("output_json", config.output_json);
  config.output_plot = j.value("output_plot", config.output_plot);
  return config;
}

namespace {

nlohmann::json config_to_json_value(const ExperimentConfig& config) {
  nlohmann::json j;
  j["algorithm"] = config.algorithm;
  j["n_values"] = config.n_values;
  j["m_rule"]["kind"] = to_string(config.m_rule.kind);
  j["m_rule"]["value"] = config.m_rule.value;
  j["m_rule"]["values"] = config.m_rule.values;
  j["arrival_mode"] = config.arrival_mode;
  j["trials"] = config.trials;
  j["master_seed"] = config.master_seed;
  if (config.height) {
    j["height"] = *config.height;
  } else {
    j["height"] = nullptr;
  }
  j["record_wall_time"] = config.record_wall_time;
  j["output_csv"] = config.output_csv;
  j["output_json"] = config.output_json;
  j["output_plot"] = config.output_plot;
  return j;
}

}  // namespace

std::string to_json(const ExperimentConfig& config) {
  return config_to_json_value(config).dump(2);
}

// ---------------------------------------------------------------------------
// Trial execution
// ---------------------------------------------------------------------------

bool TrialResult::invariants_ok() const {
  if (m < n) return false;
  if (footrule) {
    if (inversions > *footrule) return false;
    if (*footrule > 2 * inversions) return false;
    if (est_cost && assign_cost && *footrule > *est_cost + *assign_cost) {
      return false;
    }
  }
  return true;
}

namespace {

std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) {
  return a > b ? a - b : b - a;
}

TrialResult execute_trial(const ExperimentConfig& config, Algorithm algorithm,
                          ArrivalMode mode, std::size_t n, Position m,
                          std::size_t trial, std::uint64_t global_index) {
  const auto started = std::chrono::steady_clock::now();
  const SeedSpec seed{config.master_seed,
                      static_cast<std::uint32_t>(global_index)};
  const Instance instance = generate_instance(n, m, mode, seed);

  RankerOptions options;
  options.height = config.height;
  if (algorithm == Algorithm::kGeneral && config.height) {
    options.width = (m >> *config.height) - 1;
  }
  auto ranker = make_ranker(algorithm, n, m, options);
  ranker->init(n, m, derive_rng(seed, RngStream::kRanker));
  const PlacementMap placement = run_online(*ranker, instance);

  TrialResult result;
  result.n = n;
  result.m = m;
  result.trial = trial;
  result.seed = global_index;
  result.inversions = count_inversions(placement);
  if (m == n) result.footrule = footrule(placement);

  if (const auto* dense = dynamic_cast<const DenseRanker*>(ranker.get());
      dense != nullptr && m == n) {
    std::uint64_t est = 0;
    std::uint64_t assign = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const DenseStep& step = dense->steps()[t];
      est += abs_diff(instance.arrivals[t], step.estimated_rank);
      assign += abs_diff(step.estimated_rank, step.position);
    }
    result.est_cost = est;
    result.assign_cost = assign;
  }
  if (algorithm == Algorithm::kSparse || algorithm == Algorithm::kGeneral) {
    result.overflows = ranker->overflow_count();
  }
  if (config.record_wall_time) {
    result.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  }
  return result;
}

}  // namespace

std::size_t resolve_thread_count(std::size_t jobs, std::size_t force_threads) {
  std::size_t threads = force_threads;
  if (threads == 0) {
    if (const char* env = std::getenv("RANK_ARRIVAL_THREADS")) {
      threads = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
    }
  }
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

CostStats summarize(std::span<const std::uint64_t> values) {
  CostStats stats;
  if (values.empty()) return stats;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  stats.min = *std::min_element(values.begin(), values.end());
  stats.max = *std::max_element(values.begin(), values.end());

  double sum = 0.0;
  for (double v : sorted) sum += v;
  stats.mean = sum / static_cast<double>(sorted.size());

  double ss = 0.0;
  for (double v : sorted) ss += (v - stats.mean) * (v - stats.mean);
  stats.stddev = sorted.size() > 1
                     ? std::sqrt(ss / static_cast<double>(sorted.size() - 1))
                     : 0.0;

  const auto quantile = [&sorted](double q) {
    const double idx = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = static_cast<std::size_t>(std::ceil(idx));
    const double frac = idx - std::floor(idx);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
  };
  stats.q25 = quantile(0.25);
  stats.median = quantile(0.5);
  stats.q75 = quantile(0.75);
  return stats;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                std::size_t force_threads) {
  config.validate();
  const Algorithm algorithm = algorithm_from_string(config.algorithm);
  const ArrivalMode mode = arrival_mode_from_string(config.arrival_mode);

  ExperimentReport report;
  report.config = config;
  const std::size_t jobs = config.n_values.size() * config.trials;
  report.rows.resize(jobs);

  const std::size_t threads = resolve_thread_count(jobs, force_threads);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t g = next.fetch_add(1);
      if (g >= jobs || failed.load()) return;
      const std::size_t size_index = g / config.trials;
      const std::size_t trial = g % config.trials;
      const std::size_t n = config.n_values[size_index];
      const Position m = config.m_rule.m_for(n, size_index);
      try {
        report.rows[g] =
            execute_trial(config, algorithm, mode, n, m, trial, g);
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        failure = e.what();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("run_experiment: " + failure);

  // Deterministic reduction in size order.
  std::vector<std::pair<double, double>> slope_points;
  for (std::size_t size_index = 0; size_index < config.n_values.size();
       ++size_index) {
    const auto begin = report.rows.begin() +
                       static_cast<std::ptrdiff_t>(size_index * config.trials);
    const std::span<const TrialResult> rows(&*begin, config.trials);

    SizeAggregate aggregate;
    aggregate.n = config.n_values[size_index];
    aggregate.m = config.m_rule.m_for(aggregate.n, size_index);
    aggregate.trials = config.trials;

    std::vector<std::uint64_t> inversions, footrules, ests, assigns;
    double overflow_sum = 0.0, wall_sum = 0.0;
    std::size_t overflow_count = 0, wall_count = 0;
    for (const TrialResult& row : rows) {
      inversions.push_back(row.inversions);
      if (row.footrule) footrules.push_back(*row.footrule);
      if (row.est_cost) ests.push_back(*row.est_cost);
      if (row.assign_cost) assigns.push_back(*row.assign_cost);
      if (row.overflows) {
        overflow_sum += static_cast<double>(*row.overflows);
        ++overflow_count;
      }
      if (row.wall_ms) {
        wall_sum += *row.wall_ms;
        ++wall_count;
      }
    }
    aggregate.inversions = summarize(inversions);
    if (footrules.size() == rows.size()) {
      aggregate.footrule = summarize(footrules);
    }
    if (ests.size() == rows.size()) aggregate.est_cost = summarize(ests);
    if (assigns.size() == rows.size()) aggregate.assign_cost = summarize(assigns);
    if (overflow_count == rows.size()) {
      aggregate.mean_overflows = overflow_sum / static_cast<double>(rows.size());
    }
    if (wall_count == rows.size()) {
      aggregate.mean_wall_ms = wall_sum / static_cast<double>(rows.size());
    }
    report.aggregates.push_back(aggregate);
    slope_points.emplace_back(static_cast<double>(aggregate.n),
                              aggregate.inversions.mean);
  }

  const bool fittable =
      slope_points.size() >= 3 &&
      std::all_of(slope_points.begin(), slope_points.end(),
                  [](const auto& p) { return p.second > 0.0; });
  if (fittable) {
    report.inversion_slope = fit_loglog_slope(slope_points);
  }
  return report;
}

bool verify_decomposition(std::span<const TrialResult> rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const TrialResult& row) { return row.invariants_ok(); });
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

nlohmann::json stats_to_json(const CostStats& stats) {
  nlohmann::json j;
  j["mean"] = stats.mean;
  j["stddev"] = stats.stddev;
  j["q25"] = stats.q25;
  j["median"] = stats.median;
  j["q75"] = stats.q75;
  j["min"] = stats.min;
  j["max"] = stats.max;
  return j;
}

}  // namespace

void write_results_csv(const ExperimentReport& report, std::ostream& out) {
  out << "algo,n,m,trial,seed,inversions,footrule,est_cost,assign_cost,"
         "overflows,wall_ms\n";
  for (const TrialResult& row : report.rows) {
    out << report.config.algorithm << ',' << row.n << ',' << row.m << ','
        << row.trial << ',' << row.seed << ',' << row.inversions << ',';
    if (row.footrule) out << *row.footrule;
    out << ',';
    if (row.est_cost) out << *row.est_cost;
    out << ',';
    if (row.assign_cost) out << *row.assign_cost;
    out << ',';
    if (row.overflows) out << *row.overflows;
    out << ',';
    if (row.wall_ms) out << format_double(*row.wall_ms);
    out << '\n';
  }
}

std::string summary_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["config"] = config_to_json_value(report.config);
  j["aggregates"] = nlohmann::json::array();
  for (const SizeAggregate& aggregate : report.aggregates) {
    nlohmann::json a;
    a["n"] = aggregate.n;
    a["m"] = aggregate.m;
    a["trials"] = aggregate.trials;
    a["inversions"] = stats_to_json(aggregate.inversions);
    a["footrule"] = aggregate.footrule ? stats_to_json(*aggregate.footrule)
                                       : nlohmann::json(nullptr);
    a["est_cost"] = aggregate.est_cost ? stats_to_json(*aggregate.est_cost)
                                       : nlohmann::json(nullptr);
    a["assign_cost"] = aggregate.assign_cost
                           ? stats_to_json(*aggregate.assign_cost)
                           : nlohmann::json(nullptr);
    a["mean_overflows"] = aggregate.mean_overflows
                              ? nlohmann::json(*aggregate.mean_overflows)
                              : nlohmann::json(nullptr);
    a["mean_wall_ms"] = aggregate.mean_wall_ms
                            ? nlohmann::json(*aggregate.mean_wall_ms)
                            : nlohmann::json(nullptr);
    j["aggregates"].push_back(a);
  }
  if (report.inversion_slope) {
    nlohmann::json s;
    s["slope"] = report.inversion_slope->slope;
    s["intercept"] = report.inversion_slope->intercept;
    s["residual"] = report.inversion_slope->residual;
    s["points"] = report.inversion_slope->points;
    j["slope"] = s;
  } else {
    j["slope"] = nullptr;
  }
  return j.dump(2);
}

void write_plot_data(const ExperimentReport& report, std::ostream& out) {
  out << "n mean_cost ci_low ci_high\n";
  for (const SizeAggregate& aggregate : report.aggregates) {
    const double half =
        1.96 * aggregate.inversions.stddev /
        std::sqrt(static_cast<double>(std::max<std::size_t>(1, aggregate.trials)));
    out << aggregate.n << ' ' << format_double(aggregate.inversions.mean) << ' '
        << format_double(aggregate.inversions.mean - half) << ' '
        << format_double(aggregate.inversions.mean + half) << '\n';
  }
}

void emit_report(const ExperimentReport& report) {
  const auto open = [](const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
  };
  if (!report.config.output_csv.empty()) {
    auto out = open(report.config.output_csv);
    write_results_csv(report, out);
  }
  if (!report.config.output_json.empty()) {
    auto out = open(report.config.output_json);
    out << summary_json(report) << '\n';
  }
  if (!report.config.output_plot.empty()) {
    auto out = open(report.config.output_plot);
    write_plot_data(report, out);
  }
}

}  // namespace secrank
