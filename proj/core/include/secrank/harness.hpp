#ifndef SECRANK_HARNESS_HPP
#define SECRANK_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "secrank/analysis.hpp"
#include "secrank/instance.hpp"
#include "secrank/rankers.hpp"

namespace secrank {

/// How the position count m is derived from each n.
struct MRule {
  enum class Kind { kEqualN, kMultiplier, kPower, kExplicit };
  Kind kind = Kind::kEqualN;
  double value = 0.0;                  // multiplier c (m = ceil(c*n*ln n)) or power b (m = ceil(n^b))
  std::vector<std::uint64_t> values;   // kExplicit: one m per n

  Position m_for(std::size_t n, std::size_t size_index) const;
};

struct ExperimentConfig {
  std::string algorithm = "dense";
  std::vector<std::size_t> n_values;
  MRule m_rule;
  std::string arrival_mode = "uniform";
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<unsigned> height;  // tree height override (sparse/general)
  bool record_wall_time = true;
  std::string output_csv;
  std::string output_json;
  std::string output_plot;

  /// Throws ConfigError on any violation (empty or non-increasing n list,
  /// zero trials, m < n, algorithm/shape mismatches).
  void validate() const;
};

ExperimentConfig config_from_json(std::string_view text);
std::string to_json(const ExperimentConfig& config);

/// One completed trial.
struct TrialResult {
  std::size_t n = 0;
  Position m = 0;
  std::size_t trial = 0;       // index within this size
  std::uint64_t seed = 0;      // per-trial stream index (global across sizes)
  std::uint64_t inversions = 0;
  std::optional<std::uint64_t> footrule;     // m = n only
  std::optional<std::uint64_t> est_cost;     // dense family, m = n
  std::optional<std::uint64_t> assign_cost;  // dense family, m = n
  std::optional<std::uint64_t> overflows;    // tree rankers
  std::optional<double> wall_ms;

  /// Distance bounds and cost decomposition, where the fields exist.
  bool invariants_ok() const;
};

struct CostStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

CostStats summarize(std::span<const std::uint64_t> values);

struct SizeAggregate {
  std::size_t n = 0;
  Position m = 0;
  std::size_t trials = 0;
  CostStats inversions;
  std::optional<CostStats> footrule;
  std::optional<CostStats> est_cost;
  std::optional<CostStats> assign_cost;
  std::optional<double> mean_overflows;
  std::optional<double> mean_wall_ms;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> rows;
  std::vector<SizeAggregate> aggregates;
  std::optional<SlopeFit> inversion_slope;  // needs >= 3 sizes, positive means
};

/// Runs the configured experiment. Trials execute in parallel (worker count
/// from RANK_ARRIVAL_THREADS, or force_threads > 0 to pin) but the report is
/// bit-identical regardless of the schedule: every trial derives its own
/// generator from (master_seed, global trial index) and results reduce in
/// index order.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                std::size_t force_threads = 0);

/// Zero tolerance check of the cost decomposition over finished trials:
/// footrule <= est_cost + assign_cost and
/// inversions <= footrule <= 2 * inversions wherever the fields exist.
bool verify_decomposition(std::span<const TrialResult> rows);

/// CSV rows: algo,n,m,trial,seed,inversions,footrule,est_cost,assign_cost,
/// overflows,wall_ms. Header always present; optional fields stay empty.
void write_results_csv(const ExperimentReport& report, std::ostream& out);

/// JSON document with the config echo, per-size aggregates and slope fit.
std::string summary_json(const ExperimentReport& report);

/// Plot-ready columns: n mean_cost ci_low ci_high (95% normal CI).
void write_plot_data(const ExperimentReport& report, std::ostream& out);

/// Writes whichever of output_csv/output_json/output_plot are set.
void emit_report(const ExperimentReport& report);

/// Worker count resolution: force_threads if positive, else
/// RANK_ARRIVAL_THREADS, else hardware concurrency; always in [1, jobs].
std::size_t resolve_thread_count(std::size_t jobs, std::size_t force_threads);

/// Named cross-validations of fast paths against independent reference
/// implementations (merge count vs pair scan, tree structures vs linear
/// scans, log-gamma pmf vs exact rationals, bounded-series check).
struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<OracleCheck> run_oracle_checks(std::uint64_t seed);

}  // namespace secrank

#endif  // SECRANK_HARNESS_HPP
