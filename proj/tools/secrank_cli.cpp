// Experiment CLI for the online rank-assignment library: run seeded
// experiment grids, dump per-step traces, scan the hypergeometric peak decay,
// solve the hybrid tree shape, sample random BST heights, and cross-check the
// fast paths against reference oracles.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secrank/analysis.hpp"
#include "secrank/errors.hpp"
#include "secrank/harness.hpp"
#include "secrank/metrics.hpp"
#include "secrank/rankers.hpp"

namespace {

using namespace secrank;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitCheckFailed = 3;

MRule parse_m_rule(const std::string& text) {
  MRule rule;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "equal-n") {
    rule.kind = MRule::Kind::kEqualN;
  } else if (kind == "multiplier") {
    rule.kind = MRule::Kind::kMultiplier;
    rule.value = std::stod(arg);
  } else if (kind == "power") {
    rule.kind = MRule::Kind::kPower;
    rule.value = std::stod(arg);
  } else if (kind == "explicit") {
    rule.kind = MRule::Kind::kExplicit;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      rule.values.push_back(std::stoull(item));
    }
  } else {
    throw ConfigError("unknown m-rule: " + text +
                      " (want equal-n | multiplier:C | power:B | explicit:...)");
  }
  return rule;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void print_summary(const ExperimentReport& report) {
  std::printf("algo=%s mode=%s trials=%zu seed=%llu\n",
              report.config.algorithm.c_str(),
              report.config.arrival_mode.c_str(), report.config.trials,
              static_cast<unsigned long long>(report.config.master_seed));
  std::printf("%10s %14s %16s %16s %12s\n", "n", "m", "mean_inversions",
              "stddev", "overflows");
  for (const SizeAggregate& a : report.aggregates) {
    std::printf("%10zu %14llu %16.2f %16.2f %12s\n", a.n,
                static_cast<unsigned long long>(a.m), a.inversions.mean,
                a.inversions.stddev,
                a.mean_overflows ? std::to_string(*a.mean_overflows).c_str()
                                 : "-");
  }
  if (report.inversion_slope) {
    std::printf("log-log slope of mean inversions: %.4f (rms residual %.4f)\n",
                report.inversion_slope->slope, report.inversion_slope->residual);
  }
}

int cmd_run(const ExperimentConfig& config, bool check) {
  const ExperimentReport report = run_experiment(config);
  print_summary(report);
  emit_report(report);
  if (check) {
    std::size_t violations = 0;
    for (const TrialResult& row : report.rows) {
      if (!row.invariants_ok()) ++violations;
    }
    if (violations > 0 || !verify_decomposition(report.rows)) {
      std::fprintf(stderr, "check: %zu trial(s) violate cost invariants\n",
                   violations);
      return kExitCheckFailed;
    }
    std::printf("check: all %zu trials satisfy the cost invariants\n",
                report.rows.size());
  }
  return kExitOk;
}

int cmd_trace(const std::string& algo_name, std::size_t n,
              std::optional<Position> m_opt, std::optional<unsigned> height,
              std::optional<std::uint64_t> width, std::uint64_t master_seed,
              std::uint32_t trial, const std::string& mode_name,
              const std::string& out_path) {
  const Algorithm algorithm = algorithm_from_string(algo_name);
  if (algorithm == Algorithm::kRandom) {
    throw ConfigError("trace: the random baseline has no per-step trace");
  }

  Position m = 0;
  if (m_opt) {
    m = *m_opt;
  } else if (algorithm == Algorithm::kSparse && height) {
    m = (Position{1} << (*height + 1)) - 1;
  } else if (algorithm == Algorithm::kDense ||
             algorithm == Algorithm::kNoiseless) {
    m = n;
  } else {
    throw ConfigError("trace: --m required for this algorithm");
  }

  RankerOptions options;
  options.height = height;
  options.width = width;
  if (algorithm == Algorithm::kGeneral && height && !width) {
    if (*height > 62 || (m >> *height) < 2) {
      throw ConfigError("trace: height leaves no block width");
    }
    options.width = (m >> *height) - 1;
  }

  const SeedSpec seed{master_seed, trial};
  const Instance instance =
      generate_instance(n, m, arrival_mode_from_string(mode_name), seed);
  auto ranker = make_ranker(algorithm, n, m, options);
  ranker->init(n, m, derive_rng(seed, RngStream::kRanker));
  run_online(*ranker, instance);

  std::ostringstream out;
  if (const auto* dense = dynamic_cast<const DenseRanker*>(ranker.get())) {
    out << "t,r_t,x_t,erank,pi\n";
    for (std::size_t t = 0; t < dense->steps().size(); ++t) {
      const DenseStep& step = dense->steps()[t];
      out << (t + 1) << ',' << step.relative_rank << ','
          << format_double(step.noisy_estimate) << ',' << step.estimated_rank
          << ',' << step.position << '\n';
    }
  } else if (const auto* tree = dynamic_cast<const TreeRanker*>(ranker.get())) {
    out << "t,node_depth,position,overflow_flag\n";
    for (std::size_t t = 0; t < tree->steps().size(); ++t) {
      const TreeStep& step = tree->steps()[t];
      out << (t + 1) << ',' << step.depth << ',' << step.position << ','
          << (step.overflow ? 1 : 0) << '\n';
    }
  }

  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    file << out.str();
  }
  return kExitOk;
}

int cmd_scan(const std::vector<std::uint64_t>& sizes, double rho_r,
             double rho_t, const std::string& out_path) {
  const auto rows = anti_concentration_scan(sizes, rho_r, rho_t);
  std::ostringstream out;
  out << "n,r,t,k_star,p_star,sqrt_n_p_star\n";
  for (const AntiConcentrationRow& row : rows) {
    out << row.n << ',' << row.r << ',' << row.t << ',' << row.k_star << ','
        << format_double(row.p_star) << ',' << format_double(row.sqrt_n_p_star)
        << '\n';
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    file << out.str();
  }
  return kExitOk;
}

int cmd_solve_alpha(std::size_t n, std::uint64_t m) {
  const TreeHeightChoice choice = choose_tree_height(n, m);
  const double target = static_cast<double>(m) /
                        (9.0 * static_cast<double>(n) *
                         std::log(static_cast<double>(n)));
  const double residual =
      std::abs(std::pow(static_cast<double>(n), budget_exponent(choice.alpha)) -
               target) /
      target;
  std::printf("alpha=%.12g\nheight=%u\nwidth=%llu\nresidual=%.3g\n",
              choice.alpha, choice.height,
              static_cast<unsigned long long>(choice.width), residual);
  return kExitOk;
}

int cmd_bst_height(std::size_t n, std::size_t trials, std::uint64_t seed,
                   double threshold_factor) {
  double total = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = derive_rng({seed, static_cast<std::uint32_t>(i)}, RngStream::kAux);
    total += random_bst_height(n, rng);
  }
  const double mean = total / static_cast<double>(trials);
  std::printf("n=%zu trials=%zu mean_height=%.4f mean_over_ln_n=%.4f\n", n,
              trials, mean, mean / std::log(static_cast<double>(n)));
  if (threshold_factor > 0.0) {
    const HeightTailEstimate tail =
        height_tail(n, trials, threshold_factor, {seed, 0});
    std::printf("tail: Pr[height >= %.4f] ~= %.6g (stderr %.3g, %zu/%zu)\n",
                tail.threshold, tail.p_hat, tail.stderr_, tail.exceed_count,
                tail.trials);
  }
  return kExitOk;
}

int cmd_oracle_check(std::uint64_t seed) {
  bool all_ok = true;
  for (const OracleCheck& check : run_oracle_checks(seed)) {
    std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.detail.c_str());
    all_ok = all_ok && check.passed;
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secretary-ranking experiment driver"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run a seeded experiment grid");
  std::string config_path;
  std::string algo = "dense";
  std::vector<std::size_t> n_values;
  std::string m_rule_text = "equal-n";
  std::string mode = "uniform";
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  unsigned height_flag = 0;
  bool no_wall_time = false;
  bool check = false;
  std::string out_csv, out_json, out_plot;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--algo", algo,
                  "dense|scaled-dense|noiseless|random|sparse|general");
  run->add_option("--n", n_values, "element counts (strictly increasing)")
      ->delimiter(',');
  run->add_option("--m-rule", m_rule_text,
                  "equal-n | multiplier:C | power:B | explicit:M1,M2,...");
  run->add_option("--mode", mode, "uniform|adversarial");
  run->add_option("--trials", trials, "trials per size");
  run->add_option("--seed", master_seed, "master seed");
  run->add_option("--height", height_flag, "tree height (sparse/general)");
  run->add_flag("--no-wall-time", no_wall_time,
                "omit wall_ms from rows (byte-stable outputs)");
  run->add_flag("--check", check,
                "verify per-trial cost invariants; exit 3 on violation");
  run->add_option("--out-csv", out_csv, "per-trial CSV path");
  run->add_option("--out-json", out_json, "summary JSON path");
  run->add_option("--out-plot", out_plot, "plot data path");

  // --- trace ---------------------------------------------------------------
  auto* trace = app.add_subcommand("trace", "per-step CSV trace of one trial");
  std::string trace_algo = "dense";
  std::size_t trace_n = 0;
  Position trace_m = 0;
  unsigned trace_height = 0;
  std::uint64_t trace_width = 0;
  std::uint64_t trace_seed = 0;
  std::uint32_t trace_trial = 0;
  std::string trace_mode = "uniform";
  std::string trace_out;
  trace->add_option("--algo", trace_algo, "algorithm id");
  trace->add_option("--n", trace_n, "element count")->required();
  trace->add_option("--m", trace_m, "position count");
  trace->add_option("--height", trace_height, "tree height");
  trace->add_option("--width", trace_width, "leaf block width");
  trace->add_option("--seed", trace_seed, "master seed");
  trace->add_option("--trial", trace_trial, "trial index");
  trace->add_option("--mode", trace_mode, "uniform|adversarial");
  trace->add_option("--out", trace_out, "output file (default stdout)");

  // --- scan-anticoncentration ----------------------------------------------
  auto* scan = app.add_subcommand("scan-anticoncentration",
                                  "sqrt(n)-scaled hypergeometric peak table");
  std::vector<std::uint64_t> scan_sizes;
  double rho_r = 0.5;
  double rho_t = 0.5;
  std::string scan_out;
  scan->add_option("--sizes", scan_sizes, "ball counts")
      ->required()
      ->delimiter(',');
  scan->add_option("--rho-r", rho_r, "red fraction (0,1)");
  scan->add_option("--rho-t", rho_t, "draw fraction (0,1)");
  scan->add_option("--out", scan_out, "output file (default stdout)");

  // --- solve-alpha -----------------------------------------------------------
  auto* solve = app.add_subcommand("solve-alpha",
                                   "tree shape for a given (n, m)");
  std::size_t solve_n = 0;
  std::uint64_t solve_m = 0;
  solve->add_option("--n", solve_n, "element count")->required();
  solve->add_option("--m", solve_m, "position count")->required();

  // --- bst-height -----------------------------------------------------------
  auto* bst = app.add_subcommand("bst-height",
                                 "random binary-search-tree height sampling");
  std::size_t bst_n = 0;
  std::size_t bst_trials = 1000;
  std::uint64_t bst_seed = 0;
  double bst_factor = 0.0;
  bst->add_option("--n", bst_n, "tree size")->required();
  bst->add_option("--trials", bst_trials, "number of trees");
  bst->add_option("--seed", bst_seed, "master seed");
  bst->add_option("--threshold-factor", bst_factor,
                  "also estimate Pr[height >= k ln n] for this k");

  // --- oracle-check -----------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle-check",
                                    "cross-check fast paths against oracles");
  std::uint64_t oracle_seed = 20240601;
  oracle->add_option("--seed", oracle_seed, "randomized-check seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) {
      ExperimentConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = config_from_json(buffer.str());
      }
      // Explicit flags override the config file.
      if (run->count("--algo")) config.algorithm = algo;
      if (run->count("--n")) config.n_values = n_values;
      if (run->count("--m-rule")) config.m_rule = parse_m_rule(m_rule_text);
      if (run->count("--mode")) config.arrival_mode = mode;
      if (run->count("--trials")) config.trials = trials;
      if (run->count("--seed")) config.master_seed = master_seed;
      if (run->count("--height")) config.height = height_flag;
      if (no_wall_time) config.record_wall_time = false;
      if (run->count("--out-csv")) config.output_csv = out_csv;
      if (run->count("--out-json")) config.output_json = out_json;
      if (run->count("--out-plot")) config.output_plot = out_plot;
      return cmd_run(config, check);
    }
    if (trace->parsed()) {
      return cmd_trace(
          trace_algo, trace_n,
          trace->count("--m") ? std::optional<Position>(trace_m) : std::nullopt,
          trace->count("--height") ? std::optional<unsigned>(trace_height)
                                   : std::nullopt,
          trace->count("--width") ? std::optional<std::uint64_t>(trace_width)
                                  : std::nullopt,
          trace_seed, trace_trial, trace_mode, trace_out);
    }
    if (scan->parsed()) return cmd_scan(scan_sizes, rho_r, rho_t, scan_out);
    if (solve->parsed()) return cmd_solve_alpha(solve_n, solve_m);
    if (bst->parsed()) {
      return cmd_bst_height(bst_n, bst_trials, bst_seed, bst_factor);
    }
    if (oracle->parsed()) return cmd_oracle_check(oracle_seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
