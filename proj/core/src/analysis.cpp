#include "secrank/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "secrank/errors.hpp"
#include "secrank/instance.hpp"

namespace secrank {

namespace {

double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double hypergeom_pmf(const HypergeomParams& p) {
  if (p.r > p.n || p.t > p.n || p.k > p.t) {
    throw std::invalid_argument("hypergeom_pmf: need k <= t <= n and r <= n");
  }
  if (p.k > p.r || p.t - p.k > p.n - p.r) {
    return 0.0;  // outside the support
  }
  const double log_pmf = log_choose(p.r, p.k) +
                         log_choose(p.n - p.r, p.t - p.k) -
                         log_choose(p.n, p.t);
  return std::exp(log_pmf);
}

std::pair<std::uint64_t, double> max_pmf_over_k(std::uint64_t n,
                                                std::uint64_t r,
                                                std::uint64_t t) {
  if (r > n || t > n) {
    throw std::invalid_argument("max_pmf_over_k: need r <= n and t <= n");
  }
  const std::uint64_t k_lo = (t > n - r) ? t - (n - r) : 0;
  const std::uint64_t k_hi = std::min(t, r);
  std::uint64_t best_k = k_lo;
  double best_p = -1.0;
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    const double p = hypergeom_pmf({n, r, t, k});
    if (p > best_p) {
      best_p = p;
      best_k = k;
    }
  }
  return {best_k, best_p};
}

std::vector<AntiConcentrationRow> anti_concentration_scan(
    std::span<const std::uint64_t> sizes, double rho_r, double rho_t) {
  if (!(rho_r > 0.0 && rho_r < 1.0) || !(rho_t > 0.0 && rho_t < 1.0)) {
    throw std::domain_error("anti_concentration_scan: fractions must be in (0,1)");
  }
  std::vector<AntiConcentrationRow> rows;
  rows.reserve(sizes.size());
  for (std::uint64_t n : sizes) {
    if (n == 0) throw std::domain_error("anti_concentration_scan: n must be >= 1");
    const auto r = static_cast<std::uint64_t>(rho_r * static_cast<double>(n));
    const auto t = static_cast<std::uint64_t>(rho_t * static_cast<double>(n));
    if (t > std::min(r, n - r)) {
      throw std::domain_error(
          "anti_concentration_scan: need t <= min(r, n-r) at n=" +
          std::to_string(n));
    }
    const auto [k_star, p_star] = max_pmf_over_k(n, r, t);
    rows.push_back({n, r, t, k_star, p_star,
                    std::sqrt(static_cast<double>(n)) * p_star});
  }
  return rows;
}

namespace {

// D(a) = 1 - 2a ln(2e/a); strictly increasing for a > 2 and the common
// denominator of both height curves.
double curve_denominator(double alpha) {
  return 1.0 - 2.0 * alpha * std::log(2.0 * std::numbers::e_v<double> / alpha);
}

}  // namespace

double alpha_lower_limit() {
  static const double root = [] {
    double lo = 4.0;   // D(4) < 0
    double hi = 6.0;   // D(6) > 0
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (curve_denominator(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return root;
}

double budget_exponent(double alpha) {
  if (!(alpha > alpha_lower_limit())) {
    throw std::domain_error("budget_exponent: alpha must exceed the pole");
  }
  return (alpha * std::numbers::ln2_v<double> - 1.0) / curve_denominator(alpha);
}

double height_exponent(double alpha) {
  if (!(alpha > alpha_lower_limit())) {
    throw std::domain_error("height_exponent: alpha must exceed the pole");
  }
  return 1.0 / curve_denominator(alpha);
}

double solve_alpha(std::size_t n, std::uint64_t m) {
  if (n < 2) throw ConfigError("solve_alpha: n must be >= 2");
  const double log_n = std::log(static_cast<double>(n));
  if (static_cast<double>(m) < 10.0 * static_cast<double>(n) * log_n) {
    throw ConfigError("solve_alpha: requires m >= 10 n ln n");
  }
  const double target = static_cast<double>(m) / (9.0 * static_cast<double>(n) * log_n);
  const double exponent_target = std::log(target) / log_n;

  // budget_exponent decreases from +inf at the pole toward 0, so bracket the
  // root by doubling the upper end until the curve drops below the target.
  double lo = alpha_lower_limit() + 1e-9;
  double hi = alpha_lower_limit() + 1.0;
  while (budget_exponent(hi) > exponent_target) {
    hi *= 2.0;
    if (hi > 1e15) {
      throw std::runtime_error("solve_alpha: failed to bracket the solution");
    }
  }
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    (budget_exponent(mid) > exponent_target ? lo : hi) = mid;
    const double value = std::pow(static_cast<double>(n), budget_exponent(mid));
    if (std::abs(value - target) / target <= 1e-9) break;
  }
  const double alpha = 0.5 * (lo + hi);
  const double residual =
      std::abs(std::pow(static_cast<double>(n), budget_exponent(alpha)) - target) /
      target;
  if (residual > 1e-6) {
    throw std::runtime_error("solve_alpha: residual exceeds 1e-6");
  }
  return alpha;
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw std::invalid_argument("fit_loglog_slope: need at least 3 points");
  }
  SlopeFit fit;
  fit.points.reserve(points.size());
  for (const auto& [n, cost] : points) {
    if (!(n > 0.0) || !(cost > 0.0)) {
      throw std::invalid_argument("fit_loglog_slope: points must be positive");
    }
    fit.points.emplace_back(std::log(n), std::log(cost));
  }

  const auto count = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
  }
  fit.slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / count;

  double ss = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

unsigned bst_insertion_height(std::span<const std::uint32_t> keys) {
  if (keys.empty()) {
    throw std::invalid_argument("bst_insertion_height: empty key sequence");
  }
  std::vector<std::int32_t> left(keys.size(), -1);
  std::vector<std::int32_t> right(keys.size(), -1);
  unsigned height = 0;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    std::size_t cur = 0;
    unsigned depth = 0;
    for (;;) {
      ++depth;
      auto& child = keys[i] < keys[cur] ? left[cur] : right[cur];
      if (child < 0) {
        child = static_cast<std::int32_t>(i);
        break;
      }
      cur = static_cast<std::size_t>(child);
    }
    height = std::max(height, depth);
  }
  return height;
}

unsigned random_bst_height(std::size_t n, Rng& rng) {
  const std::vector<std::uint32_t> perm = random_permutation(n, rng);
  return bst_insertion_height(perm);
}

HeightTailEstimate height_tail(std::size_t n, std::size_t trials, double k,
                               SeedSpec seed) {
  if (n == 0 || trials == 0) {
    throw std::invalid_argument("height_tail: need n >= 1 and trials >= 1");
  }
  HeightTailEstimate estimate;
  estimate.threshold = k * std::log(static_cast<double>(n));
  estimate.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = derive_rng({seed.master_seed,
                          static_cast<std::uint32_t>(seed.trial_index + i)},
                         RngStream::kAux);
    if (static_cast<double>(random_bst_height(n, rng)) >= estimate.threshold) {
      ++estimate.exceed_count;
    }
  }
  estimate.p_hat =
      static_cast<double>(estimate.exceed_count) / static_cast<double>(trials);
  estimate.stderr_ = std::sqrt(estimate.p_hat * (1.0 - estimate.p_hat) /
                               static_cast<double>(trials));
  return estimate;
}

double assignment_bound_ratio(std::uint64_t n) {
  if (n < 4) {
    throw std::invalid_argument("assignment_bound_ratio: n must be >= 4");
  }
  const auto nd = static_cast<double>(n);
  const auto t_max = static_cast<std::uint64_t>(std::floor(nd - std::sqrt(nd)));
  double sum = 0.0;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    const double ratio = static_cast<double>(t) / static_cast<double>(n - t);
    sum += ratio * ratio;
  }
  return sum / std::pow(nd, 1.5);
}

namespace {

// Regularized incomplete gamma, series branch (x < a + 1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma via Lentz continued fraction (x >= a+1).
double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::invalid_argument("regularized_gamma_p: need a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi_square_sf(double statistic, double dof) {
  if (!(dof > 0.0)) {
    throw std::invalid_argument("chi_square_sf: dof must be positive");
  }
  if (statistic <= 0.0) return 1.0;
  return 1.0 - regularized_gamma_p(dof / 2.0, statistic / 2.0);
}

}  // namespace secrank
