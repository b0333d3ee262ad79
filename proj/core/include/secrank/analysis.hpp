#ifndef SECRANK_ANALYSIS_HPP
#define SECRANK_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "secrank/rng.hpp"

namespace secrank {

// ---------------------------------------------------------------------------
// Hypergeometric machinery: sampling t balls without replacement from n balls
// of which r are red; pmf of seeing exactly k red.
// ---------------------------------------------------------------------------

struct HypergeomParams {
  std::uint64_t n = 0;  // total balls
  std::uint64_t r = 0;  // red balls
  std::uint64_t t = 0;  // draws
  std::uint64_t k = 0;  // red successes
};

/// Exact pmf C(r,k)*C(n-r,t-k)/C(n,t) evaluated in log-gamma space. Returns 0
/// outside the support; throws std::invalid_argument when the parameter
/// invariants (k <= t <= n, r <= n) fail.
double hypergeom_pmf(const HypergeomParams& p);

/// Scans the support and returns the maximizing count and its probability
/// (ties resolved to the smaller k). The argmax always lands on
/// floor(t*r/n) or ceil(t*r/n); tests assert that property.
std::pair<std::uint64_t, double> max_pmf_over_k(std::uint64_t n,
                                                std::uint64_t r,
                                                std::uint64_t t);

struct AntiConcentrationRow {
  std::uint64_t n = 0;
  std::uint64_t r = 0;
  std::uint64_t t = 0;
  std::uint64_t k_star = 0;
  double p_star = 0.0;
  double sqrt_n_p_star = 0.0;
};

/// For each n: r = floor(rho_r*n), t = floor(rho_t*n), reports the peak pmf
/// scaled by sqrt(n). The scaled sequence stays bounded and flattens as n
/// grows. Fractions must lie in (0,1) and each n must satisfy
/// t <= min(r, n-r); violations throw std::domain_error.
std::vector<AntiConcentrationRow> anti_concentration_scan(
    std::span<const std::uint64_t> sizes, double rho_r, double rho_t);

// ---------------------------------------------------------------------------
// Height-choice curves for the hybrid tree ranker. With D(a) =
// 1 - 2a*ln(2e/a), the curves budget_exponent(a) = (a*ln2 - 1)/D(a) and
// height_exponent(a) = 1/D(a) are positive and strictly decreasing on
// (alpha_lower_limit(), inf).
// ---------------------------------------------------------------------------

/// Pole of the two curves: the root of 1 - 2a*ln(2e/a) = 0, about 4.910.
double alpha_lower_limit();

double budget_exponent(double alpha);  // throws std::domain_error off-domain
double height_exponent(double alpha);

/// Solves m / (9 n ln n) = n^budget_exponent(alpha) for alpha by bisection;
/// back-substitution holds to 1e-6 relative. Requires n >= 2 and
/// m >= 10 n ln n (ConfigError otherwise).
double solve_alpha(std::size_t n, std::uint64_t m);

// ---------------------------------------------------------------------------
// Log-log slope fitting for empirical complexity exponents.
// ---------------------------------------------------------------------------

struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (ln n, ln cost)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual
};

/// Least-squares line through (ln n, ln cost). Needs >= 3 points with
/// positive coordinates and at least two distinct n; throws
/// std::invalid_argument otherwise.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

// ---------------------------------------------------------------------------
// Random binary-search-tree heights (edge counting: a single node has
// height 0).
// ---------------------------------------------------------------------------

/// Height of the BST built by inserting keys in the given order.
unsigned bst_insertion_height(std::span<const std::uint32_t> keys);

/// Height of a BST over a random permutation of n keys.
unsigned random_bst_height(std::size_t n, Rng& rng);

struct HeightTailEstimate {
  double threshold = 0.0;  // k * ln n
  std::size_t trials = 0;
  std::size_t exceed_count = 0;
  double p_hat = 0.0;
  double stderr_ = 0.0;  // binomial standard error
};

/// Empirical Pr[height >= k * ln n] over independent random trees.
HeightTailEstimate height_tail(std::size_t n, std::size_t trials, double k,
                               SeedSpec seed);

// ---------------------------------------------------------------------------
// Misc numeric checks and helpers.
// ---------------------------------------------------------------------------

/// sum_{t=1}^{floor(n - sqrt(n))} (t/(n-t))^2 divided by n^1.5. The series
/// bounds the assignment-cost tail; the ratio stays below a small constant
/// for all n >= 4 (std::invalid_argument below that).
double assignment_bound_ratio(std::uint64_t n);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Survival function of the chi-square distribution with dof degrees of
/// freedom (upper tail probability of the statistic).
double chi_square_sf(double statistic, double dof);

}  // namespace secrank

#endif  // SECRANK_ANALYSIS_HPP
