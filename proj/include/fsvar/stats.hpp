#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fsvar {

// Empirical quantile with linear interpolation between order statistics
// (the convention used by R's default quantile type 7 and numpy).
// `prob` must lie in [0, 1]; the input need not be sorted.
double quantile(std::span<const double> values, double prob);

// Quantiles for a whole grid with a single sort of the input.
std::vector<double> quantiles(std::span<const double> values,
                              std::span<const double> probs);

double mean(std::span<const double> values);
double variance(std::span<const double> values);  // unbiased
double correlation(std::span<const double> a, std::span<const double> b);

// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_q(double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample test of draws against a CDF evaluated pointwise.
KsResult ks_one_sample(std::span<const double> draws,
                       const std::function<double(double)>& cdf);

// Integrated autocorrelation time 1 + 2Σρ_k with Geyer initial-positive-
// sequence truncation.  Roughly the factor by which autocorrelation inflates
// the variance of the chain mean; used to pick thinning intervals that make
// draws nearly independent.  Returns the series length for a degenerate
// (constant) input.
double iact(std::span<const double> draws);

// Split-chain potential scale reduction factor for a single monitored scalar.
// The series is cut in half and treated as two chains; values near 1 indicate
// the two halves explored the same distribution.
double split_rhat(std::span<const double> draws);

// Logarithm of the Beta(a, b) density at x in (0, 1).
double log_beta_density(double x, double a, double b);

}  // namespace fsvar
