#include "fsvar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double prob) {
    if (!(prob >= 0.0 && prob <= 1.0))
        throw NumericError("quantile probability must lie in [0, 1]");
    const std::size_t n = sorted.size();
    if (n == 0) throw NumericError("quantile of empty sample");
    if (n == 1) return sorted.front();
    const double position = prob * static_cast<double>(n - 1);
    const auto lower = static_cast<std::size_t>(position);
    if (lower + 1 >= n) return sorted.back();
    const double frac = position - static_cast<double>(lower);
    return sorted[lower] + frac * (sorted[lower + 1] - sorted[lower]);
}

}  // namespace

double quantile(std::span<const double> values, double prob) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, prob);
}

std::vector<double> quantiles(std::span<const double> values,
                              std::span<const double> probs) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(probs.size());
    for (double p : probs) out.push_back(quantile_sorted(sorted, p));
    return out;
}

double mean(std::span<const double> values) {
    if (values.empty()) throw NumericError("mean of empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
    if (values.size() < 2) throw NumericError("variance needs at least two values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw DimensionError("correlation needs two equal-length samples");
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0))
        throw NumericError("correlation undefined for constant series");
    return sab / std::sqrt(saa * sbb);
}

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 0.2) {
        // For small arguments the alternating series converges too slowly;
        // use the theta-function form of the CDF instead.
        const double factor = std::sqrt(2.0 * std::numbers::pi) / x;
        double cdf = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term =
                std::exp(-odd * odd * std::numbers::pi * std::numbers::pi / (8.0 * x * x));
            cdf += term;
            if (term < 1e-16 * cdf) break;
        }
        return std::clamp(1.0 - factor * cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        q += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * q, 0.0, 1.0);
}

namespace {

// Finite-sample correction from the usual asymptotic expansion: the effective
// argument is D * (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_pvalue(double statistic, double n_effective) {
    const double root = std::sqrt(n_effective);
    return kolmogorov_q(statistic * (root + 0.12 + 0.11 / root));
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw NumericError("KS test requires non-empty samples");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double d = 0.0;
    while (ia < sa.size() && ib < sb.size()) {
        const double va = sa[ia];
        const double vb = sb[ib];
        if (va <= vb) ++ia;
        if (vb <= va) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na -
                                 static_cast<double>(ib) / nb));
    }
    KsResult result;
    result.statistic = d;
    result.p_value = ks_pvalue(d, na * nb / (na + nb));
    return result;
}

KsResult ks_one_sample(std::span<const double> draws,
                       const std::function<double(double)>& cdf) {
    if (draws.empty()) throw NumericError("KS test requires a non-empty sample");
    std::vector<double> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double value = cdf(sorted[i]);
        const double upper = static_cast<double>(i + 1) / n - value;
        const double lower = value - static_cast<double>(i) / n;
        d = std::max({d, upper, lower});
    }
    KsResult result;
    result.statistic = d;
    result.p_value = ks_pvalue(d, n);
    return result;
}

double iact(std::span<const double> draws) {
    const std::size_t n = draws.size();
    if (n < 4) return 1.0;
    const double center = mean(draws);
    const auto autocov = [&](std::size_t lag) {
        double sum = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t)
            sum += (draws[t] - center) * (draws[t + lag] - center);
        return sum / static_cast<double>(n);
    };
    const double var0 = autocov(0);
    if (!(var0 > 0.0)) return static_cast<double>(n);

    // Sum autocorrelations in lag pairs while the pair sums stay positive
    // (they are nonnegative for a reversible chain's true autocorrelations).
    double sum = 0.0;
    for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
        const double pair = (autocov(lag) + autocov(lag + 1)) / var0;
        if (pair <= 0.0) break;
        sum += pair;
        if (lag > n / 3) break;
    }
    return std::max(1.0, 1.0 + 2.0 * sum);
}

double split_rhat(std::span<const double> draws) {
    const std::size_t n = draws.size() / 2;
    if (n < 2) throw NumericError("split_rhat needs at least four draws");
    const std::span<const double> first = draws.subspan(0, n);
    const std::span<const double> second = draws.subspan(draws.size() - n, n);
    const double m1 = mean(first);
    const double m2 = mean(second);
    const double w = 0.5 * (variance(first) + variance(second));
    const double grand = 0.5 * (m1 + m2);
    const double b = static_cast<double>(n) *
                     ((m1 - grand) * (m1 - grand) + (m2 - grand) * (m2 - grand));
    if (!(w > 0.0)) return 1.0;
    const double nd = static_cast<double>(n);
    const double var_plus = (nd - 1.0) / nd * w + b / nd;
    return std::sqrt(var_plus / w);
}

double log_beta_density(double x, double a, double b) {
    if (!(x > 0.0 && x < 1.0)) return -std::numeric_limits<double>::infinity();
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
           (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace fsvar
