#include "fsvar/stochvol.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fsvar/errors.hpp"
#include "fsvar/gig.hpp"
#include "fsvar/stats.hpp"

namespace fsvar {

namespace {

// Ten-component Gaussian mixture approximation to the log chi-squared(1)
// distribution (probabilities, means, variances).
constexpr std::array<double, 10> kMixP = {0.00609, 0.04775, 0.13057, 0.20674,
                                          0.22715, 0.18842, 0.12047, 0.05591,
                                          0.01575, 0.00115};
constexpr std::array<double, 10> kMixMean = {1.92677,  1.34744,  0.73504,
                                             0.02266,  -0.85173, -1.97278,
                                             -3.46788, -5.55246, -8.68384,
                                             -14.65000};
constexpr std::array<double, 10> kMixVar = {0.11265, 0.17788, 0.26768, 0.40611,
                                            0.62699, 0.98583, 1.57469, 2.54498,
                                            4.16591, 7.33342};

constexpr double kLogOffset = 1e-8;

// Stationary-initialization term of the path likelihood as a function of the
// persistence: sqrt(1−φ²)·exp(−(1−φ²)·dev²/(2·innov_var)) in logs.
double log_stationary_term(double phi, double first_dev_sq, double innov_var) {
    const double one_minus = 1.0 - phi * phi;
    return 0.5 * std::log(one_minus) - 0.5 * one_minus * first_dev_sq / innov_var;
}

// Metropolis step for the persistence given centered deviations dev_t
// (path − level) and unit-lag regression sums; the Gaussian proposal matches
// the regression likelihood, so only the prior and the stationary first-point
// term enter the accept ratio.
double sample_persistence(double current, double sxx, double sxz,
                          double innov_var, double first_dev_sq,
                          const SvPrior& prior, Rng& rng) {
    double proposal;
    if (sxx > 1e-300) {
        proposal = rng.normal(sxz / sxx, std::sqrt(innov_var / sxx));
    } else {
        // Degenerate regression: fall back to a prior draw (the proposal then
        // cancels the prior in the accept ratio as well).
        proposal = 2.0 * rng.beta(prior.persistence_a, prior.persistence_b) - 1.0;
    }
    if (std::abs(proposal) >= 1.0) return current;
    const double log_prior_new = log_beta_density(
        0.5 * (proposal + 1.0), prior.persistence_a, prior.persistence_b);
    const double log_prior_old = log_beta_density(
        0.5 * (current + 1.0), prior.persistence_a, prior.persistence_b);
    double log_ratio = log_stationary_term(proposal, first_dev_sq, innov_var) -
                       log_stationary_term(current, first_dev_sq, innov_var);
    if (sxx > 1e-300) log_ratio += log_prior_new - log_prior_old;
    if (std::log(rng.uniform()) < log_ratio) return proposal;
    return current;
}

}  // namespace

namespace sv_detail {

Eigen::VectorXd log_squared(const Eigen::VectorXd& observations) {
    return (observations.array().square() + kLogOffset).log();
}

std::vector<int> sample_mixture_indicators(const Eigen::VectorXd& ystar,
                                           const Eigen::VectorXd& logvol,
                                           Rng& rng) {
    const auto t_count = ystar.size();
    std::vector<int> indicators(static_cast<std::size_t>(t_count));
    std::array<double, 10> logw;
    std::array<double, 10> w;
    static const std::array<double, 10> log_pref = [] {
        std::array<double, 10> out{};
        for (std::size_t k = 0; k < 10; ++k)
            out[k] = std::log(kMixP[k]) - 0.5 * std::log(kMixVar[k]);
        return out;
    }();
    for (Eigen::Index t = 0; t < t_count; ++t) {
        const double resid = ystar(t) - logvol(t);
        double max_log = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < 10; ++k) {
            const double dev = resid - kMixMean[k];
            logw[k] = log_pref[k] - 0.5 * dev * dev / kMixVar[k];
            max_log = std::max(max_log, logw[k]);
        }
        for (std::size_t k = 0; k < 10; ++k) w[k] = std::exp(logw[k] - max_log);
        indicators[static_cast<std::size_t>(t)] = rng.categorical(w);
    }
    return indicators;
}

Eigen::VectorXd ffbs(const Eigen::VectorXd& ystar,
                     const std::vector<int>& indicators, const SvParams& params,
                     Rng& rng) {
    const auto t_count = ystar.size();
    if (t_count == 0) throw NumericError("empty observation vector");
    const double phi = params.persistence;
    const double innov = params.innovation_var;
    const double level = params.level;

    Eigen::VectorXd filt_mean(t_count);
    Eigen::VectorXd filt_var(t_count);
    Eigen::VectorXd pred_mean(t_count);
    Eigen::VectorXd pred_var(t_count);

    for (Eigen::Index t = 0; t < t_count; ++t) {
        if (t == 0) {
            pred_mean(t) = level;
            pred_var(t) = innov / (1.0 - phi * phi);
        } else {
            pred_mean(t) = level + phi * (filt_mean(t - 1) - level);
            pred_var(t) = phi * phi * filt_var(t - 1) + innov;
        }
        const int r = indicators[static_cast<std::size_t>(t)];
        const double obs = ystar(t) - kMixMean[static_cast<std::size_t>(r)];
        const double obs_var = kMixVar[static_cast<std::size_t>(r)];
        const double gain = pred_var(t) / (pred_var(t) + obs_var);
        filt_mean(t) = pred_mean(t) + gain * (obs - pred_mean(t));
        filt_var(t) = (1.0 - gain) * pred_var(t);
    }

    Eigen::VectorXd path(t_count);
    path(t_count - 1) =
        rng.normal(filt_mean(t_count - 1), std::sqrt(filt_var(t_count - 1)));
    for (Eigen::Index t = t_count - 2; t >= 0; --t) {
        const double j = phi * filt_var(t) / pred_var(t + 1);
        const double mean = filt_mean(t) + j * (path(t + 1) - pred_mean(t + 1));
        const double var = filt_var(t) - j * j * pred_var(t + 1);
        path(t) = rng.normal(mean, std::sqrt(std::max(var, 0.0)));
    }
    return path;
}

}  // namespace sv_detail

Eigen::VectorXd sample_logvol_path(const Eigen::VectorXd& observations,
                                   const SvSeries& series, Rng& rng) {
    if (observations.size() == 0)
        throw NumericError("sample_logvol_path requires a non-empty series");
    if (observations.size() != series.logvol.size())
        throw DimensionError("observation/path length mismatch");
    const Eigen::VectorXd ystar = sv_detail::log_squared(observations);
    const auto indicators =
        sv_detail::sample_mixture_indicators(ystar, series.logvol, rng);
    return sv_detail::ffbs(ystar, indicators, series.params, rng);
}

SvParams sample_sv_params(const Eigen::VectorXd& path, const SvPrior& prior,
                          const SvParams& current, Rng& rng) {
    const auto t_count = path.size();
    if (t_count < 3) throw NumericError("parameter draw needs at least 3 periods");
    SvParams params = current;

    // Innovation variance: the path likelihood contributes Ξ^(−T/2) and a
    // 1/Ξ term; with the Gamma(shape, rate) prior the conditional is
    // GIG(shape − T/2, sum-of-squares, 2·rate).
    {
        const double phi = params.persistence;
        const double level = params.level;
        double ss = (1.0 - phi * phi) * (path(0) - level) * (path(0) - level);
        for (Eigen::Index t = 1; t < t_count; ++t) {
            const double resid = path(t) - level - phi * (path(t - 1) - level);
            ss += resid * resid;
        }
        const GigParams gig{prior.innovation_shape - 0.5 * static_cast<double>(t_count),
                            std::max(ss, 1e-300), 2.0 * prior.innovation_rate};
        params.innovation_var = sample_gig(gig, rng);
    }

    // Persistence: Metropolis with the conjugate-Gaussian proposal.
    {
        const double level = params.level;
        double sxx = 0.0;
        double sxz = 0.0;
        for (Eigen::Index t = 1; t < t_count; ++t) {
            const double x = path(t - 1) - level;
            sxx += x * x;
            sxz += x * (path(t) - level);
        }
        const double first_dev_sq = (path(0) - level) * (path(0) - level);
        params.persistence =
            sample_persistence(params.persistence, sxx, sxz, params.innovation_var,
                               first_dev_sq, prior, rng);
    }

    // Level: exact Gaussian conditional, including the stationary first point.
    {
        const double phi = params.persistence;
        const double innov = params.innovation_var;
        double sum_effects = (1.0 - phi * phi) * path(0);
        for (Eigen::Index t = 1; t < t_count; ++t)
            sum_effects += (1.0 - phi) * (path(t) - phi * path(t - 1));
        const double precision =
            1.0 / prior.mean_variance +
            ((1.0 - phi * phi) +
             static_cast<double>(t_count - 1) * (1.0 - phi) * (1.0 - phi)) /
                innov;
        const double mean = sum_effects / innov / precision;
        params.level = rng.normal(mean, std::sqrt(1.0 / precision));
    }
    return params;
}

void update_sv_series(const Eigen::VectorXd& observations, SvSeries& series,
                      const SvPrior& prior, Rng& rng) {
    if (observations.size() == 0)
        throw NumericError("update_sv_series requires a non-empty series");
    if (observations.size() != series.logvol.size())
        throw DimensionError("observation/path length mismatch");
    const auto t_count = observations.size();

    const Eigen::VectorXd ystar = sv_detail::log_squared(observations);
    const auto indicators =
        sv_detail::sample_mixture_indicators(ystar, series.logvol, rng);
    series.logvol = sv_detail::ffbs(ystar, indicators, series.params, rng);
    series.params = sample_sv_params(series.logvol, prior, series.params, rng);

    // Interweaving: re-draw (level, scale) and the persistence in the
    // non-centered parameterization h̃ = (path − level)/scale, where the
    // innovation-variance prior Gamma(1/2, rate) is equivalent to a mean-zero
    // Gaussian prior on the signed scale.  Only that shape admits the
    // Gaussian form, so other configurations keep the centered draw alone.
    if (prior.innovation_shape == 0.5) {
        const double sigma = std::sqrt(series.params.innovation_var);
        Eigen::VectorXd tilde = (series.logvol.array() - series.params.level) / sigma;

        // Bivariate Gaussian regression of (ystar − mixture mean) on (1, h̃)
        // with mixture variances as weights.
        const double sigma_prior_var = 1.0 / (2.0 * prior.innovation_rate);
        double a00 = 1.0 / prior.mean_variance;
        double a01 = 0.0;
        double a11 = 1.0 / sigma_prior_var;
        double r0 = 0.0;
        double r1 = 0.0;
        for (Eigen::Index t = 0; t < t_count; ++t) {
            const int r = indicators[static_cast<std::size_t>(t)];
            const double w = 1.0 / kMixVar[static_cast<std::size_t>(r)];
            const double yc = ystar(t) - kMixMean[static_cast<std::size_t>(r)];
            a00 += w;
            a01 += w * tilde(t);
            a11 += w * tilde(t) * tilde(t);
            r0 += w * yc;
            r1 += w * yc * tilde(t);
        }
        // 2×2 Cholesky solve and correlated Gaussian draw.
        const double l00 = std::sqrt(a00);
        const double l10 = a01 / l00;
        const double l11 = std::sqrt(std::max(a11 - l10 * l10, 1e-300));
        const double z0 = r0 / l00;
        const double z1 = (r1 - l10 * z0) / l11;
        const double mean1 = z1 / l11;
        const double mean0 = (z0 - l10 * mean1) / l00;
        const double g1 = rng.normal();
        const double g0 = rng.normal();
        double sigma_new = mean1 + g1 / l11;
        double level_new = mean0 + (g0 - l10 * (sigma_new - mean1)) / l00;

        if (sigma_new < 0.0) {
            sigma_new = -sigma_new;
            tilde = -tilde;
        }

        // Persistence in the non-centered parameterization: unit innovation
        // variance, zero level.
        double sxx = 0.0;
        double sxz = 0.0;
        for (Eigen::Index t = 1; t < t_count; ++t) {
            sxx += tilde(t - 1) * tilde(t - 1);
            sxz += tilde(t - 1) * tilde(t);
        }
        const double phi_new =
            sample_persistence(series.params.persistence, sxx, sxz, 1.0,
                               tilde(0) * tilde(0), prior, rng);

        series.params.level = level_new;
        series.params.persistence = phi_new;
        series.params.innovation_var = std::max(sigma_new * sigma_new, 1e-300);
        series.logvol = series.params.level + sigma_new * tilde.array();
    }
}

SvSeries init_sv_series(const Eigen::VectorXd& observations) {
    const Eigen::VectorXd ystar = sv_detail::log_squared(observations);
    const auto t_count = ystar.size();
    SvSeries series;
    series.logvol.resize(t_count);
    const int half_window = 5;
    for (Eigen::Index t = 0; t < t_count; ++t) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, t - half_window);
        const Eigen::Index hi = std::min<Eigen::Index>(t_count - 1, t + half_window);
        series.logvol(t) = ystar.segment(lo, hi - lo + 1).mean();
    }
    series.params.level = series.logvol.mean();
    series.params.persistence = 0.9;
    series.params.innovation_var = 0.1;
    return series;
}

}  // namespace fsvar
