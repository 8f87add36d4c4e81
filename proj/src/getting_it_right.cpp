#include "fsvar/getting_it_right.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "fsvar/errors.hpp"
#include "fsvar/gibbs.hpp"
#include "fsvar/stats.hpp"
#include "fsvar/var_coeffs.hpp"

namespace fsvar {

namespace {

// Stream identifiers disjoint from the sweep's block ids 1..7.
constexpr std::uint64_t kDataStream = 91;
constexpr std::uint64_t kPriorStream = 92;

using Reader = std::function<double(const ChainState&)>;

// Fixed monitored panel: at least one scalar from every sampler block.
std::vector<std::pair<std::string, Reader>> monitored_scalars(
    const ChainState& proto) {
    const int m = proto.var_count();
    const int q = proto.factor_count();
    const int lags = proto.lag_count();
    const int mid = proto.periods() / 2;

    std::vector<std::pair<std::string, Reader>> list;
    list.emplace_back("coeff.lag1[0,0]", [](const ChainState& s) {
        return s.coeffs[0](0, 0);
    });
    if (m >= 2)
        list.emplace_back("coeff.lag1[1," + std::to_string(m - 1) + "]",
                          [m](const ChainState& s) {
                              return s.coeffs[0](1, m - 1);
                          });
    if (lags > 1 && m >= 2)
        list.emplace_back("coeff.lag2[0,1]", [](const ChainState& s) {
            return s.coeffs[1](0, 1);
        });
    list.emplace_back("tau.lag1[0,0]", [](const ChainState& s) {
        return s.local_scales[0](0, 0);
    });
    list.emplace_back("lambda_sq.lag1", [](const ChainState& s) {
        return s.global_scales[0];
    });
    if (lags > 1)
        list.emplace_back("lambda_sq.lag2", [](const ChainState& s) {
            return s.global_scales[1];
        });
    if (m > q)
        list.emplace_back("loading[" + std::to_string(q) + ",0]",
                          [q](const ChainState& s) { return s.loadings(q, 0); });
    if (m - 1 > q)
        list.emplace_back("loading[" + std::to_string(m - 1) + ",0]",
                          [m](const ChainState& s) {
                              return s.loadings(m - 1, 0);
                          });
    list.emplace_back("factor.level", [](const ChainState& s) {
        return s.factor_sv[0].level;
    });
    list.emplace_back("factor.persistence", [](const ChainState& s) {
        return s.factor_sv[0].persistence;
    });
    list.emplace_back("factor.innovation_var", [](const ChainState& s) {
        return s.factor_sv[0].innovation_var;
    });
    list.emplace_back("factor_path[" + std::to_string(mid) + "]",
                      [mid](const ChainState& s) {
                          return s.factor_path(mid, 0);
                      });
    list.emplace_back("idio0.persistence", [](const ChainState& s) {
        return s.idio_sv[0].persistence;
    });
    if (m >= 2)
        list.emplace_back("idio1.innovation_var", [](const ChainState& s) {
            return s.idio_sv[1].innovation_var;
        });
    if (m >= 3)
        list.emplace_back("idio2.level", [](const ChainState& s) {
            return s.idio_sv[2].level;
        });
    if (proto.intercept.size() > 0)
        list.emplace_back("intercept[0]", [](const ChainState& s) {
            return s.intercept(0);
        });
    return list;
}

SvParams draw_sv_params(const SvPrior& prior, Rng& rng) {
    SvParams params;
    params.level = rng.normal() * std::sqrt(prior.mean_variance);
    const double raw = rng.beta(prior.persistence_a, prior.persistence_b);
    params.persistence =
        std::clamp(2.0 * raw - 1.0, -1.0 + 1e-12, 1.0 - 1e-12);
    params.innovation_var =
        rng.gamma(prior.innovation_shape, prior.innovation_rate);
    return params;
}

void draw_logvol_path(Eigen::MatrixXd& out, int column, const SvParams& sv,
                      Rng& rng) {
    const double sd = std::sqrt(sv.innovation_var);
    out(0, column) =
        sv.level +
        rng.normal() * sd / std::sqrt(1.0 - sv.persistence * sv.persistence);
    for (Eigen::Index t = 1; t < out.rows(); ++t)
        out(t, column) = sv.level +
                         sv.persistence * (out(t - 1, column) - sv.level) +
                         rng.normal() * sd;
}

}  // namespace

double GirReport::min_p_value() const {
    double out = 1.0;
    for (const auto& entry : entries) out = std::min(out, entry.p_value);
    return out;
}

ChainState draw_prior_state(const ModelSpec& spec, int m, int periods,
                            Rng& rng) {
    spec.validate();
    if (spec.factors > m) throw ConfigError("factor count exceeds variable count");
    if (periods < 3)
        throw DimensionError("prior state needs at least three periods");

    ChainState state = make_empty_state(m, spec.lags, spec.factors, periods, 0,
                                        spec.include_intercept);
    const int q = spec.factors;

    // Shrinkage hierarchy: per-lag ratio scales, then local scales, then the
    // coefficients themselves.
    double lambda_running = 1.0;
    for (int p = 0; p < spec.lags; ++p) {
        const auto& [c_p, d_p] = spec.lambda_prior[static_cast<std::size_t>(p)];
        const double ratio = rng.gamma(c_p, d_p);
        state.scale_ratios[static_cast<std::size_t>(p)] = ratio;
        lambda_running *= ratio;
        state.global_scales[static_cast<std::size_t>(p)] = lambda_running;
    }
    for (int p = 0; p < spec.lags; ++p) {
        const double kappa = spec.kappa[static_cast<std::size_t>(p)];
        const double lambda_sq = state.global_scales[static_cast<std::size_t>(p)];
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                const double tau = rng.gamma(kappa, 0.5 * kappa * lambda_sq);
                state.local_scales[static_cast<std::size_t>(p)](j, i) = tau;
                state.coeffs[static_cast<std::size_t>(p)](j, i) =
                    rng.normal() * std::sqrt(tau);
            }
    }
    if (spec.include_intercept)
        for (int j = 0; j < m; ++j) {
            const double tau =
                rng.gamma(spec.kappa[0], 0.5 * spec.kappa[0] * state.global_scales[0]);
            state.extra_scales(j, 0) = tau;
            state.intercept(j) = rng.normal() * std::sqrt(tau);
        }

    const double loading_sd = std::sqrt(spec.loading_prior_variance);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < q; ++c)
            if (r >= q || c < r) state.loadings(r, c) = rng.normal() * loading_sd;

    for (int i = 0; i < q; ++i) {
        state.factor_sv[static_cast<std::size_t>(i)] =
            draw_sv_params(spec.sv_prior, rng);
        draw_logvol_path(state.factor_logvol, i,
                         state.factor_sv[static_cast<std::size_t>(i)], rng);
    }
    for (int j = 0; j < m; ++j) {
        state.idio_sv[static_cast<std::size_t>(j)] =
            draw_sv_params(spec.sv_prior, rng);
        draw_logvol_path(state.idio_logvol, j,
                         state.idio_sv[static_cast<std::size_t>(j)], rng);
    }
    for (Eigen::Index t = 0; t < state.factor_path.rows(); ++t)
        for (int i = 0; i < q; ++i)
            state.factor_path(t, i) =
                rng.normal() * std::exp(0.5 * state.factor_logvol(t, i));

    state.validate();
    return state;
}

Panel simulate_conditional(const ChainState& state, Rng& rng) {
    state.validate();
    if (state.exog_count() > 0)
        throw ConfigError("the consistency harness has no exogenous regressors");
    const int m = state.var_count();
    const int lags = state.lag_count();
    const int t_count = state.periods() + lags;

    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(t_count, m);
    for (int r = 0; r < state.periods(); ++r) {
        const int t = lags + r;
        Eigen::VectorXd y =
            state.loadings * state.factor_path.row(r).transpose();
        for (int j = 0; j < m; ++j)
            y(j) += rng.normal() * std::exp(0.5 * state.idio_logvol(r, j));
        for (int p = 0; p < lags; ++p)
            y += state.coeffs[static_cast<std::size_t>(p)] *
                 values.row(t - p - 1).transpose();
        if (state.intercept.size() > 0) y += state.intercept;
        values.row(t) = y;
    }

    Panel panel;
    panel.values = values;
    for (int j = 0; j < m; ++j) panel.names.push_back("y" + std::to_string(j));
    panel.validate();
    return panel;
}

GirReport getting_it_right(const ModelSpec& spec, int m,
                           const GirSettings& settings) {
    spec.validate();
    GirReport report;
    if (settings.cycles <= 0) return report;
    if (settings.prior_draws < 2)
        throw ConfigError("the harness needs at least two prior draws");
    const int periods = settings.t_count - spec.lags;
    if (periods < 3)
        throw DimensionError("t_count leaves fewer than three effective periods");

    const ChainState proto = make_empty_state(m, spec.lags, spec.factors,
                                              periods, 0, spec.include_intercept);
    const auto monitors = monitored_scalars(proto);
    const std::size_t k = monitors.size();

    // Marginal-conditional side: independent prior draws.
    std::vector<std::vector<double>> direct(k);
    for (auto& series : direct)
        series.reserve(static_cast<std::size_t>(settings.prior_draws));
    for (int rep = 0; rep < settings.prior_draws; ++rep) {
        Rng rng = Rng::stream(settings.seed, static_cast<std::uint64_t>(rep),
                              kPriorStream, 0);
        const ChainState state = draw_prior_state(spec, m, periods, rng);
        for (std::size_t i = 0; i < k; ++i)
            direct[i].push_back(monitors[i].second(state));
    }

    // Successive-conditional side: alternate data simulation and one sweep.
    std::vector<std::vector<double>> chain(k);
    for (auto& series : chain)
        series.reserve(static_cast<std::size_t>(settings.cycles));
    Rng init_rng = Rng::stream(settings.seed, 0, kPriorStream, 1);
    ChainState state = draw_prior_state(spec, m, periods, init_rng);
    const SweepOptions options{1, settings.lambda_rate_factor};
    for (int cycle = 0; cycle < settings.cycles; ++cycle) {
        Rng data_rng = Rng::stream(settings.seed,
                                   static_cast<std::uint64_t>(cycle),
                                   kDataStream, 0);
        const Panel panel = simulate_conditional(state, data_rng);
        const Eigen::MatrixXd design =
            build_design(panel, spec.lags, spec.include_intercept);
        gibbs_sweep(state, panel, design, spec, settings.seed, cycle, options);
        for (std::size_t i = 0; i < k; ++i)
            chain[i].push_back(monitors[i].second(state));
    }

    // KS per scalar, thinning the chain to near-independence first; the KS
    // p-value is only calibrated for (close to) independent draws.
    const int max_thin = std::max(1, settings.cycles / 20);
    for (std::size_t i = 0; i < k; ++i) {
        const double tau = iact(chain[i]);
        const int thin =
            std::clamp(static_cast<int>(std::ceil(5.0 * tau)), 1, max_thin);
        std::vector<double> thinned;
        for (std::size_t d = static_cast<std::size_t>(thin) - 1;
             d < chain[i].size(); d += static_cast<std::size_t>(thin))
            thinned.push_back(chain[i][d]);
        const auto ks = ks_two_sample(direct[i], thinned);
        report.entries.push_back({monitors[i].first, ks.statistic, ks.p_value,
                                  thin, static_cast<int>(thinned.size())});
    }
    return report;
}

}  // namespace fsvar
