#include "fsvar/gibbs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "fsvar/errors.hpp"
#include "fsvar/gig.hpp"
#include "fsvar/latent_factor.hpp"
#include "fsvar/stats.hpp"
#include "fsvar/stochvol.hpp"
#include "fsvar/var_coeffs.hpp"

namespace fsvar {

namespace {

// Stream block identifiers; part of the determinism contract, never reorder.
enum StreamBlock : std::uint64_t {
    kVarEq = 1,
    kIdioSv = 2,
    kFactorPath = 3,
    kLoadings = 4,
    kFactorSv = 5,
    kTau = 6,
    kLambda = 7,
};

// Static contiguous partition of [0, count) over at most `threads` workers.
// Work units get their randomness from their own streams, so the partition
// shape never affects results.
template <typename Fn>
void run_parallel(int count, int threads, Fn&& fn) {
    if (count <= 0) return;
    const int workers = std::clamp(threads, 1, count);
    if (workers == 1) {
        for (int u = 0; u < count; ++u) fn(u);
        return;
    }
    const int chunk = (count + workers - 1) / workers;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const int begin = w * chunk;
            const int end = std::min(count, begin + chunk);
            try {
                for (int u = begin; u < end; ++u) fn(u);
            } catch (...) {
                failures[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& worker : pool) worker.join();
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);
}

std::string block_context(const char* block, long sweep) {
    return "sweep " + std::to_string(sweep) + ", block " + block + ": ";
}

template <typename Fn>
void run_block(const char* block, long sweep, Fn&& fn) {
    try {
        fn();
    } catch (const DimensionError& e) {
        throw DimensionError(block_context(block, sweep) + e.message());
    } catch (const NumericError& e) {
        throw NumericError(block_context(block, sweep) + e.message());
    }
}

// Equation coefficients stacked in design-column order, one row per equation.
Eigen::MatrixXd coefficient_matrix(const ChainState& state) {
    const int m = state.var_count();
    const int lags = state.lag_count();
    const int exog = state.exog_count();
    const bool intercept = state.intercept.size() > 0;
    Eigen::MatrixXd stacked(m, lags * m + exog + (intercept ? 1 : 0));
    for (int p = 0; p < lags; ++p)
        stacked.middleCols(p * m, m) = state.coeffs[static_cast<std::size_t>(p)];
    if (exog > 0) stacked.middleCols(lags * m, exog) = state.exog_coeffs;
    if (intercept) stacked.col(stacked.cols() - 1) = state.intercept;
    return stacked;
}

// VAR residuals ε_t = y_t − (lag/exogenous/intercept part) over the
// effective sample; still contains the common-factor component.
Eigen::MatrixXd var_residuals(const ChainState& state, const Panel& panel,
                              const Eigen::MatrixXd& design) {
    return panel.values.bottomRows(state.periods()) -
           design * coefficient_matrix(state).transpose();
}

SvSeries pull_series(const Eigen::MatrixXd& logvol, const SvParams& params,
                     int column) {
    return SvSeries{logvol.col(column), params};
}

}  // namespace

void gibbs_sweep(ChainState& state, const Panel& panel,
                 const Eigen::MatrixXd& design, const ModelSpec& spec,
                 std::uint64_t seed, long sweep_index,
                 const SweepOptions& options) {
    const int m = state.var_count();
    const int q = state.factor_count();
    const int lags = state.lag_count();
    const int t_count = state.periods();
    const int exog = state.exog_count();
    const int extra = exog + (state.intercept.size() > 0 ? 1 : 0);
    const auto sweep_u = static_cast<std::uint64_t>(sweep_index);
    if (design.rows() != t_count)
        throw DimensionError(block_context("var_coeffs", sweep_index) +
                             "design rows do not match the effective sample");

    // (1) VAR coefficients, equation by equation on factor-adjusted data.
    run_block("var_coeffs", sweep_index, [&] {
        const Eigen::MatrixXd targets = factor_adjusted_targets(state, panel);
        run_parallel(m, options.threads, [&](int j) {
            Rng rng = Rng::stream(seed, sweep_u, kVarEq,
                                  static_cast<std::uint64_t>(j));
            const Eigen::VectorXd idio_vars =
                state.idio_logvol.col(j).array().exp();
            const Eigen::VectorXd draw =
                sample_var_equation(targets.col(j), design, idio_vars,
                                    equation_prior_variances(state, j), rng);
            apply_equation_draw(state, j, draw);
        });
    });

    // Residuals with the updated coefficients; reused by blocks 2-4.
    const Eigen::MatrixXd resid = var_residuals(state, panel, design);

    // (2) Idiosyncratic volatility paths and parameters.
    run_block("idio_sv", sweep_index, [&] {
        const Eigen::MatrixXd eta =
            resid - state.factor_path * state.loadings.transpose();
        run_parallel(m, options.threads, [&](int j) {
            Rng rng = Rng::stream(seed, sweep_u, kIdioSv,
                                  static_cast<std::uint64_t>(j));
            SvSeries series = pull_series(state.idio_logvol,
                                          state.idio_sv[static_cast<std::size_t>(j)], j);
            update_sv_series(eta.col(j), series, spec.sv_prior, rng);
            state.idio_logvol.col(j) = series.logvol;
            state.idio_sv[static_cast<std::size_t>(j)] = series.params;
        });
    });

    // (3) Factor path, one time point per work unit.
    run_block("factor_path", sweep_index, [&] {
        const Eigen::MatrixXd factor_vars = state.factor_logvol.array().exp();
        const Eigen::MatrixXd idio_vars = state.idio_logvol.array().exp();
        run_parallel(t_count, options.threads, [&](int t) {
            Rng rng = Rng::stream(seed, sweep_u, kFactorPath,
                                  static_cast<std::uint64_t>(t));
            state.factor_path.row(t) =
                sample_factor_at(resid.row(t), state.loadings,
                                 factor_vars.row(t), idio_vars.row(t), rng)
                    .transpose();
        });
    });

    // (4) Loadings, one variable row per work unit.
    run_block("loadings", sweep_index, [&] {
        const Eigen::MatrixXd idio_vars = state.idio_logvol.array().exp();
        run_parallel(m, options.threads, [&](int row) {
            Rng rng = Rng::stream(seed, sweep_u, kLoadings,
                                  static_cast<std::uint64_t>(row));
            state.loadings.row(row) =
                sample_loading_row(row, resid, state.factor_path, idio_vars,
                                   spec.loading_prior_variance, rng)
                    .transpose();
        });
    });

    // (5) Factor volatility paths and parameters.
    run_block("factor_sv", sweep_index, [&] {
        run_parallel(q, options.threads, [&](int i) {
            Rng rng = Rng::stream(seed, sweep_u, kFactorSv,
                                  static_cast<std::uint64_t>(i));
            SvSeries series = pull_series(state.factor_logvol,
                                          state.factor_sv[static_cast<std::size_t>(i)], i);
            update_sv_series(state.factor_path.col(i), series, spec.sv_prior, rng);
            state.factor_logvol.col(i) = series.logvol;
            state.factor_sv[static_cast<std::size_t>(i)] = series.params;
        });
    });

    // (6) Local shrinkage scales, one coefficient per work unit; exogenous
    // and intercept coefficients share the lag-1 pool.
    run_block("tau", sweep_index, [&] {
        const int lag_units = lags * m * m;
        run_parallel(lag_units + m * extra, options.threads, [&](int u) {
            Rng rng = Rng::stream(seed, sweep_u, kTau,
                                  static_cast<std::uint64_t>(u));
            if (u < lag_units) {
                const int p = u / (m * m);
                const int j = (u % (m * m)) / m;
                const int i = u % m;
                state.local_scales[static_cast<std::size_t>(p)](j, i) =
                    sample_tau(state.coeffs[static_cast<std::size_t>(p)](j, i),
                               spec.kappa[static_cast<std::size_t>(p)],
                               state.global_scales[static_cast<std::size_t>(p)],
                               rng);
            } else {
                const int e = u - lag_units;
                const int j = e / extra;
                const int k = e % extra;
                const double beta =
                    k < exog ? state.exog_coeffs(j, k) : state.intercept(j);
                state.extra_scales(j, k) = sample_tau(
                    beta, spec.kappa[0], state.global_scales[0], rng);
            }
        });
    });

    // (7) Lag-level scales, sequential in p because each conditional depends
    // on the scales below it.  A rate factor f ≠ 1 rescales the conditional's
    // rate exactly by passing Gamma prior (c, f·d) and the tau pool times f.
    run_block("lambda", sweep_index, [&] {
        const double f = options.lambda_rate_factor;
        for (int p = 1; p <= lags; ++p) {
            Rng rng = Rng::stream(seed, sweep_u, kLambda,
                                  static_cast<std::uint64_t>(p));
            std::vector<double> pool;
            pool.reserve(static_cast<std::size_t>(m * m + (p == 1 ? m * extra : 0)));
            const auto& local = state.local_scales[static_cast<std::size_t>(p - 1)];
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) pool.push_back(f * local(j, i));
            if (p == 1)
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < extra; ++k)
                        pool.push_back(f * state.extra_scales(j, k));
            const auto [c_p, d_p] = spec.lambda_prior[static_cast<std::size_t>(p - 1)];
            const double lambda_sq = sample_lambda_sq(
                p, pool, {c_p, f * d_p}, spec.kappa[static_cast<std::size_t>(p - 1)],
                std::span<const double>(state.scale_ratios.data(),
                                        static_cast<std::size_t>(p - 1)),
                rng);
            state.scale_ratios[static_cast<std::size_t>(p - 1)] =
                p == 1 ? lambda_sq
                       : lambda_sq / state.global_scales[static_cast<std::size_t>(p - 2)];
            state.global_scales[static_cast<std::size_t>(p - 1)] = lambda_sq;
        }
    });
}

ChainState init_chain(const Panel& panel, const ModelSpec& spec) {
    panel.validate();
    spec.validate();
    const int m = panel.series_count();
    const int lags = spec.lags;
    const int q = spec.factors;
    const int t_count = panel.periods() - lags;
    if (q > m) throw ConfigError("factor count exceeds variable count");
    if (t_count < 3)
        throw DimensionError("panel leaves fewer than three effective periods "
                             "after the lag window");

    ChainState state = make_empty_state(m, lags, q, t_count, panel.exog_count(),
                                        spec.include_intercept);
    const Eigen::MatrixXd design =
        build_design(panel, lags, spec.include_intercept);
    const Eigen::MatrixXd targets = panel.values.bottomRows(t_count);

    // Ridge regression per equation.
    Eigen::MatrixXd gram = design.transpose() * design;
    gram.diagonal().array() += 0.1;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericError("ridge initialization failed to factor");
    for (int j = 0; j < m; ++j)
        apply_equation_draw(state, j,
                            llt.solve(design.transpose() * targets.col(j)));
    const Eigen::MatrixXd resid = var_residuals(state, panel, design);

    // Principal components of the residual covariance, rescaled so the
    // pinned loading of each factor is exactly 1.
    const Eigen::MatrixXd cov =
        resid.transpose() * resid / static_cast<double>(t_count);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(cov);
    if (eigen.info() != Eigen::Success)
        throw NumericError("residual covariance eigendecomposition failed");
    for (int i = 0; i < q; ++i) {
        const Eigen::VectorXd v = eigen.eigenvectors().col(m - 1 - i);
        const double pivot = v(i);
        if (std::abs(pivot) < 1e-8) {
            // Degenerate pivot: fall back to the pinned unit loading.
            state.loadings.col(i).setZero();
            state.loadings(i, i) = 1.0;
            state.factor_path.col(i) = resid.col(i);
            continue;
        }
        Eigen::VectorXd column = v / pivot;
        for (int r = 0; r < i; ++r) column(r) = 0.0;
        column(i) = 1.0;
        state.loadings.col(i) = column;
        state.factor_path.col(i) = (resid * v) * pivot;
    }

    // Volatility starting paths from the smoothed log-squared residuals.
    const Eigen::MatrixXd eta =
        resid - state.factor_path * state.loadings.transpose();
    for (int j = 0; j < m; ++j) {
        const SvSeries series = init_sv_series(eta.col(j));
        state.idio_logvol.col(j) = series.logvol;
        state.idio_sv[static_cast<std::size_t>(j)] = series.params;
    }
    for (int i = 0; i < q; ++i) {
        const SvSeries series = init_sv_series(state.factor_path.col(i));
        state.factor_logvol.col(i) = series.logvol;
        state.factor_sv[static_cast<std::size_t>(i)] = series.params;
    }

    // Prior-mean global scales; local scales stay at the neutral 1.
    double product = 1.0;
    for (int p = 0; p < lags; ++p) {
        const auto& [c_p, d_p] = spec.lambda_prior[static_cast<std::size_t>(p)];
        state.scale_ratios[static_cast<std::size_t>(p)] = c_p / d_p;
        product *= c_p / d_p;
        state.global_scales[static_cast<std::size_t>(p)] = product;
    }

    state.validate();
    return state;
}

DrawStore run_chain(const Panel& panel, const ModelSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    ChainState state = init_chain(panel, spec);
    const Eigen::MatrixXd design =
        build_design(panel, spec.lags, spec.include_intercept);

    DrawStore store = make_draw_store(state, panel.names);
    store.seed = spec.mcmc.seed;
    store.burn_in = spec.mcmc.burn_in;
    store.keep = spec.mcmc.keep;
    store.thin = spec.mcmc.thin;
    store.threads = spec.mcmc.threads;
    store.values.reserve(static_cast<std::size_t>(store.draw_size()) *
                         static_cast<std::size_t>(spec.mcmc.keep));

    const SweepOptions options{spec.mcmc.threads, 1.0};
    const long burn = spec.mcmc.burn_in;
    const long total = burn + static_cast<long>(spec.mcmc.keep) * spec.mcmc.thin;
    for (long s = 0; s < total; ++s) {
        gibbs_sweep(state, panel, design, spec, spec.mcmc.seed, s, options);
        if (s >= burn && (s - burn) % spec.mcmc.thin == spec.mcmc.thin - 1) {
            state.validate();
            store.append(state,
                         companion_spectral_radius(state.coeffs) < 1.0);
        }
    }
    store.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return store;
}

std::vector<DiagnosticEntry> chain_diagnostics(const DrawStore& store) {
    store.validate();
    std::vector<DiagnosticEntry> report;
    if (store.draw_count() < 8) return report;

    const auto lay = store.layout();
    const auto add = [&](const std::string& name, long offset) {
        const auto series = store.scalar_series(offset);
        report.push_back({name, split_rhat(series)});
    };
    add(store.names[0] + ".lag1." + store.names[0], lay.coeffs);
    for (int p = 0; p < store.lags; ++p)
        add("lambda_sq.lag" + std::to_string(p + 1), lay.global_scales + p);
    add("f0.level", lay.factor_sv);
    add("f0.persistence", lay.factor_sv + 1);
    add("f0.innovation_var", lay.factor_sv + 2);
    add(store.names[0] + ".persistence", lay.idio_sv + 1);
    if (store.var_count > store.factors)
        add(store.names[static_cast<std::size_t>(store.factors)] + ".f0",
            lay.loadings + static_cast<long>(store.factors) * store.factors);
    return report;
}

SimulatedPanel simulate_panel(const ModelSpec& spec, const ChainState& truth,
                              int t_count, Rng& rng) {
    spec.validate();
    truth.validate();
    const int m = truth.var_count();
    const int q = truth.factor_count();
    const int lags = truth.lag_count();
    const int exog = truth.exog_count();
    const bool intercept = truth.intercept.size() > 0;
    if (spec.lags != lags || spec.factors != q ||
        spec.include_intercept != intercept)
        throw ConfigError("truth geometry does not match the model spec");
    if (t_count < lags + 3)
        throw ConfigError("simulation length leaves no effective sample");
    const double radius = companion_spectral_radius(truth.coeffs);
    if (!(radius < 1.0))
        throw ConfigError("unstable truth: companion spectral radius " +
                          std::to_string(radius));

    const int warmup = 100;
    const int total = warmup + t_count;

    // Log-variance paths from their stationary initial laws.
    Eigen::MatrixXd factor_logvol(total, q);
    Eigen::MatrixXd idio_logvol(total, m);
    const auto roll_path = [&rng](Eigen::MatrixXd& out, int column,
                                  const SvParams& sv) {
        const double sd = std::sqrt(sv.innovation_var);
        out(0, column) = sv.level + rng.normal() * sd /
                                        std::sqrt(1.0 - sv.persistence * sv.persistence);
        for (Eigen::Index t = 1; t < out.rows(); ++t)
            out(t, column) = sv.level +
                             sv.persistence * (out(t - 1, column) - sv.level) +
                             rng.normal() * sd;
    };
    for (int i = 0; i < q; ++i)
        roll_path(factor_logvol, i, truth.factor_sv[static_cast<std::size_t>(i)]);
    for (int j = 0; j < m; ++j)
        roll_path(idio_logvol, j, truth.idio_sv[static_cast<std::size_t>(j)]);

    Eigen::MatrixXd factor_path(total, q);
    for (Eigen::Index t = 0; t < total; ++t)
        for (int i = 0; i < q; ++i)
            factor_path(t, i) =
                rng.normal() * std::exp(0.5 * factor_logvol(t, i));

    Eigen::MatrixXd exog_values(total, exog);
    for (Eigen::Index t = 0; t < total; ++t)
        for (int e = 0; e < exog; ++e) exog_values(t, e) = rng.normal();

    // VAR recursion from zero initial conditions.
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(total, m);
    for (int t = 0; t < total; ++t) {
        Eigen::VectorXd y = truth.loadings * factor_path.row(t).transpose();
        for (int j = 0; j < m; ++j)
            y(j) += rng.normal() * std::exp(0.5 * idio_logvol(t, j));
        for (int p = 0; p < lags; ++p)
            if (t - p - 1 >= 0)
                y += truth.coeffs[static_cast<std::size_t>(p)] *
                     values.row(t - p - 1).transpose();
        if (exog > 0) y += truth.exog_coeffs * exog_values.row(t).transpose();
        if (intercept) y += truth.intercept;
        values.row(t) = y;
    }

    SimulatedPanel out;
    out.panel.values = values.bottomRows(t_count);
    for (int j = 0; j < m; ++j)
        out.panel.names.push_back("y" + std::to_string(j));
    if (exog > 0) out.panel.exogenous = exog_values.bottomRows(t_count);
    out.panel.validate();

    // Realized truth over the effective sample (panel rows lags..t_count−1).
    out.truth = make_empty_state(m, lags, q, t_count - lags, exog, intercept);
    out.truth.coeffs = truth.coeffs;
    out.truth.exog_coeffs = truth.exog_coeffs;
    out.truth.intercept = truth.intercept;
    out.truth.loadings = truth.loadings;
    out.truth.factor_sv = truth.factor_sv;
    out.truth.idio_sv = truth.idio_sv;
    out.truth.local_scales = truth.local_scales;
    out.truth.extra_scales = truth.extra_scales;
    out.truth.global_scales = truth.global_scales;
    out.truth.scale_ratios = truth.scale_ratios;
    out.truth.factor_path = factor_path.bottomRows(t_count - lags);
    out.truth.factor_logvol = factor_logvol.bottomRows(t_count - lags);
    out.truth.idio_logvol = idio_logvol.bottomRows(t_count - lags);
    out.truth.validate();
    return out;
}

}  // namespace fsvar
