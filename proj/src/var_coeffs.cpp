#include "fsvar/var_coeffs.hpp"

#include <cmath>
#include <string>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

struct NormalEquations {
    Eigen::MatrixXd precision;
    Eigen::VectorXd rhs;
};

NormalEquations assemble(const Eigen::VectorXd& target,
                         const Eigen::MatrixXd& regressors,
                         const Eigen::VectorXd& idio_vars,
                         const Eigen::VectorXd& prior_vars) {
    const auto rows = regressors.rows();
    const auto k = regressors.cols();
    if (target.size() != rows || idio_vars.size() != rows || prior_vars.size() != k)
        throw DimensionError("equation draw inputs are inconsistent");
    if (rows == 0 || k == 0)
        throw DimensionError("equation draw requires a non-empty design");
    if (!target.allFinite() || !regressors.allFinite())
        throw NumericError("equation draw requires finite data");
    if (!(idio_vars.array() > 0.0).all() || !idio_vars.allFinite())
        throw NumericError("idiosyncratic variances must be strictly positive");
    if (!(prior_vars.array() > 0.0).all() || !prior_vars.allFinite())
        throw NumericError("prior variances must be strictly positive");

    const Eigen::VectorXd weights = idio_vars.cwiseInverse();
    NormalEquations eq;
    eq.precision = regressors.transpose() * weights.asDiagonal() * regressors;
    eq.precision += prior_vars.cwiseInverse().asDiagonal();
    eq.rhs = regressors.transpose() * target.cwiseProduct(weights);
    return eq;
}

Eigen::LLT<Eigen::MatrixXd> factor_or_throw(const Eigen::MatrixXd& precision) {
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            precision, Eigen::EigenvaluesOnly);
        const double hi = eig.eigenvalues().maxCoeff();
        const double lo = eig.eigenvalues().minCoeff();
        const double cond = hi / std::max(lo, 1e-300);
        throw NumericError(
            "posterior precision is not positive definite (condition number ~" +
            std::to_string(cond) + ", smallest eigenvalue " + std::to_string(lo) +
            ")");
    }
    return llt;
}

}  // namespace

Eigen::MatrixXd build_design(const Panel& panel, int lags, bool include_intercept) {
    const int t_count = panel.periods();
    const int m = panel.series_count();
    const int exog = panel.exog_count();
    if (lags < 1) throw DimensionError("design requires at least one lag");
    if (t_count <= lags)
        throw DimensionError("panel has " + std::to_string(t_count) +
                             " periods, need more than " + std::to_string(lags));

    const int rows = t_count - lags;
    const int k = m * lags + exog + (include_intercept ? 1 : 0);
    Eigen::MatrixXd design(rows, k);
    for (int r = 0; r < rows; ++r) {
        const int t = lags + r;
        for (int p = 0; p < lags; ++p)
            design.row(r).segment(p * m, m) = panel.values.row(t - p - 1);
        if (exog > 0) design.row(r).segment(lags * m, exog) = panel.exogenous.row(t);
        if (include_intercept) design(r, k - 1) = 1.0;
    }
    return design;
}

Eigen::MatrixXd factor_adjusted_targets(const ChainState& state, const Panel& panel) {
    const int rows = panel.periods() - state.lag_count();
    if (state.var_count() != panel.series_count() || rows != state.periods())
        throw DimensionError("state and panel dimensions are inconsistent");
    return panel.values.bottomRows(rows) -
           state.factor_path * state.loadings.transpose();
}

Eigen::VectorXd equation_prior_variances(const ChainState& state, int equation) {
    const int m = state.var_count();
    if (equation < 0 || equation >= m)
        throw DimensionError("equation index out of range");
    const int lags = state.lag_count();
    const auto extras = state.extra_scales.cols();
    Eigen::VectorXd vars(lags * m + extras);
    for (int p = 0; p < lags; ++p)
        vars.segment(p * m, m) = state.local_scales[static_cast<std::size_t>(p)].row(equation);
    if (extras > 0) vars.tail(extras) = state.extra_scales.row(equation);
    return vars;
}

EquationPosterior equation_posterior(const Eigen::VectorXd& target,
                                     const Eigen::MatrixXd& regressors,
                                     const Eigen::VectorXd& idio_vars,
                                     const Eigen::VectorXd& prior_vars) {
    const auto eq = assemble(target, regressors, idio_vars, prior_vars);
    const auto llt = factor_or_throw(eq.precision);
    EquationPosterior post;
    post.mean = llt.solve(eq.rhs);
    post.covariance =
        llt.solve(Eigen::MatrixXd::Identity(eq.precision.rows(), eq.precision.cols()));
    return post;
}

Eigen::VectorXd sample_var_equation(const Eigen::VectorXd& target,
                                    const Eigen::MatrixXd& regressors,
                                    const Eigen::VectorXd& idio_vars,
                                    const Eigen::VectorXd& prior_vars, Rng& rng) {
    const auto eq = assemble(target, regressors, idio_vars, prior_vars);
    const auto llt = factor_or_throw(eq.precision);
    Eigen::VectorXd z(eq.rhs.size());
    for (auto& v : z.reshaped()) v = rng.normal();
    const Eigen::VectorXd draw = llt.solve(eq.rhs) + llt.matrixU().solve(z);
    if (!draw.allFinite())
        throw NumericError("equation draw produced non-finite coefficients");
    return draw;
}

void apply_equation_draw(ChainState& state, int equation,
                         const Eigen::VectorXd& draw) {
    const int m = state.var_count();
    const int lags = state.lag_count();
    const int exog = state.exog_count();
    const bool intercept = state.intercept.size() > 0;
    if (equation < 0 || equation >= m)
        throw DimensionError("equation index out of range");
    if (draw.size() != lags * m + exog + (intercept ? 1 : 0))
        throw DimensionError("coefficient vector has the wrong length");
    for (int p = 0; p < lags; ++p)
        state.coeffs[static_cast<std::size_t>(p)].row(equation) =
            draw.segment(p * m, m);
    if (exog > 0) state.exog_coeffs.row(equation) = draw.segment(lags * m, exog);
    if (intercept) state.intercept(equation) = draw(draw.size() - 1);
}

void sweep_all_equations(ChainState& state, const Panel& panel, Rng& rng) {
    const bool intercept = state.intercept.size() > 0;
    const Eigen::MatrixXd design =
        build_design(panel, state.lag_count(), intercept);
    const Eigen::MatrixXd targets = factor_adjusted_targets(state, panel);
    for (int j = 0; j < state.var_count(); ++j) {
        const Eigen::VectorXd idio_vars = state.idio_logvol.col(j).array().exp();
        try {
            const Eigen::VectorXd draw =
                sample_var_equation(targets.col(j), design, idio_vars,
                                    equation_prior_variances(state, j), rng);
            apply_equation_draw(state, j, draw);
        } catch (const NumericError& e) {
            throw NumericError("equation " + std::to_string(j) + ": " + e.message());
        }
    }
}

double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& coeffs) {
    if (coeffs.empty()) throw DimensionError("no coefficient blocks");
    const auto m = coeffs.front().rows();
    const auto lags = static_cast<Eigen::Index>(coeffs.size());
    for (const auto& block : coeffs)
        if (block.rows() != m || block.cols() != m)
            throw DimensionError("coefficient blocks must be square and equal-sized");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m * lags, m * lags);
    for (Eigen::Index p = 0; p < lags; ++p)
        companion.block(0, p * m, m, m) = coeffs[static_cast<std::size_t>(p)];
    if (lags > 1)
        companion.block(m, 0, m * (lags - 1), m * (lags - 1)) =
            Eigen::MatrixXd::Identity(m * (lags - 1), m * (lags - 1));
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace fsvar
