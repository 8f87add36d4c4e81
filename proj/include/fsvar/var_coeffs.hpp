#pragma once

#include <Eigen/Dense>

#include "fsvar/chain_state.hpp"
#include "fsvar/panel.hpp"
#include "fsvar/rng.hpp"

namespace fsvar {

// Equation-by-equation draw of the VAR coefficient block.  All equations
// share one design matrix over the effective sample; they are conditionally
// independent, so the sweep driver may process them in any order or in
// parallel via the per-equation pieces below.

// Design matrix over the effective sample: row r corresponds to panel time
// t = lags + r and stacks [y_{t−1}, …, y_{t−lags}, exog_t, 1 (optional)].
Eigen::MatrixXd build_design(const Panel& panel, int lags, bool include_intercept);

// Factor-adjusted targets aligned with the design rows: column j holds
// y_{jt} − (X f_t)_j over the effective sample.
Eigen::MatrixXd factor_adjusted_targets(const ChainState& state, const Panel& panel);

// Prior variances for one equation in design-column order (lag blocks, then
// exogenous, then intercept), read straight from the state's stored scales.
Eigen::VectorXd equation_prior_variances(const ChainState& state, int equation);

struct EquationPosterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

// Closed-form conditional moments N(b̄, V̄) with V̄ = (Z′WZ + D⁻¹)⁻¹ and
// b̄ = V̄ Z′W ŷ, where W = diag(1/idio_vars) and D = diag(prior_vars).
EquationPosterior equation_posterior(const Eigen::VectorXd& target,
                                     const Eigen::MatrixXd& regressors,
                                     const Eigen::VectorXd& idio_vars,
                                     const Eigen::VectorXd& prior_vars);

// One draw from the conditional above.
Eigen::VectorXd sample_var_equation(const Eigen::VectorXd& target,
                                    const Eigen::MatrixXd& regressors,
                                    const Eigen::VectorXd& idio_vars,
                                    const Eigen::VectorXd& prior_vars, Rng& rng);

// Writes one equation's drawn coefficient vector back into the state.
void apply_equation_draw(ChainState& state, int equation,
                         const Eigen::VectorXd& draw);

// Redraws every equation in index order.
void sweep_all_equations(ChainState& state, const Panel& panel, Rng& rng);

// Largest eigenvalue modulus of the companion matrix stacked from the lag
// blocks; < 1 means the VAR is stable.
double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& coeffs);

}  // namespace fsvar
