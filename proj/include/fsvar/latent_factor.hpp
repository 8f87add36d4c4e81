#pragma once

#include <Eigen/Dense>

#include "fsvar/rng.hpp"

namespace fsvar {

// Latent factor and loading draws.  Residual rows are time points; factor and
// idiosyncratic variance matrices carry levels (not logs) with the same row
// convention.  The batch functions consume one stream sequentially; the
// per-unit functions exist so the sweep driver can hand each work unit its
// own stream and keep draws independent of the thread count.

// Factor draw at a single time point: f ~ N(V·X'Ω⁻¹ε, V) with
// V = (X'Ω⁻¹X + H⁻¹)⁻¹ for Ω = diag(idio_vars_t), H = diag(factor_vars_t).
Eigen::VectorXd sample_factor_at(const Eigen::VectorXd& residual_t,
                                 const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& factor_vars_t,
                                 const Eigen::VectorXd& idio_vars_t, Rng& rng);

Eigen::MatrixXd sample_factors(const Eigen::MatrixXd& residuals,
                               const Eigen::MatrixXd& loadings,
                               const Eigen::MatrixXd& factor_vars,
                               const Eigen::MatrixXd& idio_vars, Rng& rng);

// One full loading row including identification: row i < q regresses on
// factors 0..i−1 with factor i's unit contribution subtracted (the pinned
// entry never enters the draw), and columns beyond i stay structural zeros;
// rows i ≥ q regress on all q factors.
Eigen::VectorXd sample_loading_row(int row, const Eigen::MatrixXd& residuals,
                                   const Eigen::MatrixXd& factors,
                                   const Eigen::MatrixXd& idio_vars,
                                   double prior_variance, Rng& rng);

Eigen::MatrixXd sample_loadings(const Eigen::MatrixXd& residuals,
                                const Eigen::MatrixXd& factors,
                                const Eigen::MatrixXd& idio_vars,
                                double prior_variance, Rng& rng);

}  // namespace fsvar
