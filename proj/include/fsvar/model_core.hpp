#pragma once

#include <Eigen/Dense>

#include "fsvar/chain_state.hpp"

namespace fsvar {

// Time-t error covariance: loadings · diag(factor variances at t) · loadingsᵀ
// + diag(idiosyncratic variances at t).  t indexes the effective sample,
// 0 ≤ t < state.periods().
Eigen::MatrixXd assemble_sigma(const ChainState& state, int t);

// Stacked first-order form of the lag polynomial: top block row holds the
// coefficient matrices [B_1 … B_P], identity blocks on the subdiagonal.
Eigen::MatrixXd companion_matrix(const ChainState& state);

// Largest eigenvalue modulus of the companion matrix; < 1 means the draw's
// deterministic dynamics are stable.  Used to flag draws, never reject them.
double spectral_radius(const ChainState& state);

}  // namespace fsvar
