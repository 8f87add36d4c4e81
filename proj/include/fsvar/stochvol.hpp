#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fsvar/chain_state.hpp"
#include "fsvar/model_spec.hpp"
#include "fsvar/rng.hpp"

namespace fsvar {

// One log-volatility process: the latent path and its AR(1) parameters.
struct SvSeries {
    Eigen::VectorXd logvol;  // length T
    SvParams params;
};

// Draws a full log-variance path from its conditional posterior given
// mean-zero observations with Var(obs_t) = exp(logvol_t) and the series'
// current parameters.  Uses the log-squared-data transform with a
// 10-component Gaussian mixture for the log-chi-squared error and
// forward-filter backward-sampling for the linear state space.
Eigen::VectorXd sample_logvol_path(const Eigen::VectorXd& observations,
                                   const SvSeries& series, Rng& rng);

// Draws (level, persistence, innovation variance) from their conditional
// posterior given the path, in the centered parameterization: a generalized
// inverse Gaussian draw for the innovation variance, a Gaussian-proposal
// Metropolis step against the Beta prior for the persistence, and an exact
// Gaussian draw for the level.  `current` supplies the Metropolis starting
// point.
SvParams sample_sv_params(const Eigen::VectorXd& path, const SvPrior& prior,
                          const SvParams& current, Rng& rng);

// Full per-series Gibbs block: mixture indicators, path draw, centered
// parameter draws, then a non-centered (interweaved) re-draw of the
// parameters to break the path/parameter dependence.  Updates `series` in
// place.
void update_sv_series(const Eigen::VectorXd& observations, SvSeries& series,
                      const SvPrior& prior, Rng& rng);

// Starting values: smoothed log squared observations for the path, the path
// mean with moderate persistence for the parameters.
SvSeries init_sv_series(const Eigen::VectorXd& observations);

namespace sv_detail {

// Transformed observations log(obs² + offset); the offset guards exact zeros.
Eigen::VectorXd log_squared(const Eigen::VectorXd& observations);

// Mixture component indicator draw given the transformed data and the path.
std::vector<int> sample_mixture_indicators(const Eigen::VectorXd& ystar,
                                           const Eigen::VectorXd& logvol,
                                           Rng& rng);

// Forward-filter backward-sample of the path given indicators and parameters.
Eigen::VectorXd ffbs(const Eigen::VectorXd& ystar,
                     const std::vector<int>& indicators, const SvParams& params,
                     Rng& rng);

}  // namespace sv_detail

}  // namespace fsvar
