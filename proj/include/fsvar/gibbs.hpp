#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsvar/chain_state.hpp"
#include "fsvar/draw_store.hpp"
#include "fsvar/model_spec.hpp"
#include "fsvar/panel.hpp"
#include "fsvar/rng.hpp"

namespace fsvar {

// Options threaded through a sweep.  lambda_rate_factor rescales the rate of
// the lag-level scale conditional and exists solely as the mutation hook for
// the sampler consistency harness; 1.0 is the faithful sampler.
struct SweepOptions {
    int threads = 1;
    double lambda_rate_factor = 1.0;
};

// One full Gibbs sweep over the seven blocks, in order: (1) VAR coefficients
// on factor-adjusted data, (2) idiosyncratic volatility paths and parameters,
// (3) the factor path, (4) loadings, (5) factor volatility paths and
// parameters, (6) local shrinkage scales, (7) lag-level scales.  Randomness
// comes from per-work-unit streams keyed by (seed, sweep_index, block, unit),
// so the result is independent of the thread count.  `design` must be
// build_design(panel, spec.lags, spec.include_intercept); it is hoisted out
// because it never changes across sweeps.
void gibbs_sweep(ChainState& state, const Panel& panel,
                 const Eigen::MatrixXd& design, const ModelSpec& spec,
                 std::uint64_t seed, long sweep_index,
                 const SweepOptions& options = {});

// Data-driven starting state: ridge-regression coefficients (penalty 0.1),
// principal-component factors and loadings rescaled to honor the pinned
// entries, smoothed log-squared residuals for the volatility paths, unit
// local scales and prior-mean global scales.
ChainState init_chain(const Panel& panel, const ModelSpec& spec);

// Full chain: initialization, spec.mcmc.burn_in discarded sweeps, then
// spec.mcmc.keep retained draws at spacing spec.mcmc.thin.  Every retained
// draw is validated before storage and flagged with its companion-stability
// check.  Deterministic in (panel, spec, spec.mcmc.seed) for any thread
// count.
DrawStore run_chain(const Panel& panel, const ModelSpec& spec);

// Split-chain potential-scale-reduction for a fixed panel of monitored
// scalars spanning the sampler blocks.  Diagnostic only; values near 1
// indicate the first and second halves of the chain agree.
struct DiagnosticEntry {
    std::string name;
    double split_rhat = 0.0;
};
std::vector<DiagnosticEntry> chain_diagnostics(const DrawStore& store);

// Forward simulation of the model: both log-variance families start from
// their stationary laws, factors and idiosyncratic shocks are drawn from the
// simulated variances, and the VAR recursion accumulates from zero initial
// conditions with a discarded 100-step warm-up.  `truth` supplies
// coefficients, loadings and volatility parameters; its latent paths are
// ignored and the realized ones over the effective sample are returned.
// Exogenous regressors, when present in the truth geometry, are drawn as
// independent standard normals and stored in the panel.
struct SimulatedPanel {
    Panel panel;
    ChainState truth;
};
SimulatedPanel simulate_panel(const ModelSpec& spec, const ChainState& truth,
                              int t_count, Rng& rng);

}  // namespace fsvar
