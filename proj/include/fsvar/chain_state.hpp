#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fsvar {

// AR(1) parameters of one log-volatility process.
struct SvParams {
    double level = 0.0;           // unconditional mean of the log-variance
    double persistence = 0.9;     // AR coefficient, |persistence| < 1
    double innovation_var = 0.1;  // variance of the AR innovations
};

// One complete parameter configuration of the sampler.  Latent paths cover
// the effective sample (panel rows P..T−1, the rows with a full lag window),
// so periods() here is panel.periods() − lags.
//
// coeffs[p](j, i) is the coefficient of variable i at lag p+1 in equation j.
// local_scales[p](j, i) is that coefficient's conditional prior variance
// (the Normal-Gamma local scale in variance units); extra_scales holds the
// same for exogenous/intercept coefficients, which share the lag-1 pool.
// global_scales[p] is the lag-level scale λ² whose prior mean fixes overall
// shrinkage; scale_ratios[p] is the per-lag ratio so that global_scales[p] =
// Π_{z≤p} scale_ratios[z].
struct ChainState {
    std::vector<Eigen::MatrixXd> coeffs;        // P of m×m
    Eigen::MatrixXd exog_coeffs;                // m×x (0 columns when absent)
    Eigen::VectorXd intercept;                  // m, or size 0 when disabled

    Eigen::MatrixXd loadings;                   // m×q, identification-pinned
    Eigen::MatrixXd factor_path;                // periods×q
    Eigen::MatrixXd factor_logvol;              // periods×q
    std::vector<SvParams> factor_sv;            // q
    Eigen::MatrixXd idio_logvol;                // periods×m
    std::vector<SvParams> idio_sv;              // m

    std::vector<Eigen::MatrixXd> local_scales;  // P of m×m
    Eigen::MatrixXd extra_scales;               // m×(x + intercept)
    std::vector<double> global_scales;          // P
    std::vector<double> scale_ratios;           // P

    int var_count() const { return static_cast<int>(loadings.rows()); }
    int factor_count() const { return static_cast<int>(loadings.cols()); }
    int lag_count() const { return static_cast<int>(coeffs.size()); }
    int periods() const { return static_cast<int>(factor_path.rows()); }
    int exog_count() const { return static_cast<int>(exog_coeffs.cols()); }

    // Total number of scalar parameters (used by draw storage).
    long scalar_count() const;

    // Enforces every structural invariant: shape consistency, pinned
    // loadings, stationarity bounds, positivity, finiteness.
    void validate() const;
};

// A ChainState sized for (m, P, q, periods, exog, intercept) with neutral
// values: zero coefficients, pinned loadings, flat volatilities, unit scales.
ChainState make_empty_state(int m, int lags, int factors, int periods,
                            int exog_count = 0, bool intercept = false);

}  // namespace fsvar
