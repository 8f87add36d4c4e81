#pragma once

#include <span>
#include <utility>

#include "fsvar/rng.hpp"

namespace fsvar {

// Parameters of the generalized inverse Gaussian distribution with density
//   f(x) ∝ x^(order−1) · exp(−(psi·x + chi/x) / 2),   x > 0.
// Valid corners: (psi > 0, chi > 0) for any order; (psi > 0, chi = 0) only for
// order > 0 (Gamma limit); (psi = 0, chi > 0) only for order < 0 (inverse
// Gamma limit).
struct GigParams {
    double order = 0.0;
    double chi = 0.0;  // weight on 1/x
    double psi = 0.0;  // weight on x

    bool valid() const;
};

// Exact GIG sampler.  Dispatches on the standardized parameters
// (|order|, sqrt(chi*psi)) between a mode-shifted ratio-of-uniforms method, a
// plain ratio-of-uniforms method and a three-piece hat rejection scheme for
// the density-unbounded-near-zero corner, with closed-form fast paths for the
// Gamma, inverse-Gamma and inverse-Gaussian special cases.
double sample_gig(const GigParams& params, Rng& rng);

// One local shrinkage scale for a single coefficient: a draw from
// GIG(kappa_p − 1/2, beta², kappa_p·lambda_sq_p).  The returned value is the
// coefficient's conditional prior variance (see var_coeffs).  Squared
// coefficients below 1e−300 are routed through the Gamma limit of the GIG to
// avoid underflow in the standardized parameterization.
double sample_tau(double beta, double kappa_p, double lambda_sq_p, Rng& rng);

// Lag-level global scale λ_p².  `taus` holds every local scale in lag p's
// pool, `prior` is the (c_p, d_p) Gamma prior pair, and `lower_scale_ratios`
// holds, for p > 1, the per-lag ratio scales δ_z = λ_z²/λ_{z−1}² of the lags
// below p (empty for p = 1).  The conditional is
//   Gamma(c_p + kappa_p·k,  d_p + kappa_p·(Π_z δ_z)·Στ / 2)
// for the ratio scale of lag p; the returned value is the resulting λ_p²
// (the Gamma draw times Π_z δ_z), so δ_p is implicitly λ_p² / λ_{p−1}².
double sample_lambda_sq(int p, std::span<const double> taus,
                        std::pair<double, double> prior, double kappa_p,
                        std::span<const double> lower_scale_ratios, Rng& rng);

}  // namespace fsvar
