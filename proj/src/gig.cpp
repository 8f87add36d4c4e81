#include "fsvar/gig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

// Below this value a chi parameter is treated as zero and the draw is routed
// through the corresponding closed-form limit; see sample_tau.
constexpr double kChiFloor = 1e-300;

// Mode of the standardized density x^(lam−1)·exp(−omega(x+1/x)/2), i.e. the
// positive root of omega·x² − 2(lam−1)·x − omega = 0.  The second form avoids
// cancellation when lam < 1.
double gig_mode(double lam, double omega) {
    if (lam >= 1.0)
        return (std::sqrt((lam - 1.0) * (lam - 1.0) + omega * omega) + (lam - 1.0)) /
               omega;
    return omega /
           (std::sqrt((1.0 - lam) * (1.0 - lam) + omega * omega) + (1.0 - lam));
}

// Ratio-of-uniforms without mode shift.  Valid for lam ≥ 0; efficient when
// the density is not too peaked (used for lam ≤ 2, omega not tiny).
double gig_rou_noshift(double lam, double omega, Rng& rng) {
    const double t = 0.5 * (lam - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lam, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);  // log sqrt(f(xm))
    // Maximum of x·sqrt(f(x)) is at the positive root of s·y² − (t+1)·y − s.
    const double ym = ((lam + 1.0) + std::sqrt((lam + 1.0) * (lam + 1.0) + omega * omega)) /
                      omega;
    const double um = std::exp(0.5 * (lam + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
    for (;;) {
        const double u = um * rng.uniform();
        const double v = rng.uniform();
        const double x = u / v;
        if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
    }
}

// Ratio-of-uniforms with the region shifted to the mode.  Used for large lam
// or omega, where the unshifted region becomes needle-shaped.  Runs on the
// mode-rescaled axis y = x/xm so every intermediate stays O(1) even when the
// mode is astronomically large (large order flipped onto a tiny omega); in
// absolute coordinates the cubic below would overflow there.  The u-bounds
// come from two real roots of the cubic (Cardano, trigonometric branch).
double gig_rou_shift(double lam, double omega, Rng& rng) {
    const double xm = gig_mode(lam, omega);
    const double t = lam - 1.0;
    const double cy = 0.5 * omega * xm;       // coefficient of y
    const double cinv = 0.5 * omega / xm;     // coefficient of 1/y
    // Log-density on the rescaled axis, normalized so lg(1) = 0 at the mode.
    const auto lg = [&](double y) {
        return t * std::log(y) - cy * (y - 1.0) - cinv * (1.0 / y - 1.0);
    };

    // Critical points of (y − 1)²·g(y): y³ + a·y² + b·y + c = 0.
    const double a = -(lam + 1.0 + cy) / cy;
    const double b = (t - cinv) / cy;
    const double c = cinv / cy;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    // The relevant roots straddle the mode, so the discriminant is negative
    // (three real roots); clamp the cosine argument against round-off.  The
    // largest and middle roots bracket y = 1; the smallest is an artifact of
    // clearing the 1/y² term.
    const double arg =
        std::clamp(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)), -1.0, 1.0);
    const double fi = std::acos(arg);
    const double fak = 2.0 * std::sqrt(-p / 3.0);
    const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
    const double y2 = fak * std::cos(fi / 3.0 + 4.0 * std::numbers::pi / 3.0) - a / 3.0;

    const double uplus = (y1 - 1.0) * std::exp(0.5 * lg(y1));
    const double uminus = (y2 - 1.0) * std::exp(0.5 * lg(y2));

    for (;;) {
        const double u = uminus + rng.uniform() * (uplus - uminus);
        const double v = rng.uniform();
        const double y = u / v + 1.0;
        if (y > 0.0 && 2.0 * std::log(v) <= lg(y)) return xm * y;
    }
}

// Rejection from a three-piece hat for 0 ≤ lam < 1 and small omega, where the
// density is unbounded in slope near zero and ratio-of-uniforms degenerates.
// Pieces: the density's own maximum as a constant on (0, x0); k1·x^(lam−1) on
// (x0, 2/omega); k2·exp(−x·omega/2) on the tail.  Each piece dominates the
// unnormalized density on its interval:
//   exp(−omega(x+1/x)/2) ≤ exp(−omega)          (since x + 1/x ≥ 2),
//   x^(lam−1)·exp(−omega/(2x)) ≤ left-endpoint^(lam−1)  (lam − 1 < 0).
double gig_three_piece(double lam, double omega, Rng& rng) {
    const double x0 = omega / (1.0 - lam);
    const double xm = gig_mode(lam, omega);
    const double k0 = std::exp((lam - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
    const double area0 = k0 * x0;

    double k1 = 0.0;
    double area1 = 0.0;
    if (x0 < 2.0 / omega) {
        k1 = std::exp(-omega);
        area1 = (lam == 0.0)
                    ? k1 * std::log(2.0 / (omega * omega))
                    : k1 / lam *
                          (std::pow(2.0 / omega, lam) - std::pow(x0, lam));
    }

    const double tail_start = std::max(x0, 2.0 / omega);
    const double k2 = std::pow(tail_start, lam - 1.0);
    const double area2 = 2.0 * k2 * std::exp(-0.5 * omega * tail_start) / omega;

    const double total = area0 + area1 + area2;
    for (;;) {
        double x;
        double hat;
        const double v = total * rng.uniform();
        if (v <= area0) {
            x = x0 * v / area0;
            hat = k0;
        } else if (v <= area0 + area1) {
            const double w = v - area0;
            x = (lam == 0.0)
                    ? x0 * std::exp(w / k1)
                    : std::pow(std::pow(x0, lam) + w * lam / k1, 1.0 / lam);
            hat = k1 * std::pow(x, lam - 1.0);
        } else {
            const double w = v - area0 - area1;
            x = -2.0 / omega *
                std::log(std::exp(-0.5 * omega * tail_start) - 0.5 * omega * w / k2);
            hat = k2 * std::exp(-0.5 * omega * x);
        }
        const double density =
            std::exp((lam - 1.0) * std::log(x) - 0.5 * omega * (x + 1.0 / x));
        if (rng.uniform() * hat <= density) return x;
    }
}

// Standardized two-parameter draw: density ∝ x^(lam−1)·exp(−omega(x+1/x)/2)
// with lam ≥ 0, omega > 0.  Branch thresholds follow Hörmann & Leydold.
double sample_gig_standard(double lam, double omega, Rng& rng) {
    if (lam > 2.0 || omega > 3.0) return gig_rou_shift(lam, omega, rng);
    if (lam >= 1.0 - 2.25 * omega * omega || omega > 0.2)
        return gig_rou_noshift(lam, omega, rng);
    return gig_three_piece(lam, omega, rng);
}

// Inverse Gaussian IG(mu, shape) by the Michael–Schucany–Haas root-selection
// method; equals GIG(−1/2, chi = shape, psi = shape/mu²).
double sample_inverse_gaussian(double mu, double shape, Rng& rng) {
    const double nu = rng.normal();
    const double y = nu * nu;
    const double x = mu + 0.5 * mu * mu * y / shape -
                     0.5 * mu / shape * std::sqrt(4.0 * mu * shape * y + mu * mu * y * y);
    if (rng.uniform() <= mu / (mu + x)) return x;
    return mu * mu / x;
}

}  // namespace

bool GigParams::valid() const {
    if (!std::isfinite(order) || !std::isfinite(chi) || !std::isfinite(psi))
        return false;
    if (chi < 0.0 || psi < 0.0) return false;
    if (psi > 0.0 && chi > 0.0) return true;
    if (psi > 0.0 && chi == 0.0) return order > 0.0;
    if (psi == 0.0 && chi > 0.0) return order < 0.0;
    return false;
}

double sample_gig(const GigParams& params, Rng& rng) {
    if (!params.valid())
        throw NumericError("invalid GIG parameters (order " +
                           std::to_string(params.order) + ", chi " +
                           std::to_string(params.chi) + ", psi " +
                           std::to_string(params.psi) + ")");
    const double p = params.order;
    const double chi = params.chi;
    const double psi = params.psi;

    // Closed-form limits.
    if (chi == 0.0) return rng.gamma(p, 0.5 * psi);
    if (psi == 0.0) return 1.0 / rng.gamma(-p, 0.5 * chi);
    if (p == -0.5) return sample_inverse_gaussian(std::sqrt(chi / psi), chi, rng);
    if (p == 0.5) return 1.0 / sample_inverse_gaussian(std::sqrt(psi / chi), psi, rng);

    // General case: standardize, flip negative orders through x → 1/x.
    const double alpha = std::sqrt(chi / psi);
    const double omega = std::sqrt(chi * psi);
    const double lam = std::abs(p);
    const double draw = sample_gig_standard(lam, omega, rng);
    return p >= 0.0 ? alpha * draw : alpha / draw;
}

double sample_tau(double beta, double kappa_p, double lambda_sq_p, Rng& rng) {
    if (!(kappa_p > 0.0) || !(lambda_sq_p > 0.0))
        throw NumericError("sample_tau requires positive kappa and lambda_sq");
    const double order = kappa_p - 0.5;
    const double chi = beta * beta;
    const double psi = kappa_p * lambda_sq_p;
    if (chi < kChiFloor) {
        // Coefficient shrunk to numerical zero.  For order > 0 the conditional
        // degenerates to its Gamma limit; otherwise keep a floored chi so the
        // draw stays in the valid (psi > 0, chi > 0) corner.
        if (order > 0.0) return rng.gamma(order, 0.5 * psi);
        return sample_gig({order, kChiFloor, psi}, rng);
    }
    return sample_gig({order, chi, psi}, rng);
}

double sample_lambda_sq(int p, std::span<const double> taus,
                        std::pair<double, double> prior, double kappa_p,
                        std::span<const double> lower_scale_ratios, Rng& rng) {
    const auto [c_p, d_p] = prior;
    if (p < 1) throw NumericError("lag index must be >= 1");
    if (!(c_p > 0.0) || !(d_p > 0.0) || !(kappa_p > 0.0))
        throw NumericError("sample_lambda_sq requires positive prior parameters");
    if (static_cast<int>(lower_scale_ratios.size()) != p - 1)
        throw DimensionError("expected " + std::to_string(p - 1) +
                             " lower-lag scale ratios, got " +
                             std::to_string(lower_scale_ratios.size()));
    if (taus.empty()) throw NumericError("sample_lambda_sq requires a non-empty tau pool");

    double tau_sum = 0.0;
    for (double tau : taus) {
        if (!(tau > 0.0)) throw NumericError("sample_lambda_sq requires positive taus");
        tau_sum += tau;
    }
    double lower_product = 1.0;  // = λ_{p−1}² when ratios are passed per lag
    for (double ratio : lower_scale_ratios) {
        if (!(ratio > 0.0))
            throw NumericError("sample_lambda_sq requires positive lower-lag scales");
        lower_product *= ratio;
    }

    const double shape = c_p + kappa_p * static_cast<double>(taus.size());
    const double rate = d_p + 0.5 * kappa_p * lower_product * tau_sum;
    return lower_product * rng.gamma(shape, rate);
}

}  // namespace fsvar
