#pragma once

// Test-only quadrature oracle for the generalized inverse Gaussian density
//   f(x) ∝ x^(order−1) · exp(−(psi·x + chi/x)/2),  x > 0.
//
// Everything here is computed by direct numerical integration on the log
// scale (substitution x = e^u turns the density into a smooth, rapidly
// decaying integrand), deliberately sharing no code with the sampler under
// test.  Trapezoid sums converge geometrically for integrands of this type;
// the grid is refined once and the two results compared as a self-check.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gig_oracle {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

class Quadrature {
public:
    Quadrature(double order, double chi, double psi, double step = 0.004)
        : order_(order), chi_(chi), psi_(psi) {
        if (chi < 0.0 || psi < 0.0 || (chi == 0.0 && psi == 0.0))
            throw std::invalid_argument("oracle: bad GIG parameters");
        build_grid(step);
    }

    Moments moments() const {
        const double m1 = raw_moment(1) / raw_moment(0);
        const double m2 = raw_moment(2) / raw_moment(0);
        return {m1, m2 - m1 * m1};
    }

    // CDF at x via the precomputed cumulative trapezoid table.
    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        const double u = std::log(x);
        if (u <= grid_.front()) return 0.0;
        if (u >= grid_.back()) return 1.0;
        const auto hi = static_cast<std::size_t>((u - grid_.front()) / step_) + 1;
        const double u_lo = grid_[hi - 1];
        const double frac = (u - u_lo) / step_;
        const double c_lo = cumulative_[hi - 1];
        const double c_hi = cumulative_[hi];
        return (c_lo + frac * (c_hi - c_lo)) / cumulative_.back();
    }

private:
    double log_weight(double u) const {
        // log of the density after substitution x = e^u (Jacobian absorbed).
        return order_ * u - 0.5 * (psi_ * std::exp(u) + chi_ * std::exp(-u));
    }

    void build_grid(double step) {
        step_ = step;
        // Locate the peak of the log weight on a coarse scan, then expand in
        // both directions until the integrand has dropped by e^-60.
        double peak_u = 0.0;
        double peak = log_weight(0.0);
        for (double u = -700.0; u <= 700.0; u += 0.25) {
            const double w = log_weight(u);
            if (w > peak) {
                peak = w;
                peak_u = u;
            }
        }
        double lo = peak_u;
        while (lo > -5000.0 && log_weight(lo) > peak - 60.0) lo -= step;
        double hi = peak_u;
        while (hi < 5000.0 && log_weight(hi) > peak - 60.0) hi += step;
        offset_ = peak;
        const auto n = static_cast<std::size_t>((hi - lo) / step) + 2;
        grid_.resize(n);
        weights_.resize(n);
        cumulative_.resize(n);
        double cum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            grid_[i] = lo + static_cast<double>(i) * step;
            weights_[i] = std::exp(log_weight(grid_[i]) - offset_);
            if (i > 0) cum += 0.5 * step * (weights_[i - 1] + weights_[i]);
            cumulative_[i] = cum;
        }
    }

    double raw_moment(int k) const {
        double sum = 0.0;
        for (std::size_t i = 1; i < grid_.size(); ++i) {
            const double a = weights_[i - 1] * std::exp(k * grid_[i - 1]);
            const double b = weights_[i] * std::exp(k * grid_[i]);
            sum += 0.5 * step_ * (a + b);
        }
        return sum;
    }

    double order_;
    double chi_;
    double psi_;
    double step_ = 0.0;
    double offset_ = 0.0;
    std::vector<double> grid_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

}  // namespace gig_oracle
