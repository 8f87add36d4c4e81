#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsvar/errors.hpp"
#include "fsvar/gig.hpp"
#include "fsvar/rng.hpp"
#include "fsvar/stats.hpp"
#include "support/gig_oracle.hpp"
#include "support/special_functions.hpp"

using fsvar::GigParams;
using fsvar::Rng;
using fsvar::sample_gig;

namespace {

std::vector<double> draw_many(const GigParams& params, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) {
        x = sample_gig(params, rng);
        REQUIRE(x > 0.0);
        REQUIRE(std::isfinite(x));
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("gig");

TEST_CASE("quadrature oracle is grid-converged") {
    // The oracle itself must be trustworthy before it judges the sampler:
    // halving the step must not move moments beyond tight numerical noise.
    for (const auto& [p, chi, psi] :
         {std::tuple{0.1, 0.6, 1.2}, {2.0, 2.0, 0.5}, {-0.35, 0.8, 0.6}}) {
        const auto coarse = gig_oracle::Quadrature(p, chi, psi, 0.004).moments();
        const auto fine = gig_oracle::Quadrature(p, chi, psi, 0.002).moments();
        CHECK(coarse.mean == doctest::Approx(fine.mean).epsilon(1e-9));
        CHECK(coarse.variance == doctest::Approx(fine.variance).epsilon(1e-8));
    }
}

TEST_CASE("order -1/2 mean equals sqrt(chi/psi)") {
    const GigParams params{-0.5, 0.6, 1.2};
    const auto draws = draw_many(params, 400000, 101);
    const double want = std::sqrt(0.6 / 1.2);
    const double se = std::sqrt(fsvar::variance(draws) / draws.size());
    CHECK(std::abs(fsvar::mean(draws) - want) < 3.0 * se);
}

TEST_CASE("chi = 0 reduces to a Gamma draw") {
    const GigParams params{2.0, 0.0, 3.0};
    const auto draws = draw_many(params, 300000, 55);
    const double se = std::sqrt(fsvar::variance(draws) / draws.size());
    CHECK(std::abs(fsvar::mean(draws) - 4.0 / 3.0) < 3.0 * se);
    const auto ks = fsvar::ks_one_sample(
        draws, [](double x) { return test_support::gamma_cdf(x, 2.0, 1.5); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("psi = 0 reduces to an inverse-Gamma draw") {
    const GigParams params{-1.7, 2.0, 0.0};
    const auto draws = draw_many(params, 200000, 56);
    // 1/X ~ Gamma(1.7, rate 1).
    const auto ks = fsvar::ks_one_sample(draws, [](double x) {
        return 1.0 - test_support::gamma_cdf(1.0 / x, 1.7, 1.0);
    });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("moments match the quadrature oracle on the general path") {
    const GigParams params{0.1, 0.6, 1.2};
    const auto oracle = gig_oracle::Quadrature(0.1, 0.6, 1.2).moments();
    const auto draws = draw_many(params, 1000000, 77);
    CHECK(fsvar::mean(draws) == doctest::Approx(oracle.mean).epsilon(0.01));
    CHECK(fsvar::variance(draws) == doctest::Approx(oracle.variance).epsilon(0.01));
}

TEST_CASE("every algorithm branch passes a KS test against the integrated CDF") {
    struct Case {
        const char* label;
        GigParams params;
    };
    const Case cases[] = {
        {"rou-noshift", {0.6, 0.6, 1.2}},
        {"rou-shift large order", {5.0, 2.0, 3.0}},
        {"rou-shift large omega", {0.3, 9.0, 4.0}},
        {"three-piece small omega", {0.3, 0.01, 1.0}},
        {"negative order inversion", {-0.35, 1e-4, 0.6}},
        {"half order inverse-Gaussian flip", {0.5, 1.3, 0.9}},
        {"deep negative order (large standardized lam)", {-60.5, 20.0, 1.0}},
    };
    for (const auto& c : cases) {
        const gig_oracle::Quadrature oracle(c.params.order, c.params.chi, c.params.psi);
        const auto draws = draw_many(c.params, 100000, 1000 + c.params.order);
        const auto ks =
            fsvar::ks_one_sample(draws, [&](double x) { return oracle.cdf(x); });
        INFO(c.label);
        CHECK(ks.p_value > 0.01);
    }
}

TEST_CASE("near-zero chi with a large negative order matches the inverse-Gamma limit") {
    // Degenerate corner reached when a variance conditional collapses (sum of
    // squares at the numerical floor).  The draw lives around chi/(2·|order|);
    // scaling by 2/chi must reproduce the inverse of a unit-rate Gamma.
    const GigParams params{-24.5, 1e-300, 1.0};
    Rng rng(77);
    std::vector<double> scaled(20000);
    for (auto& x : scaled) {
        const double draw = sample_gig(params, rng);
        REQUIRE(std::isfinite(draw));
        REQUIRE(draw > 0.0);
        x = 0.5 * params.chi / draw;
    }
    const auto ks = fsvar::ks_one_sample(
        scaled, [&](double x) { return test_support::gamma_cdf(x, 24.5, 1.0); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("invalid parameter corners are rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_gig({-0.5, 0.0, 3.0}, rng), fsvar::NumericError);  // chi=0, p<0
    CHECK_THROWS_AS(sample_gig({0.0, 0.0, 3.0}, rng), fsvar::NumericError);   // chi=0, p=0
    CHECK_THROWS_AS(sample_gig({0.5, 2.0, 0.0}, rng), fsvar::NumericError);   // psi=0, p>0
    CHECK_THROWS_AS(sample_gig({0.0, 0.0, 0.0}, rng), fsvar::NumericError);
    CHECK_THROWS_AS(sample_gig({1.0, -1.0, 1.0}, rng), fsvar::NumericError);
}

TEST_CASE("local scale draw with beta = 0 is the exact Gamma limit") {
    Rng rng(9);
    const double kappa = 0.6;
    const double lambda_sq = 2.0;
    std::vector<double> draws(200000);
    for (auto& x : draws) x = fsvar::sample_tau(0.0, kappa, lambda_sq, rng);
    // Gamma(kappa - 1/2, kappa * lambda_sq / 2) = Gamma(0.1, 0.6).
    const auto ks = fsvar::ks_one_sample(
        draws, [&](double x) { return test_support::gamma_cdf(x, 0.1, 0.6); });
    CHECK(ks.p_value > 0.01);
    const double se = std::sqrt(fsvar::variance(draws) / draws.size());
    CHECK(std::abs(fsvar::mean(draws) - 0.1 / 0.6) < 3.0 * se);
}

TEST_CASE("local scale draw matches quadrature for beta = 1") {
    Rng rng(10);
    std::vector<double> draws(600000);
    for (auto& x : draws) x = fsvar::sample_tau(1.0, 0.6, 1.0, rng);
    const auto oracle = gig_oracle::Quadrature(0.1, 1.0, 0.6).moments();
    CHECK(fsvar::mean(draws) == doctest::Approx(oracle.mean).epsilon(0.01));
}

TEST_CASE("local scale means grow with |beta| and track quadrature") {
    Rng rng(12);
    double previous_mean = 0.0;
    for (const double beta : {1.0, 5.0, 25.0}) {
        std::vector<double> draws(300000);
        for (auto& x : draws) x = fsvar::sample_tau(beta, 0.6, 1.0, rng);
        const auto oracle = gig_oracle::Quadrature(0.1, beta * beta, 0.6).moments();
        const double m = fsvar::mean(draws);
        CHECK(m == doctest::Approx(oracle.mean).epsilon(0.01));
        CHECK(m > previous_mean);
        previous_mean = m;
    }
}

TEST_CASE("tiny beta routes through the Gamma limit without underflow") {
    Rng rng(14);
    // kappa < 1/2 gives a negative order where chi -> 0 is an invalid corner;
    // the floor keeps the draw inside the valid region.
    for (int i = 0; i < 1000; ++i) {
        const double low = fsvar::sample_tau(1e-200, 0.15, 1.0, rng);
        CHECK(low > 0.0);
        CHECK(std::isfinite(low));
        const double pos = fsvar::sample_tau(0.0, 0.6, 1.0, rng);
        CHECK(pos > 0.0);
    }
}

TEST_CASE("global scale draw for the first lag matches the printed Gamma") {
    Rng rng(30);
    // k = 4 coefficients, kappa = 0.6, prior (3, 0.03), tau sum 2:
    // Gamma(shape 5.4, rate 0.63), mean 8.5714...
    const std::vector<double> taus{0.5, 0.5, 0.5, 0.5};
    std::vector<double> draws(200000);
    for (auto& x : draws)
        x = fsvar::sample_lambda_sq(1, taus, {3.0, 0.03}, 0.6, {}, rng);
    const double want_mean = 5.4 / 0.63;
    const double se = std::sqrt(fsvar::variance(draws) / draws.size());
    CHECK(std::abs(fsvar::mean(draws) - want_mean) < 3.0 * se);
    const auto ks = fsvar::ks_one_sample(
        draws, [](double x) { return test_support::gamma_cdf(x, 5.4, 0.63); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("global scale draw for lag 2 matches a symbolically expanded rate") {
    Rng rng(31);
    const std::vector<double> taus{1.3, 0.9, 0.7, 0.5};  // sum 3.4
    const double kappa = 0.15;
    const std::vector<double> lower{0.7};  // λ₁² (equals the lag-1 ratio scale)
    std::vector<double> draws(300000);
    for (auto& x : draws)
        x = fsvar::sample_lambda_sq(2, taus, {3.0, 0.03}, kappa, lower, rng);
    // Expanded by hand: shape = 3 + 0.15*4 = 3.6,
    // rate = 0.03 + 0.15 * 0.7 * 3.4 / 2 = 0.2085; the return value is the
    // Gamma draw scaled by 0.7.
    const double want_mean = 0.7 * 3.6 / 0.2085;
    const double want_var = 0.7 * 0.7 * 3.6 / (0.2085 * 0.2085);
    const double se = std::sqrt(fsvar::variance(draws) / draws.size());
    CHECK(std::abs(fsvar::mean(draws) - want_mean) < 3.0 * se);
    CHECK(fsvar::variance(draws) == doctest::Approx(want_var).epsilon(0.02));
}

TEST_CASE("vanishing tau pool approaches the prior-dominated limit") {
    Rng rng(32);
    const std::vector<double> taus(9, 1e-12);
    std::vector<double> draws(100000);
    for (auto& x : draws)
        x = fsvar::sample_lambda_sq(1, taus, {3.0, 0.03}, 0.6, {}, rng);
    // Gamma(3 + 0.6*9, ~0.03): mean ~ 8.4/0.03 = 280.
    CHECK(fsvar::mean(draws) == doctest::Approx(8.4 / 0.03).epsilon(0.02));
}

TEST_CASE("global scale rejects invalid pools") {
    Rng rng(33);
    const std::vector<double> bad{1.0, -0.5};
    const std::vector<double> good{1.0, 0.5};
    CHECK_THROWS_AS(fsvar::sample_lambda_sq(1, bad, {3.0, 0.03}, 0.6, {}, rng),
                    fsvar::NumericError);
    CHECK_THROWS_AS(
        fsvar::sample_lambda_sq(2, good, {3.0, 0.03}, 0.6, {}, rng),
        fsvar::DimensionError);  // missing lower-lag scale
    CHECK_THROWS_AS(
        fsvar::sample_lambda_sq(1, std::vector<double>{}, {3.0, 0.03}, 0.6, {}, rng),
        fsvar::NumericError);
}

TEST_CASE("prior hierarchy reproduces the marginal coefficient variance") {
    // Var(beta) = 2/lambda_sq when tau ~ Gamma(kappa, kappa) scales the
    // conditional variance 2*tau/lambda_sq.
    Rng rng(34);
    const double kappa = 0.6;
    const double lambda_sq = 2.0;
    const int n = 1000000;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau = rng.gamma(kappa, kappa);
        const double beta = rng.normal(0.0, std::sqrt(2.0 * tau / lambda_sq));
        sum_sq += beta * beta;
    }
    CHECK(sum_sq / n == doctest::Approx(2.0 / lambda_sq).epsilon(0.01));
}

TEST_SUITE_END();
