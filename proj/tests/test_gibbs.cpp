#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "fsvar/chain_state.hpp"
#include "fsvar/errors.hpp"
#include "fsvar/gibbs.hpp"
#include "fsvar/model_spec.hpp"
#include "fsvar/panel.hpp"
#include "fsvar/rng.hpp"
#include "fsvar/var_coeffs.hpp"

using fsvar::ChainState;
using fsvar::ModelSpec;
using fsvar::Panel;
using fsvar::Rng;

namespace {

// Truth set for a small two-variable, one-factor model.
ChainState small_truth(int periods, double b_scale = 0.4) {
    ChainState truth = fsvar::make_empty_state(2, 1, 1, periods);
    truth.coeffs[0] << b_scale, 0.1, -0.1, b_scale;
    truth.loadings << 1.0, 0.5;
    truth.factor_sv[0] = {std::log(0.7), 0.9, 0.05};
    truth.idio_sv[0] = {std::log(0.3), 0.9, 0.05};
    truth.idio_sv[1] = {std::log(0.5), 0.9, 0.05};
    return truth;
}

ModelSpec quick_spec(int lags, int burn, int keep, int thin,
                     std::uint64_t seed, int threads = 1) {
    ModelSpec spec = ModelSpec::defaults(lags);
    spec.mcmc.burn_in = burn;
    spec.mcmc.keep = keep;
    spec.mcmc.thin = thin;
    spec.mcmc.seed = seed;
    spec.mcmc.threads = threads;
    return spec;
}

}  // namespace

TEST_SUITE_BEGIN("gibbs");

TEST_CASE("zero-coefficient simulation reproduces the time-average covariance") {
    const int t_count = 20000;
    ChainState truth = small_truth(t_count - 1, 0.0);
    truth.coeffs[0].setZero();
    truth.factor_sv[0] = {std::log(0.7), 0.9, 0.1};
    Rng rng(1);
    const auto sim = fsvar::simulate_panel(ModelSpec::defaults(1), truth,
                                           t_count, rng);

    // Conditional on the realized variance paths, y_t are independent
    // Gaussians, so the sample second moment must approach the time-average
    // of Σ_t = X h_t X′ + Ω_t computed from the stored truth.
    const int n = sim.truth.periods();
    const Eigen::MatrixXd y = sim.panel.values.bottomRows(n);
    const Eigen::MatrixXd sample_cov = y.transpose() * y / n;
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
    for (int t = 0; t < n; ++t) {
        const double h = std::exp(sim.truth.factor_logvol(t, 0));
        expected += truth.loadings * h * truth.loadings.transpose();
        expected(0, 0) += std::exp(sim.truth.idio_logvol(t, 0));
        expected(1, 1) += std::exp(sim.truth.idio_logvol(t, 1));
    }
    expected /= n;
    CHECK((sample_cov - expected).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("near-constant volatilities give white noise with the stated variance") {
    const int t_count = 20000;
    ChainState truth = small_truth(t_count - 1, 0.0);
    truth.coeffs[0].setZero();
    truth.factor_sv[0] = {std::log(0.7), 0.0, 1e-8};
    truth.idio_sv[0] = {std::log(0.3), 0.0, 1e-8};
    truth.idio_sv[1] = {std::log(0.5), 0.0, 1e-8};
    Rng rng(2);
    const auto sim = fsvar::simulate_panel(ModelSpec::defaults(1), truth,
                                           t_count, rng);

    Eigen::MatrixXd sigma = truth.loadings * 0.7 * truth.loadings.transpose();
    sigma(0, 0) += 0.3;
    sigma(1, 1) += 0.5;
    const Eigen::MatrixXd y = sim.panel.values;
    const Eigen::MatrixXd sample_cov = y.transpose() * y / t_count;
    CHECK((sample_cov - sigma).cwiseAbs().maxCoeff() < 0.1);

    // Lag-1 autocovariance vanishes without VAR dynamics.
    const Eigen::MatrixXd lead = y.bottomRows(t_count - 1);
    const Eigen::MatrixXd lag = y.topRows(t_count - 1);
    CHECK((lead.transpose() * lag / (t_count - 1)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("simulation is deterministic and checks its inputs") {
    ChainState truth = small_truth(59);
    Rng rng_a(7);
    Rng rng_b(7);
    const auto sim_a = fsvar::simulate_panel(ModelSpec::defaults(1), truth, 60, rng_a);
    const auto sim_b = fsvar::simulate_panel(ModelSpec::defaults(1), truth, 60, rng_b);
    CHECK(sim_a.panel.values == sim_b.panel.values);
    sim_a.truth.validate();
    CHECK(sim_a.truth.periods() == 59);
    CHECK(sim_a.panel.periods() == 60);

    ChainState unstable = small_truth(59);
    unstable.coeffs[0] << 1.01, 0.0, 0.0, 0.2;
    Rng rng_c(8);
    CHECK_THROWS_AS(
        (void)fsvar::simulate_panel(ModelSpec::defaults(1), unstable, 60, rng_c),
        fsvar::ConfigError);
    CHECK_THROWS_AS(
        (void)fsvar::simulate_panel(ModelSpec::defaults(2), truth, 60, rng_c),
        fsvar::ConfigError);
}

TEST_CASE("equal seeds give bit-identical chains for any thread count") {
    ChainState truth = small_truth(59);
    Rng rng(3);
    const auto sim = fsvar::simulate_panel(ModelSpec::defaults(1), truth, 60, rng);

    const auto run = [&](int threads) {
        return fsvar::run_chain(sim.panel, quick_spec(1, 20, 10, 2, 42, threads));
    };
    const auto base = run(1);
    const auto repeat = run(1);
    const auto wide = run(4);
    CHECK(base.values == repeat.values);
    CHECK(base.stable == repeat.stable);
    CHECK(base.values == wide.values);
    CHECK(base.stable == wide.stable);
    CHECK(base.draw_count() == 10);
}

TEST_CASE("thinning retains exactly every thin-th post-burn-in sweep") {
    ChainState truth = small_truth(39);
    Rng rng(4);
    const auto sim = fsvar::simulate_panel(ModelSpec::defaults(1), truth, 40, rng);

    const auto thinned = fsvar::run_chain(sim.panel, quick_spec(1, 7, 5, 3, 11));
    const auto dense = fsvar::run_chain(sim.panel, quick_spec(1, 7, 15, 1, 11));
    REQUIRE(thinned.draw_count() == 5);
    REQUIRE(dense.draw_count() == 15);
    // Sweep streams are keyed by sweep index, so retention timing cannot
    // change the draws; thinned draw d must equal dense draw d·3 + 2.
    const long size = thinned.draw_size();
    for (int d = 0; d < 5; ++d)
        for (long k = 0; k < size; ++k)
            REQUIRE(thinned.values[d * size + k] ==
                    dense.values[(d * 3 + 2) * size + k]);
}

TEST_CASE("a short smoke chain keeps every invariant on every draw") {
    ChainState truth = small_truth(59);
    Rng rng(5);
    const auto sim = fsvar::simulate_panel(ModelSpec::defaults(1), truth, 60, rng);
    const auto store = fsvar::run_chain(sim.panel, quick_spec(1, 100, 200, 1, 9));

    REQUIRE(store.draw_count() == 200);
    for (int d = 0; d < store.draw_count(); ++d)
        store.state_at(d).validate();  // throws on any violated invariant
    CHECK(store.wall_time_seconds > 0.0);

    const auto diagnostics = fsvar::chain_diagnostics(store);
    CHECK(diagnostics.size() >= 5);
    for (const auto& entry : diagnostics) {
        CHECK(std::isfinite(entry.split_rhat));
        CHECK(entry.split_rhat > 0.9);
        CHECK(entry.split_rhat < 3.0);
    }
}

TEST_CASE("initialization produces a valid state near the ridge fit") {
    ChainState truth = small_truth(399);
    Rng rng(6);
    const auto sim = fsvar::simulate_panel(ModelSpec::defaults(1), truth, 400, rng);
    const ChainState init = fsvar::init_chain(sim.panel, ModelSpec::defaults(1));
    init.validate();
    CHECK((init.coeffs[0] - truth.coeffs[0]).cwiseAbs().maxCoeff() < 0.5);
    CHECK(init.loadings(0, 0) == 1.0);
}

TEST_CASE("failures inside a sweep carry the sweep index and block name") {
    // Two exactly collinear constant series with an enormous prior variance
    // make the equation draw's factorization fail deterministically.
    Panel panel;
    panel.values = Eigen::MatrixXd(5, 2);
    panel.values.col(0).setConstant(16.0);
    panel.values.col(1).setConstant(32.0);
    panel.names = {"a", "b"};
    panel.validate();

    ChainState state = fsvar::make_empty_state(2, 1, 1, 4);
    state.local_scales[0].setConstant(1e300);
    const ModelSpec spec = ModelSpec::defaults(1);
    const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
    try {
        fsvar::gibbs_sweep(state, panel, design, spec, 1, 3, {});
        FAIL("expected a numeric error");
    } catch (const fsvar::NumericError& e) {
        const std::string message = e.what();
        CHECK(message.find("sweep 3") != std::string::npos);
        CHECK(message.find("var_coeffs") != std::string::npos);
    }
}

TEST_CASE("companion radius matches hand-computed spectra") {
    std::vector<Eigen::MatrixXd> single{Eigen::MatrixXd(2, 2)};
    single[0] << 0.5, 0.0, 0.0, -0.3;
    CHECK(fsvar::companion_spectral_radius(single) == doctest::Approx(0.5));

    // Scalar AR(2) y_t = 0.5 y_{t−1} + 0.4 y_{t−2}: largest root of
    // z² − 0.5z − 0.4.
    std::vector<Eigen::MatrixXd> twolag{Eigen::MatrixXd(1, 1),
                                        Eigen::MatrixXd(1, 1)};
    twolag[0] << 0.5;
    twolag[1] << 0.4;
    const double expected = (0.5 + std::sqrt(0.25 + 1.6)) / 2.0;
    CHECK(fsvar::companion_spectral_radius(twolag) == doctest::Approx(expected));
}

TEST_SUITE_END();
