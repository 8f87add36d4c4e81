#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fsvar/chain_state.hpp"
#include "fsvar/errors.hpp"
#include "fsvar/panel.hpp"
#include "fsvar/rng.hpp"
#include "fsvar/stats.hpp"
#include "fsvar/var_coeffs.hpp"

using fsvar::ChainState;
using fsvar::Panel;
using fsvar::Rng;

namespace {

Panel make_panel(const Eigen::MatrixXd& values,
                 const Eigen::MatrixXd& exog = Eigen::MatrixXd()) {
    Panel panel;
    panel.values = values;
    const auto m = static_cast<std::size_t>(values.cols());
    for (std::size_t j = 0; j < m; ++j) panel.names.push_back("v" + std::to_string(j));
    panel.country_tags.assign(m, "");
    panel.kind_tags.assign(m, "");
    panel.transforms.assign(m, "none");
    panel.seasonally_adjusted.assign(m, 0);
    panel.exogenous =
        exog.size() > 0 ? exog : Eigen::MatrixXd(values.rows(), 0);
    return panel;
}

Eigen::MatrixXd simulate_var1(const Eigen::MatrixXd& coeffs, int t_count,
                              Rng& rng) {
    const auto m = coeffs.rows();
    Eigen::MatrixXd values(t_count, m);
    Eigen::VectorXd current = Eigen::VectorXd::Zero(m);
    for (int t = -50; t < t_count; ++t) {
        Eigen::VectorXd shock(m);
        for (auto& x : shock.reshaped()) x = rng.normal();
        current = coeffs * current + shock;
        if (t >= 0) values.row(t) = current;
    }
    return values;
}

}  // namespace

TEST_SUITE_BEGIN("var_coeffs");

TEST_CASE("flat prior and unit variances reduce to ordinary least squares") {
    Rng rng(1);
    Eigen::MatrixXd truth(2, 2);
    truth << 0.5, 0.2, -0.1, 0.4;
    const Eigen::MatrixXd values = simulate_var1(truth, 200, rng);
    const Panel panel = make_panel(values);
    const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
    const Eigen::VectorXd target = values.col(0).tail(199);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(199);
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(2, 1e10);

    const Eigen::VectorXd ols =
        (design.transpose() * design).inverse() * design.transpose() * target;
    const Eigen::MatrixXd ols_cov = (design.transpose() * design).inverse();

    const int reps = 2000;
    Eigen::VectorXd mean_draw = Eigen::VectorXd::Zero(2);
    for (int rep = 0; rep < reps; ++rep)
        mean_draw += fsvar::sample_var_equation(target, design, ones, flat, rng) / reps;
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(mean_draw(i) - ols(i)) < 4.0 * std::sqrt(ols_cov(i, i) / reps));
}

TEST_CASE("vanishing prior variance shrinks the draw to zero") {
    Rng rng(2);
    Eigen::MatrixXd truth(2, 2);
    truth << 0.5, 0.2, -0.1, 0.4;
    const Eigen::MatrixXd values = simulate_var1(truth, 100, rng);
    const Panel panel = make_panel(values);
    const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
    const Eigen::VectorXd target = values.col(1).tail(99);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(99);
    const Eigen::VectorXd tight = Eigen::VectorXd::Constant(2, 1e-12);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::VectorXd draw =
            fsvar::sample_var_equation(target, design, ones, tight, rng);
        CHECK(draw.cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("posterior moments match an explicit dense inversion") {
    Rng rng(3);
    Eigen::MatrixXd truth(2, 2);
    truth << 0.6, -0.2, 0.1, 0.3;
    const Eigen::MatrixXd values = simulate_var1(truth, 50, rng);
    const Panel panel = make_panel(values);
    const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
    const Eigen::VectorXd target = values.col(0).tail(49);
    Eigen::VectorXd idio(49);
    for (int t = 0; t < 49; ++t) idio(t) = std::exp(std::sin(0.3 * t));
    Eigen::VectorXd prior(2);
    prior << 0.8, 2.5;

    // Oracle: explicit weighted normal equations via dense inversion.
    Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(49, 49);
    for (int t = 0; t < 49; ++t) weight(t, t) = 1.0 / idio(t);
    Eigen::MatrixXd d_inv = Eigen::MatrixXd::Zero(2, 2);
    for (int i = 0; i < 2; ++i) d_inv(i, i) = 1.0 / prior(i);
    const Eigen::MatrixXd cov_oracle =
        (design.transpose() * weight * design + d_inv).inverse();
    const Eigen::VectorXd mean_oracle =
        cov_oracle * design.transpose() * weight * target;

    const auto post = fsvar::equation_posterior(target, design, idio, prior);
    CHECK((post.mean - mean_oracle).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((post.covariance - cov_oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("homoskedastic case matches the conjugate textbook formula") {
    Rng rng(4);
    Eigen::MatrixXd truth(2, 2);
    truth << 0.4, 0.1, 0.2, 0.5;
    const Eigen::MatrixXd values = simulate_var1(truth, 80, rng);
    const Panel panel = make_panel(values);
    const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
    const Eigen::VectorXd target = values.col(1).tail(79);
    const double sigma_sq = 2.5;
    const Eigen::VectorXd idio = Eigen::VectorXd::Constant(79, sigma_sq);
    Eigen::VectorXd prior(2);
    prior << 1.5, 0.4;

    Eigen::MatrixXd d_inv = Eigen::MatrixXd::Zero(2, 2);
    for (int i = 0; i < 2; ++i) d_inv(i, i) = 1.0 / prior(i);
    const Eigen::MatrixXd cov_oracle =
        (design.transpose() * design / sigma_sq + d_inv).inverse();
    const Eigen::VectorXd mean_oracle =
        cov_oracle * design.transpose() * target / sigma_sq;

    const auto post = fsvar::equation_posterior(target, design, idio, prior);
    CHECK((post.mean - mean_oracle).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((post.covariance - cov_oracle).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("design rows align lags, exogenous terms and the intercept") {
    Eigen::MatrixXd values(3, 2);
    values << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
    Eigen::MatrixXd exog(3, 1);
    exog << 10.0, 20.0, 30.0;
    const Panel panel = make_panel(values, exog);

    const Eigen::MatrixXd one_lag = fsvar::build_design(panel, 1, true);
    REQUIRE(one_lag.rows() == 2);
    REQUIRE(one_lag.cols() == 4);
    // Row for t = 1: y_0, exog_1, constant.
    CHECK(one_lag(0, 0) == 1.0);
    CHECK(one_lag(0, 1) == 2.0);
    CHECK(one_lag(0, 2) == 20.0);
    CHECK(one_lag(0, 3) == 1.0);
    // Row for t = 2: y_1, exog_2, constant.
    CHECK(one_lag(1, 0) == 3.0);
    CHECK(one_lag(1, 1) == 4.0);
    CHECK(one_lag(1, 2) == 30.0);
    CHECK(one_lag(1, 3) == 1.0);

    const Eigen::MatrixXd two_lags = fsvar::build_design(panel, 2, false);
    REQUIRE(two_lags.rows() == 1);
    REQUIRE(two_lags.cols() == 5);
    // Row for t = 2: y_1, then y_0, then exog_2.
    CHECK(two_lags(0, 0) == 3.0);
    CHECK(two_lags(0, 1) == 4.0);
    CHECK(two_lags(0, 2) == 1.0);
    CHECK(two_lags(0, 3) == 2.0);
    CHECK(two_lags(0, 4) == 30.0);
}

TEST_CASE("stored scales map one-to-one onto the prior variance vector") {
    ChainState state = fsvar::make_empty_state(2, 2, 1, 30, 1, true);
    for (int p = 0; p < 2; ++p)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
                state.local_scales[static_cast<std::size_t>(p)](j, i) =
                    100.0 * (p + 1) + 10.0 * j + i;
    state.extra_scales << 7.0, 8.0, 9.0, 11.0;

    const Eigen::VectorXd vars = fsvar::equation_prior_variances(state, 1);
    REQUIRE(vars.size() == 6);
    CHECK(vars(0) == 110.0);
    CHECK(vars(1) == 111.0);
    CHECK(vars(2) == 210.0);
    CHECK(vars(3) == 211.0);
    CHECK(vars(4) == 9.0);
    CHECK(vars(5) == 11.0);
}

TEST_CASE("single-variable sweep equals the single-equation draw") {
    Rng sim_rng(5);
    Eigen::MatrixXd truth(1, 1);
    truth << 0.7;
    const Eigen::MatrixXd values = simulate_var1(truth, 40, sim_rng);
    const Panel panel = make_panel(values);
    ChainState state = fsvar::make_empty_state(1, 1, 1, 39);

    Rng rng_a(6);
    fsvar::sweep_all_equations(state, panel, rng_a);

    Rng rng_b(6);
    const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
    const Eigen::VectorXd draw = fsvar::sample_var_equation(
        values.col(0).tail(39), design, Eigen::VectorXd::Ones(39),
        Eigen::VectorXd::Ones(1), rng_b);
    CHECK(state.coeffs[0](0, 0) == draw(0));
}

TEST_CASE("zero-variance second-lag prior silences the lag-2 block") {
    Rng rng(7);
    Eigen::MatrixXd truth(2, 2);
    truth << 0.5, 0.2, -0.1, 0.4;
    const Eigen::MatrixXd values = simulate_var1(truth, 400, rng);
    const Panel panel = make_panel(values);
    ChainState state = fsvar::make_empty_state(2, 2, 1, 398);
    state.local_scales[1].setConstant(1e-12);

    Eigen::MatrixXd lag1_mean = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd lag2_abs = Eigen::MatrixXd::Zero(2, 2);
    const int reps = 60;
    for (int rep = 0; rep < reps; ++rep) {
        fsvar::sweep_all_equations(state, panel, rng);
        lag1_mean += state.coeffs[0] / reps;
        lag2_abs += state.coeffs[1].cwiseAbs() / reps;
    }
    CHECK(lag2_abs.maxCoeff() < 0.01);
    CHECK((lag1_mean - truth).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("equation processing order does not change the draw distribution") {
    Rng sim_rng(8);
    Eigen::MatrixXd truth(2, 2);
    truth << 0.5, 0.2, -0.1, 0.4;
    const Eigen::MatrixXd values = simulate_var1(truth, 80, sim_rng);
    const Panel panel = make_panel(values);

    const int sweeps = 10000;
    std::vector<double> fwd00, fwd11, fwd01;
    {
        ChainState state = fsvar::make_empty_state(2, 1, 1, 79);
        Rng rng(9);
        for (int s = 0; s < sweeps; ++s) {
            fsvar::sweep_all_equations(state, panel, rng);
            fwd00.push_back(state.coeffs[0](0, 0));
            fwd11.push_back(state.coeffs[0](1, 1));
            fwd01.push_back(state.coeffs[0](0, 1));
        }
    }
    std::vector<double> rev00, rev11, rev01;
    {
        ChainState state = fsvar::make_empty_state(2, 1, 1, 79);
        Rng rng(10);
        const Eigen::MatrixXd design = fsvar::build_design(panel, 1, false);
        for (int s = 0; s < sweeps; ++s) {
            const Eigen::MatrixXd targets = fsvar::factor_adjusted_targets(state, panel);
            for (int j = 1; j >= 0; --j) {
                const Eigen::VectorXd idio = state.idio_logvol.col(j).array().exp();
                const Eigen::VectorXd draw = fsvar::sample_var_equation(
                    targets.col(j), design, idio,
                    fsvar::equation_prior_variances(state, j), rng);
                fsvar::apply_equation_draw(state, j, draw);
            }
            rev00.push_back(state.coeffs[0](0, 0));
            rev11.push_back(state.coeffs[0](1, 1));
            rev01.push_back(state.coeffs[0](0, 1));
        }
    }
    CHECK(fsvar::ks_two_sample(fwd00, rev00).p_value > 0.01);
    CHECK(fsvar::ks_two_sample(fwd11, rev11).p_value > 0.01);
    CHECK(fsvar::ks_two_sample(fwd01, rev01).p_value > 0.01);
}

TEST_CASE("degenerate inputs raise with the documented categories") {
    Rng rng(11);
    const Eigen::MatrixXd design = Eigen::MatrixXd::Ones(10, 2);
    const Eigen::VectorXd target = Eigen::VectorXd::Ones(10);
    const Eigen::VectorXd ones10 = Eigen::VectorXd::Ones(10);
    const Eigen::VectorXd prior2 = Eigen::VectorXd::Ones(2);

    CHECK_THROWS_AS((void)fsvar::sample_var_equation(
                        Eigen::VectorXd::Ones(9), design, ones10, prior2, rng),
                    fsvar::DimensionError);
    CHECK_THROWS_AS((void)fsvar::sample_var_equation(
                        target, design, ones10, Eigen::VectorXd::Ones(3), rng),
                    fsvar::DimensionError);
    CHECK_THROWS_AS((void)fsvar::sample_var_equation(
                        target, design, -ones10, prior2, rng),
                    fsvar::NumericError);
    CHECK_THROWS_AS((void)fsvar::sample_var_equation(
                        target, design, ones10, Eigen::VectorXd::Zero(2), rng),
                    fsvar::NumericError);
    Eigen::VectorXd bad_target = target;
    bad_target(3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(
        (void)fsvar::sample_var_equation(bad_target, design, ones10, prior2, rng),
        fsvar::NumericError);
}

TEST_CASE("an exactly collinear design reports its condition number") {
    Rng rng(12);
    // Power-of-two column values make the rank deficiency exact in floating
    // point, so the factorisation fails deterministically.
    Eigen::MatrixXd design(4, 2);
    design << 16, 32, 16, 32, 16, 32, 16, 32;
    const Eigen::VectorXd target = Eigen::VectorXd::Ones(4);
    const Eigen::VectorXd idio = Eigen::VectorXd::Ones(4);
    const Eigen::VectorXd prior = Eigen::VectorXd::Constant(2, 1e280);
    try {
        (void)fsvar::sample_var_equation(target, design, idio, prior, rng);
        FAIL("expected a numeric error");
    } catch (const fsvar::NumericError& e) {
        CHECK(std::string(e.what()).find("condition number") != std::string::npos);
    }
}

TEST_SUITE_END();
