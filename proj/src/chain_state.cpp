#include "fsvar/chain_state.hpp"

#include <cmath>
#include <string>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

void require_finite(const Eigen::MatrixXd& mat, const char* what) {
    if (!mat.allFinite())
        throw NumericError(std::string("non-finite entries in ") + what);
}

}  // namespace

long ChainState::scalar_count() const {
    const long m = var_count();
    const long q = factor_count();
    const long p = lag_count();
    const long t = periods();
    const long x = exog_count();
    const long icpt = intercept.size();
    return p * m * m            // lag coefficients
           + m * x + icpt       // exogenous + intercept
           + m * q              // loadings
           + t * q * 2          // factor path + log-variances
           + 3 * q              // factor SV parameters
           + t * m              // idiosyncratic log-variances
           + 3 * m              // idiosyncratic SV parameters
           + p * m * m          // local scales
           + m * x + icpt       // extra scales
           + 2 * p;             // global scales + ratios
}

void ChainState::validate() const {
    const int m = var_count();
    const int q = factor_count();
    const int p = lag_count();
    const int t = periods();

    if (m < 1 || q < 1 || p < 1 || t < 1)
        throw DimensionError("chain state has empty dimensions");
    if (q > m) throw DimensionError("factor count exceeds variable count");

    for (const auto& block : coeffs)
        if (block.rows() != m || block.cols() != m)
            throw DimensionError("coefficient block is not m×m");
    if (intercept.size() != 0 && intercept.size() != m)
        throw DimensionError("intercept length differs from variable count");
    if (exog_coeffs.size() > 0 && exog_coeffs.rows() != m)
        throw DimensionError("exogenous coefficient rows differ from variable count");
    if (factor_logvol.rows() != t || factor_logvol.cols() != q)
        throw DimensionError("factor log-variance block has wrong shape");
    if (idio_logvol.rows() != t || idio_logvol.cols() != m)
        throw DimensionError("idiosyncratic log-variance block has wrong shape");
    if (static_cast<int>(factor_sv.size()) != q ||
        static_cast<int>(idio_sv.size()) != m)
        throw DimensionError("volatility parameter count mismatch");
    if (static_cast<int>(local_scales.size()) != p)
        throw DimensionError("local scale blocks do not match lag count");
    for (const auto& block : local_scales)
        if (block.rows() != m || block.cols() != m)
            throw DimensionError("local scale block is not m×m");
    const Eigen::Index want_extra_cols =
        exog_coeffs.cols() + (intercept.size() > 0 ? 1 : 0);
    if (want_extra_cols > 0 &&
        (extra_scales.rows() != m || extra_scales.cols() != want_extra_cols))
        throw DimensionError("extra scale block has wrong shape");
    if (static_cast<int>(global_scales.size()) != p ||
        static_cast<int>(scale_ratios.size()) != p)
        throw DimensionError("global scale vectors do not match lag count");

    // Identification pins: loadings(i, i) = 1 and zeros above the diagonal of
    // the leading q×q block, bit-exactly.
    for (int i = 0; i < q; ++i) {
        if (loadings(i, i) != 1.0)
            throw NumericError("pinned loading (" + std::to_string(i) + "," +
                               std::to_string(i) + ") is not exactly 1");
        for (int z = i + 1; z < q; ++z)
            if (loadings(i, z) != 0.0)
                throw NumericError("structural zero loading (" + std::to_string(i) +
                                   "," + std::to_string(z) + ") violated");
    }

    for (const auto& sv : factor_sv)
        if (!(std::abs(sv.persistence) < 1.0) || !(sv.innovation_var > 0.0) ||
            !std::isfinite(sv.level))
            throw NumericError("factor volatility parameters out of range");
    for (const auto& sv : idio_sv)
        if (!(std::abs(sv.persistence) < 1.0) || !(sv.innovation_var > 0.0) ||
            !std::isfinite(sv.level))
            throw NumericError("idiosyncratic volatility parameters out of range");

    for (int lag = 0; lag < p; ++lag) {
        if (!(global_scales[lag] > 0.0) || !(scale_ratios[lag] > 0.0))
            throw NumericError("global scales must be strictly positive");
        if (!(local_scales[lag].minCoeff() > 0.0))
            throw NumericError("local scales must be strictly positive");
    }
    if (extra_scales.size() > 0 && !(extra_scales.minCoeff() > 0.0))
        throw NumericError("extra scales must be strictly positive");

    for (const auto& block : coeffs) require_finite(block, "coefficients");
    require_finite(loadings, "loadings");
    require_finite(factor_path, "factor path");
    require_finite(factor_logvol, "factor log-variances");
    require_finite(idio_logvol, "idiosyncratic log-variances");
    if (exog_coeffs.size() > 0) require_finite(exog_coeffs, "exogenous coefficients");
    if (intercept.size() > 0 && !intercept.allFinite())
        throw NumericError("non-finite intercept");
}

ChainState make_empty_state(int m, int lags, int factors, int periods,
                            int exog_count, bool intercept) {
    ChainState state;
    state.coeffs.assign(lags, Eigen::MatrixXd::Zero(m, m));
    state.exog_coeffs = Eigen::MatrixXd::Zero(m, exog_count);
    state.intercept = intercept ? Eigen::VectorXd::Zero(m) : Eigen::VectorXd();
    state.loadings = Eigen::MatrixXd::Zero(m, factors);
    for (int i = 0; i < factors; ++i) state.loadings(i, i) = 1.0;
    state.factor_path = Eigen::MatrixXd::Zero(periods, factors);
    state.factor_logvol = Eigen::MatrixXd::Zero(periods, factors);
    state.factor_sv.assign(factors, SvParams{});
    state.idio_logvol = Eigen::MatrixXd::Zero(periods, m);
    state.idio_sv.assign(m, SvParams{});
    state.local_scales.assign(lags, Eigen::MatrixXd::Ones(m, m));
    const int extra_cols = exog_count + (intercept ? 1 : 0);
    state.extra_scales = Eigen::MatrixXd::Ones(m, extra_cols);
    state.global_scales.assign(lags, 1.0);
    state.scale_ratios.assign(lags, 1.0);
    return state;
}

}  // namespace fsvar
