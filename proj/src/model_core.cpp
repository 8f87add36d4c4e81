#include "fsvar/model_core.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

namespace fsvar {

Eigen::MatrixXd assemble_sigma(const ChainState& state, int t) {
    if (t < 0 || t >= state.periods())
        throw std::out_of_range("time index " + std::to_string(t) +
                                " outside [0, " + std::to_string(state.periods()) +
                                ")");
    const Eigen::VectorXd h = state.factor_logvol.row(t).array().exp();
    Eigen::MatrixXd sigma =
        state.loadings * h.asDiagonal() * state.loadings.transpose();
    sigma.diagonal() += state.idio_logvol.row(t).array().exp().matrix();
    return sigma;
}

Eigen::MatrixXd companion_matrix(const ChainState& state) {
    const int m = state.var_count();
    const int p = state.lag_count();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m * p, m * p);
    for (int lag = 0; lag < p; ++lag)
        companion.block(0, lag * m, m, m) = state.coeffs[static_cast<std::size_t>(lag)];
    if (p > 1)
        companion.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
    return companion;
}

double spectral_radius(const ChainState& state) {
    const Eigen::MatrixXd companion = companion_matrix(state);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace fsvar
