#include "fsvar/latent_factor.hpp"

#include <algorithm>
#include <string>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

void require_positive(const Eigen::Ref<const Eigen::VectorXd>& values,
                      const char* label) {
    if (!(values.array() > 0.0).all() || !values.allFinite())
        throw NumericError(std::string(label) + " must be strictly positive");
}

// Draw from N(A⁻¹·rhs, A⁻¹) for a symmetric positive-definite precision A.
Eigen::VectorXd gaussian_from_precision(const Eigen::MatrixXd& precision,
                                        const Eigen::VectorXd& rhs, Rng& rng) {
    const Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success)
        throw NumericError("conditional precision matrix is not positive definite");
    Eigen::VectorXd z(rhs.size());
    for (auto& v : z.reshaped()) v = rng.normal();
    return llt.solve(rhs) + llt.matrixU().solve(z);
}

}  // namespace

Eigen::VectorXd sample_factor_at(const Eigen::VectorXd& residual_t,
                                 const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& factor_vars_t,
                                 const Eigen::VectorXd& idio_vars_t, Rng& rng) {
    const auto m = residual_t.size();
    const auto q = loadings.cols();
    if (loadings.rows() != m || idio_vars_t.size() != m || factor_vars_t.size() != q)
        throw DimensionError("factor draw inputs are inconsistent");
    require_positive(factor_vars_t, "factor variances");
    require_positive(idio_vars_t, "idiosyncratic variances");

    const Eigen::VectorXd idio_prec = idio_vars_t.cwiseInverse();
    Eigen::MatrixXd precision = loadings.transpose() * idio_prec.asDiagonal() * loadings;
    precision.diagonal() += factor_vars_t.cwiseInverse();
    const Eigen::VectorXd rhs =
        loadings.transpose() * residual_t.cwiseProduct(idio_prec);
    return gaussian_from_precision(precision, rhs, rng);
}

Eigen::MatrixXd sample_factors(const Eigen::MatrixXd& residuals,
                               const Eigen::MatrixXd& loadings,
                               const Eigen::MatrixXd& factor_vars,
                               const Eigen::MatrixXd& idio_vars, Rng& rng) {
    const auto t_count = residuals.rows();
    if (factor_vars.rows() != t_count || idio_vars.rows() != t_count ||
        idio_vars.cols() != residuals.cols() ||
        factor_vars.cols() != loadings.cols())
        throw DimensionError("factor path inputs are inconsistent");
    Eigen::MatrixXd path(t_count, loadings.cols());
    for (Eigen::Index t = 0; t < t_count; ++t)
        path.row(t) = sample_factor_at(residuals.row(t), loadings,
                                       factor_vars.row(t), idio_vars.row(t), rng)
                          .transpose();
    return path;
}

Eigen::VectorXd sample_loading_row(int row, const Eigen::MatrixXd& residuals,
                                   const Eigen::MatrixXd& factors,
                                   const Eigen::MatrixXd& idio_vars,
                                   double prior_variance, Rng& rng) {
    const auto t_count = residuals.rows();
    const auto m = residuals.cols();
    const auto q = factors.cols();
    if (factors.rows() != t_count || idio_vars.rows() != t_count ||
        idio_vars.cols() != m)
        throw DimensionError("loading draw inputs are inconsistent");
    if (row < 0 || row >= m) throw DimensionError("loading row out of range");
    if (!(prior_variance > 0.0))
        throw NumericError("loading prior variance must be positive");
    require_positive(idio_vars.col(row), "idiosyncratic variances");

    const bool pinned = row < q;
    const auto free = pinned ? static_cast<Eigen::Index>(row) : q;

    Eigen::VectorXd out = Eigen::VectorXd::Zero(q);
    if (pinned) out(row) = 1.0;
    if (free == 0) return out;

    const Eigen::VectorXd weights = idio_vars.col(row).cwiseInverse();
    Eigen::VectorXd target = residuals.col(row);
    if (pinned) target -= factors.col(row);

    const auto design = factors.leftCols(free);
    Eigen::MatrixXd precision = design.transpose() * weights.asDiagonal() * design;
    precision.diagonal().array() += 1.0 / prior_variance;
    const Eigen::VectorXd rhs = design.transpose() * target.cwiseProduct(weights);
    out.head(free) = gaussian_from_precision(precision, rhs, rng);
    return out;
}

Eigen::MatrixXd sample_loadings(const Eigen::MatrixXd& residuals,
                                const Eigen::MatrixXd& factors,
                                const Eigen::MatrixXd& idio_vars,
                                double prior_variance, Rng& rng) {
    Eigen::MatrixXd loadings(residuals.cols(), factors.cols());
    for (Eigen::Index row = 0; row < residuals.cols(); ++row)
        loadings.row(row) = sample_loading_row(static_cast<int>(row), residuals,
                                               factors, idio_vars, prior_variance,
                                               rng)
                                .transpose();
    return loadings;
}

}  // namespace fsvar
