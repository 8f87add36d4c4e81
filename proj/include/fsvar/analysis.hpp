#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsvar/draw_store.hpp"

namespace fsvar {

// Posterior summaries computed from a draw store: the factor-variance path,
// impulse responses to a scaled factor shock, and innovation-variance
// shares.  All functions are pure readers of the store.

// Quantile summaries: `values` rows follow the object's item axis (time or
// horizon), columns follow `probs`.
struct QuantileTable {
    std::vector<double> probs;
    Eigen::MatrixXd values;  // items × probs
};

// {0.05, 0.16, 0.5, 0.84, 0.95}: the median with one- and roughly
// two-standard-deviation bands.
std::vector<double> default_quantile_grid();

// Empirical quantiles of one draw vector with linear interpolation between
// order statistics; errors on an empty draw axis or a non-increasing grid.
std::vector<double> summarize(std::span<const double> draws,
                              std::span<const double> probs);

// Column-wise quantiles of a draws × items matrix.
QuantileTable summarize_columns(const Eigen::MatrixXd& draws_by_item,
                                std::span<const double> probs);

// Factor variance path h_t = exp(factor log-variance) per draw and period.
// An empty `probs` means the default grid.
struct VolatilityPath {
    Eigen::MatrixXd draws;  // draw_count × periods
    QuantileTable summary;  // periods × probs
};
VolatilityPath factor_volatility_path(const DrawStore& store, int factor = 0,
                                      std::span<const double> probs = {});

// Impulse responses to a one-time unit impulse in the chosen factor, scaled
// per draw so the mean impact across the configured equity variables equals
// `impact_target` (−10 by default: a ten percent decline for logged
// variables).  Later horizons follow the draw's lag polynomial.  Draws whose
// mean equity loading is numerically zero (|mean| < 1e−8) cannot be scaled
// and are excluded; the count is reported.
struct IrfResult {
    std::vector<Eigen::MatrixXd> responses;  // per included draw: (H+1) × m
    std::vector<int> draw_indices;           // store indices of included draws
    int excluded_draws = 0;
    std::vector<QuantileTable> summaries;    // one (H+1) × probs table per variable
};
IrfResult impulse_response(const DrawStore& store, int horizon,
                           const std::vector<int>& equity_variables,
                           double impact_target = -10.0,
                           std::span<const double> probs = {}, int factor = 0);

// One-step innovation-variance shares (Σ_i X²_{ji} h_{it}) / (… + ω_{jt})
// per draw, period and variable.
struct FevdResult {
    std::vector<Eigen::MatrixXd> shares;   // per draw: periods × m
    std::vector<QuantileTable> summaries;  // one periods × probs table per variable
};
FevdResult variance_shares(const DrawStore& store,
                           std::span<const double> probs = {});

// Quantile tables as CSV: variable, time_or_horizon, then one column per
// probability (p05, p16, …).  All tables must share one probability grid.
void write_quantile_csv(const std::string& path,
                        const std::vector<std::string>& item_names,
                        const std::vector<QuantileTable>& tables);

}  // namespace fsvar
