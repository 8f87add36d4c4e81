#include "fsvar/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fsvar/errors.hpp"
#include "fsvar/stats.hpp"

namespace fsvar {

namespace {

std::vector<double> resolve_grid(std::span<const double> probs) {
    std::vector<double> grid(probs.begin(), probs.end());
    if (grid.empty()) grid = default_quantile_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
            throw ConfigError("quantile probabilities must lie in [0, 1]");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ConfigError("quantile grid must be strictly increasing");
    }
    return grid;
}

const double* draw_ptr(const DrawStore& store, int draw) {
    return store.values.data() +
           static_cast<std::size_t>(draw) * static_cast<std::size_t>(store.draw_size());
}

void require_draws(const DrawStore& store, const char* what) {
    if (store.draw_count() < 1)
        throw DataError(std::string(what) + " needs at least one draw");
}

void check_factor(const DrawStore& store, int factor) {
    if (factor < 0 || factor >= store.factors)
        throw DimensionError("factor index " + std::to_string(factor) +
                             " out of range for " + std::to_string(store.factors) +
                             " factors");
}

std::string prob_label(double prob) {
    const double percent = prob * 100.0;
    const long rounded = std::lround(percent);
    char buf[32];
    if (std::abs(percent - static_cast<double>(rounded)) < 1e-9) {
        std::snprintf(buf, sizeof buf, "p%02ld", rounded);
    } else {
        std::snprintf(buf, sizeof buf, "p%g", percent);
    }
    return buf;
}

}  // namespace

std::vector<double> default_quantile_grid() {
    return {0.05, 0.16, 0.5, 0.84, 0.95};
}

std::vector<double> summarize(std::span<const double> draws,
                              std::span<const double> probs) {
    if (draws.empty()) throw DataError("cannot summarize an empty draw set");
    return quantiles(draws, resolve_grid(probs));
}

QuantileTable summarize_columns(const Eigen::MatrixXd& draws_by_item,
                                std::span<const double> probs) {
    QuantileTable table;
    table.probs = resolve_grid(probs);
    if (draws_by_item.rows() < 1)
        throw DataError("cannot summarize an empty draw set");
    table.values.resize(draws_by_item.cols(),
                        static_cast<Eigen::Index>(table.probs.size()));
    std::vector<double> column(static_cast<std::size_t>(draws_by_item.rows()));
    for (Eigen::Index item = 0; item < draws_by_item.cols(); ++item) {
        Eigen::VectorXd::Map(column.data(), draws_by_item.rows()) =
            draws_by_item.col(item);
        const std::vector<double> qs = quantiles(column, table.probs);
        for (std::size_t p = 0; p < qs.size(); ++p)
            table.values(item, static_cast<Eigen::Index>(p)) = qs[p];
    }
    return table;
}

VolatilityPath factor_volatility_path(const DrawStore& store, int factor,
                                      std::span<const double> probs) {
    require_draws(store, "volatility path");
    check_factor(store, factor);
    const DrawLayout lay = store.layout();
    const int draws = store.draw_count();
    const int periods = store.periods;
    const int q = store.factors;

    VolatilityPath path;
    path.draws.resize(draws, periods);
    for (int d = 0; d < draws; ++d) {
        const double* v = draw_ptr(store, d);
        for (int t = 0; t < periods; ++t)
            path.draws(d, t) = std::exp(v[lay.factor_logvol + t * q + factor]);
    }
    path.summary = summarize_columns(path.draws, probs);
    return path;
}

IrfResult impulse_response(const DrawStore& store, int horizon,
                           const std::vector<int>& equity_variables,
                           double impact_target, std::span<const double> probs,
                           int factor) {
    require_draws(store, "impulse response");
    check_factor(store, factor);
    if (horizon < 0) throw DimensionError("impulse horizon must be non-negative");
    if (equity_variables.empty())
        throw ConfigError("equity variable set is empty; the shock scale is undefined");
    const int m = store.var_count;
    for (int idx : equity_variables) {
        if (idx < 0 || idx >= m)
            throw DimensionError("equity variable index " + std::to_string(idx) +
                                 " out of range for " + std::to_string(m) +
                                 " variables");
    }

    const DrawLayout lay = store.layout();
    const int q = store.factors;
    const int lags = store.lags;

    IrfResult result;
    std::vector<Eigen::MatrixXd> coeffs(static_cast<std::size_t>(lags),
                                        Eigen::MatrixXd(m, m));
    for (int d = 0; d < store.draw_count(); ++d) {
        const double* v = draw_ptr(store, d);
        Eigen::VectorXd impact(m);
        for (int j = 0; j < m; ++j) impact(j) = v[lay.loadings + j * q + factor];
        double mean_loading = 0.0;
        for (int idx : equity_variables) mean_loading += impact(idx);
        mean_loading /= static_cast<double>(equity_variables.size());
        if (std::abs(mean_loading) < 1e-8) {
            ++result.excluded_draws;
            continue;
        }
        const double scale = impact_target / mean_loading;

        for (int p = 0; p < lags; ++p)
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i)
                    coeffs[static_cast<std::size_t>(p)](j, i) =
                        v[lay.coeffs + (p * m + j) * m + i];

        Eigen::MatrixXd responses(horizon + 1, m);
        responses.row(0) = (scale * impact).transpose();
        for (int h = 1; h <= horizon; ++h) {
            Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
            for (int p = 1; p <= std::min(h, lags); ++p)
                r += coeffs[static_cast<std::size_t>(p - 1)] *
                     responses.row(h - p).transpose();
            responses.row(h) = r.transpose();
        }
        result.responses.push_back(std::move(responses));
        result.draw_indices.push_back(d);
    }

    if (!result.responses.empty()) {
        const int kept = static_cast<int>(result.responses.size());
        Eigen::MatrixXd by_horizon(kept, horizon + 1);
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < kept; ++k)
                by_horizon.row(k) =
                    result.responses[static_cast<std::size_t>(k)].col(j).transpose();
            result.summaries.push_back(summarize_columns(by_horizon, probs));
        }
    }
    return result;
}

FevdResult variance_shares(const DrawStore& store, std::span<const double> probs) {
    require_draws(store, "variance decomposition");
    const DrawLayout lay = store.layout();
    const int m = store.var_count;
    const int q = store.factors;
    const int periods = store.periods;
    const int draws = store.draw_count();

    FevdResult result;
    result.shares.reserve(static_cast<std::size_t>(draws));
    for (int d = 0; d < draws; ++d) {
        const double* v = draw_ptr(store, d);
        Eigen::MatrixXd share(periods, m);
        for (int t = 0; t < periods; ++t) {
            for (int j = 0; j < m; ++j) {
                double common = 0.0;
                for (int i = 0; i < q; ++i) {
                    const double loading = v[lay.loadings + j * q + i];
                    common += loading * loading *
                              std::exp(v[lay.factor_logvol + t * q + i]);
                }
                share(t, j) =
                    common == 0.0
                        ? 0.0
                        : common /
                              (common + std::exp(v[lay.idio_logvol + t * m + j]));
            }
        }
        result.shares.push_back(std::move(share));
    }

    Eigen::MatrixXd by_period(draws, periods);
    for (int j = 0; j < m; ++j) {
        for (int d = 0; d < draws; ++d)
            by_period.row(d) = result.shares[static_cast<std::size_t>(d)].col(j).transpose();
        result.summaries.push_back(summarize_columns(by_period, probs));
    }
    return result;
}

void write_quantile_csv(const std::string& path,
                        const std::vector<std::string>& item_names,
                        const std::vector<QuantileTable>& tables) {
    if (tables.empty()) throw DimensionError("no quantile tables to write");
    if (item_names.size() != tables.size())
        throw DimensionError("quantile CSV needs one name per table: " +
                             std::to_string(item_names.size()) + " names for " +
                             std::to_string(tables.size()) + " tables");
    for (const QuantileTable& table : tables) {
        if (table.probs != tables.front().probs)
            throw DimensionError("quantile tables mix probability grids");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "variable,time_or_horizon";
    for (double prob : tables.front().probs) out << ',' << prob_label(prob);
    out << '\n';
    char buf[64];
    for (std::size_t k = 0; k < tables.size(); ++k) {
        const Eigen::MatrixXd& values = tables[k].values;
        for (Eigen::Index row = 0; row < values.rows(); ++row) {
            out << item_names[k] << ',' << row;
            for (Eigen::Index col = 0; col < values.cols(); ++col) {
                std::snprintf(buf, sizeof buf, "%.17g", values(row, col));
                out << ',' << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw IoError("failed while writing " + path);
}

}  // namespace fsvar
