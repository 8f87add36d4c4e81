#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsvar/analysis.hpp"
#include "fsvar/config.hpp"
#include "fsvar/csv.hpp"
#include "fsvar/draw_store.hpp"
#include "fsvar/errors.hpp"
#include "fsvar/getting_it_right.hpp"
#include "fsvar/gibbs.hpp"
#include "fsvar/ingest.hpp"
#include "fsvar/var_coeffs.hpp"

namespace {

namespace fs = std::filesystem;

// Shared flag values; subcommands read what they need.
struct Options {
    std::string config_path;
    std::string output_dir = ".";
    std::string store_path;  // default: <output-dir>/draws.fsvd
    std::string quantiles_text;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    int horizon = -1;
    int variables = 3;
    int periods = 200;
    long cycles = 10000;
    int prior_draws = 4000;
    int t_count = 40;
};

fsvar::RunConfig effective_config(const Options& opt) {
    fsvar::RunConfig config;
    if (!opt.config_path.empty()) config = fsvar::load_config(opt.config_path);
    if (opt.seed_set) config.spec.mcmc.seed = opt.seed;
    if (opt.threads > 0) config.spec.mcmc.threads = opt.threads;
    if (opt.horizon >= 0) config.analysis.horizon = opt.horizon;
    if (!opt.quantiles_text.empty()) {
        std::vector<double> grid;
        std::string text = opt.quantiles_text;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = text.find(',', pos);
            const std::string piece =
                text.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            try {
                std::size_t used = 0;
                grid.push_back(std::stod(piece, &used));
                if (used != piece.size()) throw std::invalid_argument(piece);
            } catch (const std::exception&) {
                throw fsvar::ConfigError("--quantiles entry '" + piece +
                                         "' is not a number");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        config.analysis.quantiles = grid;
    }
    config.validate();
    return config;
}

fs::path ensure_output_dir(const Options& opt) {
    const fs::path dir(opt.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw fsvar::IoError("cannot create output directory '" + opt.output_dir +
                             "': " + ec.message());
    return dir;
}

std::string store_path(const Options& opt) {
    if (!opt.store_path.empty()) return opt.store_path;
    return (fs::path(opt.output_dir) / "draws.fsvd").string();
}

// Indices of the variables the shock normalization averages over: the
// explicit analysis.equity list when given, otherwise every variable whose
// kind tag is "equity".
std::vector<int> equity_indices(const fsvar::RunConfig& config,
                                const std::vector<std::string>& names) {
    std::vector<int> indices;
    if (!config.analysis.equity.empty()) {
        for (const std::string& name : config.analysis.equity) {
            bool found = false;
            for (std::size_t j = 0; j < names.size(); ++j) {
                if (names[j] == name) {
                    indices.push_back(static_cast<int>(j));
                    found = true;
                }
            }
            if (!found)
                throw fsvar::ConfigError("analysis.equity references unknown variable '" +
                                         name + "'");
        }
        return indices;
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto it = config.kinds.find(names[j]);
        if (it != config.kinds.end() && it->second == "equity")
            indices.push_back(static_cast<int>(j));
    }
    return indices;
}

// A stable, moderately persistent parameter configuration for synthetic
// panels: shrunk random lag blocks, spread-out loadings, persistent
// volatilities.
fsvar::ChainState make_truth(const fsvar::ModelSpec& spec, int m, int t_count,
                             fsvar::Rng& rng) {
    fsvar::ChainState truth = fsvar::make_empty_state(
        m, spec.lags, spec.factors, t_count, 0, spec.include_intercept);
    for (int p = 0; p < spec.lags; ++p)
        for (auto& x : truth.coeffs[static_cast<std::size_t>(p)].reshaped())
            x = 0.35 / ((p + 1) * std::sqrt(static_cast<double>(m))) * rng.normal();
    const double radius = fsvar::companion_spectral_radius(truth.coeffs);
    if (radius > 0.85) {
        // Scaling the lag-p block by s^p scales the companion radius by s.
        const double s = 0.85 / radius;
        double factor = s;
        for (auto& block : truth.coeffs) {
            block *= factor;
            factor *= s;
        }
    }
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < spec.factors; ++c)
            if (r >= spec.factors || c < r) truth.loadings(r, c) = 0.6 * rng.normal();
    for (auto& sv : truth.factor_sv)
        sv = {rng.normal(-0.5, 0.4), 0.95, 0.05};
    for (auto& sv : truth.idio_sv)
        sv = {rng.normal(-1.0, 0.4), 0.9, 0.05};
    truth.validate();
    return truth;
}

// Priors used by gir-test when no config overrides them: tighter than the
// estimation defaults so the weakly identified loading/volatility scale
// direction mixes fast enough for the harness's thinning budget.
fsvar::ModelSpec harness_spec(int lags) {
    fsvar::ModelSpec spec = fsvar::ModelSpec::defaults(lags);
    spec.sv_prior.mean_variance = 0.5;
    spec.sv_prior.persistence_a = 2.0;
    spec.sv_prior.persistence_b = 2.0;
    spec.sv_prior.innovation_rate = 5.0;
    spec.loading_prior_variance = 0.5;
    return spec;
}

int run_simulate(const Options& opt) {
    const fsvar::RunConfig config = effective_config(opt);
    if (opt.periods < config.spec.lags + 3)
        throw fsvar::ConfigError("--periods leaves no effective sample");
    const fs::path dir = ensure_output_dir(opt);

    fsvar::Rng rng(config.spec.mcmc.seed);
    const fsvar::ChainState truth =
        make_truth(config.spec, opt.variables, opt.periods, rng);
    const fsvar::SimulatedPanel sim =
        fsvar::simulate_panel(config.spec, truth, opt.periods, rng);

    const std::string panel_path = (dir / "panel.csv").string();
    const std::string truth_path = (dir / "truth.fsvd").string();
    fsvar::export_panel_csv(sim.panel, panel_path);
    fsvar::DrawStore truth_store =
        fsvar::make_draw_store(sim.truth, sim.panel.names);
    truth_store.seed = config.spec.mcmc.seed;
    truth_store.append(sim.truth, true);
    fsvar::save_draw_store(truth_store, truth_path);

    std::cout << "simulate: wrote " << panel_path << " (" << sim.panel.periods()
              << " rows, " << sim.panel.series_count() << " series) and "
              << truth_path << "\n";
    return 0;
}

int run_estimate(const Options& opt) {
    if (opt.config_path.empty())
        throw fsvar::ConfigError("estimate needs --config (tells it which data to read)");
    const fsvar::RunConfig config = effective_config(opt);
    if (config.data.csv.empty())
        throw fsvar::ConfigError("config data.csv is empty; nothing to estimate");
    const fs::path dir = ensure_output_dir(opt);

    const fsvar::Panel panel = fsvar::ingest(config.data.csv, config);
    const fsvar::DrawStore store = fsvar::run_chain(panel, config.spec);
    const std::string path = (dir / "draws.fsvd").string();
    fsvar::save_draw_store(store, path);

    long stable = 0;
    for (unsigned char flag : store.stable) stable += flag;
    std::printf("estimate: draws=%d thin=%d burn_in=%d stable_share=%.3f wall_seconds=%.2f store=%s\n",
                store.draw_count(), store.thin, store.burn_in,
                store.draw_count() ? static_cast<double>(stable) / store.draw_count() : 0.0,
                store.wall_time_seconds, path.c_str());
    return 0;
}

int run_irf(const Options& opt) {
    const fsvar::RunConfig config = effective_config(opt);
    const fs::path dir = ensure_output_dir(opt);
    const fsvar::DrawStore store = fsvar::load_draw_store(store_path(opt));

    std::vector<int> equity = equity_indices(config, store.names);
    if (equity.empty())
        throw fsvar::ConfigError(
            "no equity variables configured (set analysis.equity or kind tags)");
    const fsvar::IrfResult irf = fsvar::impulse_response(
        store, config.analysis.horizon, equity, config.analysis.impact,
        config.analysis.quantiles);
    const std::string path = (dir / "irf.csv").string();
    fsvar::write_quantile_csv(path, store.names, irf.summaries);
    std::cout << "irf: horizon=" << config.analysis.horizon << " draws_used="
              << irf.responses.size() << " excluded=" << irf.excluded_draws
              << " table=" << path << "\n";
    return 0;
}

int run_fevd(const Options& opt) {
    const fsvar::RunConfig config = effective_config(opt);
    const fs::path dir = ensure_output_dir(opt);
    const fsvar::DrawStore store = fsvar::load_draw_store(store_path(opt));
    const fsvar::FevdResult fevd =
        fsvar::variance_shares(store, config.analysis.quantiles);
    const std::string path = (dir / "fevd.csv").string();
    fsvar::write_quantile_csv(path, store.names, fevd.summaries);
    std::cout << "fevd: periods=" << store.periods << " table=" << path << "\n";
    return 0;
}

int run_volpath(const Options& opt) {
    const fsvar::RunConfig config = effective_config(opt);
    const fs::path dir = ensure_output_dir(opt);
    const fsvar::DrawStore store = fsvar::load_draw_store(store_path(opt));

    std::vector<std::string> names;
    std::vector<fsvar::QuantileTable> tables;
    for (int i = 0; i < store.factors; ++i) {
        names.push_back("f" + std::to_string(i));
        tables.push_back(
            fsvar::factor_volatility_path(store, i, config.analysis.quantiles)
                .summary);
    }
    const std::string path = (dir / "volatility.csv").string();
    fsvar::write_quantile_csv(path, names, tables);
    std::cout << "volpath: factors=" << store.factors << " periods="
              << store.periods << " table=" << path << "\n";
    return 0;
}

int run_summary(const Options& opt) {
    const fsvar::DrawStore store = fsvar::load_draw_store(store_path(opt));
    std::printf("store: draws=%d variables=%d lags=%d factors=%d periods=%d seed=%llu\n",
                store.draw_count(), store.var_count, store.lags, store.factors,
                store.periods, static_cast<unsigned long long>(store.seed));
    for (const fsvar::DiagnosticEntry& entry : fsvar::chain_diagnostics(store))
        std::printf("split_rhat %-28s %.4f\n", entry.name.c_str(), entry.split_rhat);
    return 0;
}

int run_gir_test(const Options& opt) {
    fsvar::ModelSpec spec = harness_spec(1);
    int m = opt.variables;
    if (!opt.config_path.empty()) {
        const fsvar::RunConfig config = fsvar::load_config(opt.config_path);
        spec = config.spec;
    }
    fsvar::GirSettings settings;
    settings.cycles = opt.cycles;
    settings.prior_draws = opt.prior_draws;
    settings.t_count = opt.t_count;
    settings.seed = opt.seed_set ? opt.seed : 1;
    const fsvar::GirReport report = fsvar::getting_it_right(spec, m, settings);

    const fs::path dir = ensure_output_dir(opt);
    fsvar::CsvTable table;
    table.header = {"name", "statistic", "p_value", "thin", "chain_draws"};
    char buf[64];
    for (const fsvar::GirEntry& entry : report.entries) {
        std::vector<std::string> row{entry.name};
        std::snprintf(buf, sizeof buf, "%.6f", entry.statistic);
        row.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.6g", entry.p_value);
        row.push_back(buf);
        row.push_back(std::to_string(entry.thin));
        row.push_back(std::to_string(entry.chain_draws));
        table.rows.push_back(std::move(row));
    }
    const std::string path = (dir / "gir.csv").string();
    fsvar::write_csv(path, table);
    std::cout << "gir-test: cycles=" << opt.cycles << " scalars="
              << report.entries.size() << " min_p=" << report.min_p_value()
              << " report=" << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian VAR with factor stochastic volatility"};
    app.require_subcommand(1);
    Options opt;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "JSON run configuration");
        cmd->add_option("--seed", opt.seed, "override the chain seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        cmd->add_option("--threads", opt.threads, "worker threads for the sampler");
        cmd->add_option("--output-dir", opt.output_dir, "directory for artifacts");
        return cmd;
    };
    const auto add_store = [&](CLI::App* cmd) {
        cmd->add_option("--store", opt.store_path,
                        "draw store path (default <output-dir>/draws.fsvd)");
        cmd->add_option("--quantiles", opt.quantiles_text,
                        "comma-separated probabilities for summary tables");
        return cmd;
    };

    CLI::App* simulate = add_common(
        app.add_subcommand("simulate", "write a synthetic panel and its truth"));
    simulate->add_option("--variables", opt.variables, "number of series");
    simulate->add_option("--periods", opt.periods, "panel length");

    add_common(app.add_subcommand("estimate", "run the sampler on a panel"));

    CLI::App* irf = add_store(add_common(
        app.add_subcommand("irf", "impulse responses to the scaled factor shock")));
    irf->add_option("--horizon", opt.horizon, "response horizon");

    add_store(add_common(
        app.add_subcommand("fevd", "innovation variance shares over time")));
    add_store(add_common(
        app.add_subcommand("volpath", "factor variance path quantiles")));

    CLI::App* summary =
        app.add_subcommand("summary", "print store metadata and diagnostics");
    summary->add_option("--store", opt.store_path, "draw store path");
    summary->add_option("--output-dir", opt.output_dir, "directory holding draws.fsvd");

    CLI::App* gir = add_common(app.add_subcommand(
        "gir-test", "joint-distribution consistency check of the sampler"));
    gir->add_option("--cycles", opt.cycles, "sampler-side cycles");
    gir->add_option("--prior-draws", opt.prior_draws, "direct prior sample size");
    gir->add_option("--t-count", opt.t_count, "panel length of the harness");
    gir->add_option("--variables", opt.variables, "number of series");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand("simulate")) return run_simulate(opt);
        if (app.got_subcommand("estimate")) return run_estimate(opt);
        if (app.got_subcommand("irf")) return run_irf(opt);
        if (app.got_subcommand("fevd")) return run_fevd(opt);
        if (app.got_subcommand("volpath")) return run_volpath(opt);
        if (app.got_subcommand("summary")) return run_summary(opt);
        if (app.got_subcommand("gir-test")) return run_gir_test(opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "[E_CONFIG] " << e.what() << "\n";
        return 2;
    } catch (const fsvar::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const fsvar::DataError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const fsvar::DimensionError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const fsvar::NumericError& e) {
        std::cerr << e.what() << "\n";
        return 5;
    } catch (const fsvar::IoError& e) {
        std::cerr << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "[E_INTERNAL] " << e.what() << "\n";
        return 10;
    }
}
