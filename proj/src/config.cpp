#include "fsvar/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fsvar/analysis.hpp"
#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw ConfigError("section '" + section + "' must be a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in section '" +
                              section + "'");
    }
}

std::map<std::string, std::string> string_map(const json& obj,
                                              const std::string& context) {
    if (!obj.is_object())
        throw ConfigError("'" + context + "' must map variable names to strings");
    std::map<std::string, std::string> out;
    for (const auto& item : obj.items()) {
        if (!item.value().is_string())
            throw ConfigError("'" + context + "." + item.key() +
                              "' must be a string");
        out[item.key()] = item.value().get<std::string>();
    }
    return out;
}

std::vector<std::string> string_list(const json& arr, const std::string& context) {
    if (!arr.is_array())
        throw ConfigError("'" + context + "' must be an array of strings");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& item : arr) {
        if (!item.is_string())
            throw ConfigError("'" + context + "' must contain only strings");
        const std::string value = item.get<std::string>();
        if (!seen.insert(value).second)
            throw ConfigError("'" + context + "' lists '" + value + "' twice");
        out.push_back(value);
    }
    return out;
}

}  // namespace

void RunConfig::validate() const {
    spec.validate();
    if (analysis.horizon < 0)
        throw ConfigError("analysis.horizon must be non-negative");
    if (analysis.impact == 0.0)
        throw ConfigError("analysis.impact must be nonzero; it sets the shock scale");
    for (std::size_t i = 0; i < analysis.quantiles.size(); ++i) {
        const double p = analysis.quantiles[i];
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("analysis.quantiles entries must lie in [0, 1]");
        if (i > 0 && !(p > analysis.quantiles[i - 1]))
            throw ConfigError("analysis.quantiles must be strictly increasing");
    }
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    check_keys(root, "(root)",
               {"data", "transforms", "groups", "model", "priors", "mcmc",
                "analysis"});

    RunConfig config;
    try {
        if (root.contains("data")) {
            const json& data = root["data"];
            check_keys(data, "data", {"csv", "exogenous"});
            if (data.contains("csv")) config.data.csv = data["csv"].get<std::string>();
            if (data.contains("exogenous"))
                config.data.exogenous = string_list(data["exogenous"], "data.exogenous");
        }
        if (root.contains("transforms")) {
            const json& tf = root["transforms"];
            check_keys(tf, "transforms", {"apply", "seasonally_adjusted"});
            if (tf.contains("apply"))
                config.transforms = string_map(tf["apply"], "transforms.apply");
            if (tf.contains("seasonally_adjusted"))
                config.seasonally_adjusted = string_list(
                    tf["seasonally_adjusted"], "transforms.seasonally_adjusted");
        }
        if (root.contains("groups")) {
            const json& groups = root["groups"];
            check_keys(groups, "groups", {"country", "kind"});
            if (groups.contains("country"))
                config.countries = string_map(groups["country"], "groups.country");
            if (groups.contains("kind"))
                config.kinds = string_map(groups["kind"], "groups.kind");
        }

        int lags = 1;
        int factors = 1;
        if (root.contains("model")) {
            const json& model = root["model"];
            check_keys(model, "model",
                       {"lags", "factors", "intercept", "demean", "standardize"});
            if (model.contains("lags")) lags = model["lags"].get<int>();
            if (model.contains("factors")) factors = model["factors"].get<int>();
        }
        if (lags < 1) throw ConfigError("model.lags must be at least 1");
        if (factors < 1) throw ConfigError("model.factors must be at least 1");
        config.spec = ModelSpec::defaults(lags, factors);
        if (root.contains("model")) {
            const json& model = root["model"];
            if (model.contains("intercept"))
                config.spec.include_intercept = model["intercept"].get<bool>();
            if (model.contains("demean"))
                config.spec.demean = model["demean"].get<bool>();
            if (model.contains("standardize"))
                config.spec.standardize = model["standardize"].get<bool>();
        }

        if (root.contains("priors")) {
            const json& priors = root["priors"];
            check_keys(priors, "priors",
                       {"kappa", "lambda", "loading_variance", "sv"});
            if (priors.contains("kappa")) {
                config.spec.kappa = priors["kappa"].get<std::vector<double>>();
                if (static_cast<int>(config.spec.kappa.size()) != lags)
                    throw ConfigError("priors.kappa needs one entry per lag");
            }
            if (priors.contains("lambda")) {
                const json& lam = priors["lambda"];
                if (!lam.is_array() || static_cast<int>(lam.size()) != lags)
                    throw ConfigError("priors.lambda needs one [shape, rate] pair per lag");
                config.spec.lambda_prior.clear();
                for (const json& pair : lam) {
                    if (!pair.is_array() || pair.size() != 2)
                        throw ConfigError("priors.lambda entries must be [shape, rate] pairs");
                    config.spec.lambda_prior.emplace_back(pair[0].get<double>(),
                                                          pair[1].get<double>());
                }
            }
            if (priors.contains("loading_variance"))
                config.spec.loading_prior_variance =
                    priors["loading_variance"].get<double>();
            if (priors.contains("sv")) {
                const json& sv = priors["sv"];
                check_keys(sv, "priors.sv",
                           {"mean_variance", "persistence_a", "persistence_b",
                            "innovation_shape", "innovation_rate"});
                SvPrior& prior = config.spec.sv_prior;
                if (sv.contains("mean_variance"))
                    prior.mean_variance = sv["mean_variance"].get<double>();
                if (sv.contains("persistence_a"))
                    prior.persistence_a = sv["persistence_a"].get<double>();
                if (sv.contains("persistence_b"))
                    prior.persistence_b = sv["persistence_b"].get<double>();
                if (sv.contains("innovation_shape"))
                    prior.innovation_shape = sv["innovation_shape"].get<double>();
                if (sv.contains("innovation_rate"))
                    prior.innovation_rate = sv["innovation_rate"].get<double>();
            }
        }

        if (root.contains("mcmc")) {
            const json& mcmc = root["mcmc"];
            check_keys(mcmc, "mcmc", {"burn_in", "keep", "thin", "seed", "threads"});
            McmcSettings& settings = config.spec.mcmc;
            if (mcmc.contains("burn_in")) settings.burn_in = mcmc["burn_in"].get<int>();
            if (mcmc.contains("keep")) settings.keep = mcmc["keep"].get<int>();
            if (mcmc.contains("thin")) settings.thin = mcmc["thin"].get<int>();
            if (mcmc.contains("seed"))
                settings.seed = mcmc["seed"].get<std::uint64_t>();
            if (mcmc.contains("threads")) settings.threads = mcmc["threads"].get<int>();
        }

        if (root.contains("analysis")) {
            const json& analysis = root["analysis"];
            check_keys(analysis, "analysis",
                       {"horizon", "quantiles", "equity", "impact"});
            if (analysis.contains("horizon"))
                config.analysis.horizon = analysis["horizon"].get<int>();
            if (analysis.contains("quantiles"))
                config.analysis.quantiles =
                    analysis["quantiles"].get<std::vector<double>>();
            if (analysis.contains("equity"))
                config.analysis.equity =
                    string_list(analysis["equity"], "analysis.equity");
            if (analysis.contains("impact"))
                config.analysis.impact = analysis["impact"].get<double>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    }

    if (config.analysis.quantiles.empty())
        config.analysis.quantiles = default_quantile_grid();
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
    config.validate();
    json root;
    root["data"]["csv"] = config.data.csv;
    root["data"]["exogenous"] = config.data.exogenous;
    root["transforms"]["apply"] = config.transforms;
    root["transforms"]["seasonally_adjusted"] = config.seasonally_adjusted;
    root["groups"]["country"] = config.countries;
    root["groups"]["kind"] = config.kinds;

    const ModelSpec& spec = config.spec;
    root["model"]["lags"] = spec.lags;
    root["model"]["factors"] = spec.factors;
    root["model"]["intercept"] = spec.include_intercept;
    root["model"]["demean"] = spec.demean;
    root["model"]["standardize"] = spec.standardize;

    root["priors"]["kappa"] = spec.kappa;
    json lambda = json::array();
    for (const auto& [shape, rate] : spec.lambda_prior)
        lambda.push_back({shape, rate});
    root["priors"]["lambda"] = lambda;
    root["priors"]["loading_variance"] = spec.loading_prior_variance;
    root["priors"]["sv"]["mean_variance"] = spec.sv_prior.mean_variance;
    root["priors"]["sv"]["persistence_a"] = spec.sv_prior.persistence_a;
    root["priors"]["sv"]["persistence_b"] = spec.sv_prior.persistence_b;
    root["priors"]["sv"]["innovation_shape"] = spec.sv_prior.innovation_shape;
    root["priors"]["sv"]["innovation_rate"] = spec.sv_prior.innovation_rate;

    root["mcmc"]["burn_in"] = spec.mcmc.burn_in;
    root["mcmc"]["keep"] = spec.mcmc.keep;
    root["mcmc"]["thin"] = spec.mcmc.thin;
    root["mcmc"]["seed"] = spec.mcmc.seed;
    root["mcmc"]["threads"] = spec.mcmc.threads;

    root["analysis"]["horizon"] = config.analysis.horizon;
    root["analysis"]["quantiles"] = config.analysis.quantiles.empty()
                                        ? default_quantile_grid()
                                        : config.analysis.quantiles;
    root["analysis"]["equity"] = config.analysis.equity;
    root["analysis"]["impact"] = config.analysis.impact;

    return root.dump(2) + "\n";
}

}  // namespace fsvar
