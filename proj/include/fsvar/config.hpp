#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsvar/model_spec.hpp"

namespace fsvar {

// One JSON file fully determines a run.  Sections: data (input paths),
// transforms (per-variable transform names and the pre-adjusted flags),
// groups (country/kind tags), model, priors, mcmc (together a ModelSpec),
// analysis (horizon, quantile grid, equity set, impact target).  Every field
// has a default, so {} is a valid config; unknown keys are rejected.

struct DataConfig {
    std::string csv;                     // panel path, may be relative
    std::vector<std::string> exogenous;  // column names split off as controls
};

struct AnalysisConfig {
    int horizon = 200;
    std::vector<double> quantiles;       // empty = default grid
    std::vector<std::string> equity;     // empty = variables with kind "equity"
    double impact = -10.0;
};

struct RunConfig {
    DataConfig data;
    std::map<std::string, std::string> transforms;  // name -> transform
    std::vector<std::string> seasonally_adjusted;   // names flagged pre-adjusted
    std::map<std::string, std::string> countries;   // name -> country tag
    std::map<std::string, std::string> kinds;       // name -> kind tag
    ModelSpec spec = ModelSpec::defaults(1);
    AnalysisConfig analysis;

    void validate() const;  // delegates to spec.validate() plus local checks
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical serialization: sorted keys, two-space indent, every default
// materialized.  parse_config(serialize_config(c)) round-trips exactly, and
// serialize ∘ parse is idempotent on any valid input.
std::string serialize_config(const RunConfig& config);

}  // namespace fsvar
