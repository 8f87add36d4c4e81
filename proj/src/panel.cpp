#include "fsvar/panel.hpp"

#include <cmath>
#include <unordered_set>

#include "fsvar/errors.hpp"

namespace fsvar {

int Panel::index_of(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return static_cast<int>(j);
    throw DataError("unknown variable '" + name + "'");
}

void Panel::validate() const {
    const auto m = static_cast<std::size_t>(series_count());
    if (names.size() != m)
        throw DimensionError("panel has " + std::to_string(m) + " columns but " +
                             std::to_string(names.size()) + " names");
    auto check_meta = [&](const auto& vec, const char* what) {
        if (!vec.empty() && vec.size() != m)
            throw DimensionError(std::string("panel metadata '") + what +
                                 "' length does not match variable count");
    };
    check_meta(country_tags, "country_tags");
    check_meta(kind_tags, "kind_tags");
    check_meta(transforms, "transforms");
    check_meta(seasonally_adjusted, "seasonally_adjusted");
    if (!dates.empty() && dates.size() != static_cast<std::size_t>(periods()))
        throw DimensionError("panel date labels do not match row count");
    if (exogenous.size() > 0 && exogenous.rows() != values.rows())
        throw DimensionError("exogenous block row count differs from panel rows");

    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) throw DataError("panel contains an empty variable name");
        if (!seen.insert(name).second)
            throw DataError("duplicate variable name '" + name + "'");
    }
    for (Eigen::Index t = 0; t < values.rows(); ++t)
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            if (!std::isfinite(values(t, j)))
                throw DataError("non-finite panel value at row " + std::to_string(t) +
                                ", column '" + names[static_cast<std::size_t>(j)] + "'");
    for (Eigen::Index t = 0; t < exogenous.rows(); ++t)
        for (Eigen::Index j = 0; j < exogenous.cols(); ++j)
            if (!std::isfinite(exogenous(t, j)))
                throw DataError("non-finite exogenous value at row " + std::to_string(t) +
                                ", column " + std::to_string(j));
}

}  // namespace fsvar
