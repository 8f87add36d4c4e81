#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsvar {

// The observed multivariate time series plus per-variable metadata.  Rows are
// periods (months in the intended application), columns are variables.  Dates
// are carried along for labeling only; all model logic is index-based.
struct Panel {
    Eigen::MatrixXd values;                    // T × m
    std::vector<std::string> names;            // m unique labels
    std::vector<std::string> country_tags;     // m (empty string = untagged)
    std::vector<std::string> kind_tags;        // m (e.g. "equity", "output")
    std::vector<std::string> transforms;       // m, applied transform record
    std::vector<unsigned char> seasonally_adjusted;  // m, pre-adjusted flag
    std::vector<std::string> dates;            // T labels, or empty
    Eigen::MatrixXd exogenous;                 // T × x (0 columns when absent)

    int periods() const { return static_cast<int>(values.rows()); }
    int series_count() const { return static_cast<int>(values.cols()); }
    int exog_count() const { return static_cast<int>(exogenous.cols()); }

    // Index of a variable by name; throws DataError if absent.
    int index_of(const std::string& name) const;

    // Rectangularity, finiteness, unique names, metadata shape consistency.
    void validate() const;
};

}  // namespace fsvar
