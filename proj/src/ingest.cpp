#include "fsvar/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

// "YYYY-MM" with a real month; returns a sortable key.
int date_key(const std::string& date, long row) {
    const auto bad = [&] {
        return DataError("row " + std::to_string(row) + ": date '" + date +
                         "' is not ISO year-month (YYYY-MM)");
    };
    if (date.size() != 7 || date[4] != '-') throw bad();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u})
        if (date[i] < '0' || date[i] > '9') throw bad();
    const int year = std::stoi(date.substr(0, 4));
    const int month = std::stoi(date.substr(5, 2));
    if (month < 1 || month > 12) throw bad();
    return year * 12 + (month - 1);
}

double parse_value(const std::string& field, long row, const std::string& column) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty())
        throw DataError("missing or malformed value at row " + std::to_string(row) +
                        ", column '" + column + "' ('" + field + "')");
    return value;
}

void check_known_columns(const std::vector<std::string>& referenced,
                         const std::set<std::string>& columns,
                         const std::string& what) {
    for (const std::string& name : referenced)
        if (!columns.count(name))
            throw ConfigError(what + " references unknown column '" + name + "'");
}

std::string format_value(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string synthetic_date(int index) {
    // Monthly from 2000-01; labels only, the model is index-based.
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", 2000 + index / 12, index % 12 + 1);
    return buf;
}

}  // namespace

Panel ingest_table(const CsvTable& table, const RunConfig& config) {
    if (table.header.size() < 2)
        throw DataError("panel csv needs a date column plus at least one series");
    const int columns = static_cast<int>(table.header.size()) - 1;
    const long rows = static_cast<long>(table.rows.size());
    if (rows < 2) throw DataError("panel csv needs at least two data rows");

    std::vector<std::string> names(table.header.begin() + 1, table.header.end());
    std::set<std::string> name_set(names.begin(), names.end());
    if (static_cast<int>(name_set.size()) != columns)
        throw DataError("panel csv has duplicate column names");

    // Config references must resolve before any numeric work.
    check_known_columns(config.data.exogenous, name_set, "data.exogenous");
    check_known_columns(config.seasonally_adjusted, name_set,
                        "transforms.seasonally_adjusted");
    std::vector<std::string> keys;
    for (const auto& [name, transform] : config.transforms) keys.push_back(name);
    check_known_columns(keys, name_set, "transforms.apply");
    keys.clear();
    for (const auto& [name, tag] : config.countries) keys.push_back(name);
    check_known_columns(keys, name_set, "groups.country");
    keys.clear();
    for (const auto& [name, tag] : config.kinds) keys.push_back(name);
    check_known_columns(keys, name_set, "groups.kind");

    // Dates: strictly increasing year-month labels.  Error rows are file
    // record numbers (the header is row 1).
    std::vector<std::string> dates;
    int previous_key = 0;
    for (long r = 0; r < rows; ++r) {
        const std::string& date = table.rows[static_cast<std::size_t>(r)][0];
        const int key = date_key(date, r + 2);
        if (r > 0 && key <= previous_key)
            throw DataError("dates not strictly increasing: row " +
                            std::to_string(r + 2) + " has '" + date + "'");
        previous_key = key;
        dates.push_back(date);
    }

    Eigen::MatrixXd raw(rows, columns);
    for (long r = 0; r < rows; ++r)
        for (int c = 0; c < columns; ++c)
            raw(r, c) = parse_value(
                table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c) + 1],
                r + 2, names[static_cast<std::size_t>(c)]);

    // Per-column transforms; one pass decides whether the panel shrinks by a
    // row (any log-difference present).
    std::vector<std::string> applied(names.size(), "none");
    for (std::size_t c = 0; c < names.size(); ++c) {
        const auto it = config.transforms.find(names[c]);
        if (it != config.transforms.end()) applied[c] = it->second;
        if (applied[c] != "none" && applied[c] != "log" &&
            applied[c] != "log-difference")
            throw ConfigError("unknown transform '" + applied[c] + "' for column '" +
                              names[c] + "' (expected none, log or log-difference)");
    }
    bool trims = false;
    for (const std::string& transform : applied)
        if (transform == "log-difference") trims = true;

    Eigen::MatrixXd transformed(trims ? rows - 1 : rows, columns);
    for (int c = 0; c < columns; ++c) {
        const std::string& transform = applied[static_cast<std::size_t>(c)];
        if (transform == "log" || transform == "log-difference") {
            for (long r = 0; r < rows; ++r)
                if (!(raw(r, c) > 0.0))
                    throw DataError("log transform needs positive values: row " +
                                    std::to_string(r + 2) + ", column '" +
                                    names[static_cast<std::size_t>(c)] + "' holds " +
                                    format_value(raw(r, c)));
        }
        for (long r = 0; r < transformed.rows(); ++r) {
            const long source = trims ? r + 1 : r;
            if (transform == "none") {
                transformed(r, c) = raw(source, c);
            } else if (transform == "log") {
                transformed(r, c) = std::log(raw(source, c));
            } else {
                transformed(r, c) = std::log(raw(source, c)) - std::log(raw(source - 1, c));
            }
        }
    }
    if (trims) dates.erase(dates.begin());

    // Split off exogenous columns in their configured order.
    std::set<std::string> exog_set(config.data.exogenous.begin(),
                                   config.data.exogenous.end());
    Panel panel;
    panel.exogenous.resize(transformed.rows(),
                           static_cast<long>(config.data.exogenous.size()));
    std::vector<int> endo_columns;
    for (int c = 0; c < columns; ++c)
        if (!exog_set.count(names[static_cast<std::size_t>(c)]))
            endo_columns.push_back(c);
    if (endo_columns.empty())
        throw DataError("every column is exogenous; no series left to model");
    for (std::size_t x = 0; x < config.data.exogenous.size(); ++x) {
        int source = -1;
        for (int c = 0; c < columns; ++c)
            if (names[static_cast<std::size_t>(c)] == config.data.exogenous[x])
                source = c;
        panel.exogenous.col(static_cast<long>(x)) = transformed.col(source);
    }

    const int m = static_cast<int>(endo_columns.size());
    panel.values.resize(transformed.rows(), m);
    for (int j = 0; j < m; ++j) {
        const std::size_t c = static_cast<std::size_t>(endo_columns[static_cast<std::size_t>(j)]);
        panel.values.col(j) = transformed.col(static_cast<long>(c));
        panel.names.push_back(names[c]);
        panel.transforms.push_back(applied[c]);
        const auto country = config.countries.find(names[c]);
        panel.country_tags.push_back(country == config.countries.end() ? ""
                                                                       : country->second);
        const auto kind = config.kinds.find(names[c]);
        panel.kind_tags.push_back(kind == config.kinds.end() ? "" : kind->second);
        const bool adjusted =
            std::count(config.seasonally_adjusted.begin(),
                       config.seasonally_adjusted.end(), names[c]) > 0;
        panel.seasonally_adjusted.push_back(adjusted ? 1 : 0);
    }
    panel.dates = std::move(dates);

    if (config.spec.demean || config.spec.standardize) {
        for (int j = 0; j < m; ++j) {
            auto col = panel.values.col(j);
            col.array() -= col.mean();
            if (config.spec.standardize) {
                const double sd = std::sqrt(col.squaredNorm() /
                                            static_cast<double>(col.size() - 1));
                if (!(sd > 0.0))
                    throw DataError("cannot standardize constant column '" +
                                    panel.names[static_cast<std::size_t>(j)] + "'");
                col /= sd;
            }
        }
    }

    panel.validate();
    return panel;
}

Panel ingest(const std::string& csv_path, const RunConfig& config) {
    return ingest_table(read_csv(csv_path), config);
}

void export_panel_csv(const Panel& panel, const std::string& path) {
    panel.validate();
    CsvTable table;
    table.header.push_back("date");
    for (const std::string& name : panel.names) table.header.push_back(name);
    for (int x = 0; x < panel.exog_count(); ++x)
        table.header.push_back("x" + std::to_string(x));

    for (int t = 0; t < panel.periods(); ++t) {
        std::vector<std::string> row;
        row.push_back(panel.dates.empty() ? synthetic_date(t)
                                          : panel.dates[static_cast<std::size_t>(t)]);
        for (int j = 0; j < panel.series_count(); ++j)
            row.push_back(format_value(panel.values(t, j)));
        for (int x = 0; x < panel.exog_count(); ++x)
            row.push_back(format_value(panel.exogenous(t, x)));
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

}  // namespace fsvar
