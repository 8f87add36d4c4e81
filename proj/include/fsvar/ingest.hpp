#pragma once

#include <string>

#include "fsvar/config.hpp"
#include "fsvar/csv.hpp"
#include "fsvar/panel.hpp"

namespace fsvar {

// CSV panel ingestion: a header row, a leading ISO year-month date column,
// then one numeric column per series.  Per-column transforms come from
// config.transforms ("none" when unlisted): "none", "log", or
// "log-difference"; a log-difference anywhere trims the whole panel (and its
// dates) to T−1 rows to stay rectangular.  Columns named in
// config.data.exogenous are split off into Panel::exogenous after the
// transforms; demeaning/standardization (config.spec) then applies to the
// endogenous columns only.  Group tags and the seasonally-adjusted flags are
// copied from the config, which may only reference columns that exist.
Panel ingest(const std::string& csv_path, const RunConfig& config);
Panel ingest_table(const CsvTable& table, const RunConfig& config);

// Inverse of ingestion for already-transformed data: date column, endogenous
// columns under their names, exogenous columns under x0, x1, ….  Values are
// printed with enough digits to reproduce every double bit-exactly.  Missing
// dates are synthesized monthly from 2000-01.
void export_panel_csv(const Panel& panel, const std::string& path);

}  // namespace fsvar
