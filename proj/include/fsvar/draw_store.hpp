#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsvar/chain_state.hpp"

namespace fsvar {

// Byte offsets (in scalars) of each parameter group inside one flattened
// draw.  Layout version 1, in order: lag coefficient blocks (lag-major,
// row-major within each block), exogenous coefficients, intercept, loadings,
// factor path (time-major), factor log-variances, factor SV parameter
// triples (level, persistence, innovation variance), idiosyncratic
// log-variances, idiosyncratic SV parameter triples, local scales, extra
// scales, global scales, scale ratios.
struct DrawLayout {
    long coeffs = 0;
    long exog = 0;
    long intercept = 0;
    long loadings = 0;
    long factor_path = 0;
    long factor_logvol = 0;
    long factor_sv = 0;
    long idio_logvol = 0;
    long idio_sv = 0;
    long local_scales = 0;
    long extra_scales = 0;
    long global_scales = 0;
    long scale_ratios = 0;
    long total = 0;
};

// Columnar storage of retained sampler draws: every draw is one ChainState
// flattened into the fixed scalar order above, all draws in one contiguous
// draw-major buffer.  Wall time and thread count are runtime metadata and
// are deliberately excluded from the serialized bytes, so runs that differ
// only in scheduling produce identical files.
struct DrawStore {
    // Geometry; fixes the flattened layout.
    int var_count = 0;
    int lags = 0;
    int factors = 0;
    int periods = 0;
    int exog_count = 0;
    bool has_intercept = false;

    // Run provenance.
    std::uint64_t seed = 0;
    int burn_in = 0;
    int keep = 0;
    int thin = 0;
    std::vector<std::string> names;  // variable labels, sized var_count

    // Runtime-only metadata (never serialized).
    double wall_time_seconds = 0.0;
    int threads = 1;

    std::vector<double> values;         // draw-major flattened states
    std::vector<unsigned char> stable;  // per-draw companion-stability flag

    DrawLayout layout() const;
    long draw_size() const { return layout().total; }
    int draw_count() const { return static_cast<int>(stable.size()); }

    void append(const ChainState& state, bool is_stable);
    ChainState state_at(int draw) const;

    // The draw-indexed series of one flattened scalar (offset within a draw).
    std::vector<double> scalar_series(long offset) const;

    void validate() const;
};

// A store sized for the given state's geometry with no draws yet.
DrawStore make_draw_store(const ChainState& state,
                          std::vector<std::string> names);

void flatten_state(const ChainState& state, double* out);
ChainState unflatten_state(const DrawStore& store, const double* in);

// Binary persistence: magic "FSVD", a format version, a length-prefixed JSON
// metadata header, then the draw buffer as little-endian doubles followed by
// the per-draw stability flags.
void save_draw_store(const DrawStore& store, const std::string& path);
DrawStore load_draw_store(const std::string& path);

// Lossless long-form CSV export: one row per draw × scalar with columns
// draw_index, block, name, time_index, value; time_index is −1 for scalars
// not indexed by time.  Values are printed with enough digits to round-trip.
void export_draw_store_csv(const DrawStore& store, const std::string& path);

}  // namespace fsvar
