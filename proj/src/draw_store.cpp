#include "fsvar/draw_store.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "fsvar/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "the draw-store binary layout assumes a little-endian host");

namespace fsvar {

namespace {

constexpr char kMagic[4] = {'F', 'S', 'V', 'D'};
constexpr std::uint32_t kFormatVersion = 1;

void copy_matrix(const Eigen::MatrixXd& mat, double*& out) {
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
        for (Eigen::Index c = 0; c < mat.cols(); ++c) *out++ = mat(r, c);
}

void read_matrix(Eigen::MatrixXd& mat, const double*& in) {
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
        for (Eigen::Index c = 0; c < mat.cols(); ++c) mat(r, c) = *in++;
}

}  // namespace

DrawLayout DrawStore::layout() const {
    const long m = var_count;
    const long q = factors;
    const long p = lags;
    const long t = periods;
    const long x = exog_count;
    const long icpt = has_intercept ? 1 : 0;

    DrawLayout lay;
    lay.coeffs = 0;
    lay.exog = lay.coeffs + p * m * m;
    lay.intercept = lay.exog + m * x;
    lay.loadings = lay.intercept + icpt * m;
    lay.factor_path = lay.loadings + m * q;
    lay.factor_logvol = lay.factor_path + t * q;
    lay.factor_sv = lay.factor_logvol + t * q;
    lay.idio_logvol = lay.factor_sv + 3 * q;
    lay.idio_sv = lay.idio_logvol + t * m;
    lay.local_scales = lay.idio_sv + 3 * m;
    lay.extra_scales = lay.local_scales + p * m * m;
    lay.global_scales = lay.extra_scales + m * (x + icpt);
    lay.scale_ratios = lay.global_scales + p;
    lay.total = lay.scale_ratios + p;
    return lay;
}

void flatten_state(const ChainState& state, double* out) {
    for (const auto& block : state.coeffs) copy_matrix(block, out);
    copy_matrix(state.exog_coeffs, out);
    for (Eigen::Index j = 0; j < state.intercept.size(); ++j)
        *out++ = state.intercept(j);
    copy_matrix(state.loadings, out);
    copy_matrix(state.factor_path, out);
    copy_matrix(state.factor_logvol, out);
    for (const auto& sv : state.factor_sv) {
        *out++ = sv.level;
        *out++ = sv.persistence;
        *out++ = sv.innovation_var;
    }
    copy_matrix(state.idio_logvol, out);
    for (const auto& sv : state.idio_sv) {
        *out++ = sv.level;
        *out++ = sv.persistence;
        *out++ = sv.innovation_var;
    }
    for (const auto& block : state.local_scales) copy_matrix(block, out);
    copy_matrix(state.extra_scales, out);
    for (double v : state.global_scales) *out++ = v;
    for (double v : state.scale_ratios) *out++ = v;
}

ChainState unflatten_state(const DrawStore& store, const double* in) {
    ChainState state =
        make_empty_state(store.var_count, store.lags, store.factors,
                         store.periods, store.exog_count, store.has_intercept);
    for (auto& block : state.coeffs) read_matrix(block, in);
    read_matrix(state.exog_coeffs, in);
    for (Eigen::Index j = 0; j < state.intercept.size(); ++j)
        state.intercept(j) = *in++;
    read_matrix(state.loadings, in);
    read_matrix(state.factor_path, in);
    read_matrix(state.factor_logvol, in);
    for (auto& sv : state.factor_sv) {
        sv.level = *in++;
        sv.persistence = *in++;
        sv.innovation_var = *in++;
    }
    read_matrix(state.idio_logvol, in);
    for (auto& sv : state.idio_sv) {
        sv.level = *in++;
        sv.persistence = *in++;
        sv.innovation_var = *in++;
    }
    for (auto& block : state.local_scales) read_matrix(block, in);
    read_matrix(state.extra_scales, in);
    for (double& v : state.global_scales) v = *in++;
    for (double& v : state.scale_ratios) v = *in++;
    return state;
}

DrawStore make_draw_store(const ChainState& state,
                          std::vector<std::string> names) {
    state.validate();
    if (static_cast<int>(names.size()) != state.var_count())
        throw DimensionError("draw store needs one name per variable");
    DrawStore store;
    store.var_count = state.var_count();
    store.lags = state.lag_count();
    store.factors = state.factor_count();
    store.periods = state.periods();
    store.exog_count = state.exog_count();
    store.has_intercept = state.intercept.size() > 0;
    store.names = std::move(names);
    return store;
}

void DrawStore::append(const ChainState& state, bool is_stable) {
    if (state.var_count() != var_count || state.lag_count() != lags ||
        state.factor_count() != factors || state.periods() != periods ||
        state.exog_count() != exog_count ||
        (state.intercept.size() > 0) != has_intercept)
        throw DimensionError("draw geometry differs from the store layout");
    const long size = draw_size();
    values.resize(values.size() + static_cast<std::size_t>(size));
    flatten_state(state, values.data() + values.size() - size);
    stable.push_back(is_stable ? 1 : 0);
}

ChainState DrawStore::state_at(int draw) const {
    if (draw < 0 || draw >= draw_count())
        throw DimensionError("draw index out of range");
    return unflatten_state(*this, values.data() + draw * draw_size());
}

std::vector<double> DrawStore::scalar_series(long offset) const {
    const long size = draw_size();
    if (offset < 0 || offset >= size)
        throw DimensionError("scalar offset outside the draw layout");
    std::vector<double> out(static_cast<std::size_t>(draw_count()));
    for (int d = 0; d < draw_count(); ++d)
        out[static_cast<std::size_t>(d)] = values[d * size + offset];
    return out;
}

void DrawStore::validate() const {
    if (var_count < 1 || lags < 1 || factors < 1 || periods < 1)
        throw DimensionError("draw store has empty dimensions");
    if (static_cast<int>(names.size()) != var_count)
        throw DimensionError("draw store needs one name per variable");
    if (values.size() !=
        static_cast<std::size_t>(draw_size()) * stable.size())
        throw DimensionError("draw buffer length does not match the layout");
}

void save_draw_store(const DrawStore& store, const std::string& path) {
    store.validate();

    nlohmann::json meta;
    meta["layout_version"] = kFormatVersion;
    meta["var_count"] = store.var_count;
    meta["lags"] = store.lags;
    meta["factors"] = store.factors;
    meta["periods"] = store.periods;
    meta["exog_count"] = store.exog_count;
    meta["has_intercept"] = store.has_intercept;
    meta["seed"] = store.seed;
    meta["burn_in"] = store.burn_in;
    meta["keep"] = store.keep;
    meta["thin"] = store.thin;
    meta["names"] = store.names;
    meta["draw_count"] = store.draw_count();
    const std::string header = meta.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = kFormatVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::uint64_t header_size = header.size();
    out.write(reinterpret_cast<const char*>(&header_size), sizeof(header_size));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(store.values.data()),
              static_cast<std::streamsize>(store.values.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(store.stable.data()),
              static_cast<std::streamsize>(store.stable.size()));
    if (!out) throw IoError("failed writing draw store to '" + path + "'");
}

DrawStore load_draw_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("'" + path + "' is not a draw-store file");
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (!in || version != kFormatVersion)
        throw IoError("'" + path + "' uses unsupported draw-store version " +
                      std::to_string(version));
    std::uint64_t header_size = 0;
    in.read(reinterpret_cast<char*>(&header_size), sizeof(header_size));
    if (!in) throw IoError("'" + path + "' has a truncated header");
    std::string header(header_size, '\0');
    in.read(header.data(), static_cast<std::streamsize>(header_size));
    if (!in) throw IoError("'" + path + "' has a truncated header");

    DrawStore store;
    int draw_count = 0;
    try {
        const auto meta = nlohmann::json::parse(header);
        store.var_count = meta.at("var_count").get<int>();
        store.lags = meta.at("lags").get<int>();
        store.factors = meta.at("factors").get<int>();
        store.periods = meta.at("periods").get<int>();
        store.exog_count = meta.at("exog_count").get<int>();
        store.has_intercept = meta.at("has_intercept").get<bool>();
        store.seed = meta.at("seed").get<std::uint64_t>();
        store.burn_in = meta.at("burn_in").get<int>();
        store.keep = meta.at("keep").get<int>();
        store.thin = meta.at("thin").get<int>();
        store.names = meta.at("names").get<std::vector<std::string>>();
        draw_count = meta.at("draw_count").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "' has a malformed metadata header: " +
                      e.what());
    }
    if (draw_count < 0) throw IoError("'" + path + "' reports a negative draw count");

    const std::size_t total =
        static_cast<std::size_t>(draw_count) *
        static_cast<std::size_t>(store.draw_size());
    store.values.resize(total);
    in.read(reinterpret_cast<char*>(store.values.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    store.stable.resize(static_cast<std::size_t>(draw_count));
    in.read(reinterpret_cast<char*>(store.stable.data()),
            static_cast<std::streamsize>(store.stable.size()));
    if (!in) throw IoError("'" + path + "' has a truncated draw buffer");
    store.validate();
    return store;
}

namespace {

// Appends one export row; value formatting uses %.17g so that every double
// round-trips through the text form.
void write_row(std::string& out, int draw, const char* block,
               const std::string& name, long time_index, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += std::to_string(draw);
    out += ',';
    out += block;
    out += ',';
    out += name;
    out += ',';
    out += std::to_string(time_index);
    out += ',';
    out += buf;
    out += '\n';
}

}  // namespace

void export_draw_store_csv(const DrawStore& store, const std::string& path) {
    store.validate();
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");

    const auto lay = store.layout();
    const int m = store.var_count;
    const int q = store.factors;
    const int p = store.lags;
    const int t = store.periods;
    const int x = store.exog_count;
    const auto& names = store.names;
    static const char* kSvPart[3] = {"level", "persistence", "innovation_var"};

    std::string out = "draw_index,block,name,time_index,value\n";
    for (int d = 0; d < store.draw_count(); ++d) {
        const double* v = store.values.data() + d * store.draw_size();
        long k = 0;
        for (int lag = 0; lag < p; ++lag)
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i)
                    write_row(out, d, "coeff",
                              names[j] + ".lag" + std::to_string(lag + 1) + "." +
                                  names[i],
                              -1, v[k++]);
        for (int j = 0; j < m; ++j)
            for (int e = 0; e < x; ++e)
                write_row(out, d, "exog", names[j] + ".x" + std::to_string(e),
                          -1, v[k++]);
        if (store.has_intercept)
            for (int j = 0; j < m; ++j)
                write_row(out, d, "intercept", names[j], -1, v[k++]);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < q; ++i)
                write_row(out, d, "loading",
                          names[j] + ".f" + std::to_string(i), -1, v[k++]);
        for (int s = 0; s < t; ++s)
            for (int i = 0; i < q; ++i)
                write_row(out, d, "factor", "f" + std::to_string(i), s, v[k++]);
        for (int s = 0; s < t; ++s)
            for (int i = 0; i < q; ++i)
                write_row(out, d, "factor_logvol", "f" + std::to_string(i), s,
                          v[k++]);
        for (int i = 0; i < q; ++i)
            for (const char* part : kSvPart)
                write_row(out, d, "factor_sv",
                          "f" + std::to_string(i) + "." + part, -1, v[k++]);
        for (int s = 0; s < t; ++s)
            for (int j = 0; j < m; ++j)
                write_row(out, d, "idio_logvol", names[j], s, v[k++]);
        for (int j = 0; j < m; ++j)
            for (const char* part : kSvPart)
                write_row(out, d, "idio_sv", names[j] + "." + part, -1, v[k++]);
        for (int lag = 0; lag < p; ++lag)
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i)
                    write_row(out, d, "local_scale",
                              names[j] + ".lag" + std::to_string(lag + 1) + "." +
                                  names[i],
                              -1, v[k++]);
        for (int j = 0; j < m; ++j)
            for (int e = 0; e < x + (store.has_intercept ? 1 : 0); ++e)
                write_row(out, d, "extra_scale",
                          names[j] + (e < x ? ".x" + std::to_string(e)
                                            : std::string(".const")),
                          -1, v[k++]);
        for (int lag = 0; lag < p; ++lag)
            write_row(out, d, "lambda_sq", "lag" + std::to_string(lag + 1), -1,
                      v[k++]);
        for (int lag = 0; lag < p; ++lag)
            write_row(out, d, "scale_ratio", "lag" + std::to_string(lag + 1), -1,
                      v[k++]);
        if (k != lay.total) throw NumericError("draw export lost scalars");
        file << out;
        out.clear();
    }
    if (!file) throw IoError("failed writing draw export to '" + path + "'");
}

}  // namespace fsvar
