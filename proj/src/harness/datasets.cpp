#include "motifbench/checksum.hpp"
#include "motifbench/error.hpp"
#include "motifbench/harness.hpp"
#include "motifbench/kernels.hpp"
#include "motifbench/rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace motifbench::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool text_motif(MotifId m) {
    return m == MotifId::Sort || m == MotifId::WordCount || m == MotifId::Grep || m == MotifId::Md5 ||
           m == MotifId::Sample;
}

Source required_source(MotifId m) {
    if (text_motif(m)) return Source::Text;
    if (m == MotifId::Bfs) return Source::Graph;
    if (m == MotifId::MatMul || m == MotifId::Fft) return Source::Matrix;
    return Source::Tensor;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Second operand seeds are derived so that A and B differ but stay tied to
// the spec seed.
std::uint64_t second_seed(std::uint64_t seed) { return CounterRng::mix(seed ^ 0x6a09e667f3bcc909ULL); }

void write_atomically(const fs::path& path, std::string_view content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot write '" + tmp.string() + "'");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw IoError("write failed on '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

}  // namespace

DataSpec default_spec(MotifId motif, SizeClass size, SizeProfile profile) {
    DataSpec s;
    s.source = required_source(motif);
    s.logical_type = default_logical_type(s.source);
    s.size_class = size;
    s.profile = profile;
    return s;
}

void check_binding(MotifId motif, const DataSpec& spec) {
    spec.pattern.validate();
    const Source want = required_source(motif);
    const bool ok = spec.source == want || (want == Source::Text && spec.source == Source::Sequence);
    if (!ok) {
        throw ParamError(std::string(motif_name(motif)) + " cannot read a " + std::string(to_string(spec.source)) +
                         " dataset (expects " + std::string(to_string(want)) +
                         (want == Source::Text ? " or sequence" : "") + ")");
    }
    const SizeParams p = resolve_size(motif, spec);
    switch (want) {
        case Source::Text:
            if (p.text_bytes < 1024) throw ParamError("text size must be at least 1 KiB");
            break;
        case Source::Graph:
            if (p.graph_scale < 1 || p.graph_scale > 32) throw ParamError("graph scale must be in [1, 32]");
            break;
        case Source::Matrix:
            if (p.rows == 0 || p.cols == 0) throw ParamError("matrix dimensions must be positive");
            if (motif == MotifId::Fft && (!kernels::is_power_of_two(p.rows) || !kernels::is_power_of_two(p.cols))) {
                throw ParamError("fft needs power-of-two dimensions, got " + std::to_string(p.rows) + "x" +
                                 std::to_string(p.cols));
            }
            break;
        default:
            if (p.dim == 0 || p.channels == 0 || p.batch == 0) {
                throw ParamError("tensor dim, channels and batch must be positive");
            }
            break;
    }
}

std::string canonical_spec(MotifId motif, const DataSpec& spec) {
    const SizeParams p = resolve_size(motif, spec);
    const std::string seed = " seed=" + std::to_string(spec.seed);
    switch (required_source(motif)) {
        case Source::Text:
            return std::string(to_string(spec.source)) + " bytes=" + std::to_string(p.text_bytes) +
                   " zipf=" + num(spec.pattern.zipf_exponent) + seed;
        case Source::Graph:
            return "graph scale=" + std::to_string(p.graph_scale) +
                   " edge_factor=" + std::to_string(spec.pattern.edge_factor) + seed;
        case Source::Matrix:
            return "matrix rows=" + std::to_string(p.rows) + " cols=" + std::to_string(p.cols) +
                   " sparsity=" + num(spec.pattern.sparsity) + " kind=" + std::string(to_string(spec.pattern.value_kind)) +
                   " count=" + (motif == MotifId::MatMul ? "2" : "1") + seed;
        default:
            return "tensor dim=" + std::to_string(p.dim) + " channels=" + std::to_string(p.channels) +
                   " batch=" + std::to_string(p.batch) + " count=" + (motif == MotifId::Multiply ? "2" : "1") + seed;
    }
}

std::uint64_t spec_key(MotifId motif, const DataSpec& spec) { return fnv1a(canonical_spec(motif, spec)); }

DatasetCache::DatasetCache(fs::path dir) : dir_(std::move(dir)) {}

Dataset DatasetCache::materialize(MotifId motif, const DataSpec& spec, unsigned threads) {
    check_binding(motif, spec);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create data directory '" + dir_.string() + "': " + ec.message());

    const std::string key = hex16(spec_key(motif, spec));
    const fs::path manifest = dir_ / (key + ".json");
    const SizeParams p = resolve_size(motif, spec);

    Dataset d;
    switch (required_source(motif)) {
        case Source::Text:
            if (spec.source == Source::Sequence) {
                d.files = {dir_ / (key + ".seq"), dir_ / (key + ".txt")};
            } else {
                d.files = {dir_ / (key + ".txt")};
            }
            break;
        case Source::Graph: d.files = {dir_ / (key + ".graph")}; break;
        case Source::Matrix:
            d.files = {dir_ / (key + "-a.mtx")};
            if (motif == MotifId::MatMul) d.files.push_back(dir_ / (key + "-b.mtx"));
            break;
        default:
            d.files = {dir_ / (key + "-a.tsr")};
            if (motif == MotifId::Multiply) d.files.push_back(dir_ / (key + "-b.tsr"));
            break;
    }

    bool hit = fs::exists(manifest);
    for (const auto& f : d.files) hit = hit && fs::exists(f);
    if (hit) return d;

    switch (required_source(motif)) {
        case Source::Text: {
            const fs::path txt = d.files.back();
            write_text(txt, p.text_bytes, spec.pattern, spec.seed);
            if (spec.source == Source::Sequence) gen_sequence(txt, d.files.front());
            break;
        }
        case Source::Graph:
            write_graph(d.files[0], gen_graph(p.graph_scale, spec.pattern.edge_factor, spec.seed, threads));
            break;
        case Source::Matrix:
            write_matrix(d.files[0],
                         gen_matrix(p.rows, p.cols, spec.pattern.sparsity, spec.pattern.value_kind, spec.seed, threads));
            if (d.files.size() > 1) {
                write_matrix(d.files[1], gen_matrix(p.cols, p.cols, spec.pattern.sparsity, spec.pattern.value_kind,
                                                    second_seed(spec.seed), threads));
            }
            break;
        default:
            write_tensor(d.files[0], gen_tensor_batch(p.dim, p.channels, p.batch, spec.seed, threads));
            if (d.files.size() > 1) {
                write_tensor(d.files[1], gen_tensor_batch(p.dim, p.channels, p.batch, second_seed(spec.seed), threads));
            }
            break;
    }

    json m = json::parse(spec_to_json(spec));
    m["motif"] = std::string(motif_name(motif));
    m["canonical"] = canonical_spec(motif, spec);
    json files = json::array();
    for (const auto& f : d.files) files.push_back(f.filename().string());
    m["files"] = files;
    write_atomically(manifest, m.dump(2) + "\n");
    d.generated = true;
    return d;
}

std::string spec_to_json(const DataSpec& s) {
    json j;
    j["source"] = std::string(to_string(s.source));
    j["logical_type"] = std::string(to_string(s.logical_type));
    j["size_class"] = std::string(to_string(s.size_class));
    j["profile"] = std::string(to_string(s.profile));
    if (s.size_class == SizeClass::Custom) {
        j["custom"] = {{"text_bytes", s.custom.text_bytes}, {"graph_scale", s.custom.graph_scale},
                       {"rows", s.custom.rows},             {"cols", s.custom.cols},
                       {"dim", s.custom.dim},               {"channels", s.custom.channels},
                       {"batch", s.custom.batch}};
    }
    j["pattern"] = {{"sparsity", s.pattern.sparsity},
                    {"zipf_exponent", s.pattern.zipf_exponent},
                    {"edge_factor", s.pattern.edge_factor},
                    {"value_kind", std::string(to_string(s.pattern.value_kind))}};
    j["seed"] = s.seed;
    return j.dump();
}

DataSpec spec_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParamError(std::string("malformed data spec JSON: ") + e.what());
    }
    DataSpec s;
    try {
        s.source = parse_source(j.at("source").get<std::string>());
        s.logical_type = j.contains("logical_type") ? parse_logical_type(j["logical_type"].get<std::string>())
                                                    : default_logical_type(s.source);
        s.size_class = parse_size_class(j.at("size_class").get<std::string>());
        if (j.contains("profile")) s.profile = parse_size_profile(j["profile"].get<std::string>());
        if (j.contains("custom")) {
            const auto& c = j["custom"];
            s.custom.text_bytes = c.value("text_bytes", std::uint64_t{0});
            s.custom.graph_scale = c.value("graph_scale", 0u);
            s.custom.rows = c.value("rows", 0u);
            s.custom.cols = c.value("cols", 0u);
            s.custom.dim = c.value("dim", 0u);
            s.custom.channels = c.value("channels", 0u);
            s.custom.batch = c.value("batch", 0u);
        }
        if (j.contains("pattern")) {
            const auto& p = j["pattern"];
            s.pattern.sparsity = p.value("sparsity", 0.0);
            s.pattern.zipf_exponent = p.value("zipf_exponent", 1.0);
            s.pattern.edge_factor = p.value("edge_factor", 16u);
            s.pattern.value_kind = parse_value_kind(p.value("value_kind", std::string("float64")));
        }
        s.seed = j.value("seed", std::uint64_t{1});
    } catch (const json::exception& e) {
        throw ParamError(std::string("bad data spec JSON: ") + e.what());
    }
    return s;
}

fs::path default_data_dir() {
    if (const char* v = std::getenv("MOTIFBENCH_DATA_DIR"); v && *v) return v;
    return "data";
}

fs::path default_results_dir() {
    if (const char* v = std::getenv("MOTIFBENCH_RESULTS_DIR"); v && *v) return v;
    return "results";
}

}  // namespace motifbench::harness
