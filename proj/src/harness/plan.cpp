#include "motifbench/error.hpp"
#include "motifbench/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace motifbench::harness {

namespace {

struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string kind;  // "" for the top level
    std::string name;
    std::size_t line = 0;
    std::vector<Entry> entries;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

class Reader {
public:
    explicit Reader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
        if (line == 0) throw ParamError(msg);
        throw ParamError(origin_ + ":" + std::to_string(line) + ": " + msg);
    }

    std::vector<Section> parse(std::string_view text) const {
        std::vector<Section> out(1);
        std::size_t lineno = 0, pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            std::string_view line = text.substr(pos, nl - pos);
            pos = nl + 1;
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) {
                if (nl == text.size()) break;
                continue;
            }
            if (line.front() == '[') {
                if (line.back() != ']') fail(lineno, "unterminated section header");
                const auto inner = trim(line.substr(1, line.size() - 2));
                const auto sp = inner.find_first_of(" \t");
                Section s;
                s.kind = lower(inner.substr(0, sp));
                s.name = sp == std::string_view::npos ? "" : std::string(trim(inner.substr(sp)));
                s.line = lineno;
                out.push_back(std::move(s));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(lineno, "expected 'key = value'");
            Entry e{lower(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), lineno};
            if (e.key.empty()) fail(lineno, "empty key");
            for (const auto& prev : out.back().entries) {
                if (prev.key == e.key) fail(lineno, "duplicate key '" + e.key + "'");
            }
            out.back().entries.push_back(std::move(e));
            if (nl == text.size()) break;
        }
        return out;
    }

    template <typename T>
    T number(const Entry& e) const {
        T v{};
        const auto s = trim(e.value);
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail(e.line, "bad number for '" + e.key + "': " + e.value);
        return v;
    }

    double real(const Entry& e) const { return real(e.value, e); }

    double real(std::string_view s, const Entry& e) const {
        const std::string str(trim(s));
        try {
            std::size_t used = 0;
            const double v = std::stod(str, &used);
            if (used != str.size()) throw std::invalid_argument(str);
            return v;
        } catch (const std::exception&) {
            fail(e.line, "bad number for '" + e.key + "': " + str);
        }
    }

    // 1048576, 1MiB, 16 KiB, 2G. Suffixes are binary multiples.
    std::uint64_t bytes(const Entry& e) const {
        std::string_view s = trim(e.value);
        std::size_t i = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == 0) fail(e.line, "bad byte count for '" + e.key + "': " + e.value);
        std::uint64_t v = 0;
        std::from_chars(s.data(), s.data() + i, v);
        const std::string unit = lower(trim(s.substr(i)));
        std::uint64_t mul = 1;
        if (unit.empty() || unit == "b") {
            mul = 1;
        } else if (unit == "k" || unit == "kb" || unit == "kib") {
            mul = 1ULL << 10;
        } else if (unit == "m" || unit == "mb" || unit == "mib") {
            mul = 1ULL << 20;
        } else if (unit == "g" || unit == "gb" || unit == "gib") {
            mul = 1ULL << 30;
        } else if (unit == "t" || unit == "tb" || unit == "tib") {
            mul = 1ULL << 40;
        } else {
            fail(e.line, "unknown size unit '" + unit + "'");
        }
        return v * mul;
    }

    std::vector<std::string> list(const Entry& e) const {
        std::vector<std::string> out;
        std::string_view s = e.value;
        while (true) {
            const auto comma = s.find(',');
            const auto item = trim(s.substr(0, comma));
            if (item.empty()) fail(e.line, "empty item in list '" + e.key + "'");
            out.emplace_back(item);
            if (comma == std::string_view::npos) break;
            s = s.substr(comma + 1);
        }
        return out;
    }

    template <typename Fn>
    auto wrap(const Entry& e, Fn&& fn) const {
        try {
            return fn();
        } catch (const ParamError& err) {
            fail(e.line, err.what());
        }
    }

    bool boolean(const Entry& e) const {
        const auto v = lower(e.value);
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        fail(e.line, "expected true/false for '" + e.key + "'");
    }

private:
    std::string origin_;
};

// Keys shared by plan files and pipeline stages. Returns false when `e` is
// not one of them.
bool apply_common(const Reader& rd, const Entry& e, SizeParams& custom, PatternParams& pattern,
                  KernelParams& params, std::uint64_t& seed) {
    const auto& k = e.key;
    if (k == "text_bytes") custom.text_bytes = rd.bytes(e);
    else if (k == "graph_scale") custom.graph_scale = rd.number<std::uint32_t>(e);
    else if (k == "rows") custom.rows = rd.number<std::uint32_t>(e);
    else if (k == "cols") custom.cols = rd.number<std::uint32_t>(e);
    else if (k == "dim") custom.dim = rd.number<std::uint32_t>(e);
    else if (k == "channels") custom.channels = rd.number<std::uint32_t>(e);
    else if (k == "batch") custom.batch = rd.number<std::uint32_t>(e);
    else if (k == "zipf_exponent") pattern.zipf_exponent = rd.real(e);
    else if (k == "edge_factor") pattern.edge_factor = rd.number<std::uint32_t>(e);
    else if (k == "value_kind") pattern.value_kind = rd.wrap(e, [&] { return parse_value_kind(e.value); });
    else if (k == "seed") seed = rd.number<std::uint64_t>(e);
    else if (k == "grep_pattern") params.grep_pattern = e.value;
    else if (k == "sample_fraction") params.sample_fraction = rd.real(e);
    else if (k == "sort_memory_budget") params.sort_memory_budget = rd.bytes(e);
    else if (k == "conv_kernel") params.conv_kernel = rd.number<std::uint32_t>(e);
    else if (k == "conv_stride") params.conv_stride = rd.number<std::uint32_t>(e);
    else if (k == "conv_padding") params.conv_padding = rd.number<std::uint32_t>(e);
    else if (k == "out_channels" || k == "conv_out_channels") params.conv_out_channels = rd.number<std::uint32_t>(e);
    else if (k == "pool_window") params.pool_window = rd.number<std::uint32_t>(e);
    else if (k == "pool_stride") params.pool_stride = rd.number<std::uint32_t>(e);
    else if (k == "out_features" || k == "fc_out_features") params.fc_out_features = rd.number<std::uint32_t>(e);
    else if (k == "weight_seed") params.weight_seed = rd.number<std::uint64_t>(e);
    else return false;
    return true;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ExperimentPlan parse_plan(std::string_view text, std::string_view origin) {
    const Reader rd{std::string(origin)};
    const auto sections = rd.parse(text);
    if (sections.size() > 1) rd.fail(sections[1].line, "plan files take no sections");

    ExperimentPlan plan;
    for (const auto& e : sections[0].entries) {
        const auto& k = e.key;
        if (apply_common(rd, e, plan.custom, plan.pattern, plan.params, plan.seed)) continue;
        if (k == "name") {
            plan.name = e.value;
        } else if (k == "motifs" || k == "motif") {
            for (const auto& m : rd.list(e)) plan.axes.motifs.push_back(rd.wrap(e, [&] { return parse_motif(m); }));
        } else if (k == "sizes" || k == "size") {
            plan.axes.sizes.clear();
            for (const auto& s : rd.list(e)) plan.axes.sizes.push_back(rd.wrap(e, [&] { return parse_size_class(s); }));
        } else if (k == "sparsity") {
            for (const auto& s : rd.list(e)) {
                const double v = rd.real(s, e);
                if (!(v >= 0.0 && v <= 1.0)) rd.fail(e.line, "sparsity must be in [0, 1]");
                plan.axes.sparsity.push_back(v);
            }
        } else if (k == "sources" || k == "source") {
            for (const auto& s : rd.list(e)) plan.axes.sources.push_back(rd.wrap(e, [&] { return parse_source(s); }));
        } else if (k == "profile") {
            plan.profile = rd.wrap(e, [&] { return parse_size_profile(e.value); });
        } else if (k == "threads") {
            plan.config.threads = rd.number<unsigned>(e);
        } else if (k == "repetitions" || k == "reps") {
            plan.config.repetitions = rd.number<unsigned>(e);
        } else if (k == "warmup" || k == "warmup_runs") {
            plan.config.warmup_runs = rd.number<unsigned>(e);
        } else if (k == "interval_ms" || k == "sample_interval_ms") {
            plan.config.sample_interval = std::chrono::milliseconds(rd.number<long>(e));
        } else if (k == "disk_budget") {
            plan.disk_budget = rd.bytes(e);
        } else {
            rd.fail(e.line, "unknown plan key '" + k + "'");
        }
    }
    if (plan.axes.motifs.empty()) throw ParamError(std::string(origin) + ": plan lists no motifs");
    try {
        plan.config.validate();
        plan.pattern.validate();
    } catch (const ParamError& err) {
        throw ParamError(std::string(origin) + ": " + err.what());
    }
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    auto plan = parse_plan(slurp(path), path.string());
    if (plan.name.empty()) plan.name = path.stem().string();
    return plan;
}

Pipeline parse_pipeline(std::string_view text, std::string_view origin) {
    const Reader rd{std::string(origin)};
    const auto sections = rd.parse(text);

    Pipeline p;
    // Top-level keys set defaults that every stage inherits.
    SizeParams custom;
    PatternParams pattern;
    KernelParams params;
    std::uint64_t seed = 1;
    SizeProfile profile = SizeProfile::Desk;
    for (const auto& e : sections[0].entries) {
        if (apply_common(rd, e, custom, pattern, params, seed)) continue;
        if (e.key == "name") {
            p.name = e.value;
        } else if (e.key == "profile") {
            profile = rd.wrap(e, [&] { return parse_size_profile(e.value); });
        } else {
            rd.fail(e.line, "unknown pipeline key '" + e.key + "'");
        }
    }

    std::set<std::string> names;
    for (std::size_t i = 1; i < sections.size(); ++i) {
        const auto& sec = sections[i];
        if (sec.kind != "stage") rd.fail(sec.line, "unknown section '" + sec.kind + "'");
        if (sec.name.empty()) rd.fail(sec.line, "stage needs a name");
        if (!names.insert(sec.name).second) rd.fail(sec.line, "duplicate stage '" + sec.name + "'");

        PipelineStage st;
        st.name = sec.name;
        st.params = params;
        SizeParams sc = custom;
        PatternParams sp = pattern;
        std::uint64_t sseed = seed;
        SizeProfile sprof = profile;
        std::optional<SizeClass> size;
        std::optional<Source> source;
        bool have_motif = false;
        for (const auto& e : sec.entries) {
            if (apply_common(rd, e, sc, sp, st.params, sseed)) continue;
            if (e.key == "motif") {
                st.motif = rd.wrap(e, [&] { return parse_motif(e.value); });
                have_motif = true;
            } else if (e.key == "size") {
                size = rd.wrap(e, [&] { return parse_size_class(e.value); });
            } else if (e.key == "source") {
                source = rd.wrap(e, [&] { return parse_source(e.value); });
            } else if (e.key == "profile") {
                sprof = rd.wrap(e, [&] { return parse_size_profile(e.value); });
            } else if (e.key == "sparsity") {
                sp.sparsity = rd.real(e);
            } else {
                rd.fail(e.line, "unknown stage key '" + e.key + "'");
            }
        }
        if (!have_motif) rd.fail(sec.line, "stage '" + sec.name + "' has no motif");
        // A size makes the stage read its own dataset; otherwise it consumes
        // the previous stage's output.
        if (size) {
            DataSpec spec = default_spec(st.motif, *size, sprof);
            if (source) {
                spec.source = *source;
                spec.logical_type = default_logical_type(*source);
            }
            spec.custom = sc;
            spec.pattern = sp;
            spec.seed = sseed;
            st.input = spec;
        } else if (source) {
            rd.fail(sec.line, "stage '" + sec.name + "' sets a source but no size");
        }
        p.stages.push_back(std::move(st));
    }
    if (p.stages.empty()) throw ParamError(std::string(origin) + ": pipeline has no [stage NAME] sections");
    return p;
}

RunRequest parse_run_request(MotifId motif, const std::vector<std::pair<std::string, std::string>>& settings) {
    const Reader rd{""};
    std::vector<Entry> entries;
    for (const auto& [k, v] : settings) {
        Entry e{lower(trim(k)), std::string(trim(v)), 0};
        for (const auto& prev : entries) {
            if (prev.key == e.key) rd.fail(0, "option '" + e.key + "' given twice");
        }
        entries.push_back(std::move(e));
    }

    RunRequest req;
    req.motif = motif;
    SizeClass size = SizeClass::Small;
    SizeProfile profile = SizeProfile::Desk;
    std::optional<Source> source;
    std::optional<double> sparsity;
    SizeParams custom;
    PatternParams pattern;
    std::uint64_t seed = 1;
    bool custom_keys = false;
    for (const auto& e : entries) {
        const auto& k = e.key;
        if (k == "text_bytes" || k == "graph_scale" || k == "rows" || k == "cols" || k == "dim" || k == "channels" ||
            k == "batch") {
            custom_keys = true;
        }
        if (apply_common(rd, e, custom, pattern, req.params, seed)) continue;
        if (k == "size") {
            size = rd.wrap(e, [&] { return parse_size_class(e.value); });
        } else if (k == "profile") {
            profile = rd.wrap(e, [&] { return parse_size_profile(e.value); });
        } else if (k == "source") {
            source = rd.wrap(e, [&] { return parse_source(e.value); });
        } else if (k == "sparsity") {
            sparsity = rd.real(e);
        } else if (k == "threads") {
            req.config.threads = rd.number<unsigned>(e);
        } else if (k == "repetitions" || k == "reps") {
            req.config.repetitions = rd.number<unsigned>(e);
        } else if (k == "warmup" || k == "warmup_runs") {
            req.config.warmup_runs = rd.number<unsigned>(e);
        } else if (k == "interval_ms" || k == "sample_interval_ms") {
            req.config.sample_interval = std::chrono::milliseconds(rd.number<long>(e));
        } else if (k == "cpu_pinning" || k == "pin") {
            req.config.cpu_pinning.clear();
            for (const auto& c : rd.list(e)) {
                const Entry item{e.key, c, 0};
                req.config.cpu_pinning.push_back(rd.number<unsigned>(item));
            }
        } else {
            rd.fail(0, "unknown option '" + k + "'");
        }
    }
    // Explicit dimensions without a size class mean a custom size; the
    // unspecified dimensions come from the small entry of the size table.
    if (custom_keys && size != SizeClass::Custom) {
        if (std::none_of(entries.begin(), entries.end(), [](const Entry& e) { return e.key == "size"; })) {
            size = SizeClass::Custom;
        } else {
            rd.fail(0, "size dimensions need size = custom");
        }
    }
    if (size == SizeClass::Custom) {
        // "dim" doubles as the square size of matrix inputs.
        if (default_spec(motif).source == Source::Matrix && custom.dim != 0) {
            if (custom.rows == 0) custom.rows = custom.dim;
            if (custom.cols == 0) custom.cols = custom.dim;
        }
        const SizeParams base = resolve_size(motif, SizeClass::Small, profile);
        auto fill = [](auto& v, auto d) {
            if (v == 0) v = d;
        };
        fill(custom.text_bytes, base.text_bytes);
        fill(custom.graph_scale, base.graph_scale);
        fill(custom.rows, base.rows);
        fill(custom.cols, base.cols);
        fill(custom.dim, base.dim);
        fill(custom.channels, base.channels);
        fill(custom.batch, base.batch);
    }

    req.spec = default_spec(motif, size, profile);
    if (source) {
        req.spec.source = *source;
        req.spec.logical_type = default_logical_type(*source);
    }
    if (sparsity) pattern.sparsity = *sparsity;
    else pattern.sparsity = req.spec.pattern.sparsity;
    req.spec.custom = size == SizeClass::Custom ? custom : SizeParams{};
    req.spec.pattern = pattern;
    req.spec.seed = seed;
    req.spec.pattern.validate();
    req.config.validate();
    check_binding(motif, req.spec);
    return req;
}

Pipeline load_pipeline(const std::filesystem::path& path) {
    auto p = parse_pipeline(slurp(path), path.string());
    if (p.name.empty()) p.name = path.stem().string();
    return p;
}

}  // namespace motifbench::harness
