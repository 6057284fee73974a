#include "motifbench/motifbench.h"

#include "motifbench/analysis.hpp"
#include "motifbench/error.hpp"
#include "motifbench/harness.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <algorithm>
#include <fstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace motifbench;

struct mb_context {
    fs::path data_dir = harness::default_data_dir();
    fs::path results_dir = harness::default_results_dir();
    fs::path proc_root = "/proc";
    topdown::CounterMode counters = topdown::parse_counter_mode("perf");
    std::string last_error;
};

namespace {

thread_local std::string g_create_error;

mb_status status_of(ErrorKind k) {
    switch (k) {
        case ErrorKind::Param: return MB_ERR_PARAM;
        case ErrorKind::Io: return MB_ERR_IO;
        case ErrorKind::Runtime: return MB_ERR_RUNTIME;
        case ErrorKind::NotFound: return MB_ERR_NOT_FOUND;
        case ErrorKind::Counter: return MB_ERR_COUNTER;
    }
    return MB_ERR_RUNTIME;
}

template <typename Fn>
mb_status guard(mb_context* ctx, Fn&& fn) {
    if (!ctx) return MB_ERR_PARAM;
    ctx->last_error.clear();
    try {
        fn();
        return MB_OK;
    } catch (const Error& e) {
        ctx->last_error = e.what();
        return status_of(e.kind());
    } catch (const json::exception& e) {
        ctx->last_error = std::string("malformed JSON request: ") + e.what();
        return MB_ERR_PARAM;
    } catch (const std::bad_alloc&) {
        ctx->last_error = "out of memory";
        return MB_ERR_RUNTIME;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return MB_ERR_RUNTIME;
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** out, const json& j) {
    if (!out) throw ParamError("result pointer is NULL");
    *out = dup(j.dump());
}

json parse_object(const char* text) {
    if (!text || !*text) return json::object();
    json j = json::parse(text);
    if (!j.is_object()) throw ParamError("request must be a JSON object");
    return j;
}

std::string as_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
        std::string s;
        for (const auto& item : v) s += (s.empty() ? "" : ",") + as_text(item);
        return s;
    }
    return v.dump();
}

// Splits off the keys the C layer handles itself; the rest go to the
// harness option parser.
std::vector<std::pair<std::string, std::string>> settings_of(const json& j, std::initializer_list<const char*> skip) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, v] : j.items()) {
        bool skipped = false;
        for (const char* s : skip) skipped = skipped || k == s;
        if (!skipped && !v.is_null()) out.emplace_back(k, as_text(v));
    }
    return out;
}

MotifId motif_for_source(Source s) {
    switch (s) {
        case Source::Text:
        case Source::Sequence: return MotifId::Sort;
        case Source::Graph: return MotifId::Bfs;
        case Source::Matrix: return MotifId::MatMul;
        case Source::Tensor: return MotifId::Conv2D;
    }
    return MotifId::Sort;
}

std::uint64_t file_bytes(const std::vector<fs::path>& files) {
    std::uint64_t n = 0;
    for (const auto& f : files) {
        std::error_code ec;
        const auto s = fs::file_size(f, ec);
        if (!ec) n += s;
    }
    return n;
}

json workload_json(const WorkloadEntry& w) {
    json classes = json::array();
    for (auto c : w.classes) classes.push_back(std::string(motif_class_name(c)));
    return {{"name", std::string(w.name)},
            {"aliases", std::string(w.aliases)},
            {"category", std::string(w.category)},
            {"domain", std::string(w.domain)},
            {"classes", classes},
            {"classes_text", join_classes(w.classes)}};
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out << body;
    if (!out) throw IoError("write failed for '" + p.string() + "'");
}

std::vector<fs::path> expand_inputs(const json& inputs) {
    std::vector<fs::path> files;
    for (const auto& item : inputs) {
        const fs::path p = item.get<std::string>();
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p)) {
                if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            files.push_back(p);
        } else {
            throw NotFoundError("result file '" + p.string() + "' not found");
        }
    }
    return files;
}

}  // namespace

extern "C" {

const char* mb_version(void) { return MOTIFBENCH_VERSION; }

const char* mb_status_name(mb_status s) {
    switch (s) {
        case MB_OK: return "ok";
        case MB_ERR_PARAM: return "parameter error";
        case MB_ERR_IO: return "i/o error";
        case MB_ERR_RUNTIME: return "runtime error";
        case MB_ERR_NOT_FOUND: return "not found";
        case MB_ERR_COUNTER: return "counter error";
    }
    return "unknown status";
}

mb_status mb_context_create(mb_context** out) {
    if (!out) return MB_ERR_PARAM;
    *out = nullptr;
    try {
        *out = new mb_context();
        g_create_error.clear();
        return MB_OK;
    } catch (const Error& e) {
        g_create_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_create_error = e.what();
        return MB_ERR_RUNTIME;
    }
}

void mb_context_destroy(mb_context* ctx) { delete ctx; }

const char* mb_last_error(const mb_context* ctx) { return ctx ? ctx->last_error.c_str() : g_create_error.c_str(); }

mb_status mb_context_set(mb_context* ctx, const char* key, const char* value) {
    return guard(ctx, [&] {
        if (!key || !value) throw ParamError("key and value must not be NULL");
        const std::string k = key;
        if (k == "data_dir") ctx->data_dir = value;
        else if (k == "results_dir") ctx->results_dir = value;
        else if (k == "proc_root") ctx->proc_root = value;
        else if (k == "counters") ctx->counters = topdown::parse_counter_mode(value);
        else throw ParamError("unknown context key '" + k + "'");
    });
}

mb_status mb_generate(mb_context* ctx, const char* settings_json, char** result_json) {
    return guard(ctx, [&] {
        const json req = parse_object(settings_json);
        MotifId motif = MotifId::Sort;
        if (req.contains("motif")) {
            motif = parse_motif(req["motif"].get<std::string>());
        } else if (req.contains("source")) {
            motif = motif_for_source(parse_source(req["source"].get<std::string>()));
        } else {
            throw ParamError("generation needs a source or a motif");
        }
        const auto rr = harness::parse_run_request(motif, settings_of(req, {"motif", "out_dir"}));
        const fs::path dir = req.contains("out_dir") ? fs::path(req["out_dir"].get<std::string>()) : ctx->data_dir;
        harness::DatasetCache cache(dir);
        const auto ds = cache.materialize(motif, rr.spec, rr.config.threads);
        const std::string key = harness::checksum_hex(harness::spec_key(motif, rr.spec));
        json files = json::array();
        for (const auto& f : ds.files) files.push_back(f.string());
        emit(result_json, {{"schema", harness::kResultSchema},
                           {"motif", std::string(motif_name(motif))},
                           {"source", std::string(to_string(rr.spec.source))},
                           {"dataset_key", key},
                           {"files", files},
                           {"manifest", (dir / (key + ".json")).string()},
                           {"bytes", file_bytes(ds.files)},
                           {"generated", ds.generated},
                           {"data_spec", json::parse(harness::spec_to_json(rr.spec))}});
    });
}

mb_status mb_run(mb_context* ctx, const char* motif_name_c, const char* settings_json, char** result_json) {
    return guard(ctx, [&] {
        if (!motif_name_c) throw ParamError("motif name is NULL");
        const MotifId motif = parse_motif(motif_name_c);
        const json req = parse_object(settings_json);
        harness::RunOptions opts;
        opts.data_dir = ctx->data_dir;
        opts.results_dir = ctx->results_dir;
        opts.proc_root = ctx->proc_root;
        opts.counters = ctx->counters;

        harness::RunRequest rr;
        if (req.contains("dataset")) {
            // A manifest written by generation: its directory is the cache.
            const fs::path manifest = req["dataset"].get<std::string>();
            std::ifstream in(manifest, std::ios::binary);
            if (!in) throw NotFoundError("dataset manifest '" + manifest.string() + "' not found");
            std::stringstream ss;
            ss << in.rdbuf();
            for (const char* k : {"size", "source", "profile", "sparsity", "seed"}) {
                if (req.contains(k)) throw ParamError(std::string("'") + k + "' cannot be combined with a dataset");
            }
            rr = harness::parse_run_request(motif, settings_of(req, {"dataset"}));
            rr.spec = harness::spec_from_json(ss.str());
            harness::check_binding(motif, rr.spec);
            opts.data_dir = manifest.parent_path().empty() ? fs::path(".") : manifest.parent_path();
        } else {
            rr = harness::parse_run_request(motif, settings_of(req, {}));
        }
        opts.params = rr.params;
        const auto r = harness::run_motif(motif, rr.spec, rr.config, opts);
        json j = json::parse(harness::to_json_line(r));
        j["results_file"] = (opts.results_dir / (r.run_id + ".jsonl")).string();
        emit(result_json, j);
    });
}

mb_status mb_run_pipeline(mb_context* ctx, const char* pipeline_path, const char* settings_json, char** result_json) {
    return guard(ctx, [&] {
        if (!pipeline_path) throw ParamError("pipeline path is NULL");
        const json req = parse_object(settings_json);
        harness::RunConfig cfg;
        for (const auto& [k, v] : req.items()) {
            if (k == "threads") cfg.threads = std::stoul(as_text(v));
            else if (k == "repetitions" || k == "reps") cfg.repetitions = std::stoul(as_text(v));
            else if (k == "warmup") cfg.warmup_runs = std::stoul(as_text(v));
            else throw ParamError("unknown pipeline option '" + k + "'");
        }
        cfg.validate();
        const auto p = harness::load_pipeline(pipeline_path);
        const auto r = harness::run_pipeline(p, cfg, ctx->data_dir);
        json j = json::parse(harness::pipeline_result_json(r));
        j["schema"] = harness::kResultSchema;
        emit(result_json, j);
    });
}

mb_status mb_sweep(mb_context* ctx, const char* plan_path, char** result_json) {
    return guard(ctx, [&] {
        if (!plan_path) throw ParamError("plan path is NULL");
        const auto plan = harness::load_plan(plan_path);
        harness::RunOptions opts;
        opts.data_dir = ctx->data_dir;
        opts.results_dir = ctx->results_dir;
        opts.proc_root = ctx->proc_root;
        opts.counters = ctx->counters;
        opts.params = plan.params;
        const auto rs = harness::run_experiment_matrix(plan, opts);
        json cells = json::array();
        for (const auto& c : rs.cells) {
            json cj = {{"motif", std::string(motif_name(c.cell.motif))},
                       {"axes", c.cell.axes},
                       {"status", std::string(harness::to_string(c.status))},
                       {"message", c.message}};
            if (c.result) {
                cj["wall_time_mean"] = c.result->mean_wall_time();
                cj["checksum"] = harness::checksum_hex(c.result->checksum);
                cj["timing_only"] = c.result->timing_only;
                cj["warnings"] = c.result->warnings;
            }
            cells.push_back(cj);
        }
        emit(result_json, {{"schema", harness::kResultSchema},
                           {"plan", plan.name},
                           {"run_id", rs.run_id},
                           {"results_file", rs.file.string()},
                           {"ok", rs.count(harness::CellStatus::Ok)},
                           {"skipped", rs.count(harness::CellStatus::Skipped)},
                           {"failed", rs.count(harness::CellStatus::Failed)},
                           {"cells", cells}});
    });
}

mb_status mb_analyze(mb_context* ctx, const char* request_json, char** result_json) {
    return guard(ctx, [&] {
        const json req = parse_object(request_json);
        const auto files = expand_inputs(req.value("inputs", json::array()));
        if (files.empty()) throw NotFoundError("no result files to analyze");
        std::vector<harness::RunResult> results;
        for (const auto& f : files) {
            auto part = harness::load_results(f);
            results.insert(results.end(), part.begin(), part.end());
        }
        if (results.empty()) throw NotFoundError("the result files hold no successful runs");

        const auto linkage = analysis::parse_linkage(req.value("linkage", std::string("average")));
        const double retained = req.value("retained_variance", 0.9);
        const std::size_t baseline = req.value("baseline", std::size_t{0});
        const fs::path out = req.value("out_dir", std::string("reports"));
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());

        const auto rep = analysis::analyze_results(results, linkage, retained);
        json written = json::array();
        auto put = [&](const std::string& name, const std::string& body) {
            write_file(out / name, body);
            written.push_back((out / name).string());
        };
        put("breakdown.svg", analysis::breakdown_bars_svg(results));
        put("io.svg", analysis::io_bars_svg(results, baseline));
        if (results.size() >= 2) {
            put("metrics.csv", analysis::matrix_csv(rep.matrix));
            put("report.json", analysis::report_json(rep));
        }
        if (rep.tree) put("dendrogram.svg", analysis::dendrogram_svg(*rep.tree));

        json clusters = json::object();
        for (std::size_t i = 0; i < rep.clusters.size(); ++i) clusters[rep.matrix.row_labels[i]] = rep.clusters[i];
        json merges = json::array();
        if (rep.tree) {
            for (const auto& m : rep.tree->merges) merges.push_back(m.height);
        }
        emit(result_json, {{"schema", analysis::kReportSchema},
                           {"runs", results.size()},
                           {"inputs", files.size()},
                           {"files", written},
                           {"rows", rep.matrix.row_labels},
                           {"columns", rep.matrix.cols()},
                           {"components", rep.pca ? json(rep.pca->components) : json(nullptr)},
                           {"merge_heights", merges},
                           {"clusters", clusters},
                           {"notices", rep.notices}});
    });
}

mb_status mb_describe(mb_context* ctx, const char* name, char** result_json) {
    return guard(ctx, [&] {
        if (name) {
            const auto* w = find_workload(name);
            if (!w) {
                std::string msg = "unknown workload '" + std::string(name) + "'";
                const auto sug = suggest_workloads(name);
                if (!sug.empty()) {
                    msg += "; did you mean: ";
                    for (std::size_t i = 0; i < sug.size(); ++i) msg += (i ? ", " : "") + sug[i];
                }
                throw NotFoundError(msg);
            }
            json j = workload_json(*w);
            j["schema"] = harness::kResultSchema;
            emit(result_json, j);
            return;
        }
        json ws = json::array();
        for (const auto& w : workload_registry()) ws.push_back(workload_json(w));
        json ms = json::array();
        for (auto m : kAllMotifs) {
            ms.push_back({{"name", std::string(motif_name(m))},
                          {"class", std::string(motif_class_name(motif_class(m)))},
                          {"ai", is_ai_motif(m)}});
        }
        emit(result_json, {{"schema", harness::kResultSchema}, {"workloads", ws}, {"motifs", ms}});
    });
}

void mb_free_string(char* s) { std::free(s); }

}  // extern "C"
