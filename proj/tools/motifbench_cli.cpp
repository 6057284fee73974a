// Command-line driver. Talks to the library only through the C API.
#include "motifbench/motifbench.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Context {
    mb_context* ctx = nullptr;
    ~Context() { mb_context_destroy(ctx); }
};

struct Failure {
    int code;
};

// Calls one mb_* entry point and returns its JSON result.
template <typename Fn>
json call(mb_context* ctx, Fn&& fn, bool param_is_usage = false) {
    char* out = nullptr;
    const mb_status st = fn(&out);
    if (st != MB_OK) {
        std::cerr << "error: " << mb_last_error(ctx) << "\n";
        throw Failure{param_is_usage && st == MB_ERR_PARAM ? kExitUsage : kExitFailure};
    }
    std::unique_ptr<char, decltype(&mb_free_string)> owned(out, &mb_free_string);
    return json::parse(owned.get());
}

// Dataset flags shared by gen and run; unset flags are left out of the request.
struct DataFlags {
    std::optional<std::string> size, profile, source, value_kind, text_bytes;
    std::optional<unsigned> scale, edge_factor, rows, cols, dim, channels, batch, threads;
    std::optional<double> sparsity, zipf;
    std::optional<std::uint64_t> seed;

    void add(CLI::App* app) {
        app->add_option("--size", size, "size class: small, medium, large, custom");
        app->add_option("--profile", profile, "size table: desk (default) or paper");
        app->add_option("--source", source, "text, sequence, graph, matrix, tensor");
        app->add_option("--bytes", text_bytes, "text size, e.g. 4MiB");
        app->add_option("--scale", scale, "graph scale (2^scale vertices)");
        app->add_option("--edge-factor", edge_factor, "graph edges per vertex");
        app->add_option("--rows", rows, "matrix rows");
        app->add_option("--cols", cols, "matrix columns");
        app->add_option("--dim", dim, "tensor height/width, or square matrix size");
        app->add_option("--channels", channels, "tensor channels");
        app->add_option("--batch", batch, "tensor batch");
        app->add_option("--sparsity", sparsity, "share of zero elements in [0, 1]");
        app->add_option("--zipf", zipf, "text token Zipf exponent");
        app->add_option("--value-kind", value_kind, "int64 or float64");
        app->add_option("--seed", seed, "generation seed");
        app->add_option("--threads", threads, "worker threads");
    }

    void fill(json& j) const {
        auto put = [&](const char* k, const auto& v) {
            if (v) j[k] = *v;
        };
        put("size", size);
        put("profile", profile);
        put("source", source);
        put("text_bytes", text_bytes);
        put("graph_scale", scale);
        put("edge_factor", edge_factor);
        put("rows", rows);
        put("cols", cols);
        put("dim", dim);
        put("channels", channels);
        put("batch", batch);
        put("sparsity", sparsity);
        put("zipf_exponent", zipf);
        put("value_kind", value_kind);
        put("seed", seed);
        put("threads", threads);
    }
};

// "key=value" pairs for kernel parameters and anything without a flag.
void add_sets(json& j, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "error: --set expects key=value, got '" << s << "'\n";
            throw Failure{kExitUsage};
        }
        j[s.substr(0, eq)] = s.substr(eq + 1);
    }
}

std::string fmt_seconds(double s) {
    char buf[32];
    if (s < 1e-3) std::snprintf(buf, sizeof buf, "%.1f us", s * 1e6);
    else if (s < 1.0) std::snprintf(buf, sizeof buf, "%.2f ms", s * 1e3);
    else std::snprintf(buf, sizeof buf, "%.3f s", s);
    return buf;
}

std::string axes_text(const json& axes) {
    std::string s;
    for (const auto& [k, v] : axes.items()) s += (s.empty() ? "" : " ") + k + "=" + v.get<std::string>();
    return s.empty() ? "-" : s;
}

void print_warnings(const json& j) {
    for (const auto& w : j.value("warnings", json::array())) std::cerr << "warning: " << w.get<std::string>() << "\n";
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data motif benchmark suite: generate inputs, run motifs, sweep, analyze."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(mb_version()));

    bool as_json = false;
    std::optional<std::string> data_dir, results_dir, counters;
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--data-dir", data_dir, "dataset cache directory")->envname("MOTIFBENCH_DATA_DIR");
    app.add_option("--results-dir", results_dir, "results directory")->envname("MOTIFBENCH_RESULTS_DIR");
    app.add_option("--counters", counters, "perf (default), null or synthetic:<file>");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a dataset and its manifest");
    DataFlags gen_flags;
    gen_flags.add(gen);
    std::optional<std::string> gen_motif, gen_out;
    gen->add_option("--motif", gen_motif, "motif whose size table applies (default: by source)");
    gen->add_option("--out", gen_out, "output directory (default: data directory)");

    // run
    auto* run = app.add_subcommand("run", "run one motif and persist the result");
    DataFlags run_flags;
    run_flags.add(run);
    std::string run_motif;
    std::optional<std::string> run_size_pos, run_dataset;
    std::optional<unsigned> reps, warmup;
    std::optional<long> interval_ms;
    std::vector<std::string> run_sets;
    run->add_option("motif", run_motif, "motif name")->required();
    run->add_option("size_class", run_size_pos, "size class (same as --size)");
    run->add_option("--dataset", run_dataset, "dataset manifest written by gen");
    run->add_option("--reps", reps, "measured repetitions");
    run->add_option("--warmup", warmup, "warmup runs");
    run->add_option("--interval-ms", interval_ms, "system sampling interval");
    run->add_option("--set", run_sets, "extra key=value option (kernel parameters)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run an experiment plan");
    std::string plan_path;
    sweep->add_option("plan", plan_path, "plan file")->required();

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "run a chained pipeline config");
    std::string pipe_path;
    std::optional<unsigned> pipe_threads, pipe_reps, pipe_warmup;
    pipe->add_option("config", pipe_path, "pipeline file")->required();
    pipe->add_option("--threads", pipe_threads, "worker threads");
    pipe->add_option("--reps", pipe_reps, "measured repetitions per stage");
    pipe->add_option("--warmup", pipe_warmup, "warmup runs per stage");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "build reports from result files");
    std::vector<std::string> inputs;
    std::string out_dir = "reports", linkage = "average";
    double retained = 0.9;
    std::size_t baseline = 0;
    analyze->add_option("inputs", inputs, "result .jsonl files or directories")->required();
    analyze->add_option("--out", out_dir, "report directory")->capture_default_str();
    analyze->add_option("--linkage", linkage, "average, complete or single")->capture_default_str();
    analyze->add_option("--retained", retained, "PCA retained variance")->capture_default_str();
    analyze->add_option("--baseline", baseline, "baseline run index for I/O ratios")->capture_default_str();

    // describe
    auto* describe = app.add_subcommand("describe", "workload-to-motif registry");
    std::optional<std::string> workload;
    bool all = false;
    describe->add_option("workload", workload, "workload name");
    describe->add_flag("--all", all, "list every workload and motif");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    Context c;
    if (mb_context_create(&c.ctx) != MB_OK) {
        std::cerr << "error: " << mb_last_error(nullptr) << "\n";
        return kExitFailure;
    }
    auto set = [&](const char* key, const std::optional<std::string>& v) {
        if (v && mb_context_set(c.ctx, key, v->c_str()) != MB_OK) {
            std::cerr << "error: " << mb_last_error(c.ctx) << "\n";
            throw Failure{kExitUsage};
        }
    };

    try {
        set("data_dir", data_dir);
        set("results_dir", results_dir);
        set("counters", counters);

        if (*gen) {
            json req = json::object();
            gen_flags.fill(req);
            if (gen_motif) req["motif"] = *gen_motif;
            if (gen_out) req["out_dir"] = *gen_out;
            const std::string body = req.dump();
            const json r = call(c.ctx, [&](char** o) { return mb_generate(c.ctx, body.c_str(), o); }, true);
            if (as_json) {
                print(r);
            } else {
                std::cout << (r["generated"].get<bool>() ? "generated " : "cached ") << r["source"].get<std::string>()
                          << " dataset " << r["dataset_key"].get<std::string>() << " (" << r["bytes"] << " bytes)\n";
                for (const auto& f : r["files"]) std::cout << "  " << f.get<std::string>() << "\n";
                std::cout << "  manifest " << r["manifest"].get<std::string>() << "\n";
            }
        } else if (*run) {
            json req = json::object();
            run_flags.fill(req);
            if (run_size_pos) {
                if (req.contains("size")) {
                    std::cerr << "error: size given both positionally and with --size\n";
                    return kExitUsage;
                }
                req["size"] = *run_size_pos;
            }
            if (run_dataset) req["dataset"] = *run_dataset;
            if (reps) req["repetitions"] = *reps;
            if (warmup) req["warmup"] = *warmup;
            if (interval_ms) req["interval_ms"] = *interval_ms;
            add_sets(req, run_sets);
            const std::string body = req.dump();
            const json r = call(c.ctx, [&](char** o) { return mb_run(c.ctx, run_motif.c_str(), body.c_str(), o); });
            if (as_json) {
                print(r);
            } else {
                print_warnings(r);
                std::cout << "run-id " << r["run_id"].get<std::string>() << "\n";
                std::cout << r["motif"].get<std::string>() << " (" << r["motif_class"].get<std::string>() << ")"
                          << "  wall " << fmt_seconds(r["wall_time_mean"].get<double>());
                char cv[32];
                std::snprintf(cv, sizeof cv, "%.1f%%", r["wall_time_cv"].get<double>() * 100.0);
                std::cout << "  cv " << cv << "  checksum " << r["checksum"].get<std::string>();
                if (r["timing_only"].get<bool>()) std::cout << "  [timing-only]";
                std::cout << "\n  results " << r["results_file"].get<std::string>() << "\n";
            }
        } else if (*sweep) {
            const json r = call(c.ctx, [&](char** o) { return mb_sweep(c.ctx, plan_path.c_str(), o); });
            if (as_json) {
                print(r);
            } else {
                std::printf("%-16s %-36s %-8s %s\n", "motif", "axes", "status", "time / message");
                for (const auto& cell : r["cells"]) {
                    const std::string st = cell["status"].get<std::string>();
                    const std::string detail = cell.contains("wall_time_mean")
                                                   ? fmt_seconds(cell["wall_time_mean"].get<double>()) +
                                                         (cell["timing_only"].get<bool>() ? " (timing-only)" : "")
                                                   : cell["message"].get<std::string>();
                    std::printf("%-16s %-36s %-8s %s\n", cell["motif"].get<std::string>().c_str(),
                                axes_text(cell["axes"]).c_str(), st.c_str(), detail.c_str());
                }
                std::cout << r["ok"] << " ok, " << r["skipped"] << " skipped, " << r["failed"] << " failed\n"
                          << "results " << r["results_file"].get<std::string>() << "\n";
            }
            if (r["ok"].get<std::size_t>() == 0 && !r["cells"].empty()) return kExitFailure;
        } else if (*pipe) {
            json req = json::object();
            if (pipe_threads) req["threads"] = *pipe_threads;
            if (pipe_reps) req["repetitions"] = *pipe_reps;
            if (pipe_warmup) req["warmup"] = *pipe_warmup;
            const std::string body = req.dump();
            const json r =
                call(c.ctx, [&](char** o) { return mb_run_pipeline(c.ctx, pipe_path.c_str(), body.c_str(), o); });
            if (as_json) {
                print(r);
            } else {
                std::printf("%-14s %-16s %-24s %12s %8s\n", "stage", "motif", "output", "time", "share");
                for (const auto& s : r["stages"]) {
                    std::printf("%-14s %-16s %-24s %12s %7.1f%%\n", s["name"].get<std::string>().c_str(),
                                s["motif"].get<std::string>().c_str(), s["output_shape"].get<std::string>().c_str(),
                                fmt_seconds(s["wall_time"].get<double>()).c_str(), s["percent"].get<double>());
                }
                std::cout << "total " << fmt_seconds(r["total_time"].get<double>()) << "\n";
            }
        } else if (*analyze) {
            json req = {{"inputs", inputs},
                        {"out_dir", out_dir},
                        {"linkage", linkage},
                        {"retained_variance", retained},
                        {"baseline", baseline}};
            const std::string body = req.dump();
            const json r = call(c.ctx, [&](char** o) { return mb_analyze(c.ctx, body.c_str(), o); });
            if (as_json) {
                print(r);
            } else {
                for (const auto& n : r["notices"]) std::cout << "note: " << n.get<std::string>() << "\n";
                std::cout << r["runs"] << " runs from " << r["inputs"] << " file(s)\n";
                if (!r["components"].is_null()) {
                    std::cout << r["columns"] << " metrics, " << r["components"] << " principal components\n";
                }
                for (const auto& [label, k] : r["clusters"].items()) std::cout << "  cluster " << k << "  " << label << "\n";
                for (const auto& f : r["files"]) std::cout << "wrote " << f.get<std::string>() << "\n";
            }
        } else if (*describe) {
            if (workload && all) {
                std::cerr << "error: give a workload name or --all, not both\n";
                return kExitUsage;
            }
            const char* name = workload && !all ? workload->c_str() : nullptr;
            const json r = call(c.ctx, [&](char** o) { return mb_describe(c.ctx, name, o); });
            if (as_json) {
                print(r);
            } else if (name) {
                std::cout << r["name"].get<std::string>() << ": " << r["classes_text"].get<std::string>() << "\n"
                          << "  domain: " << r["domain"].get<std::string>() << "\n"
                          << "  category: " << r["category"].get<std::string>() << "\n";
            } else {
                std::printf("%-34s %-28s %s\n", "workload", "domain", "motif classes");
                for (const auto& w : r["workloads"]) {
                    std::printf("%-34s %-28s %s\n", w["name"].get<std::string>().c_str(),
                                w["domain"].get<std::string>().c_str(), w["classes_text"].get<std::string>().c_str());
                }
                std::cout << "\nmotifs:";
                for (const auto& m : r["motifs"]) std::cout << " " << m["name"].get<std::string>();
                std::cout << "\n";
            }
        }
    } catch (const Failure& f) {
        return f.code;
    } catch (const json::exception& e) {
        std::cerr << "error: unexpected library output: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
