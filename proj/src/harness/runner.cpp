#include "binding.hpp"

#include "motifbench/error.hpp"
#include "motifbench/harness.hpp"
#include "motifbench/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>
#include <random>

#include <sched.h>
#include <sys/resource.h>

namespace motifbench::harness {

namespace fs = std::filesystem;
using nlohmann::json;
namespace td = topdown;

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Restores the caller's affinity mask when it goes out of scope.
class CpuPin {
public:
    explicit CpuPin(const std::vector<unsigned>& cores) {
        if (cores.empty()) return;
        if (sched_getaffinity(0, sizeof(saved_), &saved_) != 0) {
            throw Error(ErrorKind::Runtime, "sched_getaffinity failed");
        }
        cpu_set_t set;
        CPU_ZERO(&set);
        for (unsigned c : cores) CPU_SET(c, &set);
        if (sched_setaffinity(0, sizeof(set), &set) != 0) {
            throw ParamError("cannot pin to the requested cores");
        }
        active_ = true;
    }
    ~CpuPin() {
        if (active_) sched_setaffinity(0, sizeof(saved_), &saved_);
    }
    CpuPin(const CpuPin&) = delete;
    CpuPin& operator=(const CpuPin&) = delete;

private:
    cpu_set_t saved_{};
    bool active_ = false;
};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

json params_json(const KernelParams& p) {
    return {{"grep_pattern", p.grep_pattern},
            {"sample_fraction", p.sample_fraction},
            {"sort_memory_budget", p.sort_memory_budget},
            {"conv_kernel", p.conv_kernel},
            {"conv_stride", p.conv_stride},
            {"conv_padding", p.conv_padding},
            {"conv_out_channels", p.conv_out_channels},
            {"pool_window", p.pool_window},
            {"pool_stride", p.pool_stride},
            {"fc_out_features", p.fc_out_features},
            {"weight_seed", p.weight_seed}};
}

double seconds(const timeval& t) { return static_cast<double>(t.tv_sec) + static_cast<double>(t.tv_usec) * 1e-6; }

std::uint64_t grew(long a, long b) { return b > a ? static_cast<std::uint64_t>(b - a) : 0; }

ProcessUsage usage_between(const rusage& a, const rusage& b) {
    ProcessUsage u;
    u.user_time = std::max(0.0, seconds(b.ru_utime) - seconds(a.ru_utime));
    u.system_time = std::max(0.0, seconds(b.ru_stime) - seconds(a.ru_stime));
    u.minor_faults = grew(a.ru_minflt, b.ru_minflt);
    u.major_faults = grew(a.ru_majflt, b.ru_majflt);
    u.voluntary_switches = grew(a.ru_nvcsw, b.ru_nvcsw);
    u.involuntary_switches = grew(a.ru_nivcsw, b.ru_nivcsw);
    return u;
}

KernelParams params_from(const json& j) {
    KernelParams p;
    p.grep_pattern = j.value("grep_pattern", p.grep_pattern);
    p.sample_fraction = j.value("sample_fraction", p.sample_fraction);
    p.sort_memory_budget = j.value("sort_memory_budget", p.sort_memory_budget);
    p.conv_kernel = j.value("conv_kernel", p.conv_kernel);
    p.conv_stride = j.value("conv_stride", p.conv_stride);
    p.conv_padding = j.value("conv_padding", p.conv_padding);
    p.conv_out_channels = j.value("conv_out_channels", p.conv_out_channels);
    p.pool_window = j.value("pool_window", p.pool_window);
    p.pool_stride = j.value("pool_stride", p.pool_stride);
    p.fc_out_features = j.value("fc_out_features", p.fc_out_features);
    p.weight_seed = j.value("weight_seed", p.weight_seed);
    return p;
}

td::Provider parse_provider(std::string_view s) {
    if (s == "perf") return td::Provider::PerfEvent;
    if (s == "synthetic") return td::Provider::Synthetic;
    return td::Provider::Null;
}

}  // namespace

void RunConfig::validate() const {
    if (threads < 1) throw ParamError("threads must be >= 1");
    if (repetitions < 1) throw ParamError("repetitions must be >= 1");
    if (sample_interval < std::chrono::milliseconds(100)) {
        throw ParamError("sample interval must be >= 100 ms, got " + std::to_string(sample_interval.count()) + " ms");
    }
    for (unsigned c : cpu_pinning) {
        if (c >= CPU_SETSIZE) throw ParamError("core id " + std::to_string(c) + " out of range");
    }
}

double RunResult::mean_wall_time() const {
    if (wall_time.empty()) return 0.0;
    return std::accumulate(wall_time.begin(), wall_time.end(), 0.0) / static_cast<double>(wall_time.size());
}

double RunResult::wall_time_cv() const {
    if (wall_time.size() < 2) return 0.0;
    const double mean = mean_wall_time();
    if (!(mean > 0.0)) return 0.0;
    double ss = 0.0;
    for (double t : wall_time) ss += (t - mean) * (t - mean);
    return std::sqrt(ss / static_cast<double>(wall_time.size() - 1)) / mean;
}

std::string make_run_id(std::string_view tag) {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
    std::random_device rd;
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "%06x", rd() & 0xffffffu);
    std::string clean;
    for (char c : tag) clean += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return std::string(stamp) + "-" + clean + "-" + suffix;
}

std::string checksum_hex(std::uint64_t c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(c));
    return buf;
}

RunResult run_motif(MotifId motif, const DataSpec& spec, const RunConfig& config, const RunOptions& opts) {
    config.validate();
    if (config.threads > hardware_threads()) {
        throw ParamError("threads (" + std::to_string(config.threads) + ") exceed hardware threads (" +
                         std::to_string(hardware_threads()) + ")");
    }

    RunResult r;
    r.motif = motif;
    r.data_spec = spec;
    r.config = config;
    r.params = opts.params;
    r.started_at = utc_now();
    r.axes["size"] = std::string(to_string(spec.size_class));

    DatasetCache cache(opts.data_dir);
    const Dataset data = cache.materialize(motif, spec, config.threads);
    r.dataset_generated = data.generated;

    const fs::path scratch = opts.data_dir / "scratch";
    fs::create_directories(scratch);
    auto bound = detail::bind_dataset(motif, data, spec, opts.params, scratch);

    CpuPin pin(config.cpu_pinning);
    for (unsigned i = 0; i < config.warmup_runs; ++i) bound->execute(config.threads);

    auto choice = td::make_session(opts.counters);
    r.warnings = std::move(choice.warnings);
    auto& session = choice.session;
    bool counting = session && session->provider() != td::Provider::Null;
    if (counting) {
        try {
            session->start();
        } catch (const CounterError& e) {
            r.warnings.push_back(std::string("counters disabled: ") + e.what());
            counting = false;
        }
    }

    SystemSampler sampler(make_proc_source(opts.proc_root), config.sample_interval);
    sampler.start();
    rusage ru0{};
    const bool have_usage = getrusage(RUSAGE_SELF, &ru0) == 0;
    for (unsigned i = 0; i < config.repetitions; ++i) {
        const auto t0 = Clock::now();
        bound->execute(config.threads);
        r.wall_time.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
        const std::uint64_t c = bound->checksum();
        if (i == 0) {
            r.checksum = c;
        } else if (c != r.checksum) {
            r.checksum_stable = false;
        }
    }
    rusage ru1{};
    if (have_usage && getrusage(RUSAGE_SELF, &ru1) == 0) r.process = usage_between(ru0, ru1);
    r.system_samples = sampler.stop();
    r.system_source = std::string(sampler.source_name());
    if (sampler.degraded()) r.warnings.push_back("system metrics source unavailable; samples carry timestamps only");

    if (counting) {
        try {
            r.counters = session->stop();
        } catch (const CounterError& e) {
            r.warnings.push_back(std::string("counter read failed: ") + e.what());
        }
    }
    r.timing_only = !r.counters.has_value();
    if (!r.checksum_stable) r.warnings.push_back("checksum differs across repetitions");

    r.run_id = make_run_id(motif_name(motif));
    if (opts.persist) persist_results(opts.results_dir, r.run_id, {r});
    return r;
}

// ---------------------------------------------------------------------------
// JSON lines

std::string to_json_line(const RunResult& r) {
    json j;
    j["schema"] = kResultSchema;
    j["status"] = "ok";
    j["run_id"] = r.run_id;
    j["motif"] = std::string(motif_name(r.motif));
    j["motif_class"] = std::string(motif_class_name(motif_class(r.motif)));
    j["started_at"] = r.started_at;
    j["axes"] = r.axes;
    j["data_spec"] = json::parse(spec_to_json(r.data_spec));
    j["dataset_key"] = checksum_hex(spec_key(r.motif, r.data_spec));
    j["config"] = {{"threads", r.config.threads},
                   {"repetitions", r.config.repetitions},
                   {"warmup_runs", r.config.warmup_runs},
                   {"sample_interval_ms", r.config.sample_interval.count()},
                   {"cpu_pinning", r.config.cpu_pinning}};
    j["params"] = params_json(r.params);
    j["wall_time"] = r.wall_time;
    j["wall_time_mean"] = r.mean_wall_time();
    j["wall_time_cv"] = r.wall_time_cv();
    j["checksum"] = checksum_hex(r.checksum);
    j["checksum_stable"] = r.checksum_stable;
    j["timing_only"] = r.timing_only;
    j["dataset_generated"] = r.dataset_generated;
    j["warnings"] = r.warnings;
    j["system_source"] = r.system_source;
    json samples = json::array();
    for (const auto& s : r.system_samples) {
        samples.push_back({{"t", s.timestamp},
                           {"cpu_utilization", opt(s.cpu_utilization)},
                           {"io_wait", opt(s.io_wait)},
                           {"disk_read_bw", opt(s.disk_read_bw)},
                           {"disk_write_bw", opt(s.disk_write_bw)},
                           {"net_rx_bw", opt(s.net_rx_bw)},
                           {"net_tx_bw", opt(s.net_tx_bw)},
                           {"major_page_faults_per_s", opt(s.major_page_faults_per_s)}});
    }
    j["system_samples"] = samples;
    if (r.process) {
        const auto& u = *r.process;
        j["process"] = {{"user_time", u.user_time},
                        {"system_time", u.system_time},
                        {"minor_faults", u.minor_faults},
                        {"major_faults", u.major_faults},
                        {"voluntary_switches", u.voluntary_switches},
                        {"involuntary_switches", u.involuntary_switches}};
    } else {
        j["process"] = nullptr;
    }
    if (r.counters) {
        json ev = json::object();
        for (const auto& [name, e] : r.counters->events) {
            ev[name] = {{"raw", e.raw_count}, {"enabled", e.time_enabled}, {"running", e.time_running},
                        {"scaled", e.scaled()}};
        }
        j["counters"] = {{"provider", std::string(td::to_string(r.counters->provider))},
                         {"width", r.counters->width},
                         {"slots", r.counters->slots},
                         {"events", ev}};
        const auto tree = td::analyze(*r.counters);
        json t = json::object();
        for (const auto& [name, v] : td::flatten(tree)) t[name] = opt(v);
        t["level1.low_confidence"] = tree.level1.low_confidence;
        j["topdown"] = t;
        const auto em = td::exec_metrics(*r.counters);
        j["exec"] = {{"ipc", opt(em.ipc)}, {"mlp", opt(em.mlp)}};
    } else {
        j["counters"] = nullptr;
    }
    return j.dump();
}

RunResult run_result_from_json(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ParamError(std::string("malformed result line: ") + e.what());
    }
    if (j.value("schema", 0) != kResultSchema) {
        throw ParamError("unsupported result schema " + std::to_string(j.value("schema", 0)));
    }
    RunResult r;
    try {
        r.run_id = j.at("run_id").get<std::string>();
        r.motif = parse_motif(j.at("motif").get<std::string>());
        r.started_at = j.value("started_at", std::string());
        if (j.contains("axes")) r.axes = j["axes"].get<std::map<std::string, std::string>>();
        r.data_spec = spec_from_json(j.at("data_spec").dump());
        const auto& c = j.at("config");
        r.config.threads = c.value("threads", 1u);
        r.config.repetitions = c.value("repetitions", 1u);
        r.config.warmup_runs = c.value("warmup_runs", 0u);
        r.config.sample_interval = std::chrono::milliseconds(c.value("sample_interval_ms", 1000));
        r.config.cpu_pinning = c.value("cpu_pinning", std::vector<unsigned>{});
        if (j.contains("params")) r.params = params_from(j["params"]);
        r.wall_time = j.at("wall_time").get<std::vector<double>>();
        r.checksum = std::stoull(j.at("checksum").get<std::string>(), nullptr, 16);
        r.checksum_stable = j.value("checksum_stable", true);
        r.timing_only = j.value("timing_only", true);
        r.dataset_generated = j.value("dataset_generated", false);
        r.warnings = j.value("warnings", std::vector<std::string>{});
        r.system_source = j.value("system_source", std::string("null"));
        for (const auto& s : j.value("system_samples", json::array())) {
            SystemSample x;
            x.timestamp = s.value("t", 0.0);
            x.cpu_utilization = opt_from(s, "cpu_utilization");
            x.io_wait = opt_from(s, "io_wait");
            x.disk_read_bw = opt_from(s, "disk_read_bw");
            x.disk_write_bw = opt_from(s, "disk_write_bw");
            x.net_rx_bw = opt_from(s, "net_rx_bw");
            x.net_tx_bw = opt_from(s, "net_tx_bw");
            x.major_page_faults_per_s = opt_from(s, "major_page_faults_per_s");
            r.system_samples.push_back(x);
        }
        if (j.contains("process") && !j["process"].is_null()) {
            const auto& pj = j["process"];
            ProcessUsage u;
            u.user_time = pj.value("user_time", 0.0);
            u.system_time = pj.value("system_time", 0.0);
            u.minor_faults = pj.value("minor_faults", std::uint64_t{0});
            u.major_faults = pj.value("major_faults", std::uint64_t{0});
            u.voluntary_switches = pj.value("voluntary_switches", std::uint64_t{0});
            u.involuntary_switches = pj.value("involuntary_switches", std::uint64_t{0});
            r.process = u;
        }
        if (j.contains("counters") && !j["counters"].is_null()) {
            const auto& cj = j["counters"];
            td::CounterReadings cr;
            cr.provider = parse_provider(cj.value("provider", std::string("null")));
            cr.width = cj.value("width", 4u);
            cr.slots = cj.value("slots", 0.0);
            for (const auto& [name, e] : cj.at("events").items()) {
                td::CounterEvent ce;
                ce.name = name;
                ce.raw_count = e.value("raw", std::uint64_t{0});
                ce.time_enabled = e.value("enabled", std::uint64_t{0});
                ce.time_running = e.value("running", std::uint64_t{0});
                cr.events.emplace(name, ce);
            }
            r.counters = std::move(cr);
        }
    } catch (const json::exception& e) {
        throw ParamError(std::string("bad result record: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ParamError("bad checksum in result record");
    }
    return r;
}

fs::path persist_results(const fs::path& dir, const std::string& run_id, const std::vector<RunResult>& results) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create results directory '" + dir.string() + "': " + ec.message());
    const fs::path path = dir / (run_id + ".jsonl");
    std::ofstream os(path, std::ios::app);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    for (const auto& r : results) os << to_json_line(r) << '\n';
    if (!os) throw IoError("write failed on '" + path.string() + "'");
    return path;
}

std::vector<RunResult> load_results(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open '" + file.string() + "'");
    std::vector<RunResult> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json head;
        try {
            head = json::parse(line);
        } catch (const json::exception& e) {
            throw ParamError(file.string() + ":" + std::to_string(n) + ": " + e.what());
        }
        if (head.value("status", std::string("ok")) != "ok") continue;
        try {
            out.push_back(run_result_from_json(line));
        } catch (const Error& e) {
            throw ParamError(file.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pipelines

PipelineResult run_pipeline(const Pipeline& pipeline, const RunConfig& config, const fs::path& data_dir) {
    config.validate();
    if (pipeline.stages.empty()) throw ParamError("pipeline has no stages");
    if (!pipeline.stages.front().input) {
        throw ParamError("first stage '" + pipeline.stages.front().name + "' needs an input dataset");
    }

    // Check the whole chain before running anything.
    detail::Shape prev;
    for (std::size_t i = 0; i < pipeline.stages.size(); ++i) {
        const auto& st = pipeline.stages[i];
        try {
            if (st.input) {
                check_binding(st.motif, *st.input);
                const auto in = detail::dataset_shape(st.motif, *st.input);
                prev = in.kind == detail::Shape::Kind::None ? in : detail::infer_output(st.motif, in, st.params);
            } else {
                prev = detail::infer_output(st.motif, prev, st.params);
            }
        } catch (const ParamError& e) {
            if (st.input) throw ParamError("stage '" + st.name + "': " + e.what());
            const auto& before = pipeline.stages[i - 1];
            throw ParamError("stage '" + st.name + "' (" + std::string(motif_name(st.motif)) +
                             ") cannot consume the output of stage '" + before.name + "' (" +
                             std::string(motif_name(before.motif)) + "): " + e.what());
        }
    }

    PipelineResult res;
    res.name = pipeline.name;
    DatasetCache cache(data_dir);
    const fs::path scratch = data_dir / "scratch";
    fs::create_directories(scratch);
    CpuPin pin(config.cpu_pinning);

    detail::Value carry;
    for (const auto& st : pipeline.stages) {
        std::unique_ptr<detail::BoundMotif> bound;
        if (st.input) {
            const Dataset d = cache.materialize(st.motif, *st.input, config.threads);
            bound = detail::bind_dataset(st.motif, d, *st.input, st.params, scratch);
        } else {
            bound = detail::bind_value(st.motif, std::move(carry), st.params);
        }
        for (unsigned i = 0; i < config.warmup_runs; ++i) bound->execute(config.threads);
        double total = 0.0;
        for (unsigned i = 0; i < config.repetitions; ++i) {
            const auto t0 = Clock::now();
            bound->execute(config.threads);
            total += std::chrono::duration<double>(Clock::now() - t0).count();
        }
        StageResult sr;
        sr.name = st.name;
        sr.motif = st.motif;
        sr.wall_time = total / config.repetitions;
        sr.checksum = bound->checksum();
        sr.output_shape = bound->output_shape().str();
        carry = bound->take_output();
        res.stages.push_back(std::move(sr));
    }
    for (const auto& s : res.stages) res.total_time += s.wall_time;
    for (auto& s : res.stages) {
        s.percent_of_total = res.total_time > 0.0 ? 100.0 * s.wall_time / res.total_time : 100.0 / res.stages.size();
    }
    return res;
}

std::string pipeline_result_json(const PipelineResult& r) {
    json j;
    j["schema"] = kResultSchema;
    j["pipeline"] = r.name;
    j["total_time"] = r.total_time;
    json stages = json::array();
    std::map<std::string, double> by_class;
    for (const auto& s : r.stages) {
        const std::string cls(motif_class_name(motif_class(s.motif)));
        stages.push_back({{"name", s.name},
                          {"motif", std::string(motif_name(s.motif))},
                          {"motif_class", cls},
                          {"wall_time", s.wall_time},
                          {"percent", s.percent_of_total},
                          {"output_shape", s.output_shape},
                          {"checksum", checksum_hex(s.checksum)}});
        by_class[cls] += s.percent_of_total;
    }
    j["stages"] = stages;
    j["percent_by_class"] = by_class;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Experiment matrix

std::size_t ExperimentPlan::cell_count() const {
    return axes.motifs.size() * std::max<std::size_t>(1, axes.sizes.size()) *
           std::max<std::size_t>(1, axes.sparsity.size()) * std::max<std::size_t>(1, axes.sources.size());
}

std::vector<Cell> expand_plan(const ExperimentPlan& plan) {
    if (plan.axes.motifs.empty()) throw ParamError("plan '" + plan.name + "' lists no motifs");
    const std::vector<SizeClass> sizes = plan.axes.sizes.empty() ? std::vector{SizeClass::Small} : plan.axes.sizes;
    std::vector<std::optional<double>> sparsity{std::nullopt};
    if (!plan.axes.sparsity.empty()) sparsity.assign(plan.axes.sparsity.begin(), plan.axes.sparsity.end());
    std::vector<std::optional<Source>> sources{std::nullopt};
    if (!plan.axes.sources.empty()) sources.assign(plan.axes.sources.begin(), plan.axes.sources.end());

    std::vector<Cell> cells;
    for (MotifId m : plan.axes.motifs) {
        for (SizeClass sz : sizes) {
            for (const auto& sp : sparsity) {
                for (const auto& src : sources) {
                    Cell c;
                    c.motif = m;
                    c.spec = default_spec(m, sz, plan.profile);
                    c.spec.custom = plan.custom;
                    c.spec.pattern = plan.pattern;
                    c.spec.seed = plan.seed;
                    c.axes["size"] = std::string(to_string(sz));
                    if (sp) {
                        c.spec.pattern.sparsity = *sp;
                        char buf[32];
                        std::snprintf(buf, sizeof buf, "%g", *sp);
                        c.axes["sparsity"] = buf;
                    }
                    if (src) {
                        c.spec.source = *src;
                        c.spec.logical_type = default_logical_type(*src);
                        c.axes["source"] = std::string(to_string(*src));
                    }
                    cells.push_back(std::move(c));
                }
            }
        }
    }
    return cells;
}

std::string_view to_string(CellStatus s) noexcept {
    switch (s) {
        case CellStatus::Ok: return "ok";
        case CellStatus::Skipped: return "skipped";
        case CellStatus::Failed: return "failed";
    }
    return "?";
}

std::size_t ResultSet::count(CellStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [&](const CellResult& c) { return c.status == s; }));
}

ResultSet run_experiment_matrix(const ExperimentPlan& plan, const RunOptions& opts) {
    plan.config.validate();
    ResultSet rs;
    rs.run_id = make_run_id(plan.name.empty() ? "sweep" : plan.name);
    RunOptions cell_opts = opts;
    cell_opts.persist = false;
    cell_opts.params = plan.params;

    for (auto& cell : expand_plan(plan)) {
        CellResult cr;
        cr.cell = cell;
        try {
            const std::uint64_t need = estimate_dataset_bytes(cell.motif, cell.spec);
            if (need > plan.disk_budget) {
                cr.status = CellStatus::Skipped;
                cr.message = "dataset estimate " + std::to_string(need) + " B exceeds disk budget " +
                             std::to_string(plan.disk_budget) + " B";
            } else {
                RunResult r = run_motif(cell.motif, cell.spec, plan.config, cell_opts);
                r.axes = cell.axes;
                r.run_id = rs.run_id;
                cr.result = std::move(r);
            }
        } catch (const std::exception& e) {
            cr.status = CellStatus::Failed;
            cr.message = e.what();
        }
        rs.cells.push_back(std::move(cr));
    }

    std::error_code ec;
    fs::create_directories(opts.results_dir, ec);
    if (ec) throw IoError("cannot create results directory '" + opts.results_dir.string() + "': " + ec.message());
    rs.file = opts.results_dir / (rs.run_id + ".jsonl");
    std::ofstream os(rs.file);
    if (!os) throw IoError("cannot open '" + rs.file.string() + "' for writing");
    for (const auto& c : rs.cells) {
        if (c.result) {
            os << to_json_line(*c.result) << '\n';
        } else {
            json j{{"schema", kResultSchema},
                   {"status", std::string(to_string(c.status))},
                   {"run_id", rs.run_id},
                   {"motif", std::string(motif_name(c.cell.motif))},
                   {"axes", c.cell.axes},
                   {"message", c.message}};
            os << j.dump() << '\n';
        }
    }
    if (!os) throw IoError("write failed on '" + rs.file.string() + "'");
    return rs;
}

}  // namespace motifbench::harness
