#pragma once

#include "motifbench/datagen.hpp"
#include "motifbench/motifs.hpp"
#include "motifbench/topdown.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace motifbench::harness {

inline constexpr int kResultSchema = 1;
inline constexpr std::uint64_t kDefaultDiskBudget = 20ULL << 30;

struct RunConfig {
    unsigned threads = 1;
    unsigned repetitions = 3;
    unsigned warmup_runs = 1;
    std::chrono::milliseconds sample_interval{1000};
    std::vector<unsigned> cpu_pinning;  // empty = no pinning

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

// Kernel knobs that are not part of the input data.
struct KernelParams {
    std::string grep_pattern;  // empty = a mid-frequency vocabulary word
    double sample_fraction = 0.1;
    std::uint64_t sort_memory_budget = 0;  // bytes, 0 = in memory
    std::uint32_t conv_kernel = 3;
    std::uint32_t conv_stride = 1;
    std::uint32_t conv_padding = 1;
    std::uint32_t conv_out_channels = 0;  // 0 = same as input
    std::uint32_t pool_window = 2;
    std::uint32_t pool_stride = 2;
    std::uint32_t fc_out_features = 32;
    std::uint64_t weight_seed = 7;

    bool operator==(const KernelParams&) const = default;
};

// ---------------------------------------------------------------------------
// System metrics

struct SystemSample {
    double timestamp = 0.0;  // seconds since sampling started
    std::optional<double> cpu_utilization;
    std::optional<double> io_wait;
    std::optional<double> disk_read_bw;   // bytes/s
    std::optional<double> disk_write_bw;  // bytes/s
    std::optional<double> net_rx_bw;      // bytes/s
    std::optional<double> net_tx_bw;      // bytes/s
    std::optional<double> major_page_faults_per_s;
};

// Cumulative counters read from one snapshot of the metrics source.
struct ProcSnapshot {
    std::optional<std::uint64_t> cpu_busy, cpu_iowait, cpu_total;  // jiffies
    std::optional<std::uint64_t> disk_read_bytes, disk_write_bytes;
    std::optional<std::uint64_t> net_rx_bytes, net_tx_bytes;
    std::optional<std::uint64_t> major_faults;
};

// Parsers for the individual /proc files; exposed for tests.
void parse_proc_stat(std::string_view text, ProcSnapshot& out);
void parse_diskstats(std::string_view text, ProcSnapshot& out);
void parse_net_dev(std::string_view text, ProcSnapshot& out);
void parse_self_stat(std::string_view text, ProcSnapshot& out);

// Rates between two snapshots `seconds` apart.
SystemSample sample_between(const ProcSnapshot& a, const ProcSnapshot& b, double seconds, double timestamp);

class MetricsSource {
public:
    virtual ~MetricsSource() = default;
    virtual bool available() const noexcept = 0;
    virtual ProcSnapshot snapshot() = 0;
    virtual std::string_view name() const noexcept = 0;
};

// Reads <root>/stat, <root>/diskstats, <root>/net/dev and <root>/self/stat.
std::unique_ptr<MetricsSource> make_proc_source(const std::filesystem::path& root = "/proc");
std::unique_ptr<MetricsSource> make_null_source();

// Background sampler. Emits one sample per interval plus a final partial
// sample on stop() so that every run has at least one.
class SystemSampler {
public:
    SystemSampler(std::unique_ptr<MetricsSource> source, std::chrono::milliseconds interval);
    ~SystemSampler();
    SystemSampler(const SystemSampler&) = delete;
    SystemSampler& operator=(const SystemSampler&) = delete;

    void start();
    std::vector<SystemSample> stop();
    // True when the source could not be read and samples carry timestamps only.
    bool degraded() const noexcept;
    std::string_view source_name() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Spins `threads` threads for `duration`; returns total loop iterations.
std::uint64_t busy_spin(unsigned threads, std::chrono::milliseconds duration);

// ---------------------------------------------------------------------------
// Datasets

// A DataSpec whose source suits the motif, at the given size class.
DataSpec default_spec(MotifId motif, SizeClass size = SizeClass::Small, SizeProfile profile = SizeProfile::Desk);

// Rejects source/motif combinations no kernel can consume.
void check_binding(MotifId motif, const DataSpec& spec);

// Canonical text of the fields that determine dataset bytes.
std::string canonical_spec(MotifId motif, const DataSpec& spec);
std::uint64_t spec_key(MotifId motif, const DataSpec& spec);

struct Dataset {
    std::vector<std::filesystem::path> files;  // primary first
    bool generated = false;                    // false on a cache hit
};

class DatasetCache {
public:
    explicit DatasetCache(std::filesystem::path dir);

    // Returns the cached files for (motif, spec), generating them on a miss.
    Dataset materialize(MotifId motif, const DataSpec& spec, unsigned threads = 1);
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

std::string spec_to_json(const DataSpec& spec);
DataSpec spec_from_json(std::string_view json);

// Environment-driven defaults: MOTIFBENCH_DATA_DIR, MOTIFBENCH_RESULTS_DIR.
std::filesystem::path default_data_dir();
std::filesystem::path default_results_dir();

// ---------------------------------------------------------------------------
// Runs

// getrusage deltas over the measured repetitions. Finer grained than the
// /proc/stat jiffies, so it stays meaningful for millisecond runs.
struct ProcessUsage {
    double user_time = 0.0;    // seconds
    double system_time = 0.0;  // seconds
    std::uint64_t minor_faults = 0;
    std::uint64_t major_faults = 0;
    std::uint64_t voluntary_switches = 0;
    std::uint64_t involuntary_switches = 0;
};

struct RunResult {
    std::string run_id;
    MotifId motif = MotifId::Sort;
    DataSpec data_spec;
    RunConfig config;
    KernelParams params;
    std::vector<double> wall_time;  // seconds per repetition
    std::vector<SystemSample> system_samples;
    std::string system_source;  // "proc" or "null"
    std::optional<topdown::CounterReadings> counters;
    std::optional<ProcessUsage> process;
    std::uint64_t checksum = 0;
    bool checksum_stable = true;
    bool timing_only = false;
    bool dataset_generated = false;
    std::vector<std::string> warnings;
    std::string started_at;  // UTC, ISO 8601
    // Data-axis labels for matrix cells, e.g. {"size","small"}.
    std::map<std::string, std::string> axes;

    double mean_wall_time() const;
    // Coefficient of variation; 0 for fewer than two repetitions.
    double wall_time_cv() const;
};

struct RunOptions {
    std::filesystem::path data_dir = default_data_dir();
    std::filesystem::path results_dir = default_results_dir();
    topdown::CounterMode counters;  // Null by default
    KernelParams params;
    bool persist = true;
    std::filesystem::path proc_root = "/proc";
};

RunResult run_motif(MotifId motif, const DataSpec& spec, const RunConfig& config, const RunOptions& opts = {});

std::string checksum_hex(std::uint64_t c);
std::string to_json_line(const RunResult& r);
RunResult run_result_from_json(std::string_view line);

// Appends one line per result to <dir>/<run_id>.jsonl; returns the path.
std::filesystem::path persist_results(const std::filesystem::path& dir, const std::string& run_id,
                                      const std::vector<RunResult>& results);
// Reads every successful run record from a JSONL file.
std::vector<RunResult> load_results(const std::filesystem::path& file);

std::string make_run_id(std::string_view tag);

// ---------------------------------------------------------------------------
// Pipelines

struct PipelineStage {
    std::string name;
    MotifId motif = MotifId::Conv2D;
    // Input dataset, or previous stage output when empty. The first stage
    // must have one.
    std::optional<DataSpec> input;
    KernelParams params;
};

struct StageResult {
    std::string name;
    MotifId motif = MotifId::Conv2D;
    double wall_time = 0.0;  // mean over repetitions, seconds
    double percent_of_total = 0.0;
    std::string output_shape;
    std::uint64_t checksum = 0;
};

struct PipelineResult {
    std::string name;
    std::vector<StageResult> stages;
    double total_time = 0.0;
};

struct Pipeline {
    std::string name;
    std::vector<PipelineStage> stages;
};

PipelineResult run_pipeline(const Pipeline& pipeline, const RunConfig& config,
                            const std::filesystem::path& data_dir = default_data_dir());

std::string pipeline_result_json(const PipelineResult& r);

// ---------------------------------------------------------------------------
// Experiment matrix

struct PlanAxes {
    std::vector<MotifId> motifs;
    std::vector<SizeClass> sizes{SizeClass::Small};
    std::vector<double> sparsity;  // empty = keep pattern default
    std::vector<Source> sources;   // empty = motif default
};

struct ExperimentPlan {
    std::string name;
    PlanAxes axes;
    SizeProfile profile = SizeProfile::Desk;
    SizeParams custom;  // used for SizeClass::Custom cells
    PatternParams pattern;
    std::uint64_t seed = 1;
    RunConfig config;
    KernelParams params;
    std::uint64_t disk_budget = kDefaultDiskBudget;

    std::size_t cell_count() const;
};

struct Cell {
    MotifId motif = MotifId::Sort;
    DataSpec spec;
    // Axis name -> value, e.g. {"size","small"}, {"sparsity","0.1"}.
    std::map<std::string, std::string> axes;
};

std::vector<Cell> expand_plan(const ExperimentPlan& plan);

enum class CellStatus { Ok, Skipped, Failed };
std::string_view to_string(CellStatus s) noexcept;

struct CellResult {
    Cell cell;
    CellStatus status = CellStatus::Ok;
    std::string message;
    std::optional<RunResult> result;
};

struct ResultSet {
    std::string run_id;
    std::vector<CellResult> cells;
    std::filesystem::path file;  // JSONL with the successful runs

    std::size_t count(CellStatus s) const;
};

ResultSet run_experiment_matrix(const ExperimentPlan& plan, const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Single runs from key/value options

// Keys follow the plan-file vocabulary: size, profile, source, sparsity,
// threads, repetitions, warmup, interval_ms, cpu_pinning (cpu list) and the shared
// dataset/kernel keys. Dimensions without a size class imply size = custom.
struct RunRequest {
    MotifId motif = MotifId::Sort;
    DataSpec spec;
    KernelParams params;
    RunConfig config;
};

RunRequest parse_run_request(MotifId motif, const std::vector<std::pair<std::string, std::string>>& settings);

// ---------------------------------------------------------------------------
// Text formats
//
// Plan files and pipeline configs share a line format: '#' comments,
// "key = value" pairs and "[stage NAME]" section headers. List values are
// comma separated.

ExperimentPlan parse_plan(std::string_view text, std::string_view origin = "<plan>");
ExperimentPlan load_plan(const std::filesystem::path& path);

Pipeline parse_pipeline(std::string_view text, std::string_view origin = "<pipeline>");
Pipeline load_pipeline(const std::filesystem::path& path);

}  // namespace motifbench::harness
