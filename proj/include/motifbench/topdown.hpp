#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <sys/types.h>

namespace motifbench::topdown {

// Event names used by the breakdown formulas. Definition files map these
// names to raw encodings for a given microarchitecture.
namespace ev {
inline constexpr std::string_view kCycles = "CPU_CLK_UNHALTED.THREAD";
inline constexpr std::string_view kInstructions = "INST_RETIRED.ANY";
inline constexpr std::string_view kUopsRetired = "UOPS_RETIRED.RETIRE_SLOTS";
inline constexpr std::string_view kUopsIssued = "UOPS_ISSUED.ANY";
inline constexpr std::string_view kRecoveryCycles = "INT_MISC.RECOVERY_CYCLES";
inline constexpr std::string_view kFrontendSlots = "IDQ_UOPS_NOT_DELIVERED.CORE";
inline constexpr std::string_view kFrontendZeroCycles = "IDQ_UOPS_NOT_DELIVERED.CYCLES_0_UOPS_DELIV.CORE";

inline constexpr std::string_view kIcacheStall = "ICACHE.IFDATA_STALL";
inline constexpr std::string_view kItlbStlbHit = "ITLB_MISSES.STLB_HIT";
inline constexpr std::string_view kItlbWalkDuration = "ITLB_MISSES.WALK_DURATION";
inline constexpr std::string_view kBranchMispredicts = "BR_MISP_RETIRED.ALL_BRANCHES";
inline constexpr std::string_view kMachineClears = "MACHINE_CLEARS.COUNT";
inline constexpr std::string_view kBaclears = "BACLEARS.ANY";
inline constexpr std::string_view kDsbSwitchPenalty = "DSB2MITE_SWITCHES.PENALTY_CYCLES";
inline constexpr std::string_view kLcpStall = "ILD_STALL.LCP";
inline constexpr std::string_view kMsSwitches = "IDQ.MS_SWITCHES";
inline constexpr std::string_view kMiteAny = "IDQ.ALL_MITE_CYCLES_ANY_UOPS";
inline constexpr std::string_view kMite4 = "IDQ.ALL_MITE_CYCLES_4_UOPS";
inline constexpr std::string_view kDsbAny = "IDQ.ALL_DSB_CYCLES_ANY_UOPS";
inline constexpr std::string_view kDsb4 = "IDQ.ALL_DSB_CYCLES_4_UOPS";
inline constexpr std::string_view kLsdActive = "LSD.CYCLES_ACTIVE";
inline constexpr std::string_view kLsd4 = "LSD.CYCLES_4_UOPS";

inline constexpr std::string_view kStallsLdm = "CYCLE_ACTIVITY.STALLS_LDM_PENDING";
inline constexpr std::string_view kNoExecute = "CYCLE_ACTIVITY.CYCLES_NO_EXECUTE";
inline constexpr std::string_view kStallsL1dPending = "CYCLE_ACTIVITY.STALLS_L1D_PENDING";
inline constexpr std::string_view kStallsL2Pending = "CYCLE_ACTIVITY.STALLS_L2_PENDING";
inline constexpr std::string_view kExecGe1 = "UOPS_EXECUTED.CORE_CYCLES_GE_1";
inline constexpr std::string_view kExecGe3 = "UOPS_EXECUTED.CORE_CYCLES_GE_3";
inline constexpr std::string_view kStoreBufferStalls = "RESOURCE_STALLS.SB";
inline constexpr std::string_view kL3Hit = "MEM_LOAD_UOPS_RETIRED.L3_HIT";
inline constexpr std::string_view kL3Miss = "MEM_LOAD_UOPS_RETIRED.L3_MISS";
inline constexpr std::string_view kDividerUops = "ARITH.DIVIDER_UOPS";

inline constexpr std::string_view kL1dPending = "L1D_PEND_MISS.PENDING";
inline constexpr std::string_view kL1dPendingCycles = "L1D_PEND_MISS.PENDING_CYCLES";
}  // namespace ev

// Every event the analyzer can consume, in a stable order.
const std::vector<std::string_view>& all_events();

// Events grouped by the formula that consumes them.
const std::vector<std::vector<std::string_view>>& formula_event_sets();

enum class Provider { PerfEvent, Null, Synthetic };
std::string_view to_string(Provider p) noexcept;

struct EventEncoding {
    std::uint32_t event = 0;
    std::uint32_t umask = 0;
    std::uint32_t cmask = 0;
    bool edge = false;
    bool inv = false;
    bool any = false;

    // Raw PMU config word: event | umask<<8 | edge<<18 | any<<21 | inv<<23 | cmask<<24.
    std::uint64_t raw_config() const noexcept;
    bool operator==(const EventEncoding&) const = default;
};

// raw * enabled / running; raw when running == 0 or running == enabled.
double scaled_count(std::uint64_t raw, std::uint64_t time_enabled, std::uint64_t time_running) noexcept;

struct CounterEvent {
    std::string name;
    EventEncoding encoding;
    std::uint64_t time_enabled = 0;  // ns
    std::uint64_t time_running = 0;  // ns
    std::uint64_t raw_count = 0;

    double scaled() const noexcept { return scaled_count(raw_count, time_enabled, time_running); }
};

struct CounterReadings {
    std::map<std::string, CounterEvent, std::less<>> events;
    double slots = 0.0;  // width * cycles
    std::uint32_t width = 4;
    Provider provider = Provider::Null;

    std::optional<double> get(std::string_view name) const;
    bool has(std::string_view name) const { return events.find(name) != events.end(); }
    void set(std::string_view name, std::uint64_t raw, std::uint64_t enabled = 1, std::uint64_t running = 1);
};

// ---------------------------------------------------------------------------
// Counter definition files
//
//   # comment
//   arch = haswell
//   vendor = GenuineIntel
//   family = 6
//   models = 0x3c, 0x3f, 0x45, 0x46
//   pipeline_width = 4
//   event CPU_CLK_UNHALTED.THREAD = event=0x3c umask=0x00
//   event MACHINE_CLEARS.COUNT = event=0xc3 umask=0x01 cmask=1 edge=1

struct CounterDefinition {
    std::string arch;
    std::string vendor;
    std::uint32_t family = 0;
    std::vector<std::uint32_t> models;
    std::uint32_t pipeline_width = 4;
    std::map<std::string, EventEncoding, std::less<>> events;

    bool matches(std::string_view vendor, std::uint32_t family, std::uint32_t model) const noexcept;
};

CounterDefinition parse_counter_definition(std::string_view text, std::string_view origin = "<string>");
CounterDefinition load_counter_definition(const std::filesystem::path& path);

// MOTIFBENCH_COUNTERS_FILE when set, else <share>/counters/haswell.def.
std::filesystem::path default_definition_path();

struct HostCpu {
    std::string vendor;
    std::uint32_t family = 0;
    std::uint32_t model = 0;
};

// Parses a /proc/cpuinfo style text; empty vendor when unrecognized.
HostCpu parse_cpuinfo(std::string_view text);
HostCpu detect_host_cpu();

// Greedy partition into groups of at most `max_per_group` events. Events
// of one formula land in one group where the set fits.
std::vector<std::vector<std::string>> plan_groups(const std::vector<std::vector<std::string_view>>& formula_sets,
                                                  const CounterDefinition& def, std::size_t max_per_group = 4);

// ---------------------------------------------------------------------------
// Collection

class CounterSession {
public:
    virtual ~CounterSession() = default;
    virtual Provider provider() const noexcept = 0;
    virtual void start() = 0;
    virtual CounterReadings stop() = 0;
};

// perf_event_open on `pid` (0 = calling process, inherited by threads
// created after start()). Throws CounterError with an actionable message on
// permission or encoding failures.
std::unique_ptr<CounterSession> open_perf_session(const CounterDefinition& def, pid_t pid = 0);

// Always-empty readings.
std::unique_ptr<CounterSession> open_null_session();

// Replays fixed readings, e.g. from synthesize().
std::unique_ptr<CounterSession> open_synthetic_session(CounterReadings readings);

// Counts `pid` for `duration`.
CounterReadings collect_counters(pid_t pid, const CounterDefinition& def, std::chrono::milliseconds duration);

struct CounterMode {
    enum class Kind { Perf, Null, Synthetic } kind = Kind::Null;
    std::filesystem::path synthetic_file;  // Kind::Synthetic only
};

// "perf" | "null" | "synthetic:<file>"
CounterMode parse_counter_mode(std::string_view s);

struct SessionChoice {
    std::unique_ptr<CounterSession> session;
    std::vector<std::string> warnings;
};

// Builds the session for a mode. Perf on an unrecognized host or with no
// definition file degrades to Null and records a warning.
SessionChoice make_session(const CounterMode& mode);

// ---------------------------------------------------------------------------
// Analysis

using Fraction = std::optional<double>;

struct Level1 {
    Fraction retiring, bad_speculation, frontend_bound, backend_bound;
    bool low_confidence = false;
};

struct FrontendTree {
    Fraction latency, bandwidth;
    Fraction icache_miss, itlb_miss, branch_resteers, dsb_switches, lcp, ms_switches;
    Fraction mite, dsb, lsd;
};

struct BackendTree {
    Fraction memory, core;
    Fraction l1, l2, l3, dram, store;
    Fraction divider, ports_utilization;
};

struct TopDownTree {
    Level1 level1;
    FrontendTree frontend;
    BackendTree backend;
};

struct ExecMetrics {
    std::optional<double> ipc;
    std::optional<double> mlp;
};

Level1 topdown_level1(const CounterReadings& r);
FrontendTree frontend_breakdown(const CounterReadings& r, const Level1& l1);
BackendTree backend_breakdown(const CounterReadings& r, const Level1& l1);
ExecMetrics exec_metrics(const CounterReadings& r);
TopDownTree analyze(const CounterReadings& r);

// Named view of every tree node, e.g. ("frontend.latency.icache_miss", 0.02).
std::vector<std::pair<std::string, Fraction>> flatten(const TopDownTree& t);

// Largest |sum(children) - parent| over all fully present tree levels.
double conservation_error(const TopDownTree& t);

// Builds a counter vector that analyze() maps back onto `tree`. Absent
// children are filled by splitting their parent evenly; level 1 must be
// complete. `mlp`, when given, is encoded in the pending-miss events.
CounterReadings synthesize(const TopDownTree& tree, std::optional<double> ipc = std::nullopt,
                           std::optional<double> mlp = std::nullopt, double cycles = 1e12,
                           std::uint32_t width = 4);

// Parses "name = value" lines using flatten() names plus "ipc" and "mlp".
TopDownTree parse_fraction_file(std::string_view text, std::optional<double>* ipc = nullptr,
                                std::optional<double>* mlp = nullptr);

}  // namespace motifbench::topdown
