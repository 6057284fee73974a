#include "motifbench/topdown.hpp"

#include "motifbench/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#ifndef MOTIFBENCH_SHARE_DIR
#define MOTIFBENCH_SHARE_DIR "share"
#endif

namespace motifbench::topdown {

const std::vector<std::vector<std::string_view>>& formula_event_sets() {
    using namespace ev;
    static const std::vector<std::vector<std::string_view>> sets = {
        {kCycles, kUopsRetired, kUopsIssued, kRecoveryCycles},
        {kFrontendSlots, kFrontendZeroCycles},
        {kIcacheStall, kItlbStlbHit, kItlbWalkDuration, kDsbSwitchPenalty},
        {kBranchMispredicts, kMachineClears, kBaclears},
        {kLcpStall, kMsSwitches},
        {kMiteAny, kMite4, kDsbAny, kDsb4},
        {kLsdActive, kLsd4},
        {kStallsLdm, kNoExecute, kExecGe1, kExecGe3},
        {kStoreBufferStalls, kStallsL1dPending, kStallsL2Pending},
        {kL3Hit, kL3Miss, kDividerUops},
        {kInstructions, kL1dPending, kL1dPendingCycles},
    };
    return sets;
}

const std::vector<std::string_view>& all_events() {
    static const std::vector<std::string_view> events = [] {
        std::vector<std::string_view> out;
        for (const auto& set : formula_event_sets()) out.insert(out.end(), set.begin(), set.end());
        return out;
    }();
    return events;
}

std::string_view to_string(Provider p) noexcept {
    switch (p) {
        case Provider::PerfEvent: return "perf";
        case Provider::Null: return "null";
        case Provider::Synthetic: return "synthetic";
    }
    return "null";
}

std::uint64_t EventEncoding::raw_config() const noexcept {
    return std::uint64_t{event & 0xff} | std::uint64_t{umask & 0xff} << 8 | std::uint64_t{edge} << 18 |
           std::uint64_t{any} << 21 | std::uint64_t{inv} << 23 | std::uint64_t{cmask & 0xff} << 24;
}

double scaled_count(std::uint64_t raw, std::uint64_t time_enabled, std::uint64_t time_running) noexcept {
    if (time_running == 0 || time_running == time_enabled) return static_cast<double>(raw);
    return static_cast<double>(raw) * (static_cast<double>(time_enabled) / static_cast<double>(time_running));
}

std::optional<double> CounterReadings::get(std::string_view name) const {
    auto it = events.find(name);
    if (it == events.end()) return std::nullopt;
    // An event that never got scheduled carries no information.
    if (it->second.time_running == 0 && it->second.time_enabled > 0) return std::nullopt;
    return it->second.scaled();
}

void CounterReadings::set(std::string_view name, std::uint64_t raw, std::uint64_t enabled, std::uint64_t running) {
    auto& e = events[std::string(name)];
    e.name = std::string(name);
    e.raw_count = raw;
    e.time_enabled = enabled;
    e.time_running = running;
}

// ---------------------------------------------------------------------------
// Definition files

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::uint32_t parse_uint(std::string_view s, const std::string& where) {
    s = trim(s);
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        s.remove_prefix(2);
        base = 16;
    }
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        throw ParamError(where + ": expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

EventEncoding parse_encoding(std::string_view spec, const std::string& where) {
    EventEncoding enc;
    bool have_event = false;
    std::istringstream in{std::string(spec)};
    std::string field;
    while (in >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParamError(where + ": field '" + field + "' is not key=value");
        const std::string key = field.substr(0, eq);
        const std::uint32_t v = parse_uint(std::string_view(field).substr(eq + 1), where);
        if (key == "event") {
            enc.event = v;
            have_event = true;
        } else if (key == "umask") {
            enc.umask = v;
        } else if (key == "cmask") {
            enc.cmask = v;
        } else if (key == "edge") {
            enc.edge = v != 0;
        } else if (key == "inv") {
            enc.inv = v != 0;
        } else if (key == "any") {
            enc.any = v != 0;
        } else {
            throw ParamError(where + ": unknown encoding field '" + key + "'");
        }
    }
    if (!have_event) throw ParamError(where + ": missing event=");
    return enc;
}

}  // namespace

bool CounterDefinition::matches(std::string_view v, std::uint32_t f, std::uint32_t m) const noexcept {
    return v == vendor && f == family && std::find(models.begin(), models.end(), m) != models.end();
}

CounterDefinition parse_counter_definition(std::string_view text, std::string_view origin) {
    CounterDefinition def;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParamError(where + ": expected 'key = value'");
        std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key.starts_with("event ") || key.starts_with("event\t")) {
            const std::string name(trim(key.substr(6)));
            if (name.empty()) throw ParamError(where + ": event name missing");
            if (!def.events.emplace(name, parse_encoding(value, where)).second) {
                throw ParamError(where + ": duplicate event '" + name + "'");
            }
        } else if (key == "arch") {
            def.arch = value;
        } else if (key == "vendor") {
            def.vendor = value;
        } else if (key == "family") {
            def.family = parse_uint(value, where);
        } else if (key == "models") {
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                def.models.push_back(parse_uint(rest.substr(0, comma), where));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
        } else if (key == "pipeline_width") {
            def.pipeline_width = parse_uint(value, where);
            if (def.pipeline_width == 0) throw ParamError(where + ": pipeline_width must be >= 1");
        } else {
            throw ParamError(where + ": unknown key '" + std::string(key) + "'");
        }
    }
    return def;
}

CounterDefinition load_counter_definition(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("counter definition file '" + path.string() + "' not found");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_counter_definition(ss.str(), path.string());
}

std::filesystem::path default_definition_path() {
    if (const char* env = std::getenv("MOTIFBENCH_COUNTERS_FILE"); env && *env) return env;
    return std::filesystem::path(MOTIFBENCH_SHARE_DIR) / "counters" / "haswell.def";
}

HostCpu parse_cpuinfo(std::string_view text) {
    HostCpu cpu;
    bool have_family = false, have_model = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (trim(line).empty() && !cpu.vendor.empty()) break;  // end of first processor block
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const auto key = trim(line.substr(0, colon));
        const auto value = trim(line.substr(colon + 1));
        try {
            if (key == "vendor_id") {
                cpu.vendor = value;
            } else if (key == "cpu family" && !have_family) {
                cpu.family = parse_uint(value, "cpuinfo");
                have_family = true;
            } else if (key == "model" && !have_model) {
                cpu.model = parse_uint(value, "cpuinfo");
                have_model = true;
            }
        } catch (const ParamError&) {
        }
    }
    return cpu;
}

HostCpu detect_host_cpu() {
    std::ifstream in("/proc/cpuinfo");
    if (!in) return {};
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cpuinfo(ss.str());
}

std::vector<std::vector<std::string>> plan_groups(const std::vector<std::vector<std::string_view>>& formula_sets,
                                                  const CounterDefinition& def, std::size_t max_per_group) {
    if (max_per_group == 0) throw ParamError("group size must be >= 1");
    std::vector<std::vector<std::string>> groups;
    std::set<std::string, std::less<>> placed;
    for (const auto& set : formula_sets) {
        std::vector<std::string> pending;
        for (auto name : set) {
            if (def.events.find(name) == def.events.end() || placed.count(name)) continue;
            pending.emplace_back(name);
            placed.emplace(name);
        }
        if (pending.empty()) continue;
        if (!groups.empty() && groups.back().size() + pending.size() <= max_per_group) {
            groups.back().insert(groups.back().end(), pending.begin(), pending.end());
            continue;
        }
        for (std::size_t i = 0; i < pending.size(); i += max_per_group) {
            const auto end = std::min(pending.size(), i + max_per_group);
            groups.emplace_back(pending.begin() + static_cast<std::ptrdiff_t>(i),
                                pending.begin() + static_cast<std::ptrdiff_t>(end));
        }
    }
    return groups;
}

// ---------------------------------------------------------------------------
// Sessions

namespace {

class NullSession final : public CounterSession {
public:
    Provider provider() const noexcept override { return Provider::Null; }
    void start() override {}
    CounterReadings stop() override { return {}; }
};

class SyntheticSession final : public CounterSession {
public:
    explicit SyntheticSession(CounterReadings r) : readings_(std::move(r)) { readings_.provider = Provider::Synthetic; }
    Provider provider() const noexcept override { return Provider::Synthetic; }
    void start() override {}
    CounterReadings stop() override { return readings_; }

private:
    CounterReadings readings_;
};

}  // namespace

std::unique_ptr<CounterSession> open_null_session() { return std::make_unique<NullSession>(); }

std::unique_ptr<CounterSession> open_synthetic_session(CounterReadings readings) {
    return std::make_unique<SyntheticSession>(std::move(readings));
}

CounterMode parse_counter_mode(std::string_view s) {
    CounterMode m;
    if (s == "perf") {
        m.kind = CounterMode::Kind::Perf;
    } else if (s == "null" || s.empty()) {
        m.kind = CounterMode::Kind::Null;
    } else if (s.starts_with("synthetic:") && s.size() > 10) {
        m.kind = CounterMode::Kind::Synthetic;
        m.synthetic_file = std::string(s.substr(10));
    } else {
        throw ParamError("unknown counter mode '" + std::string(s) + "' (expected perf, null or synthetic:<file>)");
    }
    return m;
}

SessionChoice make_session(const CounterMode& mode) {
    SessionChoice choice;
    switch (mode.kind) {
        case CounterMode::Kind::Null:
            choice.session = open_null_session();
            return choice;
        case CounterMode::Kind::Synthetic: {
            std::ifstream in(mode.synthetic_file, std::ios::binary);
            if (!in) throw NotFoundError("synthetic counter file '" + mode.synthetic_file.string() + "' not found");
            std::stringstream ss;
            ss << in.rdbuf();
            std::optional<double> ipc, mlp;
            const auto tree = parse_fraction_file(ss.str(), &ipc, &mlp);
            choice.session = open_synthetic_session(synthesize(tree, ipc, mlp));
            return choice;
        }
        case CounterMode::Kind::Perf:
            break;
    }

    CounterDefinition def;
    const auto path = default_definition_path();
    try {
        def = load_counter_definition(path);
    } catch (const Error& e) {
        choice.warnings.push_back(std::string(e.what()) + "; counters disabled");
        choice.session = open_null_session();
        return choice;
    }
    const auto host = detect_host_cpu();
    if (!def.matches(host.vendor, host.family, host.model)) {
        std::ostringstream msg;
        msg << "host cpu (" << (host.vendor.empty() ? "unknown" : host.vendor) << " family " << host.family
            << " model 0x" << std::hex << host.model << ") is not covered by counter definition '" << def.arch
            << "' (" << path.string() << "); counters disabled";
        choice.warnings.push_back(msg.str());
        choice.session = open_null_session();
        return choice;
    }
    try {
        choice.session = open_perf_session(def);
    } catch (const CounterError& e) {
        choice.warnings.push_back(std::string(e.what()) + "; counters disabled");
        choice.session = open_null_session();
    }
    return choice;
}

}  // namespace motifbench::topdown
