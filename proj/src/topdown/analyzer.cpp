#include "motifbench/topdown.hpp"

#include "motifbench/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace motifbench::topdown {

namespace {

// Cycle costs per event occurrence used to weight frontend latency causes
// and the L3-hit vs DRAM split of L2-pending stalls.
constexpr double kItlbStlbHitCost = 14.0;
constexpr double kResteerCost = 12.0;
constexpr double kMsSwitchCost = 2.0;
constexpr double kL3HitCost = 29.0;
constexpr double kDramMissCost = 7.0;
constexpr double kDividerCost = 10.0;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::optional<double> all_of(std::initializer_list<std::optional<double>> xs) {
    for (const auto& x : xs)
        if (!x) return std::nullopt;
    return 0.0;
}

double slots_of(const CounterReadings& r) {
    if (r.slots > 0) return r.slots;
    if (auto c = r.get(ev::kCycles)) return static_cast<double>(r.width) * *c;
    return 0.0;
}

// Splits `parent` across children in proportion to non-negative raw costs.
// Zero parent gives zero children; costs that are missing, or all zero
// under a non-zero parent, leave the children absent.
template <std::size_t N>
void attribute(Fraction parent, const std::array<std::optional<double>, N>& raw, std::array<Fraction*, N> out) {
    for (auto* o : out) *o = std::nullopt;
    if (!parent) return;
    if (*parent == 0.0) {
        for (auto* o : out) *o = 0.0;
        return;
    }
    double total = 0.0;
    for (const auto& c : raw) {
        if (!c) return;
        total += std::max(0.0, *c);
    }
    if (!(total > 0.0)) return;
    for (std::size_t i = 0; i < N; ++i) *out[i] = *parent * (std::max(0.0, *raw[i]) / total);
}

// a - b for a derived sibling; rounding residue collapses to exactly zero so
// that the sibling's children come out as zeros rather than absent.
double remainder_of(double a, double b) {
    const double d = a - b;
    return std::abs(d) <= 1e-12 * std::max(1.0, std::abs(a)) ? 0.0 : d;
}

}  // namespace

Level1 topdown_level1(const CounterReadings& r) {
    Level1 l;
    const double slots = slots_of(r);
    if (!(slots > 0)) return l;
    const auto retired = r.get(ev::kUopsRetired);
    const auto issued = r.get(ev::kUopsIssued);
    const auto recovery = r.get(ev::kRecoveryCycles);
    const auto fe_slots = r.get(ev::kFrontendSlots);

    std::optional<double> ret, bad, fe;
    if (retired) ret = *retired / slots;
    if (retired && issued && recovery) bad = (*issued - *retired + r.width * *recovery) / slots;
    if (fe_slots) fe = *fe_slots / slots;

    if (ret && bad && fe) {
        const double be = 1.0 - *ret - *bad - *fe;
        std::array<double, 4> v{clamp01(*ret), clamp01(*bad), clamp01(*fe), clamp01(be)};
        const double sum = v[0] + v[1] + v[2] + v[3];
        if (sum >= 0.9 && sum <= 1.1) {
            for (auto& x : v) x /= sum;
        } else {
            l.low_confidence = true;
        }
        l.retiring = v[0];
        l.bad_speculation = v[1];
        l.frontend_bound = v[2];
        l.backend_bound = v[3];
    } else {
        if (ret) l.retiring = clamp01(*ret);
        if (bad) l.bad_speculation = clamp01(*bad);
        if (fe) l.frontend_bound = clamp01(*fe);
    }
    return l;
}

FrontendTree frontend_breakdown(const CounterReadings& r, const Level1& l1) {
    FrontendTree t;
    const auto fe = l1.frontend_bound;
    if (!fe) return t;
    const double slots = slots_of(r);
    if (*fe == 0.0) {
        t.latency = t.bandwidth = 0.0;
    } else if (auto zero = r.get(ev::kFrontendZeroCycles); zero && slots > 0) {
        t.latency = std::min(*fe, clamp01(r.width * *zero / slots));
        t.bandwidth = remainder_of(*fe, *t.latency);
    }

    auto get = [&](std::string_view n) { return r.get(n); };
    auto weighted = [](std::optional<double> x, double w) -> std::optional<double> {
        if (!x) return std::nullopt;
        return *x * w;
    };

    std::optional<double> itlb, resteers;
    if (auto a = get(ev::kItlbStlbHit), b = get(ev::kItlbWalkDuration); a && b) itlb = kItlbStlbHitCost * *a + *b;
    if (auto a = get(ev::kBranchMispredicts), b = get(ev::kMachineClears), c = get(ev::kBaclears); a && b && c) {
        resteers = kResteerCost * (*a + *b + *c);
    }
    attribute<6>(t.latency,
                 {get(ev::kIcacheStall), itlb, resteers, get(ev::kDsbSwitchPenalty), get(ev::kLcpStall),
                  weighted(get(ev::kMsSwitches), kMsSwitchCost)},
                 {&t.icache_miss, &t.itlb_miss, &t.branch_resteers, &t.dsb_switches, &t.lcp, &t.ms_switches});

    auto half_gap = [&](std::string_view any, std::string_view four, double scale) -> std::optional<double> {
        auto a = get(any), b = get(four);
        if (!a || !b) return std::nullopt;
        return std::max(0.0, *a - *b) * scale;
    };
    attribute<3>(t.bandwidth,
                 {half_gap(ev::kMiteAny, ev::kMite4, 0.5), half_gap(ev::kDsbAny, ev::kDsb4, 0.5),
                  half_gap(ev::kLsdActive, ev::kLsd4, 1.0)},
                 {&t.mite, &t.dsb, &t.lsd});
    return t;
}

BackendTree backend_breakdown(const CounterReadings& r, const Level1& l1) {
    BackendTree t;
    const auto be = l1.backend_bound;
    if (!be) return t;

    const auto ldm = r.get(ev::kStallsLdm);
    const auto sb = r.get(ev::kStoreBufferStalls);
    const auto no_exec = r.get(ev::kNoExecute);
    const auto ge1 = r.get(ev::kExecGe1);
    const auto ge3 = r.get(ev::kExecGe3);

    std::optional<double> memory_stall, core_stall;
    if (*be == 0.0) {
        t.memory = t.core = 0.0;
    } else if (all_of({ldm, sb, no_exec, ge1, ge3})) {
        const double mem = *ldm + *sb;
        const double total = *no_exec + *ge1 - *ge3 + *sb;
        if (total > 0) {
            memory_stall = mem;
            core_stall = std::max(0.0, total - mem);
            t.memory = *be * clamp01(mem / total);
            t.core = remainder_of(*be, *t.memory);
        }
    }

    const auto l1p = r.get(ev::kStallsL1dPending);
    const auto l2p = r.get(ev::kStallsL2Pending);
    const auto hit = r.get(ev::kL3Hit);
    const auto miss = r.get(ev::kL3Miss);
    std::array<std::optional<double>, 5> mem_raw{};
    if (all_of({ldm, sb, l1p, l2p, hit, miss})) {
        const double weight = kL3HitCost * *hit + kDramMissCost * *miss;
        mem_raw[0] = *ldm - *l1p;
        mem_raw[1] = *l1p - *l2p;
        if (weight > 0) {
            mem_raw[2] = *l2p * (kL3HitCost * *hit / weight);
            mem_raw[3] = *l2p - *mem_raw[2];
        } else if (*l2p <= 0) {
            mem_raw[2] = mem_raw[3] = 0.0;
        }
        mem_raw[4] = *sb;
    }
    attribute<5>(t.memory, mem_raw, {&t.l1, &t.l2, &t.l3, &t.dram, &t.store});

    std::array<std::optional<double>, 2> core_raw{};
    if (auto div = r.get(ev::kDividerUops); div && core_stall) {
        core_raw[0] = kDividerCost * *div;
        core_raw[1] = std::max(0.0, *core_stall - *core_raw[0]);
    }
    attribute<2>(t.core, core_raw, {&t.divider, &t.ports_utilization});
    return t;
}

ExecMetrics exec_metrics(const CounterReadings& r) {
    ExecMetrics m;
    const auto inst = r.get(ev::kInstructions);
    const auto cycles = r.get(ev::kCycles);
    if (inst && cycles && *cycles > 0) m.ipc = *inst / *cycles;
    const auto pending = r.get(ev::kL1dPending);
    const auto pending_cycles = r.get(ev::kL1dPendingCycles);
    if (pending && pending_cycles && *pending_cycles > 0) m.mlp = *pending / *pending_cycles;
    return m;
}

TopDownTree analyze(const CounterReadings& r) {
    TopDownTree t;
    t.level1 = topdown_level1(r);
    t.frontend = frontend_breakdown(r, t.level1);
    t.backend = backend_breakdown(r, t.level1);
    return t;
}

// ---------------------------------------------------------------------------

namespace {

struct Family {
    Fraction parent;
    std::vector<Fraction> children;
};

std::vector<Family> families(const TopDownTree& t) {
    const auto& l = t.level1;
    const auto& f = t.frontend;
    const auto& b = t.backend;
    return {
        {Fraction(1.0), {l.retiring, l.bad_speculation, l.frontend_bound, l.backend_bound}},
        {l.frontend_bound, {f.latency, f.bandwidth}},
        {f.latency, {f.icache_miss, f.itlb_miss, f.branch_resteers, f.dsb_switches, f.lcp, f.ms_switches}},
        {f.bandwidth, {f.mite, f.dsb, f.lsd}},
        {l.backend_bound, {b.memory, b.core}},
        {b.memory, {b.l1, b.l2, b.l3, b.dram, b.store}},
        {b.core, {b.divider, b.ports_utilization}},
    };
}

}  // namespace

std::vector<std::pair<std::string, Fraction>> flatten(const TopDownTree& t) {
    const auto& l = t.level1;
    const auto& f = t.frontend;
    const auto& b = t.backend;
    return {
        {"level1.retiring", l.retiring},
        {"level1.bad_speculation", l.bad_speculation},
        {"level1.frontend_bound", l.frontend_bound},
        {"level1.backend_bound", l.backend_bound},
        {"frontend.latency", f.latency},
        {"frontend.bandwidth", f.bandwidth},
        {"frontend.latency.icache_miss", f.icache_miss},
        {"frontend.latency.itlb_miss", f.itlb_miss},
        {"frontend.latency.branch_resteers", f.branch_resteers},
        {"frontend.latency.dsb_switches", f.dsb_switches},
        {"frontend.latency.lcp", f.lcp},
        {"frontend.latency.ms_switches", f.ms_switches},
        {"frontend.bandwidth.mite", f.mite},
        {"frontend.bandwidth.dsb", f.dsb},
        {"frontend.bandwidth.lsd", f.lsd},
        {"backend.memory", b.memory},
        {"backend.core", b.core},
        {"backend.memory.l1", b.l1},
        {"backend.memory.l2", b.l2},
        {"backend.memory.l3", b.l3},
        {"backend.memory.dram", b.dram},
        {"backend.memory.store", b.store},
        {"backend.core.divider", b.divider},
        {"backend.core.ports_utilization", b.ports_utilization},
    };
}

double conservation_error(const TopDownTree& t) {
    double worst = 0.0;
    for (const auto& fam : families(t)) {
        if (!fam.parent) continue;
        double sum = 0.0;
        bool complete = true;
        for (const auto& c : fam.children) {
            if (!c) {
                complete = false;
                break;
            }
            sum += *c;
        }
        if (complete) worst = std::max(worst, std::abs(sum - *fam.parent));
    }
    return worst;
}

namespace {

void fill_children(Fraction parent, std::initializer_list<Fraction*> children) {
    if (!parent) return;
    double present = 0.0;
    std::size_t missing = 0;
    for (auto* c : children) {
        if (*c) {
            present += **c;
        } else {
            ++missing;
        }
    }
    if (missing == 0) return;
    const double share = std::max(0.0, *parent - present) / static_cast<double>(missing);
    for (auto* c : children)
        if (!*c) *c = share;
}

std::uint64_t count(double v) {
    if (!(v > 0)) return 0;
    return static_cast<std::uint64_t>(std::llround(v));
}

double ratio(Fraction part, Fraction whole) {
    if (!part || !whole || !(*whole > 0)) return 0.0;
    return *part / *whole;
}

}  // namespace

CounterReadings synthesize(const TopDownTree& input, std::optional<double> ipc, std::optional<double> mlp,
                           double cycles, std::uint32_t width) {
    if (width == 0) throw ParamError("pipeline width must be >= 1");
    if (!(cycles >= 1e3)) throw ParamError("synthetic cycle count too small");
    TopDownTree t = input;
    auto& l = t.level1;
    if (!l.retiring || !l.bad_speculation || !l.frontend_bound || !l.backend_bound) {
        throw ParamError("synthetic tree needs all four level-1 fractions");
    }
    const double sum = *l.retiring + *l.bad_speculation + *l.frontend_bound + *l.backend_bound;
    for (double v : {*l.retiring, *l.bad_speculation, *l.frontend_bound, *l.backend_bound}) {
        if (v < 0 || v > 1) throw ParamError("level-1 fractions must lie in [0, 1]");
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ParamError("level-1 fractions must sum to 1");

    auto& f = t.frontend;
    auto& b = t.backend;
    fill_children(l.frontend_bound, {&f.latency, &f.bandwidth});
    fill_children(f.latency, {&f.icache_miss, &f.itlb_miss, &f.branch_resteers, &f.dsb_switches, &f.lcp, &f.ms_switches});
    fill_children(f.bandwidth, {&f.mite, &f.dsb, &f.lsd});
    fill_children(l.backend_bound, {&b.memory, &b.core});
    fill_children(b.memory, {&b.l1, &b.l2, &b.l3, &b.dram, &b.store});
    fill_children(b.core, {&b.divider, &b.ports_utilization});

    const double C = std::round(cycles);
    const double S = width * C;
    CounterReadings r;
    r.provider = Provider::Synthetic;
    r.width = width;
    r.slots = S;

    r.set(ev::kCycles, count(C));
    const double retired = *l.retiring * S;
    r.set(ev::kUopsRetired, count(retired));
    r.set(ev::kRecoveryCycles, count(*l.bad_speculation * S / (2.0 * width)));
    // issued - retired + width*recovery must reproduce bad speculation; use the
    // rounded counts so the identity holds in integers.
    const double recovered = static_cast<double>(width) * static_cast<double>(count(*l.bad_speculation * S / (2.0 * width)));
    r.set(ev::kUopsIssued, count(static_cast<double>(count(retired)) + *l.bad_speculation * S - recovered));
    r.set(ev::kFrontendSlots, count(*l.frontend_bound * S));

    // Frontend: latency via cycles with zero delivered uops; each cause's raw
    // cost is its share of C.
    r.set(ev::kFrontendZeroCycles, count(*f.latency * S / width));
    const double lat = *f.latency;
    auto cause = [&](Fraction c) { return C * ratio(c, lat); };
    r.set(ev::kIcacheStall, count(cause(f.icache_miss)));
    r.set(ev::kItlbStlbHit, count(cause(f.itlb_miss) / (2.0 * kItlbStlbHitCost)));
    r.set(ev::kItlbWalkDuration, count(cause(f.itlb_miss) / 2.0));
    const double per_resteer = cause(f.branch_resteers) / (3.0 * kResteerCost);
    r.set(ev::kBranchMispredicts, count(per_resteer));
    r.set(ev::kMachineClears, count(per_resteer));
    r.set(ev::kBaclears, count(per_resteer));
    r.set(ev::kDsbSwitchPenalty, count(cause(f.dsb_switches)));
    r.set(ev::kLcpStall, count(cause(f.lcp)));
    r.set(ev::kMsSwitches, count(cause(f.ms_switches) / kMsSwitchCost));

    const double base = std::round(C / 8.0);
    auto bw = [&](Fraction c) { return C * ratio(c, f.bandwidth); };
    r.set(ev::kMite4, count(base));
    r.set(ev::kMiteAny, count(base + 2.0 * bw(f.mite)));
    r.set(ev::kDsb4, count(base));
    r.set(ev::kDsbAny, count(base + 2.0 * bw(f.dsb)));
    r.set(ev::kLsd4, count(base));
    r.set(ev::kLsdActive, count(base + bw(f.lsd)));

    // Backend: total backend stall cycles T = C, memory stall M.
    const double T = C;
    const double M = std::round(T * ratio(b.memory, l.backend_bound));
    auto lvl = [&](Fraction c) { return M * ratio(c, b.memory); };
    const double sb = std::round(lvl(b.store));
    const double l3 = lvl(b.l3), dram = lvl(b.dram);
    const double l2p = std::round(l3 + dram);
    const double l1p = std::round(lvl(b.l2)) + l2p;
    r.set(ev::kStoreBufferStalls, count(sb));
    r.set(ev::kStallsLdm, count(M - sb));
    r.set(ev::kStallsL2Pending, count(l2p));
    r.set(ev::kStallsL1dPending, count(l1p));
    // Scale load counts up so their rounding stays far below 1e-9 of l2p.
    const double load_scale = 1e3;
    r.set(ev::kL3Hit, count(l3 * load_scale / kL3HitCost));
    r.set(ev::kL3Miss, count(dram * load_scale / kDramMissCost));

    const double K = T - M;
    r.set(ev::kDividerUops, count(K * ratio(b.divider, b.core) / kDividerCost));
    const double exec_part = T - sb;
    const double no_exec = std::round(exec_part / 2.0);
    const double ge3 = base;
    r.set(ev::kNoExecute, count(no_exec));
    r.set(ev::kExecGe3, count(ge3));
    r.set(ev::kExecGe1, count(ge3 + exec_part - no_exec));

    if (ipc) {
        if (*ipc < 0) throw ParamError("ipc must be >= 0");
        r.set(ev::kInstructions, count(*ipc * C));
    }
    if (mlp) {
        if (*mlp < 1) throw ParamError("mlp must be >= 1");
        const double pc = std::round(C / 2.0);
        r.set(ev::kL1dPendingCycles, count(pc));
        r.set(ev::kL1dPending, count(*mlp * pc));
    }
    return r;
}

TopDownTree parse_fraction_file(std::string_view text, std::optional<double>* ipc, std::optional<double>* mlp) {
    TopDownTree t;
    auto names = flatten(t);
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
            return s;
        };
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "fraction file line " + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParamError(where + ": expected 'name = value'");
        const auto key = trim(line.substr(0, eq));
        const auto val = trim(line.substr(eq + 1));
        double v = 0;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc{} || p != val.data() + val.size()) throw ParamError(where + ": bad number");
        if (key == "ipc") {
            if (ipc) *ipc = v;
            continue;
        }
        if (key == "mlp") {
            if (mlp) *mlp = v;
            continue;
        }
        bool found = false;
        for (auto& [name, slot] : names) {
            if (name == key) {
                slot = v;
                found = true;
            }
        }
        if (!found) throw ParamError(where + ": unknown metric '" + std::string(key) + "'");
    }
    // Write parsed values back through the same ordering flatten() produced.
    auto set = [&](std::size_t i) { return names[i].second; };
    t.level1.retiring = set(0);
    t.level1.bad_speculation = set(1);
    t.level1.frontend_bound = set(2);
    t.level1.backend_bound = set(3);
    t.frontend.latency = set(4);
    t.frontend.bandwidth = set(5);
    t.frontend.icache_miss = set(6);
    t.frontend.itlb_miss = set(7);
    t.frontend.branch_resteers = set(8);
    t.frontend.dsb_switches = set(9);
    t.frontend.lcp = set(10);
    t.frontend.ms_switches = set(11);
    t.frontend.mite = set(12);
    t.frontend.dsb = set(13);
    t.frontend.lsd = set(14);
    t.backend.memory = set(15);
    t.backend.core = set(16);
    t.backend.l1 = set(17);
    t.backend.l2 = set(18);
    t.backend.l3 = set(19);
    t.backend.dram = set(20);
    t.backend.store = set(21);
    t.backend.divider = set(22);
    t.backend.ports_utilization = set(23);
    return t;
}

}  // namespace motifbench::topdown
