#pragma once

#include "motifbench/topdown.hpp"

#include <random>
#include <vector>

namespace testgen {

// Splits `total` into n random non-negative parts. Roughly one split in
// eight zeroes a random child to exercise empty branches.
inline std::vector<double> split(std::mt19937_64& gen, double total, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    double sum = 0;
    for (auto& x : w) sum += (x = e(gen));
    if (std::uniform_int_distribution<int>(0, 7)(gen) == 0) {
        const auto k = std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
        sum -= w[k];
        w[k] = 0;
    }
    for (auto& x : w) x = sum > 0 ? total * x / sum : total / static_cast<double>(n);
    return w;
}

inline motifbench::topdown::TopDownTree random_tree(std::mt19937_64& gen) {
    motifbench::topdown::TopDownTree t;
    auto l = split(gen, 1.0, 4);
    t.level1.retiring = l[0];
    t.level1.bad_speculation = l[1];
    t.level1.frontend_bound = l[2];
    t.level1.backend_bound = l[3];
    auto& f = t.frontend;
    auto fe = split(gen, l[2], 2);
    f.latency = fe[0];
    f.bandwidth = fe[1];
    auto lat = split(gen, fe[0], 6);
    f.icache_miss = lat[0];
    f.itlb_miss = lat[1];
    f.branch_resteers = lat[2];
    f.dsb_switches = lat[3];
    f.lcp = lat[4];
    f.ms_switches = lat[5];
    auto bw = split(gen, fe[1], 3);
    f.mite = bw[0];
    f.dsb = bw[1];
    f.lsd = bw[2];
    auto& b = t.backend;
    auto be = split(gen, l[3], 2);
    b.memory = be[0];
    b.core = be[1];
    auto mem = split(gen, be[0], 5);
    b.l1 = mem[0];
    b.l2 = mem[1];
    b.l3 = mem[2];
    b.dram = mem[3];
    b.store = mem[4];
    auto core = split(gen, be[1], 2);
    b.divider = core[0];
    b.ports_utilization = core[1];
    return t;
}

// Largest absolute difference between two trees over nodes present in
// `want`; infinity when `got` lacks one of them.
inline double max_tree_diff(const motifbench::topdown::TopDownTree& want,
                            const motifbench::topdown::TopDownTree& got) {
    const auto a = motifbench::topdown::flatten(want);
    const auto b = motifbench::topdown::flatten(got);
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].second) continue;
        if (!b[i].second) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(*a[i].second - *b[i].second));
    }
    return worst;
}

}  // namespace testgen
