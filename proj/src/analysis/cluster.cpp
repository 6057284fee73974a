#include "motifbench/analysis.hpp"
#include "motifbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace motifbench::analysis {

std::string_view to_string(Linkage l) noexcept {
    switch (l) {
        case Linkage::Average: return "average";
        case Linkage::Complete: return "complete";
        case Linkage::Single: return "single";
    }
    return "?";
}

Linkage parse_linkage(std::string_view s) {
    if (s == "average") return Linkage::Average;
    if (s == "complete") return Linkage::Complete;
    if (s == "single") return Linkage::Single;
    throw ParamError("unknown linkage '" + std::string(s) + "' (expected average, complete or single)");
}

LinkageTree hierarchical_cluster(const std::vector<std::vector<double>>& points, const std::vector<std::string>& labels,
                                 Linkage linkage) {
    const std::size_t n = points.size();
    if (n < 2) throw ParamError("clustering needs at least 2 points");
    if (labels.size() != n) throw ParamError("clustering: label count does not match point count");
    const std::size_t d = points[0].size();
    for (const auto& p : points) {
        if (p.size() != d) throw ParamError("clustering: points differ in dimension");
    }

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
            dist[i][j] = dist[j][i] = std::sqrt(s);
        }
    }

    // Active clusters live in slots 0..n-1; a merge reuses the lower slot.
    std::vector<bool> active(n, true);
    std::vector<std::size_t> id(n), size(n, 1);
    std::vector<std::string> min_label(labels);
    std::iota(id.begin(), id.end(), 0);

    LinkageTree tree;
    tree.labels = labels;
    tree.linkage = linkage;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = n, bj = n;
        double best = std::numeric_limits<double>::infinity();
        auto key = [&](std::size_t i, std::size_t j) {
            return std::minmax(min_label[i], min_label[j]);
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double dij = dist[i][j];
                const double tol = 1e-12 * std::max(1.0, std::max(std::abs(dij), std::abs(best)));
                if (bi == n || dij < best - tol) {
                    best = dij;
                    bi = i;
                    bj = j;
                } else if (std::abs(dij - best) <= tol && key(i, j) < key(bi, bj)) {
                    best = std::min(best, dij);
                    bi = i;
                    bj = j;
                }
            }
        }
        if (min_label[bj] < min_label[bi]) std::swap(bi, bj);
        Merge m;
        m.a = id[bi];
        m.b = id[bj];
        m.height = best;
        m.size = size[bi] + size[bj];
        tree.merges.push_back(m);

        const std::size_t keep = std::min(bi, bj), gone = std::max(bi, bj);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double di = dist[bi][k], dj = dist[bj][k];
            double nd = 0.0;
            switch (linkage) {
                case Linkage::Average:
                    nd = (static_cast<double>(size[bi]) * di + static_cast<double>(size[bj]) * dj) /
                         static_cast<double>(size[bi] + size[bj]);
                    break;
                case Linkage::Complete: nd = std::max(di, dj); break;
                case Linkage::Single: nd = std::min(di, dj); break;
            }
            dist[keep][k] = dist[k][keep] = nd;
        }
        min_label[keep] = std::min(min_label[bi], min_label[bj]);
        size[keep] = m.size;
        id[keep] = n + step;
        active[gone] = false;
    }
    return tree;
}

std::vector<std::size_t> cut_clusters(const LinkageTree& tree, std::size_t k) {
    const std::size_t n = tree.leaves();
    if (k == 0 || k > n) throw ParamError("cluster count must be in [1, " + std::to_string(n) + "]");
    std::vector<std::size_t> parent(2 * n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i + k < n; ++i) {
        const auto& m = tree.merges[i];
        parent[find(m.a)] = n + i;
        parent[find(m.b)] = n + i;
    }
    std::vector<std::size_t> out(n);
    std::vector<std::size_t> roots;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const std::size_t r = find(leaf);
        auto it = std::find(roots.begin(), roots.end(), r);
        out[leaf] = static_cast<std::size_t>(it - roots.begin());
        if (it == roots.end()) roots.push_back(r);
    }
    return out;
}

std::vector<std::size_t> cut_largest_gap(const LinkageTree& tree) {
    const std::size_t n = tree.leaves();
    const auto& ms = tree.merges;
    if (ms.size() < 2) return std::vector<std::size_t>(n, 0);
    std::size_t at = 0;
    double gap = -1.0;
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
        const double g = ms[i + 1].height - ms[i].height;
        if (g > gap) {
            gap = g;
            at = i;
        }
    }
    // Merges 0..at stay, everything above the gap is undone.
    return cut_clusters(tree, n - (at + 1));
}

std::vector<std::size_t> dendrogram_order(const LinkageTree& tree) {
    const std::size_t n = tree.leaves();
    std::vector<std::size_t> out;
    if (n == 0) return out;
    if (tree.merges.empty()) {
        out.resize(n);
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    std::vector<std::size_t> stack{n + tree.merges.size() - 1};
    while (!stack.empty()) {
        const std::size_t c = stack.back();
        stack.pop_back();
        if (c < n) {
            out.push_back(c);
            continue;
        }
        const auto& m = tree.merges[c - n];
        stack.push_back(m.b);
        stack.push_back(m.a);
    }
    return out;
}

}  // namespace motifbench::analysis
