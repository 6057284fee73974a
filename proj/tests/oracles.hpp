#pragma once

// Naive reference implementations used only by the test suites. Each one is
// written from the textbook definition and shares no code with src/.

#include "motifbench/ai_kernels.hpp"
#include "motifbench/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

// Insertion-free stable sort by repeated minimum selection over indices; the
// comparison is byte-wise unsigned.
inline std::vector<std::string> naive_sort(const std::vector<std::string>& in) {
    std::vector<std::size_t> idx(in.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto less = [&](std::size_t a, std::size_t b) {
        const auto& x = in[a];
        const auto& y = in[b];
        const std::size_t n = std::min(x.size(), y.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto cx = static_cast<unsigned char>(x[i]);
            const auto cy = static_cast<unsigned char>(y[i]);
            if (cx != cy) return cx < cy;
        }
        if (x.size() != y.size()) return x.size() < y.size();
        return a < b;
    };
    std::sort(idx.begin(), idx.end(), less);
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(in[i]);
    return out;
}

inline std::map<std::string, std::uint64_t> naive_wordcount(const std::string& text) {
    std::map<std::string, std::uint64_t> counts;
    std::string cur;
    auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r'; };
    for (char c : text) {
        if (space(c)) {
            if (!cur.empty()) ++counts[cur];
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) ++counts[cur];
    return counts;
}

inline bool naive_contains(const std::string& hay, const std::string& needle) {
    if (needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < needle.size() && ok; ++k) ok = hay[i + k] == needle[k];
        if (ok) return true;
    }
    return false;
}

// Returns 1-based numbers of lines containing the pattern.
inline std::vector<std::uint64_t> naive_grep(const std::string& text, const std::string& pattern) {
    std::vector<std::uint64_t> out;
    std::string line;
    std::uint64_t no = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t j = i;
        line.clear();
        while (j < text.size() && text[j] != '\n') line.push_back(text[j++]);
        ++no;
        if (naive_contains(line, pattern)) out.push_back(no);
        i = j + 1;
    }
    return out;
}

inline std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b, std::size_t n,
                                        std::size_t k, std::size_t m) {
    std::vector<double> c(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += a[i * k + t] * b[t * m + j];
            c[i * m + j] = s;
        }
    return c;
}

inline std::vector<std::uint32_t> queue_bfs_depths(const motifbench::GraphData& g, std::uint64_t root) {
    std::vector<std::vector<std::uint64_t>> adj(g.num_vertices);
    for (const auto& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<std::uint32_t> depth(g.num_vertices, std::numeric_limits<std::uint32_t>::max());
    std::deque<std::uint64_t> q{root};
    depth[root] = 0;
    while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        for (auto v : adj[u]) {
            if (depth[v] == std::numeric_limits<std::uint32_t>::max()) {
                depth[v] = depth[u] + 1;
                q.push_back(v);
            }
        }
    }
    return depth;
}

// O(N^4) double-sum 2-D DFT.
inline std::vector<std::complex<double>> naive_dft2(const std::vector<double>& x, std::size_t rows,
                                                    std::size_t cols) {
    std::vector<std::complex<double>> out(rows * cols);
    for (std::size_t u = 0; u < rows; ++u)
        for (std::size_t v = 0; v < cols; ++v) {
            std::complex<double> s = 0.0;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    const double angle = -2.0 * std::numbers::pi *
                                         (static_cast<double>(u * r) / rows + static_cast<double>(v * c) / cols);
                    s += x[r * cols + c] * std::complex<double>(std::cos(angle), std::sin(angle));
                }
            out[u * cols + v] = s;
        }
    return out;
}

// Seven-loop direct convolution (cross-correlation) in double.
inline std::vector<double> direct_conv(const motifbench::Tensor4& in, const motifbench::kernels::ConvParams& p,
                                       std::size_t& oh, std::size_t& ow) {
    const long ph = static_cast<long>(in.h + p.padding.top + p.padding.bottom);
    const long pw = static_cast<long>(in.w + p.padding.left + p.padding.right);
    oh = static_cast<std::size_t>((ph - static_cast<long>(p.kh)) / p.sh + 1);
    ow = static_cast<std::size_t>((pw - static_cast<long>(p.kw)) / p.sw + 1);
    std::vector<double> out(in.n * oh * ow * p.out_c, 0.0);
    for (std::size_t b = 0; b < in.n; ++b)
        for (std::size_t y = 0; y < oh; ++y)
            for (std::size_t x = 0; x < ow; ++x)
                for (std::size_t o = 0; o < p.out_c; ++o) {
                    double s = 0.0;
                    for (std::size_t dy = 0; dy < p.kh; ++dy)
                        for (std::size_t dx = 0; dx < p.kw; ++dx)
                            for (std::size_t c = 0; c < p.in_c; ++c) {
                                const long iy = static_cast<long>(y * p.sh + dy) - static_cast<long>(p.padding.top);
                                const long ix = static_cast<long>(x * p.sw + dx) - static_cast<long>(p.padding.left);
                                if (iy < 0 || ix < 0 || iy >= static_cast<long>(in.h) || ix >= static_cast<long>(in.w))
                                    continue;
                                const double v = in.data[((b * in.h + iy) * in.w + ix) * in.c + c];
                                const double w = p.weights[((dy * p.kw + dx) * p.in_c + c) * p.out_c + o];
                                s += v * w;
                            }
                    out[((b * oh + y) * ow + x) * p.out_c + o] = s;
                }
    return out;
}

inline std::vector<double> naive_pool(const motifbench::Tensor4& in, bool max_kind, std::size_t kh, std::size_t kw,
                                      std::size_t sh, std::size_t sw, std::size_t& oh, std::size_t& ow) {
    oh = (in.h - kh) / sh + 1;
    ow = (in.w - kw) / sw + 1;
    std::vector<double> out(in.n * oh * ow * in.c);
    for (std::size_t b = 0; b < in.n; ++b)
        for (std::size_t y = 0; y < oh; ++y)
            for (std::size_t x = 0; x < ow; ++x)
                for (std::size_t c = 0; c < in.c; ++c) {
                    double best = -std::numeric_limits<double>::infinity(), sum = 0.0;
                    for (std::size_t dy = 0; dy < kh; ++dy)
                        for (std::size_t dx = 0; dx < kw; ++dx) {
                            const double v = in.data[((b * in.h + y * sh + dy) * in.w + x * sw + dx) * in.c + c];
                            best = std::max(best, v);
                            sum += v;
                        }
                    out[((b * oh + y) * ow + x) * in.c + c] = max_kind ? best : sum / static_cast<double>(kh * kw);
                }
    return out;
}

inline std::vector<double> naive_fc(const std::vector<float>& x, std::size_t n, std::size_t d,
                                    const std::vector<float>& w, const std::vector<float>& bias, std::size_t m) {
    std::vector<double> out(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = bias[j];
            for (std::size_t k = 0; k < d; ++k) s += static_cast<double>(x[i * d + k]) * w[k * m + j];
            out[i * m + j] = s;
        }
    return out;
}

// Cyclic Jacobi eigenvalue iteration for a dense symmetric matrix (row-major).
// Returns eigenvalues descending; eigenvectors as columns of `vectors`.
inline std::vector<double> jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& vectors) {
    vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vectors[k * n + p], vkq = vectors[k * n + q];
                    vectors[k * n + p] = c * vkp - s * vkq;
                    vectors[k * n + q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x * n + x] > a[y * n + y]; });
    std::vector<double> values(n), sorted(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = a[order[j] * n + order[j]];
        for (std::size_t k = 0; k < n; ++k) sorted[k * n + j] = vectors[k * n + order[j]];
    }
    vectors = sorted;
    return values;
}

}  // namespace oracle
