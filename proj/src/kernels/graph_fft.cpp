#include "motifbench/error.hpp"
#include "motifbench/kernels.hpp"
#include "motifbench/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

namespace motifbench::kernels {

// ---------------------------------------------------------------------------
// BFS

CsrGraph build_csr(const GraphData& g) {
    if (g.num_vertices > (1ULL << 31)) throw ParamError("graph too large for 32-bit vertex ids");
    CsrGraph csr;
    csr.num_vertices = g.num_vertices;
    std::vector<std::uint64_t> degree(g.num_vertices + 1, 0);
    for (const auto& e : g.edges) {
        if (e.u >= g.num_vertices || e.v >= g.num_vertices) throw ParamError("edge endpoint out of range");
        if (e.u == e.v) continue;
        ++degree[e.u + 1];
        ++degree[e.v + 1];
    }
    for (std::uint64_t v = 0; v < g.num_vertices; ++v) degree[v + 1] += degree[v];
    std::vector<std::uint32_t> raw(degree.back());
    std::vector<std::uint64_t> fill(degree.begin(), degree.end() - 1);
    for (const auto& e : g.edges) {
        if (e.u == e.v) continue;
        raw[fill[e.u]++] = static_cast<std::uint32_t>(e.v);
        raw[fill[e.v]++] = static_cast<std::uint32_t>(e.u);
    }
    csr.offsets.assign(g.num_vertices + 1, 0);
    csr.neighbors.reserve(raw.size());
    for (std::uint64_t v = 0; v < g.num_vertices; ++v) {
        auto first = raw.begin() + static_cast<std::ptrdiff_t>(degree[v]);
        auto last = raw.begin() + static_cast<std::ptrdiff_t>(degree[v + 1]);
        std::sort(first, last);
        last = std::unique(first, last);
        csr.neighbors.insert(csr.neighbors.end(), first, last);
        csr.offsets[v + 1] = csr.neighbors.size();
    }
    return csr;
}

BfsResult bfs(const CsrGraph& g, std::uint64_t root, unsigned threads) {
    if (root >= g.num_vertices) {
        throw ParamError("bfs root " + std::to_string(root) + " out of range (" +
                         std::to_string(g.num_vertices) + " vertices)");
    }
    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = g.num_vertices;

    BfsResult r;
    r.depth.assign(n, kUnreachable);
    r.parent.assign(n, kNoParent);
    std::vector<std::atomic<std::uint32_t>> claim(n);
    for (auto& c : claim) c.store(kNone, std::memory_order_relaxed);

    r.depth[root] = 0;
    r.visited_count = 1;
    std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(root)};
    std::uint32_t level = 0;

    while (!frontier.empty()) {
        const std::size_t parts = chunk_count(frontier.size(), threads);
        std::vector<std::vector<std::uint32_t>> discovered(parts);
        parallel_chunks(frontier.size(), threads, [&](std::size_t b, std::size_t e, unsigned tid) {
            auto& local = discovered[tid];
            for (std::size_t i = b; i < e; ++i) {
                const std::uint32_t u = frontier[i];
                for (std::uint32_t w : g.adjacent(u)) {
                    if (r.depth[w] != kUnreachable) continue;
                    std::uint32_t cur = claim[w].load(std::memory_order_relaxed);
                    while (u < cur && !claim[w].compare_exchange_weak(cur, u, std::memory_order_relaxed)) {
                    }
                    if (cur == kNone) local.push_back(w);
                }
            }
        });
        std::vector<std::uint32_t> next;
        for (auto& d : discovered) next.insert(next.end(), d.begin(), d.end());
        std::sort(next.begin(), next.end());
        for (auto w : next) {
            r.depth[w] = level + 1;
            r.parent[w] = claim[w].load(std::memory_order_relaxed);
        }
        r.visited_count += next.size();
        frontier = std::move(next);
        ++level;
    }
    return r;
}

// ---------------------------------------------------------------------------
// FFT

bool is_power_of_two(std::uint64_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace {

// exp(-2*pi*i*k/n) for k < n/2.
std::vector<Complex> twiddles(std::size_t n) {
    std::vector<Complex> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(angle), std::sin(angle)};
    }
    return w;
}

void transform(std::span<Complex> x, std::span<const Complex> tw, bool inverse) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                Complex w = tw[k * stride];
                if (inverse) w = std::conj(w);
                const Complex a = x[start + k];
                const Complex b = x[start + k + half] * w;
                x[start + k] = a + b;
                x[start + k + half] = a - b;
            }
        }
    }
}

void check_dims(std::uint32_t rows, std::uint32_t cols) {
    if (!is_power_of_two(rows) || !is_power_of_two(cols)) {
        throw ParamError("fft requires power-of-two dimensions, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
}

void transform_2d(ComplexMatrix& m, bool inverse, unsigned threads) {
    const auto row_tw = twiddles(m.cols);
    const auto col_tw = twiddles(m.rows);
    parallel_chunks(m.rows, threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t r = b; r < e; ++r) {
            transform(std::span<Complex>(m.data.data() + r * m.cols, m.cols), row_tw, inverse);
        }
    });
    parallel_chunks(m.cols, threads, [&](std::size_t b, std::size_t e, unsigned) {
        std::vector<Complex> column(m.rows);
        for (std::size_t c = b; c < e; ++c) {
            for (std::size_t r = 0; r < m.rows; ++r) column[r] = m.data[r * m.cols + c];
            transform(column, col_tw, inverse);
            for (std::size_t r = 0; r < m.rows; ++r) m.data[r * m.cols + c] = column[r];
        }
    });
}

}  // namespace

void fft_inplace(std::span<Complex> x, bool inverse) {
    if (!is_power_of_two(x.size())) throw ParamError("fft size must be a power of two");
    transform(x, twiddles(x.size()), inverse);
}

ComplexMatrix fft2d(std::span<const double> real, std::uint32_t rows, std::uint32_t cols, unsigned threads) {
    check_dims(rows, cols);
    if (real.size() != std::size_t{rows} * cols) throw ParamError("fft input size does not match dimensions");
    ComplexMatrix m{rows, cols, std::vector<Complex>(real.begin(), real.end())};
    transform_2d(m, false, threads);
    return m;
}

ComplexMatrix fft2d(const ComplexMatrix& in, bool inverse, unsigned threads) {
    check_dims(in.rows, in.cols);
    ComplexMatrix m = in;
    transform_2d(m, inverse, threads);
    return m;
}

ComplexMatrix ifft2d(const ComplexMatrix& in, unsigned threads) {
    ComplexMatrix m = fft2d(in, true, threads);
    const double scale = 1.0 / (static_cast<double>(m.rows) * m.cols);
    for (auto& v : m.data) v *= scale;
    return m;
}

}  // namespace motifbench::kernels
