#include "motifbench/datagen.hpp"
#include "motifbench/error.hpp"
#include "motifbench/parallel.hpp"
#include "motifbench/rng.hpp"

#include "../binio.hpp"

#include <algorithm>
#include <limits>

namespace motifbench {

// ---------------------------------------------------------------------------
// Kronecker / RMAT graphs

GraphData gen_graph(std::uint32_t scale, std::uint32_t edge_factor, std::uint64_t seed, unsigned threads) {
    if (scale < 1 || scale > 30) throw ParamError("graph scale must be in [1, 30], got " + std::to_string(scale));
    if (edge_factor < 1) throw ParamError("edge factor must be >= 1");

    GraphData g;
    g.scale = scale;
    g.num_vertices = 1ULL << scale;
    const std::uint64_t m = static_cast<std::uint64_t>(edge_factor) << scale;
    g.edges.resize(m);

    const CounterRng rng(seed);
    constexpr double ab = kRmatA + kRmatB;
    constexpr double abc = kRmatA + kRmatB + kRmatC;
    parallel_chunks(m, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t e = begin; e < end; ++e) {
            std::uint64_t u = 0, v = 0;
            for (std::uint32_t level = 0; level < scale; ++level) {
                const double r = rng.uniform(level, e);
                const std::uint64_t bit = 1ULL << (scale - 1 - level);
                if (r < kRmatA) {
                } else if (r < ab) {
                    v |= bit;
                } else if (r < abc) {
                    u |= bit;
                } else {
                    u |= bit;
                    v |= bit;
                }
            }
            g.edges[e] = {u, v};
        }
    });
    return g;
}

GraphData GraphData::deduplicated() const {
    GraphData out;
    out.scale = scale;
    out.num_vertices = num_vertices;
    out.edges.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.u != e.v) out.edges.push_back(e);
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

void write_graph(const std::filesystem::path& path, const GraphData& g) {
    std::string header("MGRF");
    binio::put<std::uint32_t>(header, g.scale);
    binio::put<std::uint64_t>(header, g.edges.size());
    auto os = binio::open_out(path);
    binio::write_bytes(os, header.data(), header.size(), path);
    static_assert(sizeof(Edge) == 16);
    binio::write_bytes(os, g.edges.data(), g.edges.size() * sizeof(Edge), path);
}

GraphData read_graph(const std::filesystem::path& path) {
    auto is = binio::open_in(path);
    std::string header(16, '\0');
    binio::read_exact(is, header.data(), header.size(), path);
    binio::expect_magic(std::string_view(header).substr(0, 4), "MGRF", path);
    GraphData g;
    g.scale = binio::get<std::uint32_t>(header, 4);
    if (g.scale > 63) throw IoError("corrupt graph header in '" + path.string() + "'");
    g.num_vertices = 1ULL << g.scale;
    const auto count = binio::get<std::uint64_t>(header, 8);
    g.edges.resize(count);
    binio::read_exact(is, g.edges.data(), count * sizeof(Edge), path);
    return g;
}

// ---------------------------------------------------------------------------
// Matrices

namespace {

constexpr std::uint64_t kZeroStream = 0;
constexpr std::uint64_t kValueStream = 1;
constexpr std::uint32_t kMatrixFormatVersion = 1;
// Upper bound on stored elements: keeps rows*cols*8 well inside size_t.
constexpr std::uint64_t kMaxMatrixElements = 1ULL << 40;

double float_value(const CounterRng& rng, std::uint64_t idx) {
    // Uniform in [-1, 1), re-drawn on the (single) value that maps to zero.
    for (std::uint64_t k = 0;; ++k) {
        const double v = 2.0 * rng.uniform(kValueStream + k, idx) - 1.0;
        if (v != 0.0) return v;
    }
}

std::int64_t int_value(const CounterRng& rng, std::uint64_t idx) {
    // Uniform over [-1000, -1] U [1, 1000].
    const auto r = static_cast<std::int64_t>(rng.below(kValueStream, idx, 2000));
    return r < 1000 ? r - 1000 : r - 999;
}

}  // namespace

std::size_t MatrixData::nonzeros() const {
    if (storage == Storage::CooTriples) return stored_values();
    std::size_t nz = 0;
    if (kind == ValueKind::Float64) {
        for (double v : f64) nz += v != 0.0;
    } else {
        for (auto v : i64) nz += v != 0;
    }
    return nz;
}

MatrixData MatrixData::dense(std::uint32_t rows, std::uint32_t cols, ValueKind kind) {
    MatrixData m;
    m.rows = rows;
    m.cols = cols;
    m.kind = kind;
    m.storage = Storage::DenseRowMajor;
    const std::size_t n = std::size_t{rows} * cols;
    if (kind == ValueKind::Float64) {
        m.f64.assign(n, 0.0);
    } else {
        m.i64.assign(n, 0);
    }
    return m;
}

MatrixData MatrixData::to_dense() const {
    if (storage == Storage::DenseRowMajor) return *this;
    MatrixData d = dense(rows, cols, kind);
    for (std::size_t i = 0; i < coo_row.size(); ++i) {
        const std::size_t at = std::size_t{coo_row[i]} * cols + coo_col[i];
        if (kind == ValueKind::Float64) {
            d.f64[at] = f64[i];
        } else {
            d.i64[at] = i64[i];
        }
    }
    return d;
}

MatrixData MatrixData::to_coo() const {
    if (storage == Storage::CooTriples) return *this;
    MatrixData c;
    c.rows = rows;
    c.cols = cols;
    c.kind = kind;
    c.storage = Storage::CooTriples;
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t col = 0; col < cols; ++col) {
            const std::size_t at = std::size_t{r} * cols + col;
            const bool nz = kind == ValueKind::Float64 ? f64[at] != 0.0 : i64[at] != 0;
            if (!nz) continue;
            c.coo_row.push_back(r);
            c.coo_col.push_back(col);
            if (kind == ValueKind::Float64) {
                c.f64.push_back(f64[at]);
            } else {
                c.i64.push_back(i64[at]);
            }
        }
    }
    return c;
}

std::vector<double> MatrixData::dense_doubles() const {
    std::vector<double> out(std::size_t{rows} * cols, 0.0);
    if (storage == Storage::DenseRowMajor) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = value_as_double(i);
    } else {
        for (std::size_t i = 0; i < coo_row.size(); ++i) {
            out[std::size_t{coo_row[i]} * cols + coo_col[i]] = value_as_double(i);
        }
    }
    return out;
}

MatrixData gen_matrix(std::uint32_t rows, std::uint32_t cols, double sparsity, ValueKind kind,
                      std::uint64_t seed, unsigned threads) {
    if (rows < 1 || cols < 1) throw ParamError("matrix dimensions must be >= 1");
    if (!(sparsity >= 0.0 && sparsity <= 1.0)) throw ParamError("sparsity must be in [0, 1]");
    const std::uint64_t n = std::uint64_t{rows} * cols;
    if (n > kMaxMatrixElements) {
        throw ParamError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds the addressable payload");
    }

    const CounterRng rng(seed);
    auto is_zero = [&](std::uint64_t idx) { return rng.uniform(kZeroStream, idx) < sparsity; };

    if (sparsity < kSparseStorageThreshold) {
        MatrixData m = MatrixData::dense(rows, cols, kind);
        parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t i = begin; i < end; ++i) {
                if (is_zero(i)) continue;
                if (kind == ValueKind::Float64) {
                    m.f64[i] = float_value(rng, i);
                } else {
                    m.i64[i] = int_value(rng, i);
                }
            }
        });
        return m;
    }

    // COO: each chunk collects its own triples; concatenating chunks in index
    // order keeps (row, col) strictly increasing for any thread count.
    MatrixData m;
    m.rows = rows;
    m.cols = cols;
    m.kind = kind;
    m.storage = Storage::CooTriples;
    const std::size_t parts = chunk_count(n, threads);
    std::vector<MatrixData> partial(parts);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned tid) {
        auto& p = partial[tid];
        for (std::size_t i = begin; i < end; ++i) {
            if (is_zero(i)) continue;
            p.coo_row.push_back(static_cast<std::uint32_t>(i / cols));
            p.coo_col.push_back(static_cast<std::uint32_t>(i % cols));
            if (kind == ValueKind::Float64) {
                p.f64.push_back(float_value(rng, i));
            } else {
                p.i64.push_back(int_value(rng, i));
            }
        }
    });
    for (auto& p : partial) {
        m.coo_row.insert(m.coo_row.end(), p.coo_row.begin(), p.coo_row.end());
        m.coo_col.insert(m.coo_col.end(), p.coo_col.begin(), p.coo_col.end());
        m.f64.insert(m.f64.end(), p.f64.begin(), p.f64.end());
        m.i64.insert(m.i64.end(), p.i64.begin(), p.i64.end());
    }
    return m;
}

void write_matrix(const std::filesystem::path& path, const MatrixData& m) {
    std::string header("MMTX");
    binio::put<std::uint32_t>(header, m.rows);
    binio::put<std::uint32_t>(header, m.cols);
    binio::put<std::uint32_t>(header, m.kind == ValueKind::Int64 ? 0u : 1u);
    binio::put<std::uint32_t>(header, m.storage == Storage::DenseRowMajor ? 0u : 1u);
    binio::put<std::uint32_t>(header, kMatrixFormatVersion);
    auto os = binio::open_out(path);
    binio::write_bytes(os, header.data(), header.size(), path);

    auto write_values = [&](std::size_t begin, std::size_t count) {
        if (m.kind == ValueKind::Float64) {
            binio::write_bytes(os, m.f64.data() + begin, count * 8, path);
        } else {
            binio::write_bytes(os, m.i64.data() + begin, count * 8, path);
        }
    };
    if (m.storage == Storage::DenseRowMajor) {
        write_values(0, m.stored_values());
        return;
    }
    std::string buf;
    for (std::size_t i = 0; i < m.coo_row.size(); ++i) {
        binio::put<std::uint32_t>(buf, m.coo_row[i]);
        binio::put<std::uint32_t>(buf, m.coo_col[i]);
        if (m.kind == ValueKind::Float64) {
            binio::put<double>(buf, m.f64[i]);
        } else {
            binio::put<std::int64_t>(buf, m.i64[i]);
        }
        if (buf.size() >= (1u << 20)) {
            binio::write_bytes(os, buf.data(), buf.size(), path);
            buf.clear();
        }
    }
    binio::write_bytes(os, buf.data(), buf.size(), path);
}

MatrixData read_matrix(const std::filesystem::path& path) {
    auto is = binio::open_in(path);
    std::string header(24, '\0');
    binio::read_exact(is, header.data(), header.size(), path);
    binio::expect_magic(std::string_view(header).substr(0, 4), "MMTX", path);
    MatrixData m;
    m.rows = binio::get<std::uint32_t>(header, 4);
    m.cols = binio::get<std::uint32_t>(header, 8);
    const auto dtype = binio::get<std::uint32_t>(header, 12);
    const auto storage = binio::get<std::uint32_t>(header, 16);
    if (dtype > 1 || storage > 1) throw IoError("corrupt matrix header in '" + path.string() + "'");
    m.kind = dtype == 0 ? ValueKind::Int64 : ValueKind::Float64;
    m.storage = storage == 0 ? Storage::DenseRowMajor : Storage::CooTriples;

    if (m.storage == Storage::DenseRowMajor) {
        const std::size_t n = std::size_t{m.rows} * m.cols;
        if (m.kind == ValueKind::Float64) {
            m.f64.resize(n);
            binio::read_exact(is, m.f64.data(), n * 8, path);
        } else {
            m.i64.resize(n);
            binio::read_exact(is, m.i64.data(), n * 8, path);
        }
        return m;
    }
    std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (rest.size() % 16 != 0) throw IoError("truncated COO payload in '" + path.string() + "'");
    const std::size_t nnz = rest.size() / 16;
    m.coo_row.resize(nnz);
    m.coo_col.resize(nnz);
    if (m.kind == ValueKind::Float64) {
        m.f64.resize(nnz);
    } else {
        m.i64.resize(nnz);
    }
    for (std::size_t i = 0; i < nnz; ++i) {
        m.coo_row[i] = binio::get<std::uint32_t>(rest, i * 16);
        m.coo_col[i] = binio::get<std::uint32_t>(rest, i * 16 + 4);
        if (m.kind == ValueKind::Float64) {
            m.f64[i] = binio::get<double>(rest, i * 16 + 8);
        } else {
            m.i64[i] = binio::get<std::int64_t>(rest, i * 16 + 8);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Tensors

Tensor4::Tensor4(std::uint32_t n_, std::uint32_t h_, std::uint32_t w_, std::uint32_t c_, float fill)
    : n(n_), h(h_), w(w_), c(c_) {
    if (n_ < 1 || h_ < 1 || w_ < 1 || c_ < 1) throw ParamError("tensor dimensions must be >= 1");
    data.assign(std::size_t{n_} * h_ * w_ * c_, fill);
}

Tensor4 gen_tensor_batch(std::uint32_t dim, std::uint32_t channels, std::uint32_t batch, std::uint64_t seed,
                         unsigned threads) {
    Tensor4 t(batch, dim, dim, channels);
    const CounterRng rng(seed);
    parallel_chunks(t.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) t.data[i] = rng.uniform_f32(0, i);
    });
    return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor4& t) {
    std::string header("MTSR");
    binio::put<std::uint32_t>(header, t.n);
    binio::put<std::uint32_t>(header, t.h);
    binio::put<std::uint32_t>(header, t.w);
    binio::put<std::uint32_t>(header, t.c);
    auto os = binio::open_out(path);
    binio::write_bytes(os, header.data(), header.size(), path);
    binio::write_bytes(os, t.data.data(), t.data.size() * sizeof(float), path);
}

Tensor4 read_tensor(const std::filesystem::path& path) {
    auto is = binio::open_in(path);
    std::string header(20, '\0');
    binio::read_exact(is, header.data(), header.size(), path);
    binio::expect_magic(std::string_view(header).substr(0, 4), "MTSR", path);
    Tensor4 t(binio::get<std::uint32_t>(header, 4), binio::get<std::uint32_t>(header, 8),
              binio::get<std::uint32_t>(header, 12), binio::get<std::uint32_t>(header, 16));
    binio::read_exact(is, t.data.data(), t.data.size() * sizeof(float), path);
    return t;
}

}  // namespace motifbench
