#include "motifbench/error.hpp"
#include "motifbench/kernels.hpp"
#include "motifbench/parallel.hpp"

#include <algorithm>

namespace motifbench::kernels {

namespace {

constexpr std::size_t kBlockK = 128;
constexpr std::size_t kBlockJ = 512;

template <typename T>
const std::vector<T>& values(const MatrixData& m) {
    if constexpr (std::is_same_v<T, double>) {
        return m.f64;
    } else {
        return m.i64;
    }
}

template <typename T>
std::vector<T>& values(MatrixData& m) {
    if constexpr (std::is_same_v<T, double>) {
        return m.f64;
    } else {
        return m.i64;
    }
}

template <typename T>
const std::vector<T>& values(const CsrMatrix& m) {
    if constexpr (std::is_same_v<T, double>) {
        return m.f64;
    } else {
        return m.i64;
    }
}

// Every output element accumulates its k terms in ascending k order, which
// matches the naive triple loop bit for bit and is independent of threads.
template <typename T>
void dense_dense(const MatrixData& a, const MatrixData& b, MatrixData& c, unsigned threads) {
    const std::size_t kdim = a.cols, n = b.cols;
    const T* av = values<T>(a).data();
    const T* bv = values<T>(b).data();
    T* cv = values<T>(c).data();
    parallel_chunks(a.rows, threads, [&](std::size_t r0, std::size_t r1, unsigned) {
        for (std::size_t kb = 0; kb < kdim; kb += kBlockK) {
            const std::size_t kend = std::min(kdim, kb + kBlockK);
            for (std::size_t jb = 0; jb < n; jb += kBlockJ) {
                const std::size_t jend = std::min(n, jb + kBlockJ);
                for (std::size_t i = r0; i < r1; ++i) {
                    T* crow = cv + i * n;
                    for (std::size_t k = kb; k < kend; ++k) {
                        const T aik = av[i * kdim + k];
                        if (aik == T{0}) continue;
                        const T* brow = bv + k * n;
                        for (std::size_t j = jb; j < jend; ++j) crow[j] += aik * brow[j];
                    }
                }
            }
        }
    });
}

// Row-by-row accumulation for any operand mix that includes a CSR side.
template <typename T>
void general(const MatrixData& a, const CsrMatrix* a_csr, const MatrixData& b, const CsrMatrix* b_csr,
             MatrixData& c, unsigned threads) {
    const std::size_t n = b.cols;
    T* cv = values<T>(c).data();
    parallel_chunks(a.rows, threads, [&](std::size_t r0, std::size_t r1, unsigned) {
        for (std::size_t i = r0; i < r1; ++i) {
            T* crow = cv + i * n;
            auto accumulate = [&](std::size_t k, T aik) {
                if (b_csr) {
                    const auto& bv = values<T>(*b_csr);
                    for (auto p = b_csr->row_ptr[k]; p < b_csr->row_ptr[k + 1]; ++p) {
                        crow[b_csr->col_idx[p]] += aik * bv[p];
                    }
                } else {
                    const T* brow = values<T>(b).data() + k * n;
                    for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
                }
            };
            if (a_csr) {
                const auto& av = values<T>(*a_csr);
                for (auto p = a_csr->row_ptr[i]; p < a_csr->row_ptr[i + 1]; ++p) {
                    accumulate(a_csr->col_idx[p], av[p]);
                }
            } else {
                const T* arow = values<T>(a).data() + i * a.cols;
                for (std::size_t k = 0; k < a.cols; ++k) {
                    if (arow[k] != T{0}) accumulate(k, arow[k]);
                }
            }
        }
    });
}

template <typename T>
void multiply(const MatrixData& a, const MatrixData& b, MatrixData& c, unsigned threads) {
    const bool a_sparse = a.storage == Storage::CooTriples;
    const bool b_sparse = b.storage == Storage::CooTriples;
    if (!a_sparse && !b_sparse) {
        dense_dense<T>(a, b, c, threads);
        return;
    }
    CsrMatrix a_csr, b_csr;
    if (a_sparse) a_csr = coo_to_csr(a);
    if (b_sparse) b_csr = coo_to_csr(b);
    general<T>(a, a_sparse ? &a_csr : nullptr, b, b_sparse ? &b_csr : nullptr, c, threads);
}

}  // namespace

CsrMatrix coo_to_csr(const MatrixData& coo) {
    if (coo.storage != Storage::CooTriples) throw ParamError("coo_to_csr expects COO storage");
    CsrMatrix csr;
    csr.rows = coo.rows;
    csr.cols = coo.cols;
    csr.row_ptr.assign(std::size_t{coo.rows} + 1, 0);
    for (auto r : coo.coo_row) ++csr.row_ptr[std::size_t{r} + 1];
    for (std::size_t r = 0; r < coo.rows; ++r) csr.row_ptr[r + 1] += csr.row_ptr[r];
    // COO entries are already (row, col)-ordered, so columns copy through.
    csr.col_idx = coo.coo_col;
    csr.f64 = coo.f64;
    csr.i64 = coo.i64;
    return csr;
}

MatrixData matmul(const MatrixData& a, const MatrixData& b, unsigned threads) {
    if (a.cols != b.rows) {
        throw ParamError("matmul dimension mismatch: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         " * " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    }
    if (a.kind != b.kind) throw ParamError("matmul value kinds differ");
    MatrixData c = MatrixData::dense(a.rows, b.cols, a.kind);
    if (a.kind == ValueKind::Float64) {
        multiply<double>(a, b, c, threads);
    } else {
        multiply<std::int64_t>(a, b, c, threads);
    }
    return c;
}

}  // namespace motifbench::kernels
