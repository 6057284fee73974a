#pragma once

#include "motifbench/datagen.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motifbench::kernels {

// ---------------------------------------------------------------------------
// Sort

struct SortOptions {
    unsigned threads = 1;
    // Bytes of record payload held in memory at once; 0 means unlimited.
    std::uint64_t memory_budget = 0;
    std::filesystem::path spill_dir = std::filesystem::temp_directory_path();
};

// Stable lexicographic byte-order sort of whole records. Spills sorted runs
// (sequence-file format) to `spill_dir` when the input exceeds the budget.
std::vector<std::string> sort_records(std::vector<std::string> records, const SortOptions& opts = {});

// Out-of-core variant: sorts the values of a sequence file into another
// sequence file, holding at most `memory_budget` bytes of values at once.
// Output keys are the 8-byte LE output ordinals.
std::uint64_t sort_sequence_file(const std::filesystem::path& in, const std::filesystem::path& out,
                                 const SortOptions& opts);

// ---------------------------------------------------------------------------
// WordCount

using WordCounts = std::map<std::string, std::uint64_t, std::less<>>;

inline bool is_ascii_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

WordCounts wordcount(std::string_view corpus, unsigned threads = 1);
WordCounts wordcount_records(std::span<const std::string> records, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Grep

struct GrepMatch {
    std::uint64_t line_number;  // 1-based
    std::string_view line;
    bool operator==(const GrepMatch&) const = default;
};

std::vector<GrepMatch> grep_lines(std::span<const std::string_view> lines, std::string_view pattern,
                                  unsigned threads = 1);
std::vector<GrepMatch> grep(std::string_view corpus, std::string_view pattern, unsigned threads = 1);

// ---------------------------------------------------------------------------
// MD5

using Md5Digest = std::array<std::uint8_t, 16>;

Md5Digest md5(std::string_view data) noexcept;
std::string to_hex(const Md5Digest& d);
std::vector<Md5Digest> md5_records(std::span<const std::string> records, unsigned threads = 1);

// Incremental interface.
class Md5 {
public:
    Md5() noexcept;
    void update(std::string_view data) noexcept;
    Md5Digest finish() noexcept;

private:
    void block(const std::uint8_t* p) noexcept;

    std::array<std::uint32_t, 4> state_;
    std::array<std::uint8_t, 64> buffer_{};
    std::uint64_t length_ = 0;
};

// ---------------------------------------------------------------------------
// Matrix multiplication

// C = A * B. Dense operands use a blocked kernel; a COO operand is converted
// to CSR and multiplied sparse-by-dense. Result is always dense.
MatrixData matmul(const MatrixData& a, const MatrixData& b, unsigned threads = 1);

struct CsrMatrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<std::uint64_t> row_ptr;
    std::vector<std::uint32_t> col_idx;
    std::vector<double> f64;
    std::vector<std::int64_t> i64;
};

CsrMatrix coo_to_csr(const MatrixData& coo);

// ---------------------------------------------------------------------------
// Sampling

// Bernoulli(fraction) membership per record index; order preserving.
std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed, unsigned threads = 1);
std::vector<std::string> sample_records(std::span<const std::string> records, double fraction,
                                        std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// BFS

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::uint64_t kNoParent = std::numeric_limits<std::uint64_t>::max();

// Undirected adjacency; self-loops dropped, duplicate edges collapsed.
struct CsrGraph {
    std::uint64_t num_vertices = 0;
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint32_t> neighbors;

    std::span<const std::uint32_t> adjacent(std::uint64_t v) const noexcept {
        return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
    }
};

CsrGraph build_csr(const GraphData& g);

struct BfsResult {
    std::vector<std::uint32_t> depth;
    std::vector<std::uint64_t> parent;
    std::uint64_t visited_count = 0;
};

// Level-synchronous BFS. The parent of a vertex is its smallest-id neighbour
// in the previous level, so the result is independent of thread count.
BfsResult bfs(const CsrGraph& g, std::uint64_t root, unsigned threads = 1);

// ---------------------------------------------------------------------------
// FFT

using Complex = std::complex<double>;

struct ComplexMatrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<Complex> data;
};

bool is_power_of_two(std::uint64_t n) noexcept;

// In-place iterative radix-2 transform; size must be a power of two.
// The inverse is unscaled.
void fft_inplace(std::span<Complex> x, bool inverse);

// 2-D DFT by row-column decomposition.
ComplexMatrix fft2d(std::span<const double> real, std::uint32_t rows, std::uint32_t cols, unsigned threads = 1);
ComplexMatrix fft2d(const ComplexMatrix& in, bool inverse, unsigned threads = 1);
// Inverse transform including the 1/(rows*cols) scaling.
ComplexMatrix ifft2d(const ComplexMatrix& in, unsigned threads = 1);

}  // namespace motifbench::kernels
