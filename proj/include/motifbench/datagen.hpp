#pragma once

#include "motifbench/motifs.hpp"
#include "motifbench/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace motifbench {

enum class Source { Text, Sequence, Graph, Matrix, Tensor };
enum class LogicalType { Unstructured, SemiStructured, Structured };
enum class SizeClass { Small, Medium, Large, Custom };
enum class ValueKind { Int64, Float64 };
enum class Storage { DenseRowMajor, CooTriples };

// Which Small/Medium/Large table resolve_size consults. Paper is the
// full-scale cluster table; Desk keeps the same axes at single-machine scale.
enum class SizeProfile { Paper, Desk };

std::string_view to_string(Source s) noexcept;
std::string_view to_string(LogicalType t) noexcept;
std::string_view to_string(SizeClass s) noexcept;
std::string_view to_string(ValueKind v) noexcept;
std::string_view to_string(Storage s) noexcept;
std::string_view to_string(SizeProfile p) noexcept;

Source parse_source(std::string_view s);
LogicalType parse_logical_type(std::string_view s);
SizeClass parse_size_class(std::string_view s);
ValueKind parse_value_kind(std::string_view s);
SizeProfile parse_size_profile(std::string_view s);

LogicalType default_logical_type(Source s) noexcept;

struct PatternParams {
    double sparsity = 0.0;       // share of zero elements, [0, 1]
    double zipf_exponent = 1.0;  // text token distribution, > 0
    std::uint32_t edge_factor = 16;
    ValueKind value_kind = ValueKind::Float64;

    void validate() const;
    bool operator==(const PatternParams&) const = default;
};

// Concrete size parameters; only the fields relevant to a source are used.
struct SizeParams {
    std::uint64_t text_bytes = 0;
    std::uint32_t graph_scale = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::uint32_t dim = 0;
    std::uint32_t channels = 0;
    std::uint32_t batch = 0;

    bool operator==(const SizeParams&) const = default;
};

struct DataSpec {
    Source source = Source::Text;
    LogicalType logical_type = LogicalType::Unstructured;
    SizeClass size_class = SizeClass::Small;
    SizeParams custom;  // meaningful only for SizeClass::Custom
    PatternParams pattern;
    std::uint64_t seed = 1;
    SizeProfile profile = SizeProfile::Paper;

    bool operator==(const DataSpec&) const = default;
};

/// Size table lookup. Custom passes `custom` through unchanged.
SizeParams resolve_size(MotifId motif, SizeClass size_class, SizeProfile profile = SizeProfile::Paper,
                        const SizeParams& custom = {});
SizeParams resolve_size(MotifId motif, const DataSpec& spec);

// Estimated on-disk bytes of the dataset a motif run would materialize.
std::uint64_t estimate_dataset_bytes(MotifId motif, const DataSpec& spec);

// ---------------------------------------------------------------------------
// Text

// The embedded vocabulary, most frequent rank first.
const std::vector<std::string>& text_vocabulary();

// Probability mass of rank-1 under Zipf(s) over the embedded vocabulary.
double zipf_rank1_mass(double exponent);

// Streams a Zipf-distributed word corpus of `bytes` (within 1%) to `sink`,
// in chunks. Output is LF-terminated lines of space-separated words.
void gen_text_stream(std::uint64_t bytes, const PatternParams& pattern, std::uint64_t seed,
                     const std::function<void(std::string_view)>& sink);
std::string gen_text(std::uint64_t bytes, const PatternParams& pattern, std::uint64_t seed);
std::uint64_t write_text(const std::filesystem::path& path, std::uint64_t bytes, const PatternParams& pattern,
                         std::uint64_t seed);

// Splits on '\n'. A trailing fragment without newline counts as a line.
std::vector<std::string_view> split_lines(std::string_view text);
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Sequence files

struct SequenceRecord {
    std::string key;
    std::string value;
    bool operator==(const SequenceRecord&) const = default;
};

struct SequenceStats {
    std::uint64_t records = 0;
    std::uint64_t skipped = 0;  // lines rejected as malformed UTF-8
    std::uint64_t bytes = 0;
};

bool is_valid_utf8(std::string_view s) noexcept;

std::string encode_line_key(std::uint64_t index);
std::uint64_t decode_line_key(std::string_view key);

// Text -> sequence, one record per line; keys are 8-byte LE input line indices.
SequenceStats gen_sequence(const std::filesystem::path& text_path, const std::filesystem::path& seq_path);
std::string encode_sequence(std::string_view text, SequenceStats* stats = nullptr);

std::vector<SequenceRecord> decode_sequence(std::string_view bytes);
std::vector<SequenceRecord> read_sequence(const std::filesystem::path& path);

// Streaming writer/reader used by the out-of-core sort.
class SequenceWriter {
public:
    explicit SequenceWriter(const std::filesystem::path& path);
    ~SequenceWriter();
    SequenceWriter(const SequenceWriter&) = delete;
    SequenceWriter& operator=(const SequenceWriter&) = delete;

    void append(std::string_view key, std::string_view value);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class SequenceReader {
public:
    explicit SequenceReader(const std::filesystem::path& path);
    ~SequenceReader();
    SequenceReader(const SequenceReader&) = delete;
    SequenceReader& operator=(const SequenceReader&) = delete;

    // False at end of file.
    bool next(SequenceRecord& out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Graphs

struct Edge {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

struct GraphData {
    std::uint32_t scale = 0;
    std::uint64_t num_vertices = 0;
    std::vector<Edge> edges;

    // Sorted, without self-loops or duplicate (u, v) pairs.
    GraphData deduplicated() const;
};

inline constexpr double kRmatA = 0.57;
inline constexpr double kRmatB = 0.19;
inline constexpr double kRmatC = 0.19;
inline constexpr double kRmatD = 0.05;

GraphData gen_graph(std::uint32_t scale, std::uint32_t edge_factor, std::uint64_t seed, unsigned threads = 1);
void write_graph(const std::filesystem::path& path, const GraphData& g);
GraphData read_graph(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Matrices

struct MatrixData {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    ValueKind kind = ValueKind::Float64;
    Storage storage = Storage::DenseRowMajor;
    // Dense: rows*cols entries of the active kind. COO: one per nonzero.
    std::vector<double> f64;
    std::vector<std::int64_t> i64;
    // COO coordinates, strictly increasing in (row, col).
    std::vector<std::uint32_t> coo_row;
    std::vector<std::uint32_t> coo_col;

    std::size_t stored_values() const noexcept { return kind == ValueKind::Float64 ? f64.size() : i64.size(); }
    std::size_t nonzeros() const;
    double value_as_double(std::size_t i) const noexcept {
        return kind == ValueKind::Float64 ? f64[i] : static_cast<double>(i64[i]);
    }
    MatrixData to_dense() const;
    MatrixData to_coo() const;
    // Dense row-major copy as doubles regardless of kind or storage.
    std::vector<double> dense_doubles() const;

    static MatrixData dense(std::uint32_t rows, std::uint32_t cols, ValueKind kind);
};

inline constexpr double kSparseStorageThreshold = 0.5;

MatrixData gen_matrix(std::uint32_t rows, std::uint32_t cols, double sparsity, ValueKind kind,
                      std::uint64_t seed, unsigned threads = 1);
void write_matrix(const std::filesystem::path& path, const MatrixData& m);
MatrixData read_matrix(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Tensors

Tensor4 gen_tensor_batch(std::uint32_t dim, std::uint32_t channels, std::uint32_t batch, std::uint64_t seed,
                         unsigned threads = 1);
void write_tensor(const std::filesystem::path& path, const Tensor4& t);
Tensor4 read_tensor(const std::filesystem::path& path);

}  // namespace motifbench
