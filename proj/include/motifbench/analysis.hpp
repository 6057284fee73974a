#pragma once

#include "motifbench/harness.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace motifbench::analysis {

inline constexpr int kReportSchema = 1;

// Column names of a run's metric vector: the SystemSample means, process
// usage rates, every Top-Down tree node, then ipc and mlp.
const std::vector<std::string>& metric_names();

std::vector<std::optional<double>> metric_vector(const harness::RunResult& r);

// "matmul[size=small]", "fft[size=custom,sparsity=0.9]".
std::string row_label(const harness::RunResult& r);

// Raw, possibly incomplete cells before normalization.
struct MetricTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::optional<double>>> cells;  // [row][col]
};

MetricTable metric_table(const std::vector<harness::RunResult>& results);

enum class Normalization { Raw, ZScore };

struct MetricMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> raw;     // imputed, kept columns only
    std::vector<std::vector<double>> values;  // per `normalization`
    std::vector<std::vector<bool>> imputed;   // [row][col]
    Normalization normalization = Normalization::ZScore;
    // Columns removed: zero variance, or absent in every row.
    std::vector<std::string> dropped_zero_variance;
    std::vector<std::string> dropped_absent;
    // No columns left after dropping.
    bool degenerate = false;

    std::size_t rows() const noexcept { return row_labels.size(); }
    std::size_t cols() const noexcept { return col_labels.size(); }
    std::size_t imputed_count() const;
};

// Column-mean imputation, then per-column population z-score. Needs >= 2 rows.
MetricMatrix build_metric_matrix(const MetricTable& table, Normalization norm = Normalization::ZScore);
MetricMatrix build_metric_matrix(const std::vector<harness::RunResult>& results,
                                 Normalization norm = Normalization::ZScore);

struct PcaResult {
    std::size_t components = 0;
    std::vector<double> eigenvalues;          // all, descending
    std::vector<double> explained_variance;   // fractions, all, descending
    std::vector<std::vector<double>> loadings;   // [component][feature], unit length
    std::vector<std::vector<double>> projected;  // [row][component]
};

// Eigendecomposition of the sample covariance of the (column-centred) data.
// Keeps the smallest k whose cumulative explained variance reaches
// `retained_variance`.
PcaResult pca(const std::vector<std::vector<double>>& data, double retained_variance = 0.9);
PcaResult pca(const MetricMatrix& m, double retained_variance = 0.9);

enum class Linkage { Average, Complete, Single };
std::string_view to_string(Linkage l) noexcept;
Linkage parse_linkage(std::string_view s);

struct Merge {
    std::size_t a = 0, b = 0;  // cluster ids; leaves are 0..n-1, merge i creates n+i
    double height = 0.0;
    std::size_t size = 0;
};

struct LinkageTree {
    std::vector<std::string> labels;
    std::vector<Merge> merges;
    Linkage linkage = Linkage::Average;

    std::size_t leaves() const noexcept { return labels.size(); }
};

// Agglomerative clustering on Euclidean distance. Equal distances are
// resolved by the lexicographically smallest leaf label of each cluster.
LinkageTree hierarchical_cluster(const std::vector<std::vector<double>>& points, const std::vector<std::string>& labels,
                                 Linkage linkage = Linkage::Average);

// Cluster index per leaf after cutting at the largest gap between
// consecutive merge heights. Indices follow first appearance in leaf order.
std::vector<std::size_t> cut_largest_gap(const LinkageTree& tree);
std::vector<std::size_t> cut_clusters(const LinkageTree& tree, std::size_t k);

// Leaf order for drawing, children left to right.
std::vector<std::size_t> dendrogram_order(const LinkageTree& tree);

// ---------------------------------------------------------------------------
// Reports

std::string csv_escape(std::string_view field);

// Raw (imputed) values of the kept columns plus an "imputed" column that
// lists imputed metric names per row.
std::string matrix_csv(const MetricMatrix& m);

struct AnalysisReport {
    MetricMatrix matrix;
    std::optional<PcaResult> pca;
    std::optional<LinkageTree> tree;
    std::vector<std::size_t> clusters;
    std::vector<std::string> notices;
};

// Full pipeline: matrix, PCA, clustering, cut. With fewer than two results
// or a degenerate matrix only notices are filled.
AnalysisReport analyze_results(const std::vector<harness::RunResult>& results, Linkage linkage = Linkage::Average,
                               double retained_variance = 0.9);

std::string report_json(const AnalysisReport& r);

// Stacked level-1 fractions, one bar per run. Runs without counters are
// drawn as empty outlined bars.
std::string breakdown_bars_svg(const std::vector<harness::RunResult>& results);

// Mean I/O bandwidths of each run relative to the baseline run.
struct IoRatios {
    std::string label;
    std::vector<std::optional<double>> ratios;  // per io_metric_names()
};
const std::vector<std::string>& io_metric_names();
std::vector<IoRatios> io_ratios(const std::vector<harness::RunResult>& results, std::size_t baseline);
std::string io_bars_svg(const std::vector<harness::RunResult>& results, std::size_t baseline = 0);

std::string dendrogram_svg(const LinkageTree& tree);

}  // namespace motifbench::analysis
