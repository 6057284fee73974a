#include "motifbench/analysis.hpp"
#include "motifbench/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace motifbench::analysis {

namespace {

constexpr const char* kSystemMetrics[] = {"cpu_utilization", "io_wait",   "disk_read_bw",           "disk_write_bw",
                                          "net_rx_bw",       "net_tx_bw", "major_page_faults_per_s"};

constexpr const char* kProcessMetrics[] = {"process_cpu_utilization", "process_system_share",
                                           "minor_page_faults_per_s", "context_switches_per_s"};

std::optional<double> mean_of(const std::vector<harness::SystemSample>& samples,
                              std::optional<double> harness::SystemSample::*field) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : samples) {
        if (const auto& v = s.*field) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

}  // namespace

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out(std::begin(kSystemMetrics), std::end(kSystemMetrics));
        out.insert(out.end(), std::begin(kProcessMetrics), std::end(kProcessMetrics));
        for (const auto& [name, v] : topdown::flatten(topdown::TopDownTree{})) out.push_back(name);
        out.push_back("ipc");
        out.push_back("mlp");
        return out;
    }();
    return names;
}

std::vector<std::optional<double>> metric_vector(const harness::RunResult& r) {
    using S = harness::SystemSample;
    std::vector<std::optional<double>> v;
    v.reserve(metric_names().size());
    for (auto field : {&S::cpu_utilization, &S::io_wait, &S::disk_read_bw, &S::disk_write_bw, &S::net_rx_bw,
                       &S::net_tx_bw, &S::major_page_faults_per_s}) {
        v.push_back(mean_of(r.system_samples, field));
    }
    const double wall = std::accumulate(r.wall_time.begin(), r.wall_time.end(), 0.0);
    if (r.process && wall > 0.0) {
        const auto& u = *r.process;
        const double cpu = u.user_time + u.system_time;
        v.push_back(cpu / wall);
        v.push_back(cpu > 0.0 ? std::optional<double>(u.system_time / cpu) : std::nullopt);
        v.push_back(static_cast<double>(u.minor_faults) / wall);
        v.push_back(static_cast<double>(u.voluntary_switches + u.involuntary_switches) / wall);
    } else {
        v.resize(v.size() + std::size(kProcessMetrics));
    }
    if (r.counters) {
        for (const auto& [name, f] : topdown::flatten(topdown::analyze(*r.counters))) v.push_back(f);
        const auto em = topdown::exec_metrics(*r.counters);
        v.push_back(em.ipc);
        v.push_back(em.mlp);
    } else {
        v.resize(metric_names().size());
    }
    return v;
}

std::string row_label(const harness::RunResult& r) {
    std::string out(motif_name(r.motif));
    if (!r.axes.empty()) {
        out += '[';
        bool first = true;
        for (const auto& [k, v] : r.axes) {
            if (!first) out += ',';
            out += k + "=" + v;
            first = false;
        }
        out += ']';
    }
    return out;
}

MetricTable metric_table(const std::vector<harness::RunResult>& results) {
    MetricTable t;
    t.col_labels = metric_names();
    std::map<std::string, int> seen;
    for (const auto& r : results) {
        std::string label = row_label(r);
        if (const int n = ++seen[label]; n > 1) label += "#" + std::to_string(n);
        t.row_labels.push_back(std::move(label));
        t.cells.push_back(metric_vector(r));
    }
    return t;
}

std::size_t MetricMatrix::imputed_count() const {
    std::size_t n = 0;
    for (const auto& row : imputed) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
    return n;
}

MetricMatrix build_metric_matrix(const MetricTable& table, Normalization norm) {
    const std::size_t n = table.row_labels.size();
    if (n < 2) throw ParamError("metric matrix needs at least 2 results, got " + std::to_string(n));
    if (table.cells.size() != n) throw ParamError("metric table row count mismatch");

    MetricMatrix m;
    m.row_labels = table.row_labels;
    m.normalization = norm;
    m.raw.assign(n, {});
    m.values.assign(n, {});
    m.imputed.assign(n, {});

    for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
        double sum = 0.0;
        std::size_t present = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (table.cells[r].size() != table.col_labels.size()) throw ParamError("metric table row width mismatch");
            if (const auto& v = table.cells[r][c]) {
                sum += *v;
                ++present;
            }
        }
        if (present == 0) {
            m.dropped_absent.push_back(table.col_labels[c]);
            continue;
        }
        const double fill = sum / static_cast<double>(present);
        std::vector<double> col(n);
        std::vector<bool> imp(n);
        for (std::size_t r = 0; r < n; ++r) {
            imp[r] = !table.cells[r][c].has_value();
            col[r] = imp[r] ? fill : *table.cells[r][c];
        }
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double x : col) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n));
        // Relative threshold so that identical runs stored with rounding
        // noise still count as constant.
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
            m.dropped_zero_variance.push_back(table.col_labels[c]);
            continue;
        }
        m.col_labels.push_back(table.col_labels[c]);
        for (std::size_t r = 0; r < n; ++r) {
            m.raw[r].push_back(col[r]);
            m.values[r].push_back(norm == Normalization::ZScore ? (col[r] - mean) / sd : col[r]);
            m.imputed[r].push_back(imp[r]);
        }
    }
    m.degenerate = m.col_labels.empty();
    return m;
}

MetricMatrix build_metric_matrix(const std::vector<harness::RunResult>& results, Normalization norm) {
    return build_metric_matrix(metric_table(results), norm);
}

PcaResult pca(const std::vector<std::vector<double>>& data, double retained_variance) {
    if (!(retained_variance > 0.0 && retained_variance <= 1.0)) {
        throw ParamError("retained variance must be in (0, 1]");
    }
    const std::size_t n = data.size();
    if (n < 2) throw ParamError("pca needs at least 2 rows");
    const std::size_t d = data[0].size();
    if (d == 0) throw ParamError("pca on a degenerate matrix (no columns)");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < n; ++r) {
        if (data[r].size() != d) throw ParamError("pca rows differ in width");
        for (std::size_t c = 0; c < d; ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r][c];
    }
    x.rowwise() -= x.colwise().mean();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Runtime, "eigendecomposition failed");
    const Eigen::VectorXd evals = es.eigenvalues();  // ascending
    const Eigen::MatrixXd evecs = es.eigenvectors();

    PcaResult out;
    const double top = std::max(0.0, evals(evals.size() - 1));
    double total = 0.0;
    for (Eigen::Index i = evals.size() - 1; i >= 0; --i) {
        // Round-off leaves tiny negative or positive values for null directions.
        double v = evals(i);
        if (v < 1e-12 * std::max(1.0, top)) v = 0.0;
        out.eigenvalues.push_back(v);
        total += v;
    }
    if (!(total > 0.0)) throw ParamError("pca on a degenerate matrix (zero total variance)");
    for (double v : out.eigenvalues) out.explained_variance.push_back(v / total);

    double cum = 0.0;
    std::size_t k = 0;
    while (k < out.eigenvalues.size() && out.eigenvalues[k] > 0.0) {
        cum += out.explained_variance[k];
        ++k;
        if (cum >= retained_variance - 1e-9) break;
    }
    out.components = std::max<std::size_t>(k, 1);

    out.loadings.assign(out.components, std::vector<double>(d));
    for (std::size_t j = 0; j < out.components; ++j) {
        const Eigen::Index col = evals.size() - 1 - static_cast<Eigen::Index>(j);
        Eigen::VectorXd v = evecs.col(col);
        // Sign convention: the largest-magnitude entry is positive.
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        for (std::size_t c = 0; c < d; ++c) out.loadings[j][c] = v(static_cast<Eigen::Index>(c));
    }
    out.projected.assign(n, std::vector<double>(out.components));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < out.components; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * out.loadings[j][c];
            out.projected[r][j] = s;
        }
    }
    return out;
}

PcaResult pca(const MetricMatrix& m, double retained_variance) {
    if (m.degenerate) throw ParamError("pca on a degenerate metric matrix (every column was dropped)");
    return pca(m.values, retained_variance);
}

}  // namespace motifbench::analysis
