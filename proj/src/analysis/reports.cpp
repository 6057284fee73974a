#include "motifbench/analysis.hpp"
#include "motifbench/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace motifbench::analysis {

namespace {

using nlohmann::json;

// Fixed-precision number for SVG attributes; keeps output byte-stable.
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string svg_open(double w, double h, std::string_view title) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<title>" + xml_escape(title) + "</title>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
    return s;
}

std::string text(double x, double y, std::string_view body, std::string_view extra = {}) {
    std::string s = "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"";
    if (!extra.empty()) s += " " + std::string(extra);
    return s + ">" + xml_escape(body) + "</text>\n";
}

std::string rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = {}) {
    std::string s = "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
                    "\" fill=\"" + std::string(fill) + "\"";
    if (!extra.empty()) s += " " + std::string(extra);
    return s + "/>\n";
}

std::string line(double x1, double y1, double x2, double y2, std::string_view stroke = "black") {
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

std::vector<std::string> labels_of(const std::vector<harness::RunResult>& results) {
    return metric_table(results).row_labels;
}

}  // namespace

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string matrix_csv(const MetricMatrix& m) {
    std::ostringstream os;
    os << "run";
    for (const auto& c : m.col_labels) os << ',' << csv_escape(c);
    os << ",imputed\r\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << csv_escape(m.row_labels[r]);
        std::string imputed;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", m.raw[r][c]);
            os << ',' << buf;
            if (m.imputed[r][c]) imputed += (imputed.empty() ? "" : ";") + m.col_labels[c];
        }
        os << ',' << csv_escape(imputed) << "\r\n";
    }
    return os.str();
}

AnalysisReport analyze_results(const std::vector<harness::RunResult>& results, Linkage linkage,
                               double retained_variance) {
    AnalysisReport rep;
    if (results.empty()) throw ParamError("no results to analyze");
    if (results.size() < 2) {
        rep.matrix.row_labels = labels_of(results);
        rep.notices.push_back("clustering skipped: need at least 2 results, got 1");
        return rep;
    }
    rep.matrix = build_metric_matrix(results);
    if (rep.matrix.degenerate) {
        rep.notices.push_back("clustering skipped: every metric column is constant or absent (degenerate matrix)");
        return rep;
    }
    if (const auto n = rep.matrix.imputed_count()) {
        rep.notices.push_back(std::to_string(n) + " metric cells imputed with column means");
    }
    rep.pca = pca(rep.matrix, retained_variance);
    rep.tree = hierarchical_cluster(rep.pca->projected, rep.matrix.row_labels, linkage);
    rep.clusters = cut_largest_gap(*rep.tree);
    return rep;
}

std::string report_json(const AnalysisReport& r) {
    const auto& m = r.matrix;
    json j;
    j["schema"] = kReportSchema;
    j["rows"] = m.row_labels;
    j["columns"] = m.col_labels;
    j["normalization"] = m.normalization == Normalization::ZScore ? "zscore" : "raw";
    j["dropped_zero_variance"] = m.dropped_zero_variance;
    j["dropped_absent"] = m.dropped_absent;
    j["degenerate"] = m.degenerate;
    j["values"] = m.values;
    json imputed = json::array();
    for (std::size_t row = 0; row < m.imputed.size(); ++row) {
        for (std::size_t c = 0; c < m.imputed[row].size(); ++c) {
            if (m.imputed[row][c]) imputed.push_back({{"row", m.row_labels[row]}, {"column", m.col_labels[c]}});
        }
    }
    j["imputed"] = imputed;
    if (r.pca) {
        j["pca"] = {{"components", r.pca->components},
                    {"eigenvalues", r.pca->eigenvalues},
                    {"explained_variance", r.pca->explained_variance},
                    {"loadings", r.pca->loadings},
                    {"projected", r.pca->projected}};
    } else {
        j["pca"] = nullptr;
    }
    if (r.tree) {
        json merges = json::array();
        for (const auto& mg : r.tree->merges) {
            merges.push_back({{"a", mg.a}, {"b", mg.b}, {"height", mg.height}, {"size", mg.size}});
        }
        j["tree"] = {{"linkage", std::string(to_string(r.tree->linkage))},
                     {"leaves", r.tree->labels},
                     {"merges", merges},
                     {"order", dendrogram_order(*r.tree)}};
    } else {
        j["tree"] = nullptr;
    }
    j["clusters"] = r.clusters;
    j["notices"] = r.notices;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// SVG

std::string breakdown_bars_svg(const std::vector<harness::RunResult>& results) {
    if (results.empty()) throw ParamError("breakdown bars: no results (need at least one run)");
    static const char* kNames[] = {"retiring", "bad_speculation", "frontend_bound", "backend_bound"};
    static const char* kColors[] = {"#4daf4a", "#e41a1c", "#377eb8", "#ff7f00"};
    const auto labels = labels_of(results);
    const double bar = 36, gap = 24, left = 50, top = 30, height = 240;
    const double width = left + static_cast<double>(results.size()) * (bar + gap) + 160;
    const double total_h = top + height + 110;
    std::string s = svg_open(width, total_h, "Top-Down level-1 breakdown");
    s += line(left - 6, top, left - 6, top + height);
    for (int t = 0; t <= 4; ++t) {
        const double y = top + height - height * t / 4.0;
        s += line(left - 10, y, left - 6, y);
        s += text(left - 12, y + 4, num(t / 4.0), "text-anchor=\"end\"");
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double x = left + static_cast<double>(i) * (bar + gap);
        const auto& r = results[i];
        std::optional<topdown::Level1> l1;
        if (r.counters) l1 = topdown::analyze(*r.counters).level1;
        const bool complete = l1 && l1->retiring && l1->bad_speculation && l1->frontend_bound && l1->backend_bound;
        if (!complete) {
            s += rect(x, top, bar, height, "none", "stroke=\"#888\" stroke-dasharray=\"4,3\"");
            s += text(x + bar / 2, top + height / 2, "n/a", "text-anchor=\"middle\" fill=\"#888\"");
        } else {
            const double f[] = {*l1->retiring, *l1->bad_speculation, *l1->frontend_bound, *l1->backend_bound};
            double sum = 0.0;
            for (double v : f) sum += std::max(0.0, v);
            double y = top + height;
            for (int k = 0; k < 4; ++k) {
                // Normalized so the stack always fills the bar exactly.
                const double h = sum > 0 ? height * std::max(0.0, f[k]) / sum : 0.0;
                y -= h;
                s += rect(x, y, bar, h, kColors[k]);
            }
        }
        s += "<text transform=\"translate(" + num(x + bar / 2) + "," + num(top + height + 10) +
             ") rotate(45)\">" + xml_escape(labels[i]) + "</text>\n";
    }
    const double lx = left + static_cast<double>(results.size()) * (bar + gap) + 10;
    for (int k = 0; k < 4; ++k) {
        const double y = top + 16.0 * k;
        s += rect(lx, y, 10, 10, kColors[k]);
        s += text(lx + 14, y + 9, kNames[k]);
    }
    return s + "</svg>\n";
}

const std::vector<std::string>& io_metric_names() {
    static const std::vector<std::string> names = {"disk_read_bw", "disk_write_bw", "net_rx_bw", "net_tx_bw"};
    return names;
}

std::vector<IoRatios> io_ratios(const std::vector<harness::RunResult>& results, std::size_t baseline) {
    if (results.empty()) throw ParamError("io bars: no results (need at least one run)");
    if (baseline >= results.size()) {
        throw ParamError("io bars: baseline index " + std::to_string(baseline) + " out of range");
    }
    const auto& names = metric_names();
    std::vector<std::size_t> idx;
    for (const auto& n : io_metric_names()) {
        idx.push_back(static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin()));
    }
    const auto base = metric_vector(results[baseline]);
    const auto labels = labels_of(results);
    std::vector<IoRatios> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto v = metric_vector(results[i]);
        IoRatios r{labels[i], {}};
        for (std::size_t k : idx) {
            std::optional<double> ratio;
            if (v[k] && base[k]) {
                if (*base[k] != 0.0) {
                    ratio = *v[k] / *base[k];
                } else if (*v[k] == 0.0) {
                    ratio = 1.0;  // both idle
                }
            }
            r.ratios.push_back(ratio);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string io_bars_svg(const std::vector<harness::RunResult>& results, std::size_t baseline) {
    const auto rows = io_ratios(results, baseline);
    static const char* kColors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};
    const auto& names = io_metric_names();
    double peak = 1.0;
    for (const auto& r : rows)
        for (const auto& v : r.ratios)
            if (v) peak = std::max(peak, *v);
    const double bar = 12, group_gap = 24, left = 50, top = 30, height = 240;
    const double group = bar * static_cast<double>(names.size());
    const double width = left + static_cast<double>(rows.size()) * (group + group_gap) + 160;
    std::string s = svg_open(width, top + height + 110, "I/O bandwidth relative to baseline");
    s += line(left - 6, top, left - 6, top + height);
    const double y1 = top + height - height / peak;
    s += line(left - 6, y1, width - 160, y1, "#999");
    s += text(left - 12, y1 + 4, "1.00", "text-anchor=\"end\"");
    s += text(left - 12, top + 4, num(peak), "text-anchor=\"end\"");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x0 = left + static_cast<double>(i) * (group + group_gap);
        for (std::size_t k = 0; k < names.size(); ++k) {
            const double x = x0 + bar * static_cast<double>(k);
            if (const auto& v = rows[i].ratios[k]) {
                const double h = height * *v / peak;
                s += rect(x, top + height - h, bar, h, kColors[k]);
            } else {
                s += rect(x, top + height - 8, bar, 8, "none", "stroke=\"#888\" stroke-dasharray=\"2,2\"");
            }
        }
        std::string label = rows[i].label + (i == baseline ? " (baseline)" : "");
        s += "<text transform=\"translate(" + num(x0 + group / 2) + "," + num(top + height + 10) + ") rotate(45)\">" +
             xml_escape(label) + "</text>\n";
    }
    const double lx = width - 150;
    for (std::size_t k = 0; k < names.size(); ++k) {
        const double y = top + 16.0 * static_cast<double>(k);
        s += rect(lx, y, 10, 10, kColors[k]);
        s += text(lx + 14, y + 9, names[k]);
    }
    return s + "</svg>\n";
}

std::string dendrogram_svg(const LinkageTree& tree) {
    const std::size_t n = tree.leaves();
    if (n == 0) throw ParamError("dendrogram: empty tree");
    const auto order = dendrogram_order(tree);
    double max_h = 0.0;
    for (const auto& m : tree.merges) max_h = std::max(max_h, m.height);
    if (!(max_h > 0.0)) max_h = 1.0;

    // Horizontal layout: leaves stacked top to bottom, height grows rightwards.
    const double row = 20, top = 30, label_w = 220, plot_w = 400;
    const double h = top + row * static_cast<double>(n) + 40;
    std::string s = svg_open(label_w + plot_w + 40, h, "Linkage distance dendrogram");
    std::vector<double> ypos(n + tree.merges.size()), xpos(n + tree.merges.size(), label_w);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t leaf = order[i];
        ypos[leaf] = top + row * (static_cast<double>(i) + 0.5);
        s += text(label_w - 6, ypos[leaf] + 4, tree.labels[leaf], "text-anchor=\"end\"");
    }
    for (std::size_t i = 0; i < tree.merges.size(); ++i) {
        const auto& m = tree.merges[i];
        const double x = label_w + plot_w * m.height / max_h;
        s += line(xpos[m.a], ypos[m.a], x, ypos[m.a], "#333");
        s += line(xpos[m.b], ypos[m.b], x, ypos[m.b], "#333");
        s += line(x, ypos[m.a], x, ypos[m.b], "#333");
        xpos[n + i] = x;
        ypos[n + i] = (ypos[m.a] + ypos[m.b]) / 2;
    }
    const double axis_y = top + row * static_cast<double>(n) + 8;
    s += line(label_w, axis_y, label_w + plot_w, axis_y);
    s += text(label_w, axis_y + 14, "0", "text-anchor=\"middle\"");
    s += text(label_w + plot_w, axis_y + 14, num(max_h), "text-anchor=\"middle\"");
    s += text(label_w + plot_w / 2, axis_y + 28, "linkage distance (" + std::string(to_string(tree.linkage)) + ")",
              "text-anchor=\"middle\"");
    return s + "</svg>\n";
}

}  // namespace motifbench::analysis
