#include "doctest.h"
#include "oracles.hpp"

#include "motifbench/analysis.hpp"
#include "motifbench/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <set>

using namespace motifbench;
using namespace motifbench::analysis;

namespace {

harness::RunResult make_run(MotifId m, double cpu, double disk_read, std::optional<topdown::Level1> l1 = std::nullopt,
                            std::string size = "small") {
    harness::RunResult r;
    r.motif = m;
    r.axes["size"] = std::move(size);
    harness::SystemSample s;
    s.cpu_utilization = cpu;
    s.io_wait = 0.0;
    s.disk_read_bw = disk_read;
    s.disk_write_bw = 0.0;
    s.net_rx_bw = 0.0;
    s.net_tx_bw = 0.0;
    s.major_page_faults_per_s = 0.0;
    r.system_samples = {s, s};
    if (l1) {
        topdown::TopDownTree t;
        t.level1 = *l1;
        r.counters = topdown::synthesize(t, 1.5, 3.0);
    }
    r.wall_time = {0.1};
    r.process = harness::ProcessUsage{0.07, 0.01, 10, 0, 1, 1};
    return r;
}

topdown::Level1 l1(double ret, double bad, double fe, double be) {
    topdown::Level1 x;
    x.retiring = ret;
    x.bad_speculation = bad;
    x.frontend_bound = fe;
    x.backend_bound = be;
    return x;
}

std::vector<std::vector<double>> random_matrix(std::mt19937_64& gen, std::size_t n, std::size_t d) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    for (auto& row : x)
        for (auto& v : row) v = nd(gen);
    return x;
}

std::vector<std::string> names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "p%02zu", i);
        out.emplace_back(buf);
    }
    return out;
}

// Tree as a set of (sorted leaf labels, height) pairs: identical for
// label-preserving isomorphic trees.
std::set<std::pair<std::vector<std::string>, long long>> canonical(const LinkageTree& t) {
    const std::size_t n = t.leaves();
    std::vector<std::vector<std::string>> members(n + t.merges.size());
    for (std::size_t i = 0; i < n; ++i) members[i] = {t.labels[i]};
    std::set<std::pair<std::vector<std::string>, long long>> out;
    for (std::size_t i = 0; i < t.merges.size(); ++i) {
        auto& m = members[n + i];
        m = members[t.merges[i].a];
        m.insert(m.end(), members[t.merges[i].b].begin(), members[t.merges[i].b].end());
        std::sort(m.begin(), m.end());
        out.insert({m, std::llround(t.merges[i].height * 1e9)});
    }
    return out;
}

}  // namespace

TEST_CASE("metric vector layout") {
    const auto& n = metric_names();
    CHECK(n.size() == 7 + 4 + topdown::flatten(topdown::TopDownTree{}).size() + 2);
    CHECK(n.front() == "cpu_utilization");
    CHECK(n[n.size() - 2] == "ipc");
    CHECK(n.back() == "mlp");
    CHECK(std::count(n.begin(), n.end(), "level1.backend_bound") == 1);

    const auto with = metric_vector(make_run(MotifId::Sort, 0.9, 100, l1(0.4, 0.1, 0.2, 0.3)));
    const auto without = metric_vector(make_run(MotifId::Sort, 0.9, 100));
    REQUIRE(with.size() == n.size());
    REQUIRE(without.size() == n.size());
    CHECK(*with[0] == doctest::Approx(0.9));
    CHECK(*with.back() == doctest::Approx(3.0));
    CHECK(!without.back());
    CHECK(!without[11]);
    CHECK(*with[7] == doctest::Approx(0.8));
    CHECK(*with[9] == doctest::Approx(100.0));
}

TEST_CASE("row labels include axes and disambiguate repeats") {
    const auto t = metric_table({make_run(MotifId::MatMul, 1, 0), make_run(MotifId::MatMul, 1, 0),
                                 make_run(MotifId::MatMul, 1, 0, std::nullopt, "large")});
    CHECK(t.row_labels[0] == "matmul[size=small]");
    CHECK(t.row_labels[1] == "matmul[size=small]#2");
    CHECK(t.row_labels[2] == "matmul[size=large]");
}

TEST_CASE("two-point z-score") {
    MetricTable t{{"a", "b"}, {"x", "flat"}, {{1.0, 5.0}, {3.0, 5.0}}};
    const auto m = build_metric_matrix(t);
    REQUIRE(m.cols() == 1);
    CHECK(m.values[0][0] == doctest::Approx(-1.0));
    CHECK(m.values[1][0] == doctest::Approx(1.0));
    CHECK(m.dropped_zero_variance == std::vector<std::string>{"flat"});
    CHECK(!m.degenerate);

    const auto raw = build_metric_matrix(t, Normalization::Raw);
    CHECK(raw.values[1][0] == 3.0);
}

TEST_CASE("matrix needs two rows; identical runs are degenerate") {
    CHECK_THROWS_AS(build_metric_matrix({make_run(MotifId::Sort, 1, 0)}), ParamError);
    const auto m = build_metric_matrix({make_run(MotifId::Sort, 0.5, 7, l1(0.4, 0.1, 0.2, 0.3)),
                                        make_run(MotifId::Sort, 0.5, 7, l1(0.4, 0.1, 0.2, 0.3))});
    CHECK(m.degenerate);
    CHECK(m.cols() == 0);
    CHECK_THROWS_AS(pca(m), ParamError);
}

TEST_CASE("null-provider runs: counter columns imputed and flagged") {
    const std::vector<harness::RunResult> rs = {
        make_run(MotifId::Sort, 0.9, 100, l1(0.4, 0.1, 0.2, 0.3)),
        make_run(MotifId::Grep, 0.5, 300),
        make_run(MotifId::MatMul, 0.7, 10, l1(0.2, 0.05, 0.15, 0.6)),
    };
    const auto m = build_metric_matrix(rs);
    const auto col = std::find(m.col_labels.begin(), m.col_labels.end(), "level1.backend_bound");
    REQUIRE(col != m.col_labels.end());
    const auto c = static_cast<std::size_t>(col - m.col_labels.begin());
    CHECK(m.imputed[1][c]);
    CHECK(!m.imputed[0][c]);
    CHECK(m.raw[1][c] == doctest::Approx(0.45));
    CHECK(m.imputed_count() > 0);

    const auto csv = matrix_csv(m);
    CHECK(csv.find(",imputed\r\n") != std::string::npos);
    CHECK(csv.find("level1.backend_bound") != std::string::npos);

    // All runs timing-only: counter columns are absent everywhere and dropped.
    const auto m2 = build_metric_matrix({make_run(MotifId::Sort, 0.9, 100), make_run(MotifId::Grep, 0.5, 300)});
    CHECK(m2.imputed_count() == 0);
    CHECK(std::count(m2.dropped_absent.begin(), m2.dropped_absent.end(), "mlp") == 1);
    CHECK(m2.cols() == 2);
}

TEST_CASE("pca on data along a line") {
    std::vector<std::vector<double>> x;
    for (int i = 0; i < 8; ++i) x.push_back({1.0 * i, 2.0 * i - 1, -3.0 * i + 4});
    const auto p = pca(x, 0.9);
    CHECK(p.components == 1);
    CHECK(p.explained_variance[0] == doctest::Approx(1.0));
    const double s = std::sqrt(14.0);
    CHECK(std::abs(p.loadings[0][0]) == doctest::Approx(1 / s));
    CHECK(p.loadings[0][2] == doctest::Approx(3 / s));  // largest-magnitude entry is positive
}

TEST_CASE("retained variance 1.0 keeps the matrix rank") {
    std::mt19937_64 gen(11);
    const auto a = random_matrix(gen, 10, 3), b = random_matrix(gen, 3, 6);
    std::vector<std::vector<double>> x(10, std::vector<double>(6, 0.0));
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 3; ++k) x[i][j] += a[i][k] * b[k][j];
    CHECK(pca(x, 1.0).components == 3);
    CHECK(pca(random_matrix(gen, 10, 6), 1.0).components == 6);
    CHECK_THROWS_AS(pca(x, 0.0), ParamError);
    CHECK_THROWS_AS(pca(x, 1.5), ParamError);
}

TEST_CASE("pca matches a Jacobi eigensolver oracle") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 10, d = 6;
        const auto x = random_matrix(gen, n, d);
        std::vector<double> mean(d, 0.0);
        for (const auto& row : x)
            for (std::size_t j = 0; j < d; ++j) mean[j] += row[j] / n;
        std::vector<double> cov(d * d, 0.0);
        for (const auto& row : x)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) cov[i * d + j] += (row[i] - mean[i]) * (row[j] - mean[j]) / (n - 1);
        std::vector<double> vecs;
        const auto evals = oracle::jacobi_eigen(cov, d, vecs);

        const auto p = pca(x, 0.8);
        REQUIRE(p.eigenvalues.size() == d);
        for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(p.eigenvalues[i] - evals[i]) < 1e-8);

        // Orthonormal loadings.
        for (std::size_t a = 0; a < p.components; ++a)
            for (std::size_t b = 0; b < p.components; ++b) {
                double dot = 0.0;
                for (std::size_t j = 0; j < d; ++j) dot += p.loadings[a][j] * p.loadings[b][j];
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-9);
            }

        // Reconstruction error with k components equals the discarded variance.
        double err = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < d; ++j) {
                double rec = 0.0;
                for (std::size_t c = 0; c < p.components; ++c) rec += p.projected[r][c] * p.loadings[c][j];
                err += std::pow(x[r][j] - mean[j] - rec, 2);
            }
        double discarded = 0.0;
        for (std::size_t i = p.components; i < d; ++i) discarded += evals[i] * (n - 1);
        CHECK(std::abs(err - discarded) < 1e-8);

        // Explained variance: non-negative, non-increasing, sum <= 1.
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(p.explained_variance[i] >= 0.0);
            if (i) CHECK(p.explained_variance[i] <= p.explained_variance[i - 1] + 1e-15);
            sum += p.explained_variance[i];
        }
        CHECK(sum <= 1.0 + 1e-9);
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < p.components; ++i) cum += p.explained_variance[i];
        CHECK(cum < 0.8);
        CHECK(cum + p.explained_variance[p.components - 1] >= 0.8 - 1e-9);
    }
}

TEST_CASE("linkage parsing") {
    CHECK(parse_linkage("complete") == Linkage::Complete);
    CHECK(to_string(Linkage::Single) == "single");
    CHECK_THROWS_AS(parse_linkage("ward"), ParamError);
}

TEST_CASE("three points at 0, 1, 10") {
    for (auto lk : {Linkage::Average, Linkage::Complete, Linkage::Single}) {
        const auto t = hierarchical_cluster({{0.0}, {1.0}, {10.0}}, {"a", "b", "c"}, lk);
        REQUIRE(t.merges.size() == 2);
        CHECK(t.merges[0].a == 0);
        CHECK(t.merges[0].b == 1);
        CHECK(t.merges[0].height == doctest::Approx(1.0));
        CHECK(t.merges[1].size == 3);
    }
    const auto avg = hierarchical_cluster({{0.0}, {1.0}, {10.0}}, {"a", "b", "c"});
    CHECK(avg.merges[1].height == doctest::Approx(9.5));
    const auto cmp = hierarchical_cluster({{0.0}, {1.0}, {10.0}}, {"a", "b", "c"}, Linkage::Complete);
    CHECK(cmp.merges[1].height == doctest::Approx(10.0));
}

TEST_CASE("identical rows merge at height 0") {
    const auto t = hierarchical_cluster({{1.0, 2.0}, {5.0, 5.0}, {1.0, 2.0}}, {"x", "y", "z"});
    CHECK(t.merges[0].height == 0.0);
    CHECK(t.merges[0].a == 0);
    CHECK(t.merges[0].b == 2);
}

TEST_CASE("equal distances break ties by label") {
    // Unit square: four equal nearest-neighbour pairs.
    const std::vector<std::vector<double>> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto t = hierarchical_cluster(sq, {"d", "c", "b", "a"});
    // Smallest label pair among the tied edges (d-c, c-b, b-a, a-d) is (a, b).
    CHECK(t.labels[t.merges[0].a] == "a");
    CHECK(t.labels[t.merges[0].b] == "b");
}

TEST_CASE("three separated blobs are recovered at the largest gap") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<std::vector<double>> centers = {{0, 0, 0, 0}, {10, 0, 0, 0}, {5, 8.66, 0, 0}};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> pts;
        std::vector<std::size_t> truth;
        for (std::size_t i = 0; i < 12; ++i) {
            const std::size_t b = i % 3;
            // Points inside a ball of radius 0.5: intra distance <= 1, inter >= ~9.
            std::vector<double> off(4);
            double norm;
            do {
                for (auto& v : off) v = u(gen);
                norm = std::sqrt(std::inner_product(off.begin(), off.end(), off.begin(), 0.0));
            } while (norm > 1.0);
            std::vector<double> p = centers[b];
            for (std::size_t k = 0; k < 4; ++k) p[k] += 0.5 * off[k];
            pts.push_back(p);
            truth.push_back(b);
        }
        for (auto lk : {Linkage::Average, Linkage::Complete, Linkage::Single}) {
            const auto t = hierarchical_cluster(pts, names(12), lk);
            const auto c = cut_largest_gap(t);
            // Same partition: cluster ids follow first appearance, as do truth ids.
            CHECK(c == truth);
        }
    }
}

TEST_CASE("clustering structure: n-1 merges, monotone, permutation invariant") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 9;
        auto pts = random_matrix(gen, n, 3);
        // Snap to a coarse grid so exact distance ties occur.
        for (auto& p : pts)
            for (auto& v : p) v = std::round(v);
        const auto labels = names(n);
        for (auto lk : {Linkage::Average, Linkage::Complete, Linkage::Single}) {
            const auto t = hierarchical_cluster(pts, labels, lk);
            REQUIRE(t.merges.size() == n - 1);
            CHECK(t.merges.back().size == n);
            for (std::size_t i = 1; i < t.merges.size(); ++i) CHECK(t.merges[i].height >= t.merges[i - 1].height - 1e-12);

            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), gen);
            std::vector<std::vector<double>> pp;
            std::vector<std::string> pl;
            for (auto i : perm) {
                pp.push_back(pts[i]);
                pl.push_back(labels[i]);
            }
            CHECK(canonical(hierarchical_cluster(pp, pl, lk)) == canonical(t));

            auto order = dendrogram_order(t);
            std::sort(order.begin(), order.end());
            for (std::size_t i = 0; i < n; ++i) CHECK(order[i] == i);
        }
    }
}

TEST_CASE("cut_clusters extremes") {
    const auto t = hierarchical_cluster({{0.0}, {1.0}, {10.0}, {11.0}}, names(4));
    CHECK(cut_clusters(t, 1) == std::vector<std::size_t>{0, 0, 0, 0});
    CHECK(cut_clusters(t, 4) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(cut_clusters(t, 2) == std::vector<std::size_t>{0, 0, 1, 1});
    CHECK_THROWS_AS(cut_clusters(t, 0), ParamError);
    CHECK_THROWS_AS(cut_clusters(t, 5), ParamError);
    CHECK_THROWS_AS(hierarchical_cluster({{0.0}}, {"a"}), ParamError);
}

TEST_CASE("csv escaping follows RFC 4180") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("analysis reports are deterministic") {
    std::vector<harness::RunResult> rs = {
        make_run(MotifId::Sort, 0.9, 100, l1(0.4, 0.1, 0.2, 0.3)),
        make_run(MotifId::Grep, 0.5, 300, l1(0.3, 0.1, 0.3, 0.3)),
        make_run(MotifId::MatMul, 0.7, 10, l1(0.2, 0.05, 0.15, 0.6)),
        make_run(MotifId::Conv2D, 0.8, 12, l1(0.25, 0.05, 0.1, 0.6)),
    };
    const auto a = analyze_results(rs), b = analyze_results(rs);
    REQUIRE(a.tree);
    CHECK(a.tree->leaves() == 4);
    CHECK(report_json(a) == report_json(b));
    CHECK(matrix_csv(a.matrix) == matrix_csv(b.matrix));
    const auto j = nlohmann::json::parse(report_json(a));
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["tree"]["merges"].size() == 3);

    const auto svg = dendrogram_svg(*a.tree);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    for (const auto& l : a.matrix.row_labels) CHECK(svg.find(">" + l + "<") != std::string::npos);

    const auto one = analyze_results({rs[0]});
    CHECK(!one.tree);
    REQUIRE(one.notices.size() == 1);
    CHECK(one.notices[0].find("at least 2") != std::string::npos);
    CHECK_THROWS_AS(analyze_results({}), ParamError);
}

TEST_CASE("breakdown bars: one run fills the full height") {
    const auto svg = breakdown_bars_svg({make_run(MotifId::Sort, 0.9, 100, l1(0.4, 0.1, 0.2, 0.3))});
    std::regex seg("<rect x=\"50.00\" y=\"[0-9.]+\" width=\"36.00\" height=\"([0-9.]+)\" fill=\"#");
    double total = 0.0;
    int count = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), seg); it != std::sregex_iterator(); ++it) {
        total += std::stod((*it)[1]);
        ++count;
    }
    CHECK(count == 4);
    CHECK(total == doctest::Approx(240.0).epsilon(1e-3));

    const auto empty = breakdown_bars_svg({make_run(MotifId::Sort, 0.9, 100)});
    CHECK(empty.find("stroke-dasharray") != std::string::npos);
    CHECK_THROWS_AS(breakdown_bars_svg({}), ParamError);
}

TEST_CASE("io bars normalize to the baseline") {
    auto base = make_run(MotifId::MatMul, 0.9, 100);
    auto big = make_run(MotifId::MatMul, 0.9, 400, std::nullopt, "large");
    const auto r = io_ratios({base, big}, 0);
    REQUIRE(r.size() == 2);
    CHECK(*r[0].ratios[0] == 1.0);
    CHECK(*r[1].ratios[0] == doctest::Approx(4.0));
    CHECK(*r[1].ratios[1] == 1.0);  // 0 / 0 treated as unchanged
    big.system_samples[0].disk_write_bw = 50.0;
    CHECK(!io_ratios({base, big}, 0)[1].ratios[1]);  // nonzero over a zero baseline
    CHECK_THROWS_AS(io_ratios({base}, 3), ParamError);
    CHECK_THROWS_AS(io_bars_svg({}), ParamError);
    CHECK(io_bars_svg({base, big}).find("(baseline)") != std::string::npos);
}
