#include "doctest.h"
#include "tmpdir.hpp"

#include "motifbench/error.hpp"
#include "motifbench/harness.hpp"
#include "motifbench/parallel.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

using namespace motifbench;
using namespace motifbench::harness;
using namespace std::chrono_literals;

namespace {

void write(const std::filesystem::path& p, const std::string& s) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << s;
}

RunConfig quick(unsigned reps = 1) {
    RunConfig c;
    c.repetitions = reps;
    c.warmup_runs = 0;
    c.sample_interval = 100ms;
    return c;
}

RunOptions options(const TempDir& dir) {
    RunOptions o;
    o.data_dir = dir / "data";
    o.results_dir = dir / "results";
    return o;
}

DataSpec tiny(MotifId m) {
    DataSpec s = default_spec(m, SizeClass::Custom);
    s.custom.text_bytes = 64 * 1024;
    s.custom.graph_scale = 8;
    s.custom.rows = s.custom.cols = 32;
    s.custom.dim = 8;
    s.custom.channels = 4;
    s.custom.batch = 2;
    return s;
}

int proc_cpu_count() {
    std::ifstream in("/proc/stat");
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        if (line.size() > 3 && line.compare(0, 3, "cpu") == 0 && std::isdigit(static_cast<unsigned char>(line[3]))) ++n;
    }
    return n;
}

const char* kStat = "cpu  100 5 50 800 20 3 2 0 0 0\ncpu0 100 5 50 800 20 3 2 0 0 0\nintr 1 2 3\n";
const char* kDisk =
    "   7       0 loop0 9 0 900 0 9 0 900 0 0 0 0\n"
    "   8       0 sda 10 0 100 0 5 0 40 0 0 0 0\n"
    "   8       1 sda1 10 0 100 0 5 0 40 0 0 0 0\n"
    " 259       0 nvme0n1 1 0 8 0 1 0 16 0 0 0 0\n"
    " 259       1 nvme0n1p1 1 0 8 0 1 0 16 0 0 0 0\n"
    "   1       0 ram0 1 0 64 0 1 0 64 0 0 0 0\n";
const char* kNet =
    "Inter-|   Receive                                                |  Transmit\n"
    " face |bytes    packets errs drop fifo frame compressed multicast|bytes    packets errs drop fifo colls carrier compressed\n"
    "    lo: 5000 1 0 0 0 0 0 0 5000 1 0 0 0 0 0 0\n"
    "  eth0: 1000 1 0 0 0 0 0 0 300 1 0 0 0 0 0 0\n"
    "  eth1: 24 1 0 0 0 0 0 0 0 1 0 0 0 0 0 0\n";
const char* kSelf = "4242 (odd) name)) S 1 4242 4242 0 -1 4194560 120 0 7 0 1 1 0 0 20 0 1 0 100 1000 10\n";

}  // namespace

TEST_CASE("run config validation") {
    RunConfig c;
    CHECK(c.repetitions == 3);
    CHECK(c.warmup_runs == 1);
    CHECK(c.sample_interval == 1000ms);
    CHECK_NOTHROW(c.validate());
    c.repetitions = 0;
    CHECK_THROWS_AS(c.validate(), ParamError);
    c.repetitions = 1;
    c.sample_interval = 99ms;
    CHECK_THROWS_AS(c.validate(), ParamError);
    c.sample_interval = 100ms;
    c.threads = 0;
    CHECK_THROWS_AS(c.validate(), ParamError);
}

TEST_CASE("proc parsers") {
    ProcSnapshot s;
    parse_proc_stat(kStat, s);
    REQUIRE(s.cpu_total);
    CHECK(*s.cpu_busy == 160);
    CHECK(*s.cpu_iowait == 20);
    CHECK(*s.cpu_total == 980);

    parse_diskstats(kDisk, s);
    // sda + nvme0n1 only; loop, ram and partitions are skipped.
    CHECK(*s.disk_read_bytes == (100 + 8) * 512);
    CHECK(*s.disk_write_bytes == (40 + 16) * 512);

    parse_net_dev(kNet, s);
    CHECK(*s.net_rx_bytes == 1024);
    CHECK(*s.net_tx_bytes == 300);

    parse_self_stat(kSelf, s);
    CHECK(*s.major_faults == 7);
}

TEST_CASE("rates between snapshots") {
    ProcSnapshot a, b;
    a.cpu_busy = 100;
    a.cpu_iowait = 10;
    a.cpu_total = 1000;
    b.cpu_busy = 160;
    b.cpu_iowait = 30;
    b.cpu_total = 1100;
    a.disk_read_bytes = 0;
    b.disk_read_bytes = 4096;
    a.net_rx_bytes = 500;
    b.net_rx_bytes = 100;  // counter reset
    a.major_faults = 1;
    b.major_faults = 3;
    const auto s = sample_between(a, b, 2.0, 2.0);
    CHECK(*s.cpu_utilization == doctest::Approx(0.6));
    CHECK(*s.io_wait == doctest::Approx(0.2));
    CHECK(*s.cpu_utilization + *s.io_wait <= 1.0 + 1e-12);
    CHECK(*s.disk_read_bw == 2048.0);
    CHECK(!s.disk_write_bw);
    CHECK(*s.net_rx_bw == 0.0);
    CHECK(*s.major_page_faults_per_s == 1.0);

    const auto empty = sample_between(ProcSnapshot{}, ProcSnapshot{}, 1.0, 1.0);
    CHECK(!empty.cpu_utilization);
    CHECK(!empty.net_tx_bw);
}

TEST_CASE("sampler on an injected proc root") {
    TempDir dir;
    write(dir / "stat", kStat);
    write(dir / "diskstats", kDisk);
    write(dir / "net/dev", kNet);
    write(dir / "self/stat", kSelf);
    SystemSampler sampler(make_proc_source(dir.path()), 100ms);
    CHECK(!sampler.degraded());
    CHECK(sampler.source_name() == "proc");
    sampler.start();
    std::this_thread::sleep_for(350ms);
    const auto samples = sampler.stop();
    REQUIRE(samples.size() >= 3);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i) CHECK(samples[i].timestamp > samples[i - 1].timestamp);
        // Static files: no deltas at all.
        CHECK(!samples[i].cpu_utilization);
        CHECK(*samples[i].disk_read_bw == 0.0);
        CHECK(*samples[i].net_rx_bw == 0.0);
        CHECK(*samples[i].major_page_faults_per_s == 0.0);
    }
}

TEST_CASE("null source yields timestamp-only samples") {
    TempDir dir;
    SystemSampler sampler(make_proc_source(dir / "missing"), 100ms);
    CHECK(sampler.degraded());
    CHECK(sampler.source_name() == "null");
    sampler.start();
    std::this_thread::sleep_for(120ms);
    const auto samples = sampler.stop();
    REQUIRE(!samples.empty());
    for (const auto& s : samples) {
        CHECK(!s.cpu_utilization);
        CHECK(!s.io_wait);
        CHECK(!s.disk_read_bw);
        CHECK(!s.disk_write_bw);
        CHECK(!s.net_rx_bw);
        CHECK(!s.net_tx_bw);
        CHECK(!s.major_page_faults_per_s);
    }
}

TEST_CASE("sampler timing: 2 s at 500 ms gives at least 3 samples") {
    SystemSampler sampler(make_proc_source(), 500ms);
    sampler.start();
    std::this_thread::sleep_for(2000ms);
    const auto samples = sampler.stop();
    CHECK(samples.size() >= 3);
    for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].timestamp > samples[i - 1].timestamp);
    for (const auto& s : samples) {
        if (s.cpu_utilization) {
            CHECK(*s.cpu_utilization >= 0.0);
            CHECK(*s.io_wait >= 0.0);
            CHECK(*s.cpu_utilization + *s.io_wait <= 1.0 + 1e-9);
        }
        if (s.disk_read_bw) CHECK(*s.disk_read_bw >= 0.0);
        if (s.net_rx_bw) CHECK(*s.net_rx_bw >= 0.0);
    }
}

TEST_CASE("busy spin utilization approaches threads / cores") {
    const int cores = proc_cpu_count();
    REQUIRE(cores > 0);
    SystemSampler sampler(make_proc_source(), 500ms);
    sampler.start();
    busy_spin(1, 1500ms);
    const auto samples = sampler.stop();
    double sum = 0.0;
    int n = 0;
    for (const auto& s : samples) {
        // Skip the short trailing interval; jiffy granularity makes it noisy.
        if (s.cpu_utilization && s.timestamp <= 1.5 + 1e-3) {
            sum += *s.cpu_utilization;
            ++n;
        }
    }
    REQUIRE(n > 0);
    const double expected = std::min(1.0, 1.0 / cores);
    MESSAGE("mean utilization " << sum / n << " expected " << expected);
    CHECK(sum / n == doctest::Approx(expected).epsilon(0.2));
}

TEST_CASE("data spec json round trip") {
    DataSpec s = default_spec(MotifId::MatMul, SizeClass::Custom);
    s.custom.rows = 12;
    s.custom.cols = 34;
    s.pattern.sparsity = 0.25;
    s.pattern.value_kind = ValueKind::Int64;
    s.seed = 99;
    CHECK(spec_from_json(spec_to_json(s)) == s);
    CHECK_THROWS_AS(spec_from_json("{"), ParamError);
}

TEST_CASE("binding rejects mismatched sources and bad sizes") {
    DataSpec s = default_spec(MotifId::Bfs);
    s.source = Source::Text;
    CHECK_THROWS_AS(check_binding(MotifId::Bfs, s), ParamError);
    DataSpec seq = default_spec(MotifId::Sort);
    seq.source = Source::Sequence;
    CHECK_NOTHROW(check_binding(MotifId::Sort, seq));
    DataSpec fft = default_spec(MotifId::Fft, SizeClass::Custom);
    fft.custom.rows = fft.custom.cols = 1000;
    CHECK_THROWS_WITH_AS(check_binding(MotifId::Fft, fft), doctest::Contains("power-of-two"), ParamError);
}

TEST_CASE("dataset cache: keyed by spec, regenerated only on miss") {
    TempDir dir;
    DatasetCache cache(dir / "data");
    const DataSpec s = tiny(MotifId::MatMul);
    const auto first = cache.materialize(MotifId::MatMul, s);
    CHECK(first.generated);
    REQUIRE(first.files.size() == 2);
    const auto t0 = std::filesystem::last_write_time(first.files[0]);
    const auto again = cache.materialize(MotifId::MatMul, s);
    CHECK(!again.generated);
    CHECK(again.files == first.files);
    CHECK(std::filesystem::last_write_time(first.files[0]) == t0);

    DataSpec other = s;
    other.seed = 2;
    CHECK(spec_key(MotifId::MatMul, other) != spec_key(MotifId::MatMul, s));
    // Text motifs share one corpus per spec.
    CHECK(spec_key(MotifId::Sort, tiny(MotifId::Sort)) == spec_key(MotifId::Grep, tiny(MotifId::Grep)));
    // Graphs ignore sparsity.
    DataSpec g = tiny(MotifId::Bfs);
    DataSpec g2 = g;
    g2.pattern.sparsity = 0.5;
    CHECK(spec_key(MotifId::Bfs, g) == spec_key(MotifId::Bfs, g2));
}

TEST_CASE("every motif binds and runs on a tiny dataset") {
    TempDir dir;
    const auto opts = [&] {
        auto o = options(dir);
        o.persist = false;
        return o;
    }();
    for (MotifId m : kAllMotifs) {
        CAPTURE(motif_name(m));
        const auto r = run_motif(m, tiny(m), quick(2), opts);
        CHECK(r.wall_time.size() == 2);
        CHECK(r.checksum_stable);
        CHECK(!r.system_samples.empty());
        CHECK(r.timing_only);
    }
}

TEST_CASE("run_motif structural contract and replay") {
    TempDir dir;
    const auto opts = options(dir);
    const DataSpec spec = default_spec(MotifId::WordCount, SizeClass::Small, SizeProfile::Desk);
    const auto a = run_motif(MotifId::WordCount, spec, quick(1), opts);
    CHECK(a.wall_time.size() == 1);
    CHECK(a.system_samples.size() >= 1);
    CHECK(a.dataset_generated);
    CHECK(a.system_source == "proc");
    const auto b = run_motif(MotifId::WordCount, spec, quick(1), opts);
    CHECK(!b.dataset_generated);
    CHECK(a.checksum == b.checksum);

    // Persisted and reloadable; replay from the record reproduces the checksum.
    const auto file = opts.results_dir / (a.run_id + ".jsonl");
    REQUIRE(std::filesystem::exists(file));
    const auto loaded = load_results(file);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].run_id == a.run_id);
    CHECK(loaded[0].motif == MotifId::WordCount);
    CHECK(loaded[0].data_spec == spec);
    CHECK(loaded[0].config == a.config);
    CHECK(loaded[0].checksum == a.checksum);
    REQUIRE(a.process);
    REQUIRE(loaded[0].process);
    CHECK(loaded[0].process->user_time == a.process->user_time);
    CHECK(loaded[0].process->minor_faults == a.process->minor_faults);
    auto ro = opts;
    ro.persist = false;
    ro.params = loaded[0].params;
    CHECK(run_motif(loaded[0].motif, loaded[0].data_spec, loaded[0].config, ro).checksum == a.checksum);

    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    CHECK(line.find("\"schema\":1") != std::string::npos);
}

TEST_CASE("sort repetitions report a coefficient of variation") {
    TempDir dir;
    auto opts = options(dir);
    opts.persist = false;
    DataSpec spec = default_spec(MotifId::Sort, SizeClass::Custom);
    spec.custom.text_bytes = 10ULL << 20;
    const auto r = run_motif(MotifId::Sort, spec, quick(3), opts);
    CHECK(r.wall_time.size() == 3);
    CHECK(r.wall_time_cv() >= 0.0);
    CHECK(std::isfinite(r.wall_time_cv()));
}

TEST_CASE("text and sequence sources give the same sort output") {
    TempDir dir;
    auto opts = options(dir);
    opts.persist = false;
    DataSpec text = default_spec(MotifId::Sort, SizeClass::Small, SizeProfile::Desk);
    DataSpec seq = text;
    seq.source = Source::Sequence;
    seq.logical_type = LogicalType::SemiStructured;
    const auto a = run_motif(MotifId::Sort, text, quick(1), opts);
    const auto b = run_motif(MotifId::Sort, seq, quick(1), opts);
    CHECK(a.checksum == b.checksum);
}

TEST_CASE("run_motif errors and degradation") {
    TempDir dir;
    auto opts = options(dir);
    opts.persist = false;
    DataSpec fft = default_spec(MotifId::Fft, SizeClass::Custom);
    fft.custom.rows = fft.custom.cols = 1000;
    CHECK_THROWS_WITH_AS(run_motif(MotifId::Fft, fft, quick(), opts), doctest::Contains("power-of-two"), ParamError);

    RunConfig many = quick();
    many.threads = hardware_threads() + 1;
    CHECK_THROWS_AS(run_motif(MotifId::Relu, tiny(MotifId::Relu), many, opts), ParamError);

    // Unreadable metrics source still runs, flagged.
    opts.proc_root = dir / "no-proc";
    const auto r = run_motif(MotifId::Relu, tiny(MotifId::Relu), quick(), opts);
    CHECK(r.system_source == "null");
    CHECK(!r.warnings.empty());
    CHECK(r.timing_only);
}

TEST_CASE("synthetic counters attach readings to the result") {
    TempDir dir;
    write(dir / "mem.frac",
          "level1.retiring = 0.2\nlevel1.bad_speculation = 0.05\nlevel1.frontend_bound = 0.1\n"
          "level1.backend_bound = 0.65\nipc = 0.8\nmlp = 5.27\n");
    auto opts = options(dir);
    opts.counters = topdown::parse_counter_mode("synthetic:" + (dir / "mem.frac").string());
    const auto r = run_motif(MotifId::MatMul, tiny(MotifId::MatMul), quick(), opts);
    REQUIRE(r.counters);
    CHECK(!r.timing_only);
    const auto tree = topdown::analyze(*r.counters);
    CHECK(*tree.level1.backend_bound == doctest::Approx(0.65).epsilon(1e-9));

    const auto loaded = load_results(opts.results_dir / (r.run_id + ".jsonl"));
    REQUIRE(loaded.size() == 1);
    REQUIRE(loaded[0].counters);
    CHECK(*topdown::exec_metrics(*loaded[0].counters).mlp == doctest::Approx(5.27));
}

TEST_CASE("single-stage pipeline is 100%") {
    TempDir dir;
    Pipeline p{"one", {{"only", MotifId::MatMul, tiny(MotifId::MatMul), {}}}};
    const auto r = run_pipeline(p, quick(), dir / "data");
    REQUIRE(r.stages.size() == 1);
    CHECK(r.stages[0].percent_of_total == doctest::Approx(100.0));
}

TEST_CASE("conv -> relu -> maxpool chain on a (56*56,256) input") {
    TempDir dir;
    DataSpec in = default_spec(MotifId::Conv2D, SizeClass::Custom);
    in.custom.dim = 56;
    in.custom.channels = 256;
    in.custom.batch = 1;
    KernelParams conv;
    conv.conv_out_channels = 16;
    Pipeline p{"chain",
               {{"conv", MotifId::Conv2D, in, conv}, {"relu", MotifId::Relu, std::nullopt, {}},
                {"pool", MotifId::MaxPool, std::nullopt, {}}}};
    const auto r = run_pipeline(p, quick(), dir / "data");
    REQUIRE(r.stages.size() == 3);
    double sum = 0.0;
    for (const auto& s : r.stages) {
        CHECK(s.percent_of_total >= 0.0);
        CHECK(s.percent_of_total <= 100.0);
        sum += s.percent_of_total;
    }
    CHECK(sum == doctest::Approx(100.0).epsilon(1e-3));
    CHECK(r.stages[2].output_shape == "tensor 1x28x28x16");
    CHECK(pipeline_result_json(r).find("\"percent_by_class\"") != std::string::npos);
}

TEST_CASE("shape-incompatible chaining names both stages") {
    TempDir dir;
    KernelParams fc;
    fc.fc_out_features = 8;
    Pipeline p{"bad",
               {{"dense", MotifId::FullyConnected, tiny(MotifId::FullyConnected), fc},
                {"pool", MotifId::MaxPool, std::nullopt, {}}}};
    try {
        run_pipeline(p, quick(), dir / "data");
        FAIL("expected a shape error");
    } catch (const ParamError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("'pool'") != std::string::npos);
        CHECK(msg.find("'dense'") != std::string::npos);
    }
    // Nothing ran, so nothing was generated.
    CHECK(!std::filesystem::exists(dir / "data"));

    Pipeline text{"text", {{"md5", MotifId::Md5, tiny(MotifId::Md5), {}}, {"relu", MotifId::Relu, std::nullopt, {}}}};
    CHECK_THROWS_WITH_AS(run_pipeline(text, quick(), dir / "data"), doctest::Contains("'md5'"), ParamError);
}

TEST_CASE("plan parsing") {
    const auto plan = parse_plan(
        "# comment\nname = demo\nmotifs = fft, sort\nsizes = small, custom\nsparsity = 0.1, 0.9\n"
        "rows = 64\ncols = 64\ndisk_budget = 2 MiB\nrepetitions = 2\n");
    CHECK(plan.name == "demo");
    CHECK(plan.axes.motifs == std::vector{MotifId::Fft, MotifId::Sort});
    CHECK(plan.cell_count() == 8);
    CHECK(plan.disk_budget == 2u << 20);
    CHECK(plan.config.repetitions == 2);
    CHECK(plan.custom.rows == 64);
    CHECK(expand_plan(plan).size() == 8);

    CHECK_THROWS_WITH_AS(parse_plan("motifs = sort\nbogus = 1\n", "p"), doctest::Contains("p:2"), ParamError);
    CHECK_THROWS_WITH_AS(parse_plan("motifs = quicksort\n", "p"), doctest::Contains("p:1"), ParamError);
    CHECK_THROWS_AS(parse_plan("name = x\n"), ParamError);
    CHECK_THROWS_AS(parse_plan("motifs = sort\nsparsity = 1.5\n"), ParamError);
    CHECK_THROWS_AS(parse_plan("motifs = sort\ninterval_ms = 10\n"), ParamError);
    CHECK_THROWS_AS(parse_plan("motifs = sort\nmotifs = fft\n"), ParamError);
}

TEST_CASE("shipped sweep plans") {
    const std::filesystem::path root = MOTIFBENCH_SOURCE_DIR;
    const auto size = load_plan(root / "sweeps/size.plan");
    CHECK(size.cell_count() == 12);
    const auto sparsity = load_plan(root / "sweeps/sparsity.plan");
    CHECK(sparsity.cell_count() == 2);
    CHECK(sparsity.axes.sparsity == std::vector{0.1, 0.9});
    const auto source = load_plan(root / "sweeps/source.plan");
    CHECK(source.cell_count() == 2);
    for (const auto& c : expand_plan(source)) CHECK(c.axes.count("source") == 1);
}

TEST_CASE("experiment matrix records skipped and failed cells and continues") {
    TempDir dir;
    auto opts = options(dir);
    ExperimentPlan plan = parse_plan(
        "name = t\nmotifs = fft, bfs\nsize = custom\nrows = 64\ncols = 64\ngraph_scale = 8\n"
        "sparsity = 0.1, 0.9\nrepetitions = 1\nwarmup = 0\ninterval_ms = 100\n");
    const auto rs = run_experiment_matrix(plan, opts);
    CHECK(rs.cells.size() == 4);
    CHECK(rs.count(CellStatus::Ok) == 4);
    std::set<std::string> sparsities;
    for (const auto& c : rs.cells) {
        if (c.cell.motif == MotifId::Fft) sparsities.insert(c.cell.axes.at("sparsity"));
        CHECK(c.result->axes == c.cell.axes);
    }
    CHECK(sparsities == std::set<std::string>{"0.1", "0.9"});
    CHECK(load_results(rs.file).size() == 4);

    plan.disk_budget = 1024;  // smaller than any dataset
    const auto skipped = run_experiment_matrix(plan, opts);
    CHECK(skipped.count(CellStatus::Skipped) == 4);
    CHECK(load_results(skipped.file).empty());

    ExperimentPlan mixed = parse_plan("motifs = bfs, relu\nsources = graph\ngraph_scale = 8\nsize = custom\n"
                                      "repetitions = 1\nwarmup = 0\ninterval_ms = 100\n");
    const auto m = run_experiment_matrix(mixed, opts);
    CHECK(m.count(CellStatus::Ok) == 1);
    CHECK(m.count(CellStatus::Failed) == 1);
}

TEST_CASE("pipeline config parsing") {
    const auto p = parse_pipeline(
        "name = demo\nprofile = desk\n\n[stage conv1]\nmotif = conv2d\nsize = small\nout_channels = 8\n\n"
        "[stage act]\nmotif = relu\n\n[stage fc]\nmotif = fc\nout_features = 10\n");
    CHECK(p.name == "demo");
    REQUIRE(p.stages.size() == 3);
    CHECK(p.stages[0].input);
    CHECK(p.stages[0].input->profile == SizeProfile::Desk);
    CHECK(p.stages[0].params.conv_out_channels == 8);
    CHECK(!p.stages[1].input);
    CHECK(p.stages[2].motif == MotifId::FullyConnected);
    CHECK(p.stages[2].params.fc_out_features == 10);

    CHECK_THROWS_WITH_AS(parse_pipeline("[stage a]\nsize = small\n", "c"), doctest::Contains("no motif"), ParamError);
    CHECK_THROWS_AS(parse_pipeline("[stage a]\nmotif = relu\n[stage a]\nmotif = relu\n"), ParamError);
    CHECK_THROWS_AS(parse_pipeline("name = x\n"), ParamError);
    CHECK_THROWS_AS(parse_pipeline("[layer a]\nmotif = relu\n"), ParamError);
}
