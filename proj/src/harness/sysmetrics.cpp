#include "motifbench/harness.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace motifbench::harness {

namespace {

std::optional<std::string> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t b = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > b) out.push_back(line.substr(b, i - b));
    }
    return out;
}

std::optional<std::uint64_t> to_u64(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        fn(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
}

bool digits_only(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// sda1 under sda, nvme0n1p2 under nvme0n1, mmcblk0p1 under mmcblk0.
bool is_partition_of(std::string_view part, std::string_view disk) {
    if (part.size() <= disk.size() || part.substr(0, disk.size()) != disk) return false;
    std::string_view rest = part.substr(disk.size());
    if (rest.front() == 'p') rest.remove_prefix(1);
    return digits_only(rest);
}

bool skipped_device(std::string_view name) {
    return name.starts_with("loop") || name.starts_with("ram") || name.starts_with("zram");
}

std::optional<double> rate(const std::optional<std::uint64_t>& a, const std::optional<std::uint64_t>& b,
                           double seconds) {
    if (!a || !b || !(seconds > 0.0)) return std::nullopt;
    // Counters can reset (device hot-unplug); treat as no traffic.
    if (*b < *a) return 0.0;
    return static_cast<double>(*b - *a) / seconds;
}

class ProcSource final : public MetricsSource {
public:
    explicit ProcSource(std::filesystem::path root) : root_(std::move(root)) {
        ok_ = static_cast<bool>(slurp(root_ / "stat"));
    }
    bool available() const noexcept override { return ok_; }
    std::string_view name() const noexcept override { return ok_ ? "proc" : "null"; }

    ProcSnapshot snapshot() override {
        ProcSnapshot s;
        if (!ok_) return s;
        if (auto t = slurp(root_ / "stat")) parse_proc_stat(*t, s);
        if (auto t = slurp(root_ / "diskstats")) parse_diskstats(*t, s);
        if (auto t = slurp(root_ / "net" / "dev")) parse_net_dev(*t, s);
        if (auto t = slurp(root_ / "self" / "stat")) parse_self_stat(*t, s);
        return s;
    }

private:
    std::filesystem::path root_;
    bool ok_ = false;
};

class NullSource final : public MetricsSource {
public:
    bool available() const noexcept override { return false; }
    std::string_view name() const noexcept override { return "null"; }
    ProcSnapshot snapshot() override { return {}; }
};

}  // namespace

void parse_proc_stat(std::string_view text, ProcSnapshot& out) {
    for_each_line(text, [&](std::string_view line) {
        const auto f = fields(line);
        if (f.empty() || f[0] != "cpu") return;
        // user nice system idle iowait irq softirq steal [guest guest_nice]
        std::uint64_t v[8] = {};
        for (std::size_t i = 0; i < 8; ++i) {
            if (i + 1 < f.size()) {
                if (auto x = to_u64(f[i + 1])) v[i] = *x;
            }
        }
        if (f.size() < 5) return;
        const std::uint64_t busy = v[0] + v[1] + v[2] + v[5] + v[6] + v[7];
        out.cpu_busy = busy;
        out.cpu_iowait = v[4];
        out.cpu_total = busy + v[3] + v[4];
    });
}

void parse_diskstats(std::string_view text, ProcSnapshot& out) {
    struct Dev {
        std::string name;
        std::uint64_t rd, wr;
    };
    std::vector<Dev> devs;
    for_each_line(text, [&](std::string_view line) {
        const auto f = fields(line);
        if (f.size() < 10) return;
        const auto rd = to_u64(f[5]);
        const auto wr = to_u64(f[9]);
        if (!rd || !wr) return;
        devs.push_back({std::string(f[2]), *rd, *wr});
    });
    std::uint64_t rd = 0, wr = 0;
    for (const auto& d : devs) {
        if (skipped_device(d.name)) continue;
        const bool partition = std::any_of(devs.begin(), devs.end(), [&](const Dev& o) {
            return &o != &d && is_partition_of(d.name, o.name);
        });
        if (partition) continue;
        rd += d.rd * 512;
        wr += d.wr * 512;
    }
    out.disk_read_bytes = rd;
    out.disk_write_bytes = wr;
}

void parse_net_dev(std::string_view text, ProcSnapshot& out) {
    std::uint64_t rx = 0, tx = 0;
    for_each_line(text, [&](std::string_view line) {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) return;
        const auto iface = fields(line.substr(0, colon));
        if (iface.size() != 1 || iface[0] == "lo") return;
        const auto f = fields(line.substr(colon + 1));
        if (f.size() < 9) return;
        const auto r = to_u64(f[0]);
        const auto t = to_u64(f[8]);
        if (!r || !t) return;
        rx += *r;
        tx += *t;
    });
    // Loopback-only hosts report a defined zero rate.
    out.net_rx_bytes = rx;
    out.net_tx_bytes = tx;
}

void parse_self_stat(std::string_view text, ProcSnapshot& out) {
    // The comm field may contain spaces and parentheses; fields resume after
    // the last ')'. majflt is field 12 overall, the 10th after comm.
    const auto close = text.rfind(')');
    if (close == std::string_view::npos) return;
    const auto f = fields(text.substr(close + 1));
    if (f.size() < 10) return;
    if (auto v = to_u64(f[9])) out.major_faults = *v;
}

SystemSample sample_between(const ProcSnapshot& a, const ProcSnapshot& b, double seconds, double timestamp) {
    SystemSample s;
    s.timestamp = timestamp;
    if (a.cpu_total && b.cpu_total && *b.cpu_total > *a.cpu_total && a.cpu_busy && b.cpu_busy && a.cpu_iowait &&
        b.cpu_iowait) {
        const double total = static_cast<double>(*b.cpu_total - *a.cpu_total);
        const auto delta = [](std::uint64_t x, std::uint64_t y) { return y >= x ? static_cast<double>(y - x) : 0.0; };
        s.cpu_utilization = std::clamp(delta(*a.cpu_busy, *b.cpu_busy) / total, 0.0, 1.0);
        s.io_wait = std::clamp(delta(*a.cpu_iowait, *b.cpu_iowait) / total, 0.0, 1.0 - *s.cpu_utilization);
    }
    s.disk_read_bw = rate(a.disk_read_bytes, b.disk_read_bytes, seconds);
    s.disk_write_bw = rate(a.disk_write_bytes, b.disk_write_bytes, seconds);
    s.net_rx_bw = rate(a.net_rx_bytes, b.net_rx_bytes, seconds);
    s.net_tx_bw = rate(a.net_tx_bytes, b.net_tx_bytes, seconds);
    s.major_page_faults_per_s = rate(a.major_faults, b.major_faults, seconds);
    return s;
}

std::unique_ptr<MetricsSource> make_proc_source(const std::filesystem::path& root) {
    return std::make_unique<ProcSource>(root);
}

std::unique_ptr<MetricsSource> make_null_source() { return std::make_unique<NullSource>(); }

struct SystemSampler::Impl {
    using Clock = std::chrono::steady_clock;

    std::unique_ptr<MetricsSource> source;
    std::chrono::milliseconds interval;
    std::thread worker;
    std::mutex mu;
    std::condition_variable cv;
    bool stopping = false;
    std::vector<SystemSample> samples;
    Clock::time_point t0, last_t;
    ProcSnapshot last;

    void emit(Clock::time_point now) {
        const ProcSnapshot cur = source->snapshot();
        const double dt = std::chrono::duration<double>(now - last_t).count();
        const double ts = std::chrono::duration<double>(now - t0).count();
        samples.push_back(sample_between(last, cur, dt, ts));
        last = cur;
        last_t = now;
    }

    void loop() {
        std::unique_lock<std::mutex> lock(mu);
        auto next = t0 + interval;
        while (!cv.wait_until(lock, next, [&] { return stopping; })) {
            emit(Clock::now());
            next += interval;
        }
    }
};

SystemSampler::SystemSampler(std::unique_ptr<MetricsSource> source, std::chrono::milliseconds interval)
    : impl_(std::make_unique<Impl>()) {
    impl_->source = source ? std::move(source) : make_null_source();
    impl_->interval = interval;
}

SystemSampler::~SystemSampler() {
    if (impl_ && impl_->worker.joinable()) stop();
}

void SystemSampler::start() {
    impl_->samples.clear();
    impl_->stopping = false;
    impl_->t0 = impl_->last_t = Impl::Clock::now();
    impl_->last = impl_->source->snapshot();
    impl_->worker = std::thread([this] { impl_->loop(); });
}

std::vector<SystemSample> SystemSampler::stop() {
    {
        std::lock_guard<std::mutex> lock(impl_->mu);
        impl_->stopping = true;
    }
    impl_->cv.notify_all();
    if (impl_->worker.joinable()) impl_->worker.join();
    const auto now = Impl::Clock::now();
    // Final partial interval, unless it would repeat the last timestamp.
    const double ts = std::chrono::duration<double>(now - impl_->t0).count();
    if (impl_->samples.empty() || ts > impl_->samples.back().timestamp + 1e-3) impl_->emit(now);
    return std::move(impl_->samples);
}

bool SystemSampler::degraded() const noexcept { return !impl_->source->available(); }

std::string_view SystemSampler::source_name() const noexcept { return impl_->source->name(); }

std::uint64_t busy_spin(unsigned threads, std::chrono::milliseconds duration) {
    threads = std::max(1u, threads);
    std::atomic<std::uint64_t> total{0};
    const auto until = std::chrono::steady_clock::now() + duration;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            std::uint64_t n = 0;
            volatile std::uint64_t sink = 0;
            while (std::chrono::steady_clock::now() < until) {
                for (int i = 0; i < 1000; ++i) sink = sink + static_cast<std::uint64_t>(i);
                ++n;
            }
            total += n;
        });
    }
    for (auto& t : pool) t.join();
    return total.load();
}

}  // namespace motifbench::harness
