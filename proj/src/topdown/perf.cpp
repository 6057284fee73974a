#include "motifbench/topdown.hpp"

#include "motifbench/error.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <thread>

#include <linux/perf_event.h>
#include <sys/ioctl.h>
#include <sys/syscall.h>
#include <unistd.h>

namespace motifbench::topdown {

namespace {

int paranoid_level() {
    std::ifstream in("/proc/sys/kernel/perf_event_paranoid");
    int v = -100;
    if (in >> v) return v;
    return -100;
}

std::string open_failure(const std::string& event, int err) {
    std::string msg = "perf_event_open failed for " + event + ": " + std::strerror(err);
    if (err == EACCES || err == EPERM) {
        const int lvl = paranoid_level();
        msg += " (kernel.perf_event_paranoid=" + (lvl == -100 ? std::string("?") : std::to_string(lvl)) +
               "). Lower it with 'sysctl -w kernel.perf_event_paranoid=1', grant CAP_PERFMON, "
               "or run with --counters=null";
    } else if (err == ENOENT || err == EINVAL || err == EOPNOTSUPP) {
        msg += " (event encoding not supported by this PMU; check the counter definition file)";
    } else if (err == ENOSYS) {
        msg += " (perf events unavailable in this kernel or container)";
    }
    return msg;
}

class FdGuard {
public:
    FdGuard() = default;
    explicit FdGuard(int fd) : fd_(fd) {}
    FdGuard(FdGuard&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
    FdGuard& operator=(FdGuard&& o) noexcept {
        if (this != &o) {
            reset();
            fd_ = std::exchange(o.fd_, -1);
        }
        return *this;
    }
    ~FdGuard() { reset(); }
    int get() const noexcept { return fd_; }
    void reset() noexcept {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_ = -1;
};

struct OpenEvent {
    std::string name;
    EventEncoding encoding;
    FdGuard fd;
    bool leader = false;
};

class PerfSession final : public CounterSession {
public:
    PerfSession(const CounterDefinition& def, pid_t pid) : width_(def.pipeline_width) {
        for (const auto& group : plan_groups(formula_event_sets(), def)) {
            int leader_fd = -1;
            for (const auto& name : group) {
                const auto& enc = def.events.find(name)->second;
                perf_event_attr attr{};
                attr.size = sizeof(attr);
                attr.type = PERF_TYPE_RAW;
                attr.config = enc.raw_config();
                attr.disabled = leader_fd < 0 ? 1 : 0;
                attr.inherit = 1;
                attr.exclude_kernel = 1;
                attr.exclude_hv = 1;
                attr.read_format = PERF_FORMAT_TOTAL_TIME_ENABLED | PERF_FORMAT_TOTAL_TIME_RUNNING;
                const long fd = ::syscall(SYS_perf_event_open, &attr, pid, -1, leader_fd, 0UL);
                if (fd < 0) throw CounterError(open_failure(name, errno));
                OpenEvent ev{name, enc, FdGuard(static_cast<int>(fd)), leader_fd < 0};
                if (leader_fd < 0) leader_fd = static_cast<int>(fd);
                events_.push_back(std::move(ev));
            }
        }
        if (events_.empty()) throw CounterError("counter definition '" + def.arch + "' defines none of the needed events");
    }

    Provider provider() const noexcept override { return Provider::PerfEvent; }

    void start() override {
        for (auto& e : events_) {
            if (!e.leader) continue;
            ::ioctl(e.fd.get(), PERF_EVENT_IOC_RESET, PERF_IOC_FLAG_GROUP);
            if (::ioctl(e.fd.get(), PERF_EVENT_IOC_ENABLE, PERF_IOC_FLAG_GROUP) != 0) {
                throw CounterError("failed to enable counter group led by " + e.name + ": " + std::strerror(errno));
            }
        }
    }

    CounterReadings stop() override {
        for (auto& e : events_) {
            if (e.leader) ::ioctl(e.fd.get(), PERF_EVENT_IOC_DISABLE, PERF_IOC_FLAG_GROUP);
        }
        CounterReadings r;
        r.provider = Provider::PerfEvent;
        r.width = width_;
        for (auto& e : events_) {
            std::uint64_t buf[3] = {0, 0, 0};
            if (::read(e.fd.get(), buf, sizeof(buf)) != static_cast<ssize_t>(sizeof(buf))) {
                throw CounterError("short read from counter " + e.name);
            }
            CounterEvent ce;
            ce.name = e.name;
            ce.encoding = e.encoding;
            ce.raw_count = buf[0];
            ce.time_enabled = buf[1];
            ce.time_running = buf[2];
            r.events.emplace(e.name, ce);
        }
        if (auto cycles = r.get(ev::kCycles)) r.slots = static_cast<double>(width_) * *cycles;
        return r;
    }

private:
    std::uint32_t width_;
    std::vector<OpenEvent> events_;
};

}  // namespace

std::unique_ptr<CounterSession> open_perf_session(const CounterDefinition& def, pid_t pid) {
    return std::make_unique<PerfSession>(def, pid);
}

CounterReadings collect_counters(pid_t pid, const CounterDefinition& def, std::chrono::milliseconds duration) {
    auto s = open_perf_session(def, pid);
    s->start();
    std::this_thread::sleep_for(duration);
    return s->stop();
}

}  // namespace motifbench::topdown
