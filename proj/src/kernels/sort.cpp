#include "motifbench/error.hpp"
#include "motifbench/kernels.hpp"
#include "motifbench/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <queue>
#include <unistd.h>

namespace motifbench::kernels {

namespace {

void parallel_stable_sort(std::vector<std::string>& v, unsigned threads) {
    const std::size_t parts = chunk_count(v.size(), threads);
    if (parts <= 1) {
        std::stable_sort(v.begin(), v.end());
        return;
    }
    std::vector<std::size_t> bounds(parts + 1);
    for (std::size_t i = 0; i <= parts; ++i) bounds[i] = v.size() * i / parts;
    parallel_chunks(parts, threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t p = b; p < e; ++p) {
            std::stable_sort(v.begin() + static_cast<std::ptrdiff_t>(bounds[p]),
                             v.begin() + static_cast<std::ptrdiff_t>(bounds[p + 1]));
        }
    });
    // Pairwise merges keep the left run first on ties, preserving stability.
    for (std::size_t width = 1; width < parts; width *= 2) {
        for (std::size_t p = 0; p + width < parts; p += 2 * width) {
            const auto first = v.begin() + static_cast<std::ptrdiff_t>(bounds[p]);
            const auto mid = v.begin() + static_cast<std::ptrdiff_t>(bounds[p + width]);
            const auto last = v.begin() + static_cast<std::ptrdiff_t>(bounds[std::min(p + 2 * width, parts)]);
            std::inplace_merge(first, mid, last);
        }
    }
}

std::filesystem::path make_spill_dir(const std::filesystem::path& base) {
    static std::atomic<std::uint64_t> counter{0};
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    auto dir = base / ("motifbench-spill-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (!std::filesystem::create_directory(dir, ec) || ec) {
        throw IoError("spill directory '" + base.string() + "' is not writable");
    }
    return dir;
}

struct SpillDir {
    explicit SpillDir(std::filesystem::path p) : path(std::move(p)) {}
    SpillDir(const SpillDir&) = delete;
    SpillDir& operator=(const SpillDir&) = delete;
    ~SpillDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::filesystem::path path;
};

std::filesystem::path write_run(const std::filesystem::path& dir, std::size_t index,
                                const std::vector<std::string>& sorted) {
    auto path = dir / ("run-" + std::to_string(index) + ".seq");
    SequenceWriter w(path);
    for (const auto& r : sorted) w.append({}, r);
    w.close();
    return path;
}

// K-way merge of sorted runs; ties resolve to the lower run index so that
// runs cut from consecutive input ranges merge stably.
template <typename Emit>
void merge_runs(const std::vector<std::filesystem::path>& runs, Emit&& emit) {
    struct Head {
        std::string value;
        std::size_t run;
    };
    auto greater = [](const Head& a, const Head& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.run > b.run;
    };
    std::vector<std::unique_ptr<SequenceReader>> readers;
    std::priority_queue<Head, std::vector<Head>, decltype(greater)> heap(greater);
    SequenceRecord rec;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        readers.push_back(std::make_unique<SequenceReader>(runs[i]));
        if (readers.back()->next(rec)) heap.push({std::move(rec.value), i});
    }
    while (!heap.empty()) {
        Head top = heap.top();
        heap.pop();
        emit(std::move(top.value));
        if (readers[top.run]->next(rec)) heap.push({std::move(rec.value), top.run});
    }
}

}  // namespace

std::vector<std::string> sort_records(std::vector<std::string> records, const SortOptions& opts) {
    std::uint64_t total = 0;
    for (const auto& r : records) total += r.size();
    if (opts.memory_budget == 0 || total <= opts.memory_budget) {
        parallel_stable_sort(records, opts.threads);
        return records;
    }

    SpillDir spill(make_spill_dir(opts.spill_dir));
    std::vector<std::filesystem::path> runs;
    std::vector<std::string> chunk;
    std::uint64_t chunk_bytes = 0;
    auto flush = [&] {
        parallel_stable_sort(chunk, opts.threads);
        runs.push_back(write_run(spill.path, runs.size(), chunk));
        chunk.clear();
        chunk_bytes = 0;
    };
    for (auto& r : records) {
        if (!chunk.empty() && chunk_bytes + r.size() > opts.memory_budget) flush();
        chunk_bytes += r.size();
        chunk.push_back(std::move(r));
    }
    if (!chunk.empty()) flush();
    records.clear();

    std::vector<std::string> out;
    merge_runs(runs, [&](std::string&& v) { out.push_back(std::move(v)); });
    return out;
}

std::uint64_t sort_sequence_file(const std::filesystem::path& in, const std::filesystem::path& out,
                                 const SortOptions& opts) {
    SequenceReader reader(in);
    std::vector<std::string> chunk;
    std::uint64_t chunk_bytes = 0;
    std::unique_ptr<SpillDir> spill;
    std::vector<std::filesystem::path> runs;

    auto flush = [&] {
        if (!spill) spill = std::make_unique<SpillDir>(make_spill_dir(opts.spill_dir));
        parallel_stable_sort(chunk, opts.threads);
        runs.push_back(write_run(spill->path, runs.size(), chunk));
        chunk.clear();
        chunk_bytes = 0;
    };

    SequenceRecord rec;
    while (reader.next(rec)) {
        if (opts.memory_budget != 0 && !chunk.empty() && chunk_bytes + rec.value.size() > opts.memory_budget) {
            flush();
        }
        chunk_bytes += rec.value.size();
        chunk.push_back(std::move(rec.value));
    }

    SequenceWriter writer(out);
    std::uint64_t ordinal = 0;
    auto emit = [&](std::string&& v) { writer.append(encode_line_key(ordinal++), v); };
    if (runs.empty()) {
        parallel_stable_sort(chunk, opts.threads);
        for (auto& v : chunk) emit(std::move(v));
    } else {
        if (!chunk.empty()) flush();
        merge_runs(runs, emit);
    }
    writer.close();
    return ordinal;
}

}  // namespace motifbench::kernels
