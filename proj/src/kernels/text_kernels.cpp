#include "motifbench/error.hpp"
#include "motifbench/kernels.hpp"
#include "motifbench/parallel.hpp"
#include "motifbench/rng.hpp"

#include <unordered_map>

namespace motifbench::kernels {

// ---------------------------------------------------------------------------
// WordCount

namespace {

using PartialCounts = std::unordered_map<std::string_view, std::uint64_t>;

void count_tokens(std::string_view text, PartialCounts& counts) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_ascii_space(text[i])) ++i;
        const std::size_t start = i;
        while (i < n && !is_ascii_space(text[i])) ++i;
        if (i > start) ++counts[text.substr(start, i - start)];
    }
}

WordCounts merge(std::vector<PartialCounts>& partials) {
    WordCounts out;
    for (auto& p : partials) {
        for (const auto& [tok, n] : p) {
            auto it = out.find(tok);
            if (it == out.end()) {
                out.emplace(std::string(tok), n);
            } else {
                it->second += n;
            }
        }
    }
    return out;
}

}  // namespace

WordCounts wordcount(std::string_view corpus, unsigned threads) {
    const std::size_t parts = chunk_count(corpus.size(), threads);
    // Cut points advanced to the next whitespace so no token straddles chunks.
    std::vector<std::size_t> cuts(parts + 1);
    cuts[0] = 0;
    cuts[parts] = corpus.size();
    for (std::size_t p = 1; p < parts; ++p) {
        std::size_t c = std::max(cuts[p - 1], corpus.size() * p / parts);
        while (c < corpus.size() && !is_ascii_space(corpus[c])) ++c;
        cuts[p] = c;
    }
    std::vector<PartialCounts> partials(parts);
    parallel_chunks(parts, threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t p = b; p < e; ++p) {
            count_tokens(corpus.substr(cuts[p], cuts[p + 1] - cuts[p]), partials[p]);
        }
    });
    return merge(partials);
}

WordCounts wordcount_records(std::span<const std::string> records, unsigned threads) {
    const std::size_t parts = chunk_count(records.size(), threads);
    std::vector<PartialCounts> partials(parts);
    parallel_chunks(records.size(), threads, [&](std::size_t b, std::size_t e, unsigned tid) {
        for (std::size_t i = b; i < e; ++i) count_tokens(records[i], partials[tid]);
    });
    return merge(partials);
}

// ---------------------------------------------------------------------------
// Grep

std::vector<GrepMatch> grep_lines(std::span<const std::string_view> lines, std::string_view pattern,
                                  unsigned threads) {
    if (pattern.empty()) throw ParamError("grep pattern must be non-empty");
    const std::size_t parts = chunk_count(lines.size(), threads);
    std::vector<std::vector<GrepMatch>> partial(parts);
    parallel_chunks(lines.size(), threads, [&](std::size_t b, std::size_t e, unsigned tid) {
        for (std::size_t i = b; i < e; ++i) {
            if (lines[i].find(pattern) != std::string_view::npos) partial[tid].push_back({i + 1, lines[i]});
        }
    });
    std::vector<GrepMatch> out;
    for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<GrepMatch> grep(std::string_view corpus, std::string_view pattern, unsigned threads) {
    const auto lines = split_lines(corpus);
    return grep_lines(lines, pattern, threads);
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed, unsigned threads) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ParamError("sample fraction must be in (0, 1], got " + std::to_string(fraction));
    }
    const CounterRng rng(seed);
    const std::size_t parts = chunk_count(n, threads);
    std::vector<std::vector<std::size_t>> partial(parts);
    parallel_chunks(n, threads, [&](std::size_t b, std::size_t e, unsigned tid) {
        for (std::size_t i = b; i < e; ++i) {
            if (rng.uniform(0, i) < fraction) partial[tid].push_back(i);
        }
    });
    std::vector<std::size_t> out;
    for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<std::string> sample_records(std::span<const std::string> records, double fraction,
                                        std::uint64_t seed, unsigned threads) {
    const auto idx = sample_indices(records.size(), fraction, seed, threads);
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(records[i]);
    return out;
}

}  // namespace motifbench::kernels
