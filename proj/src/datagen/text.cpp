#include "motifbench/datagen.hpp"
#include "motifbench/error.hpp"
#include "motifbench/rng.hpp"

#include "../binio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

namespace motifbench {

namespace {

constexpr std::size_t kVocabularySize = 10000;
constexpr std::size_t kSyllables = 40;
constexpr std::uint64_t kMinWordsPerLine = 8;
constexpr std::uint64_t kWordsPerLineSpan = 9;
constexpr std::size_t kChunkBytes = 1 << 20;

// Streams of the counter RNG used by the text generator.
constexpr std::uint64_t kTokenStream = 0;
constexpr std::uint64_t kLineStream = 1;

std::string syllable(std::size_t i) {
    static constexpr char kConsonants[] = "bdgklmst";
    static constexpr char kVowels[] = "aeiou";
    return {kConsonants[i / 5], kVowels[i % 5]};
}

std::vector<std::string> build_vocabulary() {
    // Rank r is spelled from r's digits in base 40 over CV syllables; shorter
    // words take the frequent ranks, and distinct ranks never collide.
    std::vector<std::string> vocab;
    vocab.reserve(kVocabularySize);
    std::size_t width = 1, block = kSyllables, offset = 0;
    for (std::size_t r = 0; r < kVocabularySize; ++r) {
        if (r - offset >= block) {
            offset += block;
            block *= kSyllables;
            ++width;
        }
        std::size_t code = r - offset;
        std::string word;
        for (std::size_t d = 0; d < width; ++d) {
            word += syllable(code % kSyllables);
            code /= kSyllables;
        }
        vocab.push_back(std::move(word));
    }
    return vocab;
}

std::vector<double> zipf_cdf(double exponent) {
    std::vector<double> cdf(kVocabularySize);
    double total = 0.0;
    for (std::size_t r = 0; r < kVocabularySize; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
        cdf[r] = total;
    }
    for (auto& c : cdf) c /= total;
    return cdf;
}

}  // namespace

const std::vector<std::string>& text_vocabulary() {
    static const std::vector<std::string> vocab = build_vocabulary();
    return vocab;
}

double zipf_rank1_mass(double exponent) {
    double h = 0.0;
    for (std::size_t r = kVocabularySize; r >= 1; --r) h += 1.0 / std::pow(static_cast<double>(r), exponent);
    return 1.0 / h;
}

void gen_text_stream(std::uint64_t bytes, const PatternParams& pattern, std::uint64_t seed,
                     const std::function<void(std::string_view)>& sink) {
    pattern.validate();
    if (bytes < 1024) throw ParamError("text size must be at least 1 KiB");

    const auto& vocab = text_vocabulary();
    const auto cdf = zipf_cdf(pattern.zipf_exponent);
    const CounterRng rng(seed);

    std::string buf;
    buf.reserve(kChunkBytes + 64);
    std::uint64_t written = 0;
    std::uint64_t token = 0;
    std::uint64_t line = 0;
    bool last_was_space = false;

    while (true) {
        const std::uint64_t words = kMinWordsPerLine + rng.below(kLineStream, line, kWordsPerLineSpan);
        bool stop = false;
        for (std::uint64_t w = 0; w < words; ++w, ++token) {
            const double u = rng.uniform(kTokenStream, token);
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const std::size_t rank = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), kVocabularySize - 1);
            const std::string& word = vocab[rank];
            if (written + buf.size() + word.size() + 1 > bytes) {
                stop = true;
                break;
            }
            buf += word;
            const bool end_of_line = w + 1 == words;
            buf += end_of_line ? '\n' : ' ';
            last_was_space = !end_of_line;
        }
        if (stop) break;
        ++line;
        if (buf.size() >= kChunkBytes) {
            sink(buf);
            written += buf.size();
            buf.clear();
        }
    }
    // Terminate the final partial line without changing the size.
    if (last_was_space && !buf.empty()) buf.back() = '\n';
    if (!buf.empty()) sink(buf);
}

std::string gen_text(std::uint64_t bytes, const PatternParams& pattern, std::uint64_t seed) {
    std::string out;
    out.reserve(bytes);
    gen_text_stream(bytes, pattern, seed, [&](std::string_view chunk) { out.append(chunk); });
    return out;
}

std::uint64_t write_text(const std::filesystem::path& path, std::uint64_t bytes, const PatternParams& pattern,
                         std::uint64_t seed) {
    auto os = binio::open_out(path);
    std::uint64_t total = 0;
    gen_text_stream(bytes, pattern, seed, [&](std::string_view chunk) {
        binio::write_bytes(os, chunk.data(), chunk.size(), path);
        total += chunk.size();
    });
    os.close();
    if (!os) throw IoError("write failed on '" + path.string() + "'");
    return total;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path) {
    auto is = binio::open_in(path);
    std::string out((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (is.bad()) throw IoError("read failed on '" + path.string() + "'");
    return out;
}

// ---------------------------------------------------------------------------
// Sequence files

bool is_valid_utf8(std::string_view s) noexcept {
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    const std::size_t n = s.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = p[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        std::uint32_t cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((p[i + k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (p[i + k] & 0x3F);
        }
        // Overlong forms, surrogates, and out-of-range code points.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += len;
    }
    return true;
}

std::string encode_line_key(std::uint64_t index) {
    std::string k;
    binio::put<std::uint64_t>(k, index);
    return k;
}

std::uint64_t decode_line_key(std::string_view key) {
    if (key.size() != 8) throw ParamError("line key must be 8 bytes");
    return binio::get<std::uint64_t>(key, 0);
}

namespace {

constexpr std::string_view kSeqMagic = "MSEQ";

void append_record(std::string& out, std::string_view key, std::string_view value) {
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(key.size()));
    out.append(key);
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(value.size()));
    out.append(value);
}

}  // namespace

std::string encode_sequence(std::string_view text, SequenceStats* stats) {
    std::string out(kSeqMagic);
    SequenceStats st;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!is_valid_utf8(lines[i])) {
            ++st.skipped;
            continue;
        }
        append_record(out, encode_line_key(i), lines[i]);
        ++st.records;
    }
    st.bytes = out.size();
    if (stats) *stats = st;
    return out;
}

SequenceStats gen_sequence(const std::filesystem::path& text_path, const std::filesystem::path& seq_path) {
    auto is = binio::open_in(text_path);
    SequenceWriter writer(seq_path);
    SequenceStats st;
    std::string line;
    std::uint64_t index = 0;
    while (std::getline(is, line)) {
        if (is_valid_utf8(line)) {
            writer.append(encode_line_key(index), line);
            ++st.records;
            st.bytes += 16 + line.size();
        } else {
            ++st.skipped;
        }
        ++index;
    }
    if (is.bad()) throw IoError("read failed on '" + text_path.string() + "'");
    writer.close();
    st.bytes += kSeqMagic.size();
    return st;
}

std::vector<SequenceRecord> decode_sequence(std::string_view bytes) {
    if (bytes.substr(0, 4) != kSeqMagic) throw IoError("not a MSEQ sequence file");
    std::vector<SequenceRecord> out;
    std::size_t pos = 4;
    auto take = [&](std::string& dst) {
        if (pos + 4 > bytes.size()) throw IoError("truncated sequence record");
        const auto len = binio::get<std::uint32_t>(bytes, pos);
        pos += 4;
        if (pos + len > bytes.size()) throw IoError("truncated sequence record");
        dst.assign(bytes.substr(pos, len));
        pos += len;
    };
    while (pos < bytes.size()) {
        SequenceRecord r;
        take(r.key);
        take(r.value);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SequenceRecord> read_sequence(const std::filesystem::path& path) {
    return decode_sequence(read_file(path));
}

struct SequenceWriter::Impl {
    std::filesystem::path path;
    std::ofstream os;
    std::string buf;

    void flush() {
        binio::write_bytes(os, buf.data(), buf.size(), path);
        buf.clear();
    }
};

SequenceWriter::SequenceWriter(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    impl_->os = binio::open_out(path);
    impl_->buf.assign(kSeqMagic);
}

SequenceWriter::~SequenceWriter() {
    if (impl_ && impl_->os.is_open()) {
        try {
            close();
        } catch (...) {
        }
    }
}

void SequenceWriter::append(std::string_view key, std::string_view value) {
    append_record(impl_->buf, key, value);
    if (impl_->buf.size() >= kChunkBytes) impl_->flush();
}

void SequenceWriter::close() {
    if (!impl_->os.is_open()) return;
    impl_->flush();
    impl_->os.close();
    if (!impl_->os) throw IoError("write failed on '" + impl_->path.string() + "'");
}

struct SequenceReader::Impl {
    std::filesystem::path path;
    std::ifstream is;
};

SequenceReader::SequenceReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    impl_->is = binio::open_in(path);
    char magic[4];
    binio::read_exact(impl_->is, magic, 4, path);
    binio::expect_magic(std::string_view(magic, 4), kSeqMagic, path);
}

SequenceReader::~SequenceReader() = default;

bool SequenceReader::next(SequenceRecord& out) {
    auto& is = impl_->is;
    std::uint32_t len = 0;
    is.read(reinterpret_cast<char*>(&len), 4);
    if (is.gcount() == 0) return false;
    if (is.gcount() != 4) throw IoError("truncated file '" + impl_->path.string() + "'");
    out.key.resize(len);
    binio::read_exact(is, out.key.data(), len, impl_->path);
    binio::read_exact(is, &len, 4, impl_->path);
    out.value.resize(len);
    binio::read_exact(is, out.value.data(), len, impl_->path);
    return true;
}

}  // namespace motifbench
