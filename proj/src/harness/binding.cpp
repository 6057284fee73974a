#include "binding.hpp"

#include "motifbench/ai_kernels.hpp"
#include "motifbench/checksum.hpp"
#include "motifbench/error.hpp"
#include "motifbench/kernels.hpp"
#include "motifbench/rng.hpp"

#include <span>

namespace motifbench::harness::detail {

namespace {

namespace k = kernels;

std::uint64_t digest_tensor(const Tensor4& t) {
    Fnv1a h;
    h.update_value(t.n);
    h.update_value(t.h);
    h.update_value(t.w);
    h.update_value(t.c);
    h.update_span(std::span<const float>(t.data));
    return h.digest();
}

std::uint64_t digest_matrix(const MatrixData& m) {
    Fnv1a h;
    h.update_value(m.rows);
    h.update_value(m.cols);
    if (m.kind == ValueKind::Float64) {
        h.update_span(std::span<const double>(m.f64));
    } else {
        h.update_span(std::span<const std::int64_t>(m.i64));
    }
    return h.digest();
}

std::string default_grep_pattern() {
    const auto& vocab = text_vocabulary();
    return vocab[std::min<std::size_t>(99, vocab.size() - 1)];
}

// ---------------------------------------------------------------------------
// Text family

class TextMotif final : public BoundMotif {
public:
    TextMotif(MotifId motif, const Dataset& data, const DataSpec& spec, const KernelParams& params,
              std::filesystem::path scratch)
        : motif_(motif), params_(params), seed_(spec.seed), scratch_(std::move(scratch)) {
        if (spec.source == Source::Sequence) {
            for (auto& r : read_sequence(data.files.at(0))) records_.push_back(std::move(r.value));
        } else {
            corpus_ = read_file(data.files.at(0));
            for (auto line : split_lines(corpus_)) records_.emplace_back(line);
            from_text_ = true;
        }
        if (params_.grep_pattern.empty()) params_.grep_pattern = default_grep_pattern();
        if (!(params_.sample_fraction >= 0.0 && params_.sample_fraction <= 1.0)) {
            throw ParamError("sample fraction must be in [0, 1]");
        }
    }

    void execute(unsigned threads) override {
        Fnv1a h;
        switch (motif_) {
            case MotifId::Sort: {
                k::SortOptions opts;
                opts.threads = threads;
                opts.memory_budget = params_.sort_memory_budget;
                opts.spill_dir = scratch_;
                for (const auto& r : k::sort_records(records_, opts)) {
                    h.update(r);
                    h.update("\n");
                }
                break;
            }
            case MotifId::WordCount: {
                const auto counts = from_text_ ? k::wordcount(corpus_, threads) : k::wordcount_records(records_, threads);
                for (const auto& [w, c] : counts) {
                    h.update(w);
                    h.update_value(c);
                }
                break;
            }
            case MotifId::Grep: {
                std::vector<k::GrepMatch> matches;
                if (from_text_) {
                    matches = k::grep(corpus_, params_.grep_pattern, threads);
                } else {
                    std::vector<std::string_view> lines(records_.begin(), records_.end());
                    matches = k::grep_lines(lines, params_.grep_pattern, threads);
                }
                for (const auto& m : matches) {
                    h.update_value(m.line_number);
                    h.update(m.line);
                }
                break;
            }
            case MotifId::Md5:
                for (const auto& d : k::md5_records(records_, threads)) h.update(d.data(), d.size());
                break;
            case MotifId::Sample:
                for (const auto& r : k::sample_records(records_, params_.sample_fraction, seed_, threads)) {
                    h.update(r);
                    h.update("\n");
                }
                break;
            default: throw ParamError("not a text motif: " + std::string(motif_name(motif_)));
        }
        checksum_ = h.digest();
    }

    std::uint64_t checksum() const override { return checksum_; }

private:
    MotifId motif_;
    KernelParams params_;
    std::uint64_t seed_;
    std::filesystem::path scratch_;
    std::string corpus_;
    std::vector<std::string> records_;
    bool from_text_ = false;
    std::uint64_t checksum_ = 0;
};

class BfsMotif final : public BoundMotif {
public:
    explicit BfsMotif(const GraphData& g) : csr_(k::build_csr(g)) {}

    void execute(unsigned threads) override {
        const auto r = k::bfs(csr_, 0, threads);
        Fnv1a h;
        h.update_span(std::span<const std::uint32_t>(r.depth));
        h.update_value(r.visited_count);
        checksum_ = h.digest();
    }
    std::uint64_t checksum() const override { return checksum_; }

private:
    k::CsrGraph csr_;
    std::uint64_t checksum_ = 0;
};

class FftMotif final : public BoundMotif {
public:
    explicit FftMotif(const MatrixData& m) : rows_(m.rows), cols_(m.cols), real_(m.dense_doubles()) {}

    void execute(unsigned threads) override {
        const auto out = k::fft2d(real_, rows_, cols_, threads);
        Fnv1a h;
        h.update_span(std::span<const k::Complex>(out.data));
        checksum_ = h.digest();
    }
    std::uint64_t checksum() const override { return checksum_; }

private:
    std::uint32_t rows_, cols_;
    std::vector<double> real_;
    std::uint64_t checksum_ = 0;
};

class MatMulMotif final : public BoundMotif {
public:
    MatMulMotif(MatrixData a, MatrixData b) : a_(std::move(a)), b_(std::move(b)) {}

    void execute(unsigned threads) override { out_ = k::matmul(a_, b_, threads); }
    std::uint64_t checksum() const override { return digest_matrix(out_); }
    Shape output_shape() const override { return shape_of(out_); }
    Value take_output() override { return std::move(out_); }

private:
    MatrixData a_, b_, out_;
};

class AiMotif final : public BoundMotif {
public:
    AiMotif(MotifId motif, Tensor4 input, const KernelParams& p, Tensor4 operand = {})
        : motif_(motif), in_(std::move(input)), operand_(std::move(operand)) {
        infer_output(motif, shape_of(in_), p);  // validates
        switch (motif) {
            case MotifId::Conv2D: {
                const std::uint32_t oc = p.conv_out_channels ? p.conv_out_channels : in_.c;
                conv_ = k::make_conv_params(p.conv_kernel, p.conv_kernel, in_.c, oc, p.weight_seed);
                conv_.sh = conv_.sw = p.conv_stride;
                conv_.padding = {p.conv_padding, p.conv_padding, p.conv_padding, p.conv_padding};
                break;
            }
            case MotifId::MaxPool:
            case MotifId::AvgPool:
                pool_.kind = motif == MotifId::MaxPool ? k::PoolKind::Max : k::PoolKind::Avg;
                pool_.kh = pool_.kw = p.pool_window;
                pool_.sh = pool_.sw = p.pool_stride;
                break;
            case MotifId::FullyConnected:
                fc_ = k::make_fc_params(static_cast<std::uint32_t>(in_.features()), p.fc_out_features, p.weight_seed);
                break;
            case MotifId::Multiply:
                if (!operand_.same_shape(in_)) {
                    operand_ = Tensor4(in_.n, in_.h, in_.w, in_.c);
                    const CounterRng rng(p.weight_seed);
                    for (std::size_t i = 0; i < operand_.size(); ++i) operand_.data[i] = rng.uniform_f32(1, i);
                }
                break;
            default: break;
        }
    }

    void execute(unsigned threads) override {
        switch (motif_) {
            case MotifId::Conv2D: out_ = k::conv2d(in_, conv_, threads); break;
            case MotifId::MaxPool:
            case MotifId::AvgPool: out_ = k::pool(in_, pool_, threads); break;
            case MotifId::Relu: out_ = k::activation(in_, k::ActivationKind::Relu, threads); break;
            case MotifId::Sigmoid: out_ = k::activation(in_, k::ActivationKind::Sigmoid, threads); break;
            case MotifId::Tanh: out_ = k::activation(in_, k::ActivationKind::Tanh, threads); break;
            case MotifId::FullyConnected: out_ = k::fully_connected(in_, fc_, threads); break;
            case MotifId::Multiply: out_ = k::multiply(in_, operand_, threads); break;
            default: throw ParamError("not an AI motif: " + std::string(motif_name(motif_)));
        }
    }
    std::uint64_t checksum() const override { return digest_tensor(out_); }
    Shape output_shape() const override { return shape_of(out_); }
    Value take_output() override { return std::move(out_); }

private:
    MotifId motif_;
    Tensor4 in_, operand_, out_;
    k::ConvParams conv_;
    k::PoolParams pool_;
    k::FcParams fc_;
};

Shape tensor_shape(std::uint32_t n, std::uint32_t h, std::uint32_t w, std::uint32_t c) {
    Shape s;
    s.kind = Shape::Kind::Tensor;
    s.n = n;
    s.h = h;
    s.w = w;
    s.c = c;
    return s;
}

Shape matrix_shape(std::uint32_t rows, std::uint32_t cols) {
    Shape s;
    s.kind = Shape::Kind::Matrix;
    s.rows = rows;
    s.cols = cols;
    return s;
}

}  // namespace

std::string Shape::str() const {
    switch (kind) {
        case Kind::Tensor:
            return "tensor " + std::to_string(n) + "x" + std::to_string(h) + "x" + std::to_string(w) + "x" +
                   std::to_string(c);
        case Kind::Matrix: return "matrix " + std::to_string(rows) + "x" + std::to_string(cols);
        case Kind::None: break;
    }
    return "none";
}

Shape shape_of(const Value& v) {
    if (const auto* t = std::get_if<Tensor4>(&v)) return tensor_shape(t->n, t->h, t->w, t->c);
    if (const auto* m = std::get_if<MatrixData>(&v)) return matrix_shape(m->rows, m->cols);
    return {};
}

Shape infer_output(MotifId motif, const Shape& in, const KernelParams& p) {
    if (is_ai_motif(motif)) {
        if (in.kind != Shape::Kind::Tensor) throw ParamError("expects a tensor input, got " + in.str());
        switch (motif) {
            case MotifId::Conv2D: {
                const auto oh = kernels::output_extent(in.h, 2 * p.conv_padding, p.conv_kernel, p.conv_stride);
                const auto ow = kernels::output_extent(in.w, 2 * p.conv_padding, p.conv_kernel, p.conv_stride);
                return tensor_shape(in.n, oh, ow, p.conv_out_channels ? p.conv_out_channels : in.c);
            }
            case MotifId::MaxPool:
            case MotifId::AvgPool: {
                const auto oh = kernels::output_extent(in.h, 0, p.pool_window, p.pool_stride);
                const auto ow = kernels::output_extent(in.w, 0, p.pool_window, p.pool_stride);
                return tensor_shape(in.n, oh, ow, in.c);
            }
            case MotifId::FullyConnected:
                if (p.fc_out_features == 0) throw ParamError("fully connected needs out_features >= 1");
                return tensor_shape(in.n, 1, 1, p.fc_out_features);
            default: return in;
        }
    }
    if (motif == MotifId::MatMul) {
        if (in.kind != Shape::Kind::Matrix) throw ParamError("expects a matrix input, got " + in.str());
        return in;
    }
    if (motif == MotifId::Fft) {
        if (in.kind != Shape::Kind::Matrix) throw ParamError("expects a matrix input, got " + in.str());
        if (!kernels::is_power_of_two(in.rows) || !kernels::is_power_of_two(in.cols)) {
            throw ParamError("fft needs power-of-two dimensions, got " + in.str());
        }
        return {};
    }
    throw ParamError(std::string(motif_name(motif)) + " reads datasets only and cannot take a stage output");
}

Shape dataset_shape(MotifId motif, const DataSpec& spec) {
    const SizeParams s = resolve_size(motif, spec);
    if (is_ai_motif(motif)) return tensor_shape(s.batch, s.dim, s.dim, s.channels);
    if (motif == MotifId::MatMul || motif == MotifId::Fft) return matrix_shape(s.rows, s.cols);
    return {};
}

std::unique_ptr<BoundMotif> bind_dataset(MotifId motif, const Dataset& data, const DataSpec& spec,
                                         const KernelParams& params, const std::filesystem::path& scratch) {
    check_binding(motif, spec);
    switch (motif) {
        case MotifId::Sort:
        case MotifId::WordCount:
        case MotifId::Grep:
        case MotifId::Md5:
        case MotifId::Sample: return std::make_unique<TextMotif>(motif, data, spec, params, scratch);
        case MotifId::Bfs: return std::make_unique<BfsMotif>(read_graph(data.files.at(0)));
        case MotifId::Fft: return std::make_unique<FftMotif>(read_matrix(data.files.at(0)));
        case MotifId::MatMul:
            return std::make_unique<MatMulMotif>(read_matrix(data.files.at(0)), read_matrix(data.files.at(1)));
        case MotifId::Multiply:
            return std::make_unique<AiMotif>(motif, read_tensor(data.files.at(0)), params,
                                             read_tensor(data.files.at(1)));
        default: return std::make_unique<AiMotif>(motif, read_tensor(data.files.at(0)), params);
    }
}

std::unique_ptr<BoundMotif> bind_value(MotifId motif, Value input, const KernelParams& params) {
    infer_output(motif, shape_of(input), params);
    if (auto* t = std::get_if<Tensor4>(&input)) return std::make_unique<AiMotif>(motif, std::move(*t), params);
    auto& m = std::get<MatrixData>(input);
    if (motif == MotifId::Fft) return std::make_unique<FftMotif>(m);
    MatrixData b = gen_matrix(m.cols, m.cols, 0.0, m.kind, params.weight_seed);
    return std::make_unique<MatMulMotif>(std::move(m), std::move(b));
}

}  // namespace motifbench::harness::detail
