#pragma once

// Binds a motif to its input (a cached dataset or a previous stage's output)
// and runs the kernel on it. Loading happens at bind time so that execute()
// times the kernel alone.

#include "motifbench/datagen.hpp"
#include "motifbench/harness.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <variant>

namespace motifbench::harness::detail {

using Value = std::variant<std::monostate, Tensor4, MatrixData>;

struct Shape {
    enum class Kind { None, Tensor, Matrix } kind = Kind::None;
    std::uint32_t n = 0, h = 0, w = 0, c = 0;  // tensor
    std::uint32_t rows = 0, cols = 0;          // matrix

    std::string str() const;
};

Shape shape_of(const Value& v);

// Output shape of `motif` applied to `in`; throws ParamError with the reason
// when the motif cannot consume that shape.
Shape infer_output(MotifId motif, const Shape& in, const KernelParams& params);

// Shape of the value a tensor/matrix dataset loads as.
Shape dataset_shape(MotifId motif, const DataSpec& spec);

class BoundMotif {
public:
    virtual ~BoundMotif() = default;
    virtual void execute(unsigned threads) = 0;
    // Digest of the most recent execute() output.
    virtual std::uint64_t checksum() const = 0;
    virtual Shape output_shape() const { return {}; }
    virtual Value take_output() { return {}; }
};

std::unique_ptr<BoundMotif> bind_dataset(MotifId motif, const Dataset& data, const DataSpec& spec,
                                         const KernelParams& params, const std::filesystem::path& scratch);

std::unique_ptr<BoundMotif> bind_value(MotifId motif, Value input, const KernelParams& params);

}  // namespace motifbench::harness::detail
