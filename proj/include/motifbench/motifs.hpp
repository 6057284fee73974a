#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace motifbench {

enum class MotifId {
    Sort,
    WordCount,
    Grep,
    Md5,
    MatMul,
    Sample,
    Bfs,
    Fft,
    Conv2D,
    MaxPool,
    AvgPool,
    Relu,
    Sigmoid,
    Tanh,
    FullyConnected,
    Multiply,
};

inline constexpr std::array<MotifId, 16> kAllMotifs = {
    MotifId::Sort,    MotifId::WordCount, MotifId::Grep,    MotifId::Md5,
    MotifId::MatMul,  MotifId::Sample,    MotifId::Bfs,     MotifId::Fft,
    MotifId::Conv2D,  MotifId::MaxPool,   MotifId::AvgPool, MotifId::Relu,
    MotifId::Sigmoid, MotifId::Tanh,      MotifId::FullyConnected, MotifId::Multiply,
};

enum class MotifClass { Matrix, Sampling, Logic, Transform, Set, Graph, Sort, Statistics };

inline constexpr std::array<MotifClass, 8> kAllMotifClasses = {
    MotifClass::Matrix, MotifClass::Sampling, MotifClass::Logic, MotifClass::Transform,
    MotifClass::Set,    MotifClass::Graph,    MotifClass::Sort,  MotifClass::Statistics,
};

std::string_view motif_name(MotifId id) noexcept;
std::string_view motif_class_name(MotifClass c) noexcept;
MotifClass motif_class(MotifId id) noexcept;
bool is_ai_motif(MotifId id) noexcept;

// Case-insensitive; accepts the canonical names plus a few aliases
// ("maxpool", "max_pool", "fc", ...). Throws ParamError on unknown names.
MotifId parse_motif(std::string_view name);
std::optional<MotifId> try_parse_motif(std::string_view name) noexcept;
std::optional<MotifClass> try_parse_motif_class(std::string_view name) noexcept;

/// One row of the workload-to-motif registry.
struct WorkloadEntry {
    std::string_view name;
    std::string_view aliases;  // comma separated
    std::string_view category;
    std::string_view domain;
    std::vector<MotifClass> classes;
};

const std::vector<WorkloadEntry>& workload_registry();

// Matches name or any alias, ignoring case, spaces, '-' and '_'.
const WorkloadEntry* find_workload(std::string_view name);

// Closest registry names by edit distance, for "did you mean" messages.
std::vector<std::string> suggest_workloads(std::string_view name, std::size_t max = 3);

std::string join_classes(const std::vector<MotifClass>& classes);

}  // namespace motifbench
