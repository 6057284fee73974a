#include "motifbench/motifs.hpp"

#include "motifbench/error.hpp"

#include <algorithm>
#include <cctype>

namespace motifbench {

namespace {

std::string normalize_key(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        if (ch == ' ' || ch == '-' || ch == '_' || ch == '.') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
}

struct MotifInfo {
    MotifId id;
    std::string_view name;
    MotifClass cls;
    bool ai;
    std::string_view aliases;
};

constexpr MotifInfo kMotifInfo[] = {
    {MotifId::Sort, "sort", MotifClass::Sort, false, ""},
    {MotifId::WordCount, "wordcount", MotifClass::Statistics, false, "wc"},
    {MotifId::Grep, "grep", MotifClass::Set, false, ""},
    {MotifId::Md5, "md5", MotifClass::Logic, false, "md5hash"},
    {MotifId::MatMul, "matmul", MotifClass::Matrix, false, "matrixmultiply,gemm"},
    {MotifId::Sample, "sample", MotifClass::Sampling, false, "sampling,randomsample"},
    {MotifId::Bfs, "bfs", MotifClass::Graph, false, "graphtraversal"},
    {MotifId::Fft, "fft", MotifClass::Transform, false, "fft2d"},
    {MotifId::Conv2D, "conv2d", MotifClass::Transform, true, "conv,convolution"},
    {MotifId::MaxPool, "maxpool", MotifClass::Sampling, true, "maxpooling"},
    {MotifId::AvgPool, "avgpool", MotifClass::Sampling, true, "averagepool,avgpooling"},
    {MotifId::Relu, "relu", MotifClass::Logic, true, ""},
    {MotifId::Sigmoid, "sigmoid", MotifClass::Matrix, true, ""},
    {MotifId::Tanh, "tanh", MotifClass::Matrix, true, ""},
    {MotifId::FullyConnected, "fullyconnected", MotifClass::Matrix, true, "fc,dense"},
    {MotifId::Multiply, "multiply", MotifClass::Matrix, true, "mul,elementwisemultiply"},
};

const MotifInfo& info(MotifId id) noexcept {
    return kMotifInfo[static_cast<std::size_t>(id)];
}

bool alias_matches(std::string_view aliases, const std::string& key) {
    while (!aliases.empty()) {
        auto comma = aliases.find(',');
        auto token = aliases.substr(0, comma);
        if (normalize_key(token) == key) return true;
        if (comma == std::string_view::npos) break;
        aliases.remove_prefix(comma + 1);
    }
    return false;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

std::string_view motif_name(MotifId id) noexcept { return info(id).name; }

MotifClass motif_class(MotifId id) noexcept { return info(id).cls; }

bool is_ai_motif(MotifId id) noexcept { return info(id).ai; }

std::string_view motif_class_name(MotifClass c) noexcept {
    switch (c) {
        case MotifClass::Matrix: return "Matrix";
        case MotifClass::Sampling: return "Sampling";
        case MotifClass::Logic: return "Logic";
        case MotifClass::Transform: return "Transform";
        case MotifClass::Set: return "Set";
        case MotifClass::Graph: return "Graph";
        case MotifClass::Sort: return "Sort";
        case MotifClass::Statistics: return "Statistics";
    }
    return "?";
}

std::optional<MotifId> try_parse_motif(std::string_view name) noexcept {
    const std::string key = normalize_key(name);
    for (const auto& m : kMotifInfo) {
        if (m.name == key || alias_matches(m.aliases, key)) return m.id;
    }
    return std::nullopt;
}

MotifId parse_motif(std::string_view name) {
    if (auto id = try_parse_motif(name)) return *id;
    throw ParamError("unknown motif '" + std::string(name) + "'");
}

std::optional<MotifClass> try_parse_motif_class(std::string_view name) noexcept {
    const std::string key = normalize_key(name);
    for (auto c : kAllMotifClasses) {
        if (normalize_key(motif_class_name(c)) == key) return c;
    }
    if (key == "statistic") return MotifClass::Statistics;
    return std::nullopt;
}

const std::vector<WorkloadEntry>& workload_registry() {
    using C = MotifClass;
    static const std::vector<WorkloadEntry> registry = {
        {"CNN", "Convolutional neural network", "Deep Learning", "Image Recognition, Speech Recognition",
         {C::Matrix, C::Sampling, C::Transform}},
        {"DBN", "Deep belief network", "Deep Learning", "Image Recognition, Speech Recognition",
         {C::Matrix, C::Sampling}},
        {"PageRank", "", "Graph Mining", "Search Engine, Community Detection",
         {C::Matrix, C::Graph, C::Sort}},
        {"BFS", "Connected component,CC,BFS/CC", "Graph Mining", "Search Engine, Community Detection",
         {C::Graph}},
        {"PCA", "Principal components analysis", "Dimension Reduction", "Image Processing, Text Processing",
         {C::Matrix}},
        {"LDA", "Latent dirichlet allocation", "Dimension Reduction", "Image Processing, Text Processing",
         {C::Statistics, C::Sampling}},
        {"Apriori", "Aporiori", "Recommendation", "Association Rules Mining, Electronic Commerce",
         {C::Statistics, C::Set}},
        {"FP-Growth", "", "Recommendation", "Association Rules Mining, Electronic Commerce",
         {C::Graph, C::Set, C::Statistics}},
        {"CF", "Collaborative filtering", "Recommendation", "Association Rules Mining, Electronic Commerce",
         {C::Graph, C::Matrix}},
        {"SVM", "Support vector machine", "Classification",
         "Image Recognition, Speech Recognition, Text Recognition", {C::Matrix}},
        {"KNN", "K-nearest neighbors", "Classification",
         "Image Recognition, Speech Recognition, Text Recognition", {C::Matrix, C::Sort, C::Statistics}},
        {"Naive Bayes", "", "Classification", "Image Recognition, Speech Recognition, Text Recognition",
         {C::Statistics}},
        {"Random Forest", "", "Classification", "Image Recognition, Speech Recognition, Text Recognition",
         {C::Graph, C::Statistics}},
        {"Decision Tree", "C4.5,CART,ID3", "Classification",
         "Image Recognition, Speech Recognition, Text Recognition", {C::Graph, C::Statistics}},
        {"K-means", "kmeans", "Clustering", "Data Mining", {C::Matrix, C::Sort}},
        {"GrabCut", "Image segmentation", "Feature Preprocess",
         "Image Processing, Signal Processing, Text Processing", {C::Matrix, C::Graph}},
        {"SIFT", "Scale-invariant feature transform", "Feature Preprocess",
         "Image Processing, Signal Processing, Text Processing",
         {C::Matrix, C::Transform, C::Sampling, C::Sort, C::Statistics}},
        {"Image Transform", "", "Feature Preprocess", "Image Processing, Signal Processing, Text Processing",
         {C::Matrix, C::Transform}},
        {"TF-IDF", "Term frequency-inverse document frequency", "Feature Preprocess",
         "Image Processing, Signal Processing, Text Processing", {C::Statistics}},
        {"HMM", "Hidden Markov Model", "Sequence Tagging", "Bioinformatics, Language Processing",
         {C::Matrix}},
        {"CRF", "Conditional random fields", "Sequence Tagging", "Bioinformatics, Language Processing",
         {C::Matrix, C::Sampling}},
        {"Inverted Index", "Forward index,Index", "Indexing", "Search Engine",
         {C::Statistics, C::Logic, C::Set, C::Sort}},
        {"MPEG-2", "", "Encoding/Decoding", "Multimedia Processing, Security, Cryptography, Digital Signature",
         {C::Matrix, C::Transform}},
        {"Encryption", "", "Encoding/Decoding",
         "Multimedia Processing, Security, Cryptography, Digital Signature", {C::Matrix, C::Logic}},
        {"SimHash", "MinHash", "Encoding/Decoding",
         "Multimedia Processing, Security, Cryptography, Digital Signature", {C::Set, C::Logic}},
        {"LSH", "Locality-sensitive hashing", "Encoding/Decoding",
         "Multimedia Processing, Security, Cryptography, Digital Signature", {C::Set, C::Logic}},
        {"Project/Filter/OrderBy/Union", "Project,Filter,OrderBy,Union", "Data Warehouse",
         "Business intelligence", {C::Set, C::Sort}},
    };
    return registry;
}

const WorkloadEntry* find_workload(std::string_view name) {
    const std::string key = normalize_key(name);
    if (key.empty()) return nullptr;
    for (const auto& e : workload_registry()) {
        if (normalize_key(e.name) == key || alias_matches(e.aliases, key)) return &e;
    }
    return nullptr;
}

std::vector<std::string> suggest_workloads(std::string_view name, std::size_t max) {
    const std::string key = normalize_key(name);
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& e : workload_registry()) {
        scored.emplace_back(edit_distance(key, normalize_key(e.name)), std::string(e.name));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < max; ++i) out.push_back(scored[i].second);
    return out;
}

std::string join_classes(const std::vector<MotifClass>& classes) {
    std::string out;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (i) out += ", ";
        out += motif_class_name(classes[i]);
    }
    return out;
}

}  // namespace motifbench
