// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nnmig/diagnostics.hpp"

namespace nnmig {

using Ints = std::vector<int64_t>;

/// Reserved producer token naming the network input.
inline constexpr std::string_view kInputToken = "INPUT";

/// Maximum depth of nested sub-networks.
inline constexpr int kMaxNesting = 8;

// ---------------------------------------------------------------------------
// Shapes
// ---------------------------------------------------------------------------

/// One tensor dimension: a known positive extent or the symbolic batch.
struct Dim {
    int64_t value = 0;
    bool batch = false;

    static Dim known(int64_t v) { return Dim{v, false}; }
    static Dim symbolic_batch() { return Dim{0, true}; }

    friend bool operator==(const Dim&, const Dim&) = default;
};

struct TensorShape {
    std::vector<Dim> dims;

    TensorShape() = default;
    explicit TensorShape(std::vector<Dim> d) : dims(std::move(d)) {}

    /// (Batch, d0, d1, ...)
    static TensorShape batched(const Ints& extents) {
        TensorShape s;
        s.dims.push_back(Dim::symbolic_batch());
        for (int64_t e : extents) {
            s.dims.push_back(Dim::known(e));
        }
        return s;
    }

    size_t rank() const { return dims.size(); }
    bool has_batch() const { return !dims.empty() && dims.front().batch; }

    std::string to_string() const {
        std::string out = "(";
        for (size_t i = 0; i < dims.size(); ++i) {
            if (i) out += ", ";
            out += dims[i].batch ? std::string("B") : std::to_string(dims[i].value);
        }
        return out + ")";
    }

    friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

enum class Activation { Relu, Sigmoid, Tanh, Softmax, LeakyRelu };

inline std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Softmax: return "softmax";
    case Activation::LeakyRelu: return "leaky_relu";
    }
    return "relu";
}

inline std::optional<Activation> parse_activation(std::string_view name) {
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    if (name == "softmax") return Activation::Softmax;
    if (name == "leaky_relu") return Activation::LeakyRelu;
    return std::nullopt;
}

inline constexpr Activation kAllActivations[] = {Activation::Relu, Activation::Sigmoid,
                                                 Activation::Tanh, Activation::Softmax,
                                                 Activation::LeakyRelu};

/// None, a literal supported activation, or an unresolved source symbol.
struct ActivationRef {
    enum class Form { None, Literal, Dynamic };

    Form form = Form::None;
    Activation literal = Activation::Relu;
    std::string symbol;

    static ActivationRef none() { return {}; }
    static ActivationRef of(Activation a) { return {Form::Literal, a, {}}; }
    static ActivationRef dynamic(std::string sym) {
        return {Form::Dynamic, Activation::Relu, std::move(sym)};
    }

    bool is_none() const { return form == Form::None; }
    bool is_literal() const { return form == Form::Literal; }
    bool is_dynamic() const { return form == Form::Dynamic; }

    friend bool operator==(const ActivationRef& a, const ActivationRef& b) {
        if (a.form != b.form) return false;
        if (a.form == Form::Literal) return a.literal == b.literal;
        if (a.form == Form::Dynamic) return a.symbol == b.symbol;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

enum class LayerKind {
    Linear,
    Conv1D,
    Conv2D,
    Conv3D,
    MaxPool1D,
    MaxPool2D,
    MaxPool3D,
    AvgPool1D,
    AvgPool2D,
    AvgPool3D,
    Flatten,
    Dropout,
    Embedding,
    SimpleRNN,
    LSTM,
    GRU,
};

inline constexpr LayerKind kAllLayerKinds[] = {
    LayerKind::Linear,    LayerKind::Conv1D,    LayerKind::Conv2D,    LayerKind::Conv3D,
    LayerKind::MaxPool1D, LayerKind::MaxPool2D, LayerKind::MaxPool3D, LayerKind::AvgPool1D,
    LayerKind::AvgPool2D, LayerKind::AvgPool3D, LayerKind::Flatten,   LayerKind::Dropout,
    LayerKind::Embedding, LayerKind::SimpleRNN, LayerKind::LSTM,      LayerKind::GRU,
};

inline std::string_view to_string(LayerKind k) {
    switch (k) {
    case LayerKind::Linear: return "Linear";
    case LayerKind::Conv1D: return "Conv1D";
    case LayerKind::Conv2D: return "Conv2D";
    case LayerKind::Conv3D: return "Conv3D";
    case LayerKind::MaxPool1D: return "MaxPool1D";
    case LayerKind::MaxPool2D: return "MaxPool2D";
    case LayerKind::MaxPool3D: return "MaxPool3D";
    case LayerKind::AvgPool1D: return "AvgPool1D";
    case LayerKind::AvgPool2D: return "AvgPool2D";
    case LayerKind::AvgPool3D: return "AvgPool3D";
    case LayerKind::Flatten: return "Flatten";
    case LayerKind::Dropout: return "Dropout";
    case LayerKind::Embedding: return "Embedding";
    case LayerKind::SimpleRNN: return "SimpleRNN";
    case LayerKind::LSTM: return "LSTM";
    case LayerKind::GRU: return "GRU";
    }
    return "Linear";
}

inline std::optional<LayerKind> parse_layer_kind(std::string_view name) {
    for (LayerKind k : kAllLayerKinds) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

inline bool is_conv(LayerKind k) {
    return k == LayerKind::Conv1D || k == LayerKind::Conv2D || k == LayerKind::Conv3D;
}
inline bool is_max_pool(LayerKind k) {
    return k == LayerKind::MaxPool1D || k == LayerKind::MaxPool2D || k == LayerKind::MaxPool3D;
}
inline bool is_avg_pool(LayerKind k) {
    return k == LayerKind::AvgPool1D || k == LayerKind::AvgPool2D || k == LayerKind::AvgPool3D;
}
inline bool is_pool(LayerKind k) { return is_max_pool(k) || is_avg_pool(k); }
inline bool is_recurrent(LayerKind k) {
    return k == LayerKind::SimpleRNN || k == LayerKind::LSTM || k == LayerKind::GRU;
}
/// Layers whose data layout differs between channel-last and channel-first frameworks.
inline bool is_channel_sensitive(LayerKind k) { return is_conv(k) || is_pool(k); }

/// Number of spatial dims for conv/pool kinds, 0 otherwise.
inline int spatial_rank(LayerKind k) {
    switch (k) {
    case LayerKind::Conv1D:
    case LayerKind::MaxPool1D:
    case LayerKind::AvgPool1D: return 1;
    case LayerKind::Conv2D:
    case LayerKind::MaxPool2D:
    case LayerKind::AvgPool2D: return 2;
    case LayerKind::Conv3D:
    case LayerKind::MaxPool3D:
    case LayerKind::AvgPool3D: return 3;
    default: return 0;
    }
}

inline LayerKind conv_kind(int rank) {
    return rank == 1 ? LayerKind::Conv1D : rank == 2 ? LayerKind::Conv2D : LayerKind::Conv3D;
}
inline LayerKind max_pool_kind(int rank) {
    return rank == 1 ? LayerKind::MaxPool1D : rank == 2 ? LayerKind::MaxPool2D : LayerKind::MaxPool3D;
}
inline LayerKind avg_pool_kind(int rank) {
    return rank == 1 ? LayerKind::AvgPool1D : rank == 2 ? LayerKind::AvgPool2D : LayerKind::AvgPool3D;
}

struct Padding {
    enum class Mode { Valid, Same, Explicit };

    Mode mode = Mode::Valid;
    Ints amounts;  // per spatial dim, symmetric, Explicit only

    static Padding valid() { return {}; }
    static Padding same() { return {Mode::Same, {}}; }
    static Padding explicit_(Ints a) { return {Mode::Explicit, std::move(a)}; }

    /// Explicit all-zero padding is the same thing as valid padding.
    Padding normalized() const {
        if (mode == Mode::Explicit &&
            std::all_of(amounts.begin(), amounts.end(), [](int64_t p) { return p == 0; })) {
            return valid();
        }
        return *this;
    }

    friend bool operator==(const Padding&, const Padding&) = default;
};

struct LinearAttrs {
    std::optional<int64_t> in_features;
    int64_t out_features = 1;
    friend bool operator==(const LinearAttrs&, const LinearAttrs&) = default;
};

struct ConvAttrs {
    std::optional<int64_t> in_channels;
    int64_t out_channels = 1;
    Ints kernel;
    Ints stride;
    Padding padding;
    friend bool operator==(const ConvAttrs&, const ConvAttrs&) = default;
};

struct PoolAttrs {
    Ints kernel;
    Ints stride;
    Padding padding;
    friend bool operator==(const PoolAttrs&, const PoolAttrs&) = default;
};

struct FlattenAttrs {
    friend bool operator==(const FlattenAttrs&, const FlattenAttrs&) = default;
};

struct DropoutAttrs {
    double rate = 0.0;
    friend bool operator==(const DropoutAttrs&, const DropoutAttrs&) = default;
};

struct EmbeddingAttrs {
    int64_t vocab_size = 1;
    int64_t embedding_dim = 1;
    friend bool operator==(const EmbeddingAttrs&, const EmbeddingAttrs&) = default;
};

struct RecurrentAttrs {
    std::optional<int64_t> input_size;
    int64_t hidden_size = 1;
    bool return_sequences = false;
    bool bidirectional = false;
    friend bool operator==(const RecurrentAttrs&, const RecurrentAttrs&) = default;
};

using LayerAttributes = std::variant<LinearAttrs, ConvAttrs, PoolAttrs, FlattenAttrs,
                                     DropoutAttrs, EmbeddingAttrs, RecurrentAttrs>;

/// Attribute variant alternative expected for a layer kind.
inline size_t attribute_index(LayerKind k) {
    if (k == LayerKind::Linear) return 0;
    if (is_conv(k)) return 1;
    if (is_pool(k)) return 2;
    if (k == LayerKind::Flatten) return 3;
    if (k == LayerKind::Dropout) return 4;
    if (k == LayerKind::Embedding) return 5;
    return 6;
}

struct LayerSpec {
    LayerKind kind = LayerKind::Linear;
    LayerAttributes attrs;
    ActivationRef activation;

    template <typename T>
    T& as() { return std::get<T>(attrs); }
    template <typename T>
    const T& as() const { return std::get<T>(attrs); }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// A layer of the given kind with default-constructed attributes of the matching alternative.
inline LayerSpec make_layer(LayerKind kind) {
    LayerSpec l;
    l.kind = kind;
    switch (attribute_index(kind)) {
    case 0: l.attrs = LinearAttrs{}; break;
    case 1: {
        ConvAttrs c;
        c.kernel.assign(static_cast<size_t>(spatial_rank(kind)), 1);
        c.stride.assign(static_cast<size_t>(spatial_rank(kind)), 1);
        l.attrs = c;
        break;
    }
    case 2: {
        PoolAttrs p;
        p.kernel.assign(static_cast<size_t>(spatial_rank(kind)), 2);
        p.stride = p.kernel;
        l.attrs = p;
        break;
    }
    case 3: l.attrs = FlattenAttrs{}; break;
    case 4: l.attrs = DropoutAttrs{}; break;
    case 5: l.attrs = EmbeddingAttrs{}; break;
    default: l.attrs = RecurrentAttrs{}; break;
    }
    return l;
}

/// Layers that may carry an output activation.
inline bool accepts_activation(LayerKind k) { return k == LayerKind::Linear || is_conv(k); }

// ---------------------------------------------------------------------------
// Tensor ops, sub-networks, modules
// ---------------------------------------------------------------------------

enum class TensorOpKind { Permute, Reshape, Transpose, Concatenate, Add, Multiply, Matmul };

inline constexpr TensorOpKind kAllTensorOpKinds[] = {
    TensorOpKind::Permute,  TensorOpKind::Reshape,  TensorOpKind::Transpose, TensorOpKind::Concatenate,
    TensorOpKind::Add,      TensorOpKind::Multiply, TensorOpKind::Matmul,
};

inline std::string_view to_string(TensorOpKind k) {
    switch (k) {
    case TensorOpKind::Permute: return "permute";
    case TensorOpKind::Reshape: return "reshape";
    case TensorOpKind::Transpose: return "transpose";
    case TensorOpKind::Concatenate: return "concatenate";
    case TensorOpKind::Add: return "add";
    case TensorOpKind::Multiply: return "multiply";
    case TensorOpKind::Matmul: return "matmul";
    }
    return "permute";
}

inline std::optional<TensorOpKind> parse_tensor_op_kind(std::string_view name) {
    for (TensorOpKind k : kAllTensorOpKinds) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

/// Params by kind: permute `dims` = full order including batch axis 0; reshape `dims` =
/// target extents excluding batch (one may be -1); transpose `dims` = the two swapped axes;
/// concatenate `axis` (negative counts from the end).
struct TensorOpSpec {
    TensorOpKind kind = TensorOpKind::Add;
    Ints dims;
    int64_t axis = -1;

    static TensorOpSpec permute(Ints order) { return {TensorOpKind::Permute, std::move(order), -1}; }
    static TensorOpSpec reshape(Ints target) { return {TensorOpKind::Reshape, std::move(target), -1}; }
    static TensorOpSpec transpose(int64_t a, int64_t b) { return {TensorOpKind::Transpose, {a, b}, -1}; }
    static TensorOpSpec concatenate(int64_t axis) { return {TensorOpKind::Concatenate, {}, axis}; }
    static TensorOpSpec binary(TensorOpKind k) { return {k, {}, -1}; }

    friend bool operator==(const TensorOpSpec& a, const TensorOpSpec& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == TensorOpKind::Concatenate) return a.axis == b.axis;
        return a.dims == b.dims;
    }
};

struct SubNetRef {
    std::string network;
    friend bool operator==(const SubNetRef&, const SubNetRef&) = default;
};

using ModuleKind = std::variant<LayerSpec, TensorOpSpec, SubNetRef>;

struct ModuleSpec {
    std::string name;
    ModuleKind kind;
    std::vector<std::string> inputs;
    SourceLocation origin;  // not part of structural identity

    bool is_layer() const { return std::holds_alternative<LayerSpec>(kind); }
    bool is_tensor_op() const { return std::holds_alternative<TensorOpSpec>(kind); }
    bool is_subnet() const { return std::holds_alternative<SubNetRef>(kind); }
    LayerSpec& layer() { return std::get<LayerSpec>(kind); }
    const LayerSpec& layer() const { return std::get<LayerSpec>(kind); }
    const TensorOpSpec& tensor_op() const { return std::get<TensorOpSpec>(kind); }
    const SubNetRef& subnet() const { return std::get<SubNetRef>(kind); }

    friend bool operator==(const ModuleSpec& a, const ModuleSpec& b) {
        return a.name == b.name && a.kind == b.kind && a.inputs == b.inputs;
    }
};

// ---------------------------------------------------------------------------
// Training configuration and datasets
// ---------------------------------------------------------------------------

enum class Optimizer { Sgd, Adam, AdamW, RmsProp };
enum class Loss { CrossEntropy, BinaryCrossEntropy, Mse };
enum class Metric { Accuracy, F1Score };

inline std::string_view to_string(Optimizer o) {
    switch (o) {
    case Optimizer::Sgd: return "sgd";
    case Optimizer::Adam: return "adam";
    case Optimizer::AdamW: return "adamw";
    case Optimizer::RmsProp: return "rmsprop";
    }
    return "sgd";
}
inline std::string_view to_string(Loss l) {
    switch (l) {
    case Loss::CrossEntropy: return "crossentropy";
    case Loss::BinaryCrossEntropy: return "binary_crossentropy";
    case Loss::Mse: return "mse";
    }
    return "mse";
}
inline std::string_view to_string(Metric m) {
    return m == Metric::Accuracy ? "accuracy" : "f1-score";
}

inline std::optional<Optimizer> parse_optimizer(std::string_view s) {
    for (Optimizer o : {Optimizer::Sgd, Optimizer::Adam, Optimizer::AdamW, Optimizer::RmsProp}) {
        if (to_string(o) == s) return o;
    }
    return std::nullopt;
}
inline std::optional<Loss> parse_loss(std::string_view s) {
    for (Loss l : {Loss::CrossEntropy, Loss::BinaryCrossEntropy, Loss::Mse}) {
        if (to_string(l) == s) return l;
    }
    return std::nullopt;
}
inline std::optional<Metric> parse_metric(std::string_view s) {
    if (s == "accuracy") return Metric::Accuracy;
    if (s == "f1-score") return Metric::F1Score;
    return std::nullopt;
}

struct TrainingConfig {
    Optimizer optimizer = Optimizer::Adam;
    double learning_rate = 0.001;
    Loss loss = Loss::CrossEntropy;
    int64_t batch_size = 32;
    int64_t epochs = 1;
    std::vector<Metric> metrics;

    friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

enum class DatasetTask { Classification, Regression };
enum class InputFormat { Images, Sequences };

struct DatasetRef {
    std::string name;
    std::string path;
    DatasetTask task = DatasetTask::Classification;
    InputFormat input_format = InputFormat::Images;

    friend bool operator==(const DatasetRef&, const DatasetRef&) = default;
};

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

struct PivotNN {
    std::string name;
    std::vector<ModuleSpec> modules;
    std::optional<TrainingConfig> config;
    std::vector<DatasetRef> datasets;
    std::optional<TensorShape> input_shape;  // channel-last canonical, batch first
    std::vector<PivotNN> sub_networks;       // targets of SubNetRef, by name

    const ModuleSpec* find(std::string_view module_name) const {
        for (const auto& m : modules) {
            if (m.name == module_name) return &m;
        }
        return nullptr;
    }
    ModuleSpec* find(std::string_view module_name) {
        for (auto& m : modules) {
            if (m.name == module_name) return &m;
        }
        return nullptr;
    }
    const PivotNN* find_subnet(std::string_view net_name) const {
        for (const auto& s : sub_networks) {
            if (s.name == net_name) return &s;
        }
        return nullptr;
    }

    friend bool operator==(const PivotNN&, const PivotNN&) = default;
};

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(),
                       [&](char c) { return alpha(c) || digit(c) || c == '.' || c == '-'; });
}

/// Names of modules reading each producer, in declaration order. INPUT is included.
inline std::map<std::string, std::vector<std::string>> consumers_of(const PivotNN& nn) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& m : nn.modules) {
        for (const auto& in : m.inputs) {
            out[in].push_back(m.name);
        }
    }
    return out;
}

/// The single module no other module consumes; empty when there is not exactly one.
inline std::string terminal_module(const PivotNN& nn) {
    auto readers = consumers_of(nn);
    std::string found;
    int count = 0;
    for (const auto& m : nn.modules) {
        if (!readers.count(m.name)) {
            found = m.name;
            ++count;
        }
    }
    return count == 1 ? found : std::string{};
}

/// True when every module reads exactly its predecessor (the first reads INPUT).
inline bool is_chain(const PivotNN& nn) {
    for (size_t i = 0; i < nn.modules.size(); ++i) {
        const auto& m = nn.modules[i];
        const std::string expected = i == 0 ? std::string(kInputToken) : nn.modules[i - 1].name;
        if (m.inputs.size() != 1 || m.inputs.front() != expected) return false;
    }
    return true;
}

inline size_t count_layers(const PivotNN& nn) {
    return static_cast<size_t>(std::count_if(nn.modules.begin(), nn.modules.end(),
                                             [](const ModuleSpec& m) { return m.is_layer(); }));
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

inline void push(Diagnostics& out, ErrorCode code, const std::string& module, std::string message) {
    out.push_back(Diagnostic{code, Severity::Error, module, std::move(message), {}});
}

inline void check_positive(Diagnostics& out, const std::string& module, std::string_view what,
                           int64_t v) {
    if (v < 1) {
        push(out, ErrorCode::AttributeRange, module,
             std::string(what) + " must be >= 1, got " + std::to_string(v));
    }
}

inline void check_tuple(Diagnostics& out, const std::string& module, std::string_view what,
                        const Ints& v, size_t rank) {
    if (v.size() != rank) {
        push(out, ErrorCode::AttributeRange, module,
             std::string(what) + " needs " + std::to_string(rank) + " entries, got " +
                 std::to_string(v.size()));
    }
    for (int64_t x : v) check_positive(out, module, what, x);
}

inline void check_padding(Diagnostics& out, const std::string& module, const Padding& p,
                          size_t rank) {
    if (p.mode != Padding::Mode::Explicit) return;
    if (p.amounts.size() != rank) {
        push(out, ErrorCode::AttributeRange, module,
             "explicit padding needs " + std::to_string(rank) + " entries");
    }
    for (int64_t x : p.amounts) {
        if (x < 0) push(out, ErrorCode::AttributeRange, module, "padding must be >= 0");
    }
}

inline void validate_layer(Diagnostics& out, const ModuleSpec& m, const LayerSpec& l) {
    if (l.attrs.index() != attribute_index(l.kind)) {
        push(out, ErrorCode::AttributeRange, m.name,
             "attributes do not match layer kind " + std::string(to_string(l.kind)));
        return;
    }
    if (!l.activation.is_none() && !accepts_activation(l.kind)) {
        push(out, ErrorCode::ActivationOnNonLayer, m.name,
             std::string(to_string(l.kind)) + " cannot carry an activation");
    }
    if (l.activation.is_dynamic() && !is_identifier(l.activation.symbol)) {
        push(out, ErrorCode::InvalidName, m.name, "dynamic activation symbol is not an identifier");
    }
    const auto rank = static_cast<size_t>(spatial_rank(l.kind));
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, LinearAttrs>) {
                if (a.in_features) check_positive(out, m.name, "in_features", *a.in_features);
                check_positive(out, m.name, "out_features", a.out_features);
            } else if constexpr (std::is_same_v<T, ConvAttrs>) {
                if (a.in_channels) check_positive(out, m.name, "in_channels", *a.in_channels);
                check_positive(out, m.name, "out_channels", a.out_channels);
                check_tuple(out, m.name, "kernel", a.kernel, rank);
                check_tuple(out, m.name, "stride", a.stride, rank);
                check_padding(out, m.name, a.padding, rank);
            } else if constexpr (std::is_same_v<T, PoolAttrs>) {
                check_tuple(out, m.name, "kernel", a.kernel, rank);
                check_tuple(out, m.name, "stride", a.stride, rank);
                check_padding(out, m.name, a.padding, rank);
            } else if constexpr (std::is_same_v<T, DropoutAttrs>) {
                if (!(a.rate >= 0.0 && a.rate < 1.0)) {
                    push(out, ErrorCode::AttributeRange, m.name,
                         "dropout rate must lie in [0, 1), got " + std::to_string(a.rate));
                }
            } else if constexpr (std::is_same_v<T, EmbeddingAttrs>) {
                check_positive(out, m.name, "vocab_size", a.vocab_size);
                check_positive(out, m.name, "embedding_dim", a.embedding_dim);
            } else if constexpr (std::is_same_v<T, RecurrentAttrs>) {
                if (a.input_size) check_positive(out, m.name, "input_size", *a.input_size);
                check_positive(out, m.name, "hidden_size", a.hidden_size);
            }
        },
        l.attrs);
}

inline void validate_tensor_op(Diagnostics& out, const ModuleSpec& m, const TensorOpSpec& op) {
    switch (op.kind) {
    case TensorOpKind::Permute: {
        Ints sorted = op.dims;
        std::sort(sorted.begin(), sorted.end());
        bool ok = !sorted.empty();
        for (size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != static_cast<int64_t>(i)) ok = false;
        }
        if (!ok) push(out, ErrorCode::PermuteOrder, m.name, "permute order is not a permutation of 0..rank-1");
        break;
    }
    case TensorOpKind::Transpose:
        if (op.dims.size() != 2 || op.dims[0] == op.dims[1] || op.dims[0] < 0 || op.dims[1] < 0) {
            push(out, ErrorCode::PermuteOrder, m.name, "transpose needs two distinct non-negative axes");
        }
        break;
    case TensorOpKind::Reshape: {
        int wildcards = 0;
        bool ok = !op.dims.empty();
        for (int64_t d : op.dims) {
            if (d == -1) ++wildcards;
            else if (d < 1) ok = false;
        }
        if (!ok || wildcards > 1) {
            push(out, ErrorCode::AttributeRange, m.name, "reshape target needs extents >= 1 and at most one -1");
        }
        break;
    }
    default: break;
    }
}

inline size_t expected_min_inputs(const ModuleSpec& m) {
    if (const auto* op = std::get_if<TensorOpSpec>(&m.kind)) {
        switch (op->kind) {
        case TensorOpKind::Concatenate:
        case TensorOpKind::Add:
        case TensorOpKind::Multiply:
        case TensorOpKind::Matmul: return 2;
        default: return 1;
        }
    }
    return 1;
}

inline size_t expected_max_inputs(const ModuleSpec& m) {
    if (const auto* op = std::get_if<TensorOpSpec>(&m.kind)) {
        switch (op->kind) {
        case TensorOpKind::Concatenate:
        case TensorOpKind::Add:
        case TensorOpKind::Multiply: return SIZE_MAX;
        case TensorOpKind::Matmul: return 2;
        default: return 1;
        }
    }
    return 1;
}

/// Nesting depth reachable through SubNetRef chains, capped just above kMaxNesting.
inline int subnet_depth(const PivotNN& root, const PivotNN& net, int depth) {
    if (depth > kMaxNesting) return depth;
    int deepest = depth;
    for (const auto& m : net.modules) {
        if (const auto* ref = std::get_if<SubNetRef>(&m.kind)) {
            if (const PivotNN* sub = root.find_subnet(ref->network)) {
                deepest = std::max(deepest, subnet_depth(root, *sub, depth + 1));
                if (deepest > kMaxNesting) return deepest;
            }
        }
    }
    return deepest;
}

inline void validate_network(Diagnostics& out, const PivotNN& nn, const PivotNN& root,
                             const std::string& prefix, int depth) {
    auto qualified = [&](const std::string& n) { return prefix + n; };
    if (depth > 0 && !nn.sub_networks.empty()) {
        push(out, ErrorCode::MalformedPivot, prefix, "sub-networks must be declared on the top-level network");
    }
    if (!is_identifier(nn.name)) {
        push(out, ErrorCode::InvalidName, prefix, "network name '" + nn.name + "' is not an identifier");
    }

    std::map<std::string, size_t> position;
    for (size_t i = 0; i < nn.modules.size(); ++i) {
        const auto& m = nn.modules[i];
        if (m.name.empty() || !is_identifier(m.name) || m.name == kInputToken) {
            push(out, ErrorCode::InvalidName, qualified(m.name), "module name '" + m.name + "' is not a valid identifier");
        }
        if (!position.emplace(m.name, i).second) {
            push(out, ErrorCode::DuplicateName, qualified(m.name), "duplicate module name");
        }
    }

    bool reads_input = false;
    for (size_t i = 0; i < nn.modules.size(); ++i) {
        const auto& m = nn.modules[i];
        const std::string qname = qualified(m.name);
        if (m.inputs.size() < expected_min_inputs(m) || m.inputs.size() > expected_max_inputs(m)) {
            push(out, ErrorCode::InputArity, qname,
                 "unexpected number of inputs: " + std::to_string(m.inputs.size()));
        }
        for (const auto& in : m.inputs) {
            if (in == kInputToken) {
                reads_input = true;
                continue;
            }
            auto it = position.find(in);
            if (it == position.end()) {
                push(out, ErrorCode::UnknownProducer, qname, "input '" + in + "' names no module");
            } else if (it->second >= i) {
                push(out, ErrorCode::CycleOrForwardRef, qname,
                     "input '" + in + "' is not declared before its consumer");
            }
        }
        if (const auto* l = std::get_if<LayerSpec>(&m.kind)) {
            Diagnostics local;
            validate_layer(local, m, *l);
            for (auto& d : local) {
                d.module = qname;
                out.push_back(std::move(d));
            }
        } else if (const auto* op = std::get_if<TensorOpSpec>(&m.kind)) {
            validate_tensor_op(out, ModuleSpec{qname, m.kind, m.inputs, {}}, *op);
        } else {
            const auto& ref = std::get<SubNetRef>(m.kind);
            if (!root.find_subnet(ref.network)) {
                push(out, ErrorCode::UnknownSubNetwork, qname, "no sub-network named '" + ref.network + "'");
            }
        }
    }
    if (!reads_input) {
        push(out, ErrorCode::NoInputConsumer, prefix, "no module reads " + std::string(kInputToken));
    }
    if (!nn.modules.empty()) {
        auto readers = consumers_of(nn);
        int terminals = 0;
        for (const auto& m : nn.modules) {
            if (!readers.count(m.name)) ++terminals;
        }
        if (terminals != 1) {
            push(out, ErrorCode::MultipleOutputs, prefix,
                 "expected exactly one terminal module, found " + std::to_string(terminals));
        }
    }

    if (nn.input_shape) {
        const auto& dims = nn.input_shape->dims;
        for (size_t i = 0; i < dims.size(); ++i) {
            if (dims[i].batch && i != 0) {
                push(out, ErrorCode::BatchPosition, prefix, "batch dimension must be first");
            }
            if (!dims[i].batch && dims[i].value < 1) {
                push(out, ErrorCode::AttributeRange, prefix, "input dims must be >= 1");
            }
        }
    }
    if (nn.config) {
        const auto& c = *nn.config;
        if (!(c.learning_rate > 0.0)) push(out, ErrorCode::ConfigRange, prefix, "learning_rate must be > 0");
        if (c.batch_size < 1) push(out, ErrorCode::ConfigRange, prefix, "batch_size must be >= 1");
        if (c.epochs < 1) push(out, ErrorCode::ConfigRange, prefix, "epochs must be >= 1");
    }
    for (const auto& d : nn.datasets) {
        if (d.path.empty()) push(out, ErrorCode::DatasetPath, prefix + d.name, "dataset path is empty");
        if (!is_identifier(d.name)) push(out, ErrorCode::InvalidName, prefix + d.name, "dataset name is not an identifier");
    }

    if (depth > 0) return;
    std::set<std::string> sub_names;
    for (const auto& sub : nn.sub_networks) {
        if (!sub_names.insert(sub.name).second) {
            push(out, ErrorCode::DuplicateName, prefix + sub.name, "duplicate sub-network name");
        }
        validate_network(out, sub, root, prefix + sub.name + "/", depth + 1);
    }
    for (const auto& sub : nn.sub_networks) {
        if (subnet_depth(root, sub, 1) > kMaxNesting) {
            push(out, ErrorCode::NestingTooDeep, sub.name,
                 "sub-network nesting deeper than " + std::to_string(kMaxNesting) + " (or recursive)");
        }
    }
}

}  // namespace detail

/// Checks every pivot invariant. Returns one diagnostic per violation; empty means valid.
inline Diagnostics validate(const PivotNN& nn) {
    Diagnostics out;
    detail::validate_network(out, nn, nn, "", 0);
    return out;
}

/// Module names in execution order. Declaration order is the stored topological order;
/// throws CycleOrForwardRef if some edge disagrees with it.
inline std::vector<std::string> topo_order(const PivotNN& nn) {
    std::map<std::string, size_t> position;
    for (size_t i = 0; i < nn.modules.size(); ++i) position[nn.modules[i].name] = i;
    std::vector<std::string> order;
    order.reserve(nn.modules.size());
    for (size_t i = 0; i < nn.modules.size(); ++i) {
        for (const auto& in : nn.modules[i].inputs) {
            if (in == kInputToken) continue;
            auto it = position.find(in);
            if (it == position.end() || it->second >= i) {
                throw MigrationError(ErrorCode::CycleOrForwardRef,
                                     "edge " + in + " -> " + nn.modules[i].name +
                                         " violates declaration order",
                                     nn.modules[i].origin, nn.modules[i].name);
            }
        }
        order.push_back(nn.modules[i].name);
    }
    return order;
}

/// Copy with every optional input-dimension attribute cleared, recursively. Two pivots that
/// differ only in filled in_features/in_channels/input_size compare equal after this.
inline PivotNN without_input_dims(PivotNN nn) {
    for (auto& m : nn.modules) {
        if (auto* l = std::get_if<LayerSpec>(&m.kind)) {
            std::visit(
                [](auto& a) {
                    using T = std::decay_t<decltype(a)>;
                    if constexpr (std::is_same_v<T, LinearAttrs>) a.in_features.reset();
                    else if constexpr (std::is_same_v<T, ConvAttrs>) a.in_channels.reset();
                    else if constexpr (std::is_same_v<T, RecurrentAttrs>) a.input_size.reset();
                },
                l->attrs);
        }
    }
    for (auto& s : nn.sub_networks) s = without_input_dims(std::move(s));
    return nn;
}

}  // namespace nnmig
