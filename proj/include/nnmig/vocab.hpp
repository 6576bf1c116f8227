// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Constructor vocabulary of both frameworks: which calls build layers, how their positional
// and keyword arguments bind, and how attribute names map to pivot names.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nnmig/dialect.hpp"
#include "nnmig/pivot.hpp"
#include "nnmig/symbols.hpp"
#include "nnmig/syntax.hpp"

namespace nnmig {

enum class ParamUse {
    Mapped,   // read by the constructor interpreter
    Ignored,  // any value accepted, no effect on the architecture
    Default,  // accepted only at its default value
};

using DefaultCheck = bool (*)(const Const&);

struct ParamSpec {
    std::string_view name;
    ParamUse use = ParamUse::Mapped;
    DefaultCheck is_default = nullptr;
    bool positional = true;  // false for keyword-only parameters
};

namespace vocab_detail {

inline bool is_none(const Const& c) { return c.type == Const::Type::None; }
inline bool is_true(const Const& c) { return c.type == Const::Type::Bool && c.b; }
inline bool is_false(const Const& c) { return (c.type == Const::Type::Bool && !c.b) || is_none(c); }
inline bool is_zero(const Const& c) { return c.is_number() && c.number() == 0.0; }
inline bool is_minus_one(const Const& c) { return c.is_int() && c.i == -1; }
inline bool is_one(const Const& c) { return c.is_int() && c.i == 1; }
inline bool all_ones(const Const& c) {
    auto t = c.int_tuple();
    return t && std::all_of(t->begin(), t->end(), [](int64_t v) { return v == 1; });
}
inline bool channels_last(const Const& c) { return is_none(c) || (c.is_str() && c.s == "channels_last"); }
inline bool is_tanh(const Const& c) { return c.is_str() && c.s == "tanh"; }
inline bool is_sigmoid(const Const& c) { return c.is_str() && c.s == "sigmoid"; }
inline bool is_zeros(const Const& c) { return c.is_str() && c.s == "zeros"; }
inline bool is_concat(const Const& c) { return c.is_str() && c.s == "concat"; }

constexpr ParamSpec M(std::string_view n) { return {n, ParamUse::Mapped, nullptr, true}; }
constexpr ParamSpec I(std::string_view n) { return {n, ParamUse::Ignored, nullptr, true}; }
constexpr ParamSpec D(std::string_view n, DefaultCheck f) { return {n, ParamUse::Default, f, true}; }
constexpr ParamSpec KwM(std::string_view n) { return {n, ParamUse::Mapped, nullptr, false}; }
constexpr ParamSpec KwI(std::string_view n) { return {n, ParamUse::Ignored, nullptr, false}; }

}  // namespace vocab_detail

/// Arguments of one call bound to parameter names.
struct BoundArgs {
    std::map<std::string, const Node*, std::less<>> values;
    std::vector<const Node*> extra_positional;  // only for variadic constructors
    SourceLocation loc;

    const Node* get(std::string_view name) const {
        auto it = values.find(name);
        return it == values.end() ? nullptr : it->second;
    }
    bool has(std::string_view name) const { return get(name) != nullptr; }
};

/// Binds `call` arguments against `params`. Unknown keywords, surplus positionals, starred
/// arguments and non-default values of Default parameters raise UnsupportedAttribute.
inline BoundArgs bind_arguments(const Node& call, std::string_view ctor,
                                const std::vector<ParamSpec>& params, const SymbolTable& symbols,
                                bool variadic = false) {
    BoundArgs out;
    out.loc = call.loc;
    size_t next_positional = 0;
    auto fail = [&](const Node& at, const std::string& msg) -> void {
        throw MigrationError(ErrorCode::UnsupportedAttribute, std::string(ctor) + ": " + msg, at.loc);
    };
    for (size_t i = 1; i < call.size(); ++i) {
        const Node& arg = call[i];
        if (arg.is(NodeKind::Starred) || arg.is(NodeKind::DoubleStarred)) {
            fail(arg, "starred arguments are not supported");
        }
        if (arg.is(NodeKind::Keyword)) {
            auto it = std::find_if(params.begin(), params.end(), [&](const ParamSpec& p) { return p.name == arg.text; });
            if (it == params.end()) fail(arg, "unsupported argument '" + arg.text + "'");
            if (!out.values.emplace(std::string(it->name), &arg[0]).second) {
                fail(arg, "argument '" + arg.text + "' given twice");
            }
            continue;
        }
        if (variadic) {
            out.extra_positional.push_back(&arg);
            continue;
        }
        while (next_positional < params.size() && !params[next_positional].positional) ++next_positional;
        if (next_positional >= params.size()) fail(arg, "too many positional arguments");
        const ParamSpec& p = params[next_positional++];
        if (!out.values.emplace(std::string(p.name), &arg).second) {
            fail(arg, "argument '" + std::string(p.name) + "' given twice");
        }
    }
    for (const auto& p : params) {
        if (p.use != ParamUse::Default) continue;
        if (const Node* v = out.get(p.name)) {
            Const c = eval_const(*v, symbols);
            if (!c.known() || !p.is_default(c)) {
                fail(*v, "argument '" + std::string(p.name) + "' is only supported at its default value, got " +
                             c.repr());
            }
        }
    }
    return out;
}

/// What a recognized constructor call builds.
struct Construct {
    enum class Role {
        Layer,        // `layer` holds the pivot layer (TF activation keyword included)
        Activation,   // standalone activation module, `activation`
        ZeroPad,      // TF zero padding, `amounts` per spatial dim
        TensorOp,     // `op`
        Input,        // TF input declaration, `input_shape`
        Sequential,   // a nested Sequential container
    };

    Role role = Role::Layer;
    LayerSpec layer;
    ActivationRef activation;
    Ints amounts;
    TensorOpSpec op;
    std::optional<Ints> input_shape;  // from input_shape=/shape= keywords
    std::string name;                 // TF name= keyword
    std::string path;                 // canonical constructor path
    SourceLocation loc;
};

namespace vocab_detail {

[[noreturn]] inline void unsupported(const Node& at, const std::string& msg) {
    throw MigrationError(ErrorCode::UnsupportedAttribute, msg, at.loc);
}

inline int64_t require_int(const Node* n, const SymbolTable& st, std::string_view what) {
    Const c = eval_const(*n, st);
    if (!c.is_int()) unsupported(*n, std::string(what) + " must be a constant integer, got " + c.repr());
    return c.i;
}

inline double require_number(const Node* n, const SymbolTable& st, std::string_view what) {
    Const c = eval_const(*n, st);
    if (!c.is_number()) unsupported(*n, std::string(what) + " must be a constant number, got " + c.repr());
    return c.number();
}

inline bool require_bool(const Node* n, const SymbolTable& st, std::string_view what) {
    Const c = eval_const(*n, st);
    if (c.type != Const::Type::Bool) unsupported(*n, std::string(what) + " must be True or False, got " + c.repr());
    return c.b;
}

/// Int or int tuple expanded to `rank` entries.
inline Ints require_tuple(const Node* n, const SymbolTable& st, std::string_view what, int rank) {
    Const c = eval_const(*n, st);
    auto t = c.int_tuple();
    if (!t) unsupported(*n, std::string(what) + " must be a constant integer or tuple, got " + c.repr());
    if (c.is_int()) return Ints(static_cast<size_t>(rank), c.i);
    if (t->size() != static_cast<size_t>(rank)) {
        unsupported(*n, std::string(what) + " needs " + std::to_string(rank) + " entries, got " + c.repr());
    }
    return *t;
}

inline std::optional<Ints> optional_shape(const Node* n, const SymbolTable& st) {
    if (!n) return std::nullopt;
    Const c = eval_const(*n, st);
    if (c.type == Const::Type::Tuple) {
        Ints out;
        for (const auto& it : c.items) {
            if (it.type == Const::Type::None) unsupported(*n, "input shape dims must be known integers");
            if (!it.is_int()) unsupported(*n, "input shape must be a constant tuple, got " + c.repr());
            out.push_back(it.i);
        }
        return out;
    }
    if (c.is_int()) return Ints{c.i};
    unsupported(*n, "input shape must be a constant tuple, got " + c.repr());
}

/// Activation keyword value: string literal, None, a known activation function path, or a
/// runtime symbol (Dynamic).
inline ActivationRef activation_value(const Node* n, const SymbolTable& st, const ImportMap& imports) {
    if (!n) return ActivationRef::none();
    Const c = eval_const(*n, st);
    if (c.type == Const::Type::None) return ActivationRef::none();
    if (c.is_str()) {
        if (c.s == "linear") return ActivationRef::none();
        if (auto a = parse_activation(c.s)) return ActivationRef::of(*a);
        unsupported(*n, "unsupported activation '" + c.s + "'");
    }
    if (n->is(NodeKind::Name) || n->is(NodeKind::Attribute)) {
        const std::string path = imports.resolve(*n);
        for (std::string_view prefix : {"keras.activations.", "tensorflow.nn."}) {
            if (path.rfind(prefix, 0) == 0) {
                if (auto a = parse_activation(path.substr(prefix.size()))) return ActivationRef::of(*a);
                unsupported(*n, "unsupported activation function " + path);
            }
        }
        if (!c.known()) {
            std::string sym = dotted_name(*n);
            sym = sym.substr(sym.rfind('.') + 1);
            return ActivationRef::dynamic(sym);
        }
    }
    unsupported(*n, "activation must be a name string or a variable");
}

inline Padding tf_padding(const Node* n, const SymbolTable& st) {
    if (!n) return Padding::valid();
    Const c = eval_const(*n, st);
    if (c.is_str()) {
        std::string v = c.s;
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
        if (v == "valid") return Padding::valid();
        if (v == "same") return Padding::same();
    }
    unsupported(*n, "padding must be 'valid' or 'same', got " + c.repr());
}

inline Padding pt_padding(const Node* n, const SymbolTable& st, int rank) {
    if (!n) return Padding::valid();
    Const c = eval_const(*n, st);
    if (c.is_str()) {
        if (c.s == "valid") return Padding::valid();
        if (c.s == "same") return Padding::same();
        unsupported(*n, "padding must be 'valid', 'same' or integers, got " + c.repr());
    }
    return Padding::explicit_(require_tuple(n, st, "padding", rank)).normalized();
}

inline std::vector<ParamSpec> with_tf_common(std::vector<ParamSpec> params) {
    for (auto p : {KwM("name"), KwM("input_shape"), KwI("dtype"), KwI("trainable"), KwI("batch_size")}) {
        params.push_back(p);
    }
    return params;
}

inline std::vector<ParamSpec> tf_initializers() {
    return {KwI("kernel_initializer"), KwI("bias_initializer"), KwI("kernel_regularizer"),
            KwI("bias_regularizer"),   KwI("activity_regularizer"), KwI("kernel_constraint"),
            KwI("bias_constraint")};
}

inline std::vector<ParamSpec> concat(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ----- channel-last (Keras) constructors ------------------------------------------------

inline std::optional<Construct> tf_construct(const Node& call, const std::string& path, const SymbolTable& st,
                                             const ImportMap& imports) {
    constexpr std::string_view kLayers = "keras.layers.";
    Construct out;
    out.path = path;
    out.loc = call.loc;
    if (path == "keras.Input" || path == "keras.layers.Input" || path == "keras.layers.InputLayer") {
        auto args = bind_arguments(call, path,
                                   {M("shape"), KwM("input_shape"), KwI("batch_size"), KwI("name"), KwI("dtype"),
                                    KwI("sparse"), KwI("ragged")},
                                   st);
        out.role = Construct::Role::Input;
        out.input_shape = optional_shape(args.get("shape") ? args.get("shape") : args.get("input_shape"), st);
        if (!out.input_shape) unsupported(call, "input declaration without a shape");
        return out;
    }
    if (path.rfind(kLayers, 0) != 0) return std::nullopt;
    const std::string name = path.substr(kLayers.size());

    auto finish = [&](const BoundArgs& args) {
        if (const Node* n = args.get("name")) {
            Const c = eval_const(*n, st);
            if (!c.is_str()) unsupported(*n, "layer name must be a string literal");
            out.name = c.s;
        }
        out.input_shape = optional_shape(args.get("input_shape"), st);
    };

    auto spatial = [&](std::string_view base) -> int {
        for (int r = 1; r <= 3; ++r) {
            if (name == std::string(base) + std::to_string(r) + "D") return r;
        }
        return 0;
    };

    if (name == "Dense") {
        auto args = bind_arguments(call, path,
                                   with_tf_common(concat({M("units"), M("activation"), D("use_bias", is_true)},
                                                         tf_initializers())),
                                   st);
        if (!args.has("units")) unsupported(call, "Dense needs units");
        out.layer = make_layer(LayerKind::Linear);
        out.layer.as<LinearAttrs>().out_features = require_int(args.get("units"), st, "units");
        out.layer.activation = activation_value(args.get("activation"), st, imports);
        finish(args);
        return out;
    }
    if (int r = spatial("Conv")) {
        auto args = bind_arguments(
            call, path,
            with_tf_common(concat({M("filters"), M("kernel_size"), M("strides"), M("padding"),
                                   D("data_format", channels_last), D("dilation_rate", all_ones), D("groups", is_one),
                                   M("activation"), D("use_bias", is_true)},
                                  tf_initializers())),
            st);
        if (!args.has("filters") || !args.has("kernel_size")) unsupported(call, name + " needs filters and kernel_size");
        out.layer = make_layer(conv_kind(r));
        auto& a = out.layer.as<ConvAttrs>();
        a.out_channels = require_int(args.get("filters"), st, "filters");
        a.kernel = require_tuple(args.get("kernel_size"), st, "kernel_size", r);
        if (args.has("strides")) a.stride = require_tuple(args.get("strides"), st, "strides", r);
        a.padding = tf_padding(args.get("padding"), st);
        out.layer.activation = activation_value(args.get("activation"), st, imports);
        finish(args);
        return out;
    }
    const int max_rank = std::max(spatial("MaxPooling"), spatial("MaxPool"));
    const int avg_rank = std::max(spatial("AveragePooling"), spatial("AvgPool"));
    if (max_rank || avg_rank) {
        auto args = bind_arguments(call, path,
                                   with_tf_common({M("pool_size"), M("strides"), M("padding"),
                                                   D("data_format", channels_last)}),
                                   st);
        const int r = max_rank ? max_rank : avg_rank;
        out.layer = make_layer(max_rank ? max_pool_kind(r) : avg_pool_kind(r));
        auto& a = out.layer.as<PoolAttrs>();
        if (args.has("pool_size")) a.kernel = require_tuple(args.get("pool_size"), st, "pool_size", r);
        a.stride = a.kernel;
        if (const Node* s = args.get("strides"); s && eval_const(*s, st).type != Const::Type::None) {
            a.stride = require_tuple(s, st, "strides", r);
        }
        a.padding = tf_padding(args.get("padding"), st);
        finish(args);
        return out;
    }
    if (name == "Flatten") {
        auto args = bind_arguments(call, path, with_tf_common({D("data_format", channels_last)}), st);
        out.layer = make_layer(LayerKind::Flatten);
        finish(args);
        return out;
    }
    if (name == "Dropout") {
        auto args = bind_arguments(call, path, with_tf_common({M("rate"), D("noise_shape", is_none), I("seed")}), st);
        if (!args.has("rate")) unsupported(call, "Dropout needs rate");
        out.layer = make_layer(LayerKind::Dropout);
        out.layer.as<DropoutAttrs>().rate = require_number(args.get("rate"), st, "rate");
        finish(args);
        return out;
    }
    if (name == "Embedding") {
        auto args = bind_arguments(call, path,
                                   with_tf_common({M("input_dim"), M("output_dim"), KwI("embeddings_initializer"),
                                                   KwI("embeddings_regularizer"), KwI("activity_regularizer"),
                                                   KwI("embeddings_constraint"), {"mask_zero", ParamUse::Default, is_false, false},
                                                   KwI("input_length")}),
                                   st);
        if (!args.has("input_dim") || !args.has("output_dim")) unsupported(call, "Embedding needs input_dim and output_dim");
        out.layer = make_layer(LayerKind::Embedding);
        auto& a = out.layer.as<EmbeddingAttrs>();
        a.vocab_size = require_int(args.get("input_dim"), st, "input_dim");
        a.embedding_dim = require_int(args.get("output_dim"), st, "output_dim");
        finish(args);
        return out;
    }
    if (name == "SimpleRNN" || name == "LSTM" || name == "GRU") {
        std::vector<ParamSpec> params = {M("units"), D("activation", is_tanh)};
        if (name != "SimpleRNN") params.push_back(D("recurrent_activation", is_sigmoid));
        params = concat(params, {D("use_bias", is_true), KwI("kernel_initializer"), KwI("recurrent_initializer"),
                                 KwI("bias_initializer"), KwI("unit_forget_bias"), KwI("kernel_regularizer"),
                                 KwI("recurrent_regularizer"), KwI("bias_regularizer"), KwI("activity_regularizer"),
                                 KwI("kernel_constraint"), KwI("recurrent_constraint"), KwI("bias_constraint"),
                                 {"dropout", ParamUse::Default, is_zero, false},
                                 {"recurrent_dropout", ParamUse::Default, is_zero, false}, KwM("return_sequences"),
                                 {"return_state", ParamUse::Default, is_false, false},
                                 {"go_backwards", ParamUse::Default, is_false, false},
                                 {"stateful", ParamUse::Default, is_false, false}, KwI("unroll"),
                                 {"reset_after", ParamUse::Default, is_true, false}});
        auto args = bind_arguments(call, path, with_tf_common(params), st);
        if (!args.has("units")) unsupported(call, name + " needs units");
        out.layer = make_layer(name == "LSTM" ? LayerKind::LSTM : name == "GRU" ? LayerKind::GRU : LayerKind::SimpleRNN);
        auto& a = out.layer.as<RecurrentAttrs>();
        a.hidden_size = require_int(args.get("units"), st, "units");
        if (const Node* rs = args.get("return_sequences")) a.return_sequences = require_bool(rs, st, "return_sequences");
        finish(args);
        return out;
    }
    if (name == "Bidirectional") {
        auto args = bind_arguments(call, path,
                                   with_tf_common({M("layer"), D("merge_mode", is_concat), KwI("weights"),
                                                   KwI("backward_layer")}),
                                   st);
        const Node* inner = args.get("layer");
        if (!inner || !inner->is(NodeKind::Call)) unsupported(call, "Bidirectional needs an inline recurrent layer");
        if (args.has("backward_layer")) unsupported(call, "Bidirectional backward_layer is not supported");
        auto wrapped = tf_construct(*inner, imports.resolve((*inner)[0]), st, imports);
        if (!wrapped || wrapped->role != Construct::Role::Layer || !is_recurrent(wrapped->layer.kind)) {
            unsupported(*inner, "Bidirectional wraps a recurrent layer only");
        }
        out.layer = wrapped->layer;
        out.layer.as<RecurrentAttrs>().bidirectional = true;
        finish(args);
        if (out.name.empty()) out.name = wrapped->name;
        if (!out.input_shape) out.input_shape = wrapped->input_shape;
        return out;
    }
    if (int r = spatial("ZeroPadding")) {
        auto args = bind_arguments(call, path, with_tf_common({M("padding"), D("data_format", channels_last)}), st);
        out.role = Construct::Role::ZeroPad;
        out.amounts.assign(static_cast<size_t>(r), 1);
        if (const Node* p = args.get("padding")) {
            Const c = eval_const(*p, st);
            if (auto flat = c.int_tuple(); flat && (c.is_int() || flat->size() == static_cast<size_t>(r))) {
                out.amounts = require_tuple(p, st, "padding", r);
            } else if (c.type == Const::Type::Tuple && c.items.size() == static_cast<size_t>(r)) {
                out.amounts.clear();
                for (const auto& pair : c.items) {
                    auto t = pair.int_tuple();
                    if (!t || t->size() != 2 || (*t)[0] != (*t)[1]) {
                        unsupported(*p, "asymmetric zero padding is not supported");
                    }
                    out.amounts.push_back((*t)[0]);
                }
            } else {
                unsupported(*p, "padding must be an integer or per-dimension tuple");
            }
        }
        finish(args);
        return out;
    }
    if (name == "Activation") {
        auto args = bind_arguments(call, path, with_tf_common({M("activation")}), st);
        out.role = Construct::Role::Activation;
        out.activation = activation_value(args.get("activation"), st, imports);
        finish(args);
        return out;
    }
    if (name == "ReLU" || name == "Softmax") {
        auto args = bind_arguments(call, path,
                                   with_tf_common(name == "ReLU"
                                                      ? std::vector<ParamSpec>{D("max_value", is_none),
                                                                               D("negative_slope", is_zero),
                                                                               D("threshold", is_zero)}
                                                      : std::vector<ParamSpec>{D("axis", is_minus_one)}),
                                   st);
        out.role = Construct::Role::Activation;
        out.activation = ActivationRef::of(name == "ReLU" ? Activation::Relu : Activation::Softmax);
        finish(args);
        return out;
    }
    if (name == "Reshape") {
        auto args = bind_arguments(call, path, with_tf_common({M("target_shape")}), st);
        if (!args.has("target_shape")) unsupported(call, "Reshape needs target_shape");
        auto t = eval_const(*args.get("target_shape"), st).int_tuple();
        if (!t) unsupported(call, "Reshape target_shape must be a constant tuple");
        out.role = Construct::Role::TensorOp;
        out.op = TensorOpSpec::reshape(*t);
        finish(args);
        return out;
    }
    if (name == "Permute") {
        auto args = bind_arguments(call, path, with_tf_common({M("dims")}), st);
        auto t = args.has("dims") ? eval_const(*args.get("dims"), st).int_tuple() : std::nullopt;
        if (!t) unsupported(call, "Permute dims must be a constant tuple");
        Ints order{0};
        order.insert(order.end(), t->begin(), t->end());
        out.role = Construct::Role::TensorOp;
        out.op = TensorOpSpec::permute(order);
        finish(args);
        return out;
    }
    if (name == "Concatenate") {
        auto args = bind_arguments(call, path, with_tf_common({M("axis")}), st);
        out.role = Construct::Role::TensorOp;
        out.op = TensorOpSpec::concatenate(args.has("axis") ? require_int(args.get("axis"), st, "axis") : -1);
        finish(args);
        return out;
    }
    if (name == "Add" || name == "Multiply") {
        auto args = bind_arguments(call, path, with_tf_common({}), st);
        out.role = Construct::Role::TensorOp;
        out.op = TensorOpSpec::binary(name == "Add" ? TensorOpKind::Add : TensorOpKind::Multiply);
        finish(args);
        return out;
    }
    throw MigrationError(ErrorCode::UnsupportedLayer, "unsupported layer " + path, call.loc);
}

// ----- channel-first (torch.nn) constructors --------------------------------------------

inline std::optional<Construct> pt_construct(const Node& call, const std::string& path, const SymbolTable& st) {
    constexpr std::string_view kNn = "torch.nn.";
    Construct out;
    out.path = path;
    out.loc = call.loc;
    if (path.rfind(kNn, 0) != 0) return std::nullopt;
    const std::string name = path.substr(kNn.size());
    auto spatial = [&](std::string_view base) -> int {
        for (int r = 1; r <= 3; ++r) {
            if (name == std::string(base) + std::to_string(r) + "d") return r;
        }
        return 0;
    };
    const std::vector<ParamSpec> device = {KwI("device"), KwI("dtype")};

    if (name == "Linear") {
        auto args = bind_arguments(call, path, concat({M("in_features"), M("out_features"), D("bias", is_true)}, device), st);
        if (!args.has("in_features") || !args.has("out_features")) unsupported(call, "Linear needs in_features and out_features");
        out.layer = make_layer(LayerKind::Linear);
        auto& a = out.layer.as<LinearAttrs>();
        a.in_features = require_int(args.get("in_features"), st, "in_features");
        a.out_features = require_int(args.get("out_features"), st, "out_features");
        return out;
    }
    if (int r = spatial("Conv")) {
        auto args = bind_arguments(call, path,
                                   concat({M("in_channels"), M("out_channels"), M("kernel_size"), M("stride"), M("padding"),
                                           D("dilation", all_ones), D("groups", is_one), D("bias", is_true),
                                           D("padding_mode", is_zeros)},
                                          device),
                                   st);
        if (!args.has("in_channels") || !args.has("out_channels") || !args.has("kernel_size")) {
            unsupported(call, name + " needs in_channels, out_channels and kernel_size");
        }
        out.layer = make_layer(conv_kind(r));
        auto& a = out.layer.as<ConvAttrs>();
        a.in_channels = require_int(args.get("in_channels"), st, "in_channels");
        a.out_channels = require_int(args.get("out_channels"), st, "out_channels");
        a.kernel = require_tuple(args.get("kernel_size"), st, "kernel_size", r);
        if (args.has("stride")) a.stride = require_tuple(args.get("stride"), st, "stride", r);
        a.padding = pt_padding(args.get("padding"), st, r);
        return out;
    }
    const int max_rank = spatial("MaxPool");
    const int avg_rank = spatial("AvgPool");
    if (max_rank || avg_rank) {
        std::vector<ParamSpec> params = {M("kernel_size"), M("stride"), M("padding")};
        if (max_rank) {
            params = concat(params, {D("dilation", all_ones), D("return_indices", is_false), D("ceil_mode", is_false)});
        } else {
            params = concat(params, {D("ceil_mode", is_false), I("count_include_pad")});
            if (avg_rank > 1) params.push_back(D("divisor_override", is_none));
        }
        auto args = bind_arguments(call, path, params, st);
        if (!args.has("kernel_size")) unsupported(call, name + " needs kernel_size");
        const int r = max_rank ? max_rank : avg_rank;
        out.layer = make_layer(max_rank ? max_pool_kind(r) : avg_pool_kind(r));
        auto& a = out.layer.as<PoolAttrs>();
        a.kernel = require_tuple(args.get("kernel_size"), st, "kernel_size", r);
        a.stride = a.kernel;
        if (const Node* s = args.get("stride"); s && eval_const(*s, st).type != Const::Type::None) {
            a.stride = require_tuple(s, st, "stride", r);
        }
        a.padding = pt_padding(args.get("padding"), st, r);
        return out;
    }
    if (name == "Flatten") {
        bind_arguments(call, path, {D("start_dim", is_one), D("end_dim", is_minus_one)}, st);
        out.layer = make_layer(LayerKind::Flatten);
        return out;
    }
    if (name == "Dropout") {
        auto args = bind_arguments(call, path, {M("p"), I("inplace")}, st);
        out.layer = make_layer(LayerKind::Dropout);
        out.layer.as<DropoutAttrs>().rate = args.has("p") ? require_number(args.get("p"), st, "p") : 0.5;
        return out;
    }
    if (name == "Embedding") {
        auto args = bind_arguments(call, path,
                                   concat({M("num_embeddings"), M("embedding_dim"), I("padding_idx"), D("max_norm", is_none),
                                           I("norm_type"), D("scale_grad_by_freq", is_false), I("sparse"), KwI("_weight"),
                                           KwI("_freeze")},
                                          device),
                                   st);
        if (!args.has("num_embeddings") || !args.has("embedding_dim")) {
            unsupported(call, "Embedding needs num_embeddings and embedding_dim");
        }
        out.layer = make_layer(LayerKind::Embedding);
        auto& a = out.layer.as<EmbeddingAttrs>();
        a.vocab_size = require_int(args.get("num_embeddings"), st, "num_embeddings");
        a.embedding_dim = require_int(args.get("embedding_dim"), st, "embedding_dim");
        return out;
    }
    if (name == "RNN" || name == "LSTM" || name == "GRU") {
        std::vector<ParamSpec> params = {M("input_size"), M("hidden_size"), D("num_layers", is_one)};
        if (name == "RNN") params.push_back(D("nonlinearity", is_tanh));
        params = concat(params, {D("bias", is_true), M("batch_first"), D("dropout", is_zero), M("bidirectional")});
        if (name == "LSTM") params.push_back(D("proj_size", is_zero));
        auto args = bind_arguments(call, path, concat(params, device), st);
        if (!args.has("input_size") || !args.has("hidden_size")) unsupported(call, name + " needs input_size and hidden_size");
        if (!args.has("batch_first") || !require_bool(args.get("batch_first"), st, "batch_first")) {
            unsupported(call, name + " requires batch_first=True");
        }
        out.layer = make_layer(name == "LSTM" ? LayerKind::LSTM : name == "GRU" ? LayerKind::GRU : LayerKind::SimpleRNN);
        auto& a = out.layer.as<RecurrentAttrs>();
        a.input_size = require_int(args.get("input_size"), st, "input_size");
        a.hidden_size = require_int(args.get("hidden_size"), st, "hidden_size");
        if (const Node* b = args.get("bidirectional")) a.bidirectional = require_bool(b, st, "bidirectional");
        return out;
    }
    if (name == "ReLU" || name == "Sigmoid" || name == "Tanh") {
        bind_arguments(call, path, name == "ReLU" ? std::vector<ParamSpec>{I("inplace")} : std::vector<ParamSpec>{}, st);
        out.role = Construct::Role::Activation;
        out.activation = ActivationRef::of(name == "ReLU" ? Activation::Relu
                                           : name == "Sigmoid" ? Activation::Sigmoid
                                                               : Activation::Tanh);
        return out;
    }
    if (name == "Softmax") {
        auto args = bind_arguments(call, path, {M("dim")}, st);
        if (const Node* d = args.get("dim")) {
            const int64_t dim = require_int(d, st, "dim");
            if (dim != 1 && dim != -1) unsupported(*d, "Softmax supports dim=1 or dim=-1 only");
        }
        out.role = Construct::Role::Activation;
        out.activation = ActivationRef::of(Activation::Softmax);
        return out;
    }
    if (name == "LeakyReLU") {
        auto args = bind_arguments(call, path, {M("negative_slope"), I("inplace")}, st);
        const double slope = args.has("negative_slope") ? require_number(args.get("negative_slope"), st, "negative_slope") : 0.01;
        if (slope != 0.2) unsupported(call, "LeakyReLU is supported with negative_slope=0.2 only");
        out.role = Construct::Role::Activation;
        out.activation = ActivationRef::of(Activation::LeakyRelu);
        return out;
    }
    if (name == "Sequential") {
        out.role = Construct::Role::Sequential;
        return out;
    }
    throw MigrationError(ErrorCode::UnsupportedLayer, "unsupported layer " + path, call.loc);
}

/// The file-local Permute/Reshape/Transpose helper modules the channel-first generator emits.
inline std::optional<Construct> pt_helper_construct(const Node& call, const SymbolTable& st) {
    if (!call[0].is(NodeKind::Name)) return std::nullopt;
    const std::string& name = call[0].text;
    if (name != "Permute" && name != "Reshape" && name != "Transpose") return std::nullopt;
    auto args = bind_arguments(call, name, {}, st, true);
    Ints dims;
    for (const Node* n : args.extra_positional) dims.push_back(require_int(n, st, "dims"));
    Construct out;
    out.role = Construct::Role::TensorOp;
    out.path = name;
    out.loc = call.loc;
    if (name == "Permute") out.op = TensorOpSpec::permute(dims);
    if (name == "Reshape") out.op = TensorOpSpec::reshape(dims);
    if (name == "Transpose") {
        if (dims.size() != 2) unsupported(call, "Transpose takes two axes");
        out.op = TensorOpSpec::transpose(dims[0], dims[1]);
    }
    return out;
}

}  // namespace vocab_detail

/// Interprets a constructor call in the given framework. Returns nullopt for calls outside the
/// framework's layer namespace; throws UnsupportedLayer for unknown layers inside it.
inline std::optional<Construct> interpret_constructor(const Node& call, Framework fw, const ImportMap& imports,
                                                      const SymbolTable& symbols) {
    if (!call.is(NodeKind::Call)) return std::nullopt;
    const std::string path = imports.resolve(call[0]);
    if (fw == Framework::ChannelLast) {
        if (path.empty()) return std::nullopt;
        return vocab_detail::tf_construct(call, path, symbols, imports);
    }
    if (path.empty()) return vocab_detail::pt_helper_construct(call, symbols);
    return vocab_detail::pt_construct(call, path, symbols);
}

/// Base used for auto-generated module names.
inline std::string auto_name_base(LayerKind k) {
    std::string s(to_string(k));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace nnmig
