// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nnmig/pivot.hpp"

// Pivot document (*.nn.json), schema_version 1:
//
//   { "schema_version": 1, "name": ..., "input_shape": ["batch", 32, 32, 3],
//     "modules": [ {"name", "kind", "inputs", "attributes"} ],
//     "config": {...}, "datasets": [...], "sub_networks": [ {name, input_shape, modules} ] }
//
// Keys are written in a fixed order so equal networks serialize to identical bytes.

namespace nnmig {

inline constexpr int kPivotSchemaVersion = 1;

namespace json_detail {

using Json = nlohmann::ordered_json;

inline Json ints(const Ints& v) {
    Json a = Json::array();
    for (int64_t x : v) a.push_back(x);
    return a;
}

inline Json padding_to_json(const Padding& p) {
    switch (p.mode) {
    case Padding::Mode::Valid: return "valid";
    case Padding::Mode::Same: return "same";
    case Padding::Mode::Explicit: return ints(p.amounts);
    }
    return "valid";
}

inline Json activation_to_json(const ActivationRef& a) {
    if (a.is_literal()) return std::string(to_string(a.literal));
    Json d = Json::object();
    d["dynamic"] = a.symbol;
    return d;
}

inline Json shape_to_json(const TensorShape& s) {
    Json a = Json::array();
    for (const auto& d : s.dims) {
        if (d.batch) a.push_back("batch");
        else a.push_back(d.value);
    }
    return a;
}

inline Json layer_attributes(const LayerSpec& l) {
    Json j = Json::object();
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, LinearAttrs>) {
                if (a.in_features) j["in_features"] = *a.in_features;
                j["out_features"] = a.out_features;
            } else if constexpr (std::is_same_v<T, ConvAttrs>) {
                if (a.in_channels) j["in_channels"] = *a.in_channels;
                j["out_channels"] = a.out_channels;
                j["kernel"] = ints(a.kernel);
                j["stride"] = ints(a.stride);
                j["padding"] = padding_to_json(a.padding);
            } else if constexpr (std::is_same_v<T, PoolAttrs>) {
                j["kernel"] = ints(a.kernel);
                j["stride"] = ints(a.stride);
                j["padding"] = padding_to_json(a.padding);
            } else if constexpr (std::is_same_v<T, DropoutAttrs>) {
                j["rate"] = a.rate;
            } else if constexpr (std::is_same_v<T, EmbeddingAttrs>) {
                j["vocab_size"] = a.vocab_size;
                j["embedding_dim"] = a.embedding_dim;
            } else if constexpr (std::is_same_v<T, RecurrentAttrs>) {
                if (a.input_size) j["input_size"] = *a.input_size;
                j["hidden_size"] = a.hidden_size;
                j["return_sequences"] = a.return_sequences;
                j["bidirectional"] = a.bidirectional;
            }
        },
        l.attrs);
    if (!l.activation.is_none()) j["actv_func"] = activation_to_json(l.activation);
    return j;
}

inline Json module_to_json(const ModuleSpec& m) {
    Json j = Json::object();
    j["name"] = m.name;
    Json attrs = Json::object();
    if (const auto* l = std::get_if<LayerSpec>(&m.kind)) {
        j["kind"] = std::string(to_string(l->kind));
        attrs = layer_attributes(*l);
    } else if (const auto* op = std::get_if<TensorOpSpec>(&m.kind)) {
        j["kind"] = std::string(to_string(op->kind));
        switch (op->kind) {
        case TensorOpKind::Permute: attrs["order"] = ints(op->dims); break;
        case TensorOpKind::Reshape: attrs["shape"] = ints(op->dims); break;
        case TensorOpKind::Transpose: attrs["axes"] = ints(op->dims); break;
        case TensorOpKind::Concatenate: attrs["axis"] = op->axis; break;
        default: break;
        }
    } else {
        j["kind"] = "SubNN";
        attrs["network"] = m.subnet().network;
    }
    Json inputs = Json::array();
    for (const auto& in : m.inputs) inputs.push_back(in);
    j["inputs"] = inputs;
    j["attributes"] = attrs;
    return j;
}

inline Json network_body(const PivotNN& nn) {
    Json j = Json::object();
    j["name"] = nn.name;
    if (nn.input_shape) j["input_shape"] = shape_to_json(*nn.input_shape);
    Json modules = Json::array();
    for (const auto& m : nn.modules) modules.push_back(module_to_json(m));
    j["modules"] = modules;
    return j;
}

// ---------------------------------------------------------------------------
// Reading
// ---------------------------------------------------------------------------

[[noreturn]] inline void fail(const std::string& pointer, const std::string& what) {
    throw MigrationError(ErrorCode::MalformedPivot, "at " + (pointer.empty() ? "/" : pointer) + ": " + what);
}

inline const Json& require(const Json& obj, const char* key, const std::string& ptr) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, std::string("missing key '") + key + "'");
    return *it;
}

inline void allow_only(const Json& obj, std::initializer_list<const char*> keys, const std::string& ptr) {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) fail(ptr, "unexpected key '" + it.key() + "'");
    }
}

inline int64_t read_int(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    return j.get<int64_t>();
}

inline double read_number(const Json& j, const std::string& ptr) {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
}

inline bool read_bool(const Json& j, const std::string& ptr) {
    if (!j.is_boolean()) fail(ptr, "expected a boolean");
    return j.get<bool>();
}

inline std::string read_string(const Json& j, const std::string& ptr) {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
}

inline Ints read_ints(const Json& j, const std::string& ptr) {
    if (!j.is_array()) fail(ptr, "expected an array of integers");
    Ints out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(read_int(j[i], ptr + "/" + std::to_string(i)));
    return out;
}

inline Padding read_padding(const Json& j, const std::string& ptr) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "valid") return Padding::valid();
        if (s == "same") return Padding::same();
        fail(ptr, "padding must be \"valid\", \"same\" or an integer list");
    }
    return Padding::explicit_(read_ints(j, ptr));
}

inline ActivationRef read_activation(const Json& j, const std::string& ptr) {
    if (j.is_null()) return ActivationRef::none();
    if (j.is_string()) {
        auto name = j.get<std::string>();
        auto a = parse_activation(name);
        if (!a) fail(ptr, "unsupported activation '" + name + "'");
        return ActivationRef::of(*a);
    }
    allow_only(j, {"dynamic"}, ptr);
    return ActivationRef::dynamic(read_string(require(j, "dynamic", ptr), ptr + "/dynamic"));
}

inline TensorShape read_shape(const Json& j, const std::string& ptr) {
    if (!j.is_array()) fail(ptr, "expected a shape array");
    TensorShape s;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto p = ptr + "/" + std::to_string(i);
        if (j[i].is_string() && j[i].get<std::string>() == "batch") s.dims.push_back(Dim::symbolic_batch());
        else s.dims.push_back(Dim::known(read_int(j[i], p)));
    }
    return s;
}

inline LayerSpec read_layer(LayerKind kind, const Json& a, const std::string& ptr) {
    LayerSpec l = make_layer(kind);
    auto opt_int = [&](const char* key) -> std::optional<int64_t> {
        auto it = a.find(key);
        if (it == a.end()) return std::nullopt;
        return read_int(*it, ptr + "/" + key);
    };
    auto req_int = [&](const char* key) { return read_int(require(a, key, ptr), ptr + "/" + key); };
    auto req_ints = [&](const char* key) { return read_ints(require(a, key, ptr), ptr + "/" + key); };
    auto req_bool = [&](const char* key) { return read_bool(require(a, key, ptr), ptr + "/" + key); };

    if (a.contains("actv_func") && !accepts_activation(kind)) {
        throw MigrationError(ErrorCode::ActivationOnNonLayer,
                             "at " + ptr + "/actv_func: " + std::string(to_string(kind)) +
                                 " cannot carry an activation");
    }
    std::visit(
        [&](auto& at) {
            using T = std::decay_t<decltype(at)>;
            if constexpr (std::is_same_v<T, LinearAttrs>) {
                allow_only(a, {"in_features", "out_features", "actv_func"}, ptr);
                at.in_features = opt_int("in_features");
                at.out_features = req_int("out_features");
            } else if constexpr (std::is_same_v<T, ConvAttrs>) {
                allow_only(a, {"in_channels", "out_channels", "kernel", "stride", "padding", "actv_func"}, ptr);
                at.in_channels = opt_int("in_channels");
                at.out_channels = req_int("out_channels");
                at.kernel = req_ints("kernel");
                at.stride = req_ints("stride");
                at.padding = read_padding(require(a, "padding", ptr), ptr + "/padding");
            } else if constexpr (std::is_same_v<T, PoolAttrs>) {
                allow_only(a, {"kernel", "stride", "padding"}, ptr);
                at.kernel = req_ints("kernel");
                at.stride = req_ints("stride");
                at.padding = read_padding(require(a, "padding", ptr), ptr + "/padding");
            } else if constexpr (std::is_same_v<T, FlattenAttrs>) {
                allow_only(a, {}, ptr);
            } else if constexpr (std::is_same_v<T, DropoutAttrs>) {
                allow_only(a, {"rate"}, ptr);
                at.rate = read_number(require(a, "rate", ptr), ptr + "/rate");
            } else if constexpr (std::is_same_v<T, EmbeddingAttrs>) {
                allow_only(a, {"vocab_size", "embedding_dim"}, ptr);
                at.vocab_size = req_int("vocab_size");
                at.embedding_dim = req_int("embedding_dim");
            } else if constexpr (std::is_same_v<T, RecurrentAttrs>) {
                allow_only(a, {"input_size", "hidden_size", "return_sequences", "bidirectional"}, ptr);
                at.input_size = opt_int("input_size");
                at.hidden_size = req_int("hidden_size");
                at.return_sequences = req_bool("return_sequences");
                at.bidirectional = req_bool("bidirectional");
            }
        },
        l.attrs);
    if (auto it = a.find("actv_func"); it != a.end()) {
        l.activation = read_activation(*it, ptr + "/actv_func");
    }
    return l;
}

inline ModuleSpec read_module(const Json& j, const std::string& ptr) {
    allow_only(j, {"name", "kind", "inputs", "attributes"}, ptr);
    ModuleSpec m;
    m.name = read_string(require(j, "name", ptr), ptr + "/name");
    const auto kind = read_string(require(j, "kind", ptr), ptr + "/kind");
    const auto& inputs = require(j, "inputs", ptr);
    if (!inputs.is_array()) fail(ptr + "/inputs", "expected an array");
    for (size_t i = 0; i < inputs.size(); ++i) {
        m.inputs.push_back(read_string(inputs[i], ptr + "/inputs/" + std::to_string(i)));
    }
    static const Json kEmpty = Json::object();
    const Json& attrs = j.contains("attributes") ? j["attributes"] : kEmpty;
    const std::string aptr = ptr + "/attributes";
    if (!attrs.is_object()) fail(aptr, "expected an object");

    if (auto lk = parse_layer_kind(kind)) {
        m.kind = read_layer(*lk, attrs, aptr);
    } else if (auto ok = parse_tensor_op_kind(kind)) {
        if (attrs.contains("actv_func")) {
            throw MigrationError(ErrorCode::ActivationOnNonLayer,
                                 "at " + aptr + "/actv_func: tensor ops cannot carry an activation");
        }
        TensorOpSpec op = TensorOpSpec::binary(*ok);
        switch (*ok) {
        case TensorOpKind::Permute:
            allow_only(attrs, {"order"}, aptr);
            op.dims = read_ints(require(attrs, "order", aptr), aptr + "/order");
            break;
        case TensorOpKind::Reshape:
            allow_only(attrs, {"shape"}, aptr);
            op.dims = read_ints(require(attrs, "shape", aptr), aptr + "/shape");
            break;
        case TensorOpKind::Transpose:
            allow_only(attrs, {"axes"}, aptr);
            op.dims = read_ints(require(attrs, "axes", aptr), aptr + "/axes");
            break;
        case TensorOpKind::Concatenate:
            allow_only(attrs, {"axis"}, aptr);
            op.axis = read_int(require(attrs, "axis", aptr), aptr + "/axis");
            break;
        default: allow_only(attrs, {}, aptr); break;
        }
        m.kind = op;
    } else if (kind == "SubNN") {
        if (attrs.contains("actv_func")) {
            throw MigrationError(ErrorCode::ActivationOnNonLayer,
                                 "at " + aptr + "/actv_func: sub-networks cannot carry an activation");
        }
        allow_only(attrs, {"network"}, aptr);
        m.kind = SubNetRef{read_string(require(attrs, "network", aptr), aptr + "/network")};
    } else {
        fail(ptr + "/kind", "unknown module kind '" + kind + "'");
    }
    return m;
}

inline PivotNN read_network(const Json& j, const std::string& ptr, bool top_level) {
    if (top_level) {
        allow_only(j, {"schema_version", "name", "input_shape", "modules", "config", "datasets", "sub_networks"}, ptr);
    } else {
        allow_only(j, {"name", "input_shape", "modules"}, ptr);
    }
    PivotNN nn;
    nn.name = read_string(require(j, "name", ptr), ptr + "/name");
    if (auto it = j.find("input_shape"); it != j.end() && !it->is_null()) {
        nn.input_shape = read_shape(*it, ptr + "/input_shape");
    }
    const auto& modules = require(j, "modules", ptr);
    if (!modules.is_array()) fail(ptr + "/modules", "expected an array");
    for (size_t i = 0; i < modules.size(); ++i) {
        nn.modules.push_back(read_module(modules[i], ptr + "/modules/" + std::to_string(i)));
    }
    return nn;
}

inline TrainingConfig read_config(const Json& j, const std::string& ptr) {
    allow_only(j, {"optimizer", "learning_rate", "loss", "batch_size", "epochs", "metrics"}, ptr);
    TrainingConfig c;
    auto opt = read_string(require(j, "optimizer", ptr), ptr + "/optimizer");
    auto o = parse_optimizer(opt);
    if (!o) fail(ptr + "/optimizer", "unknown optimizer '" + opt + "'");
    c.optimizer = *o;
    c.learning_rate = read_number(require(j, "learning_rate", ptr), ptr + "/learning_rate");
    auto loss = read_string(require(j, "loss", ptr), ptr + "/loss");
    auto l = parse_loss(loss);
    if (!l) fail(ptr + "/loss", "unknown loss '" + loss + "'");
    c.loss = *l;
    c.batch_size = read_int(require(j, "batch_size", ptr), ptr + "/batch_size");
    c.epochs = read_int(require(j, "epochs", ptr), ptr + "/epochs");
    if (auto it = j.find("metrics"); it != j.end()) {
        if (!it->is_array()) fail(ptr + "/metrics", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            auto name = read_string((*it)[i], ptr + "/metrics/" + std::to_string(i));
            auto m = parse_metric(name);
            if (!m) fail(ptr + "/metrics/" + std::to_string(i), "unknown metric '" + name + "'");
            c.metrics.push_back(*m);
        }
    }
    return c;
}

inline DatasetRef read_dataset(const Json& j, const std::string& ptr) {
    allow_only(j, {"name", "path", "task", "input_format"}, ptr);
    DatasetRef d;
    d.name = read_string(require(j, "name", ptr), ptr + "/name");
    d.path = read_string(require(j, "path", ptr), ptr + "/path");
    auto task = read_string(require(j, "task", ptr), ptr + "/task");
    if (task == "classification") d.task = DatasetTask::Classification;
    else if (task == "regression") d.task = DatasetTask::Regression;
    else fail(ptr + "/task", "unknown task '" + task + "'");
    auto fmt = read_string(require(j, "input_format", ptr), ptr + "/input_format");
    if (fmt == "images") d.input_format = InputFormat::Images;
    else if (fmt == "sequences") d.input_format = InputFormat::Sequences;
    else fail(ptr + "/input_format", "unknown input format '" + fmt + "'");
    return d;
}

/// Byte offset -> 1-based line/column.
inline SourceLocation locate(std::string_view text, size_t offset) {
    SourceLocation loc{1, 1};
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++loc.line;
            loc.column = 1;
        } else {
            ++loc.column;
        }
    }
    return loc;
}

/// JSON pointer of the module a validation diagnostic names ("sub/inner" for sub-networks).
inline std::string pointer_for(const PivotNN& nn, const std::string& module) {
    auto slash = module.find('/');
    if (slash != std::string::npos) {
        const std::string sub = module.substr(0, slash);
        for (size_t i = 0; i < nn.sub_networks.size(); ++i) {
            if (nn.sub_networks[i].name == sub) {
                return "/sub_networks/" + std::to_string(i) + pointer_for(nn.sub_networks[i], module.substr(slash + 1));
            }
        }
    }
    for (size_t i = 0; i < nn.modules.size(); ++i) {
        if (nn.modules[i].name == module) return "/modules/" + std::to_string(i);
    }
    return "";
}

}  // namespace json_detail

/// Deterministic pivot document. Requires validate(nn) to be empty.
inline std::string serialize(const PivotNN& nn) {
    if (auto diags = validate(nn); !diags.empty()) {
        throw MigrationError(diags.front().code,
                             "cannot serialize invalid pivot: " + diags.front().message, {},
                             diags.front().module);
    }
    using json_detail::Json;
    Json doc = Json::object();
    doc["schema_version"] = kPivotSchemaVersion;
    Json body = json_detail::network_body(nn);
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    if (nn.config) {
        const auto& c = *nn.config;
        Json cj = Json::object();
        cj["optimizer"] = std::string(to_string(c.optimizer));
        cj["learning_rate"] = c.learning_rate;
        cj["loss"] = std::string(to_string(c.loss));
        cj["batch_size"] = c.batch_size;
        cj["epochs"] = c.epochs;
        Json metrics = Json::array();
        for (auto m : c.metrics) metrics.push_back(std::string(to_string(m)));
        cj["metrics"] = metrics;
        doc["config"] = cj;
    }
    if (!nn.datasets.empty()) {
        Json ds = Json::array();
        for (const auto& d : nn.datasets) {
            Json dj = Json::object();
            dj["name"] = d.name;
            dj["path"] = d.path;
            dj["task"] = d.task == DatasetTask::Classification ? "classification" : "regression";
            dj["input_format"] = d.input_format == InputFormat::Images ? "images" : "sequences";
            ds.push_back(dj);
        }
        doc["datasets"] = ds;
    }
    if (!nn.sub_networks.empty()) {
        Json subs = Json::array();
        for (const auto& s : nn.sub_networks) subs.push_back(json_detail::network_body(s));
        doc["sub_networks"] = subs;
    }
    return doc.dump(2) + "\n";
}

/// Parses and validates a pivot document. Malformed JSON reports line:column; schema and
/// invariant violations report the JSON pointer of the offending element.
inline PivotNN deserialize(std::string_view text) {
    using json_detail::Json;
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        auto loc = json_detail::locate(text, e.byte > 0 ? e.byte - 1 : 0);
        throw MigrationError(ErrorCode::MalformedPivot, std::string("invalid JSON: ") + e.what(), loc);
    }
    if (!doc.is_object()) json_detail::fail("", "expected a JSON object");
    const auto version = json_detail::read_int(json_detail::require(doc, "schema_version", ""), "/schema_version");
    if (version != kPivotSchemaVersion) {
        json_detail::fail("/schema_version", "unsupported schema version " + std::to_string(version));
    }
    PivotNN nn = json_detail::read_network(doc, "", true);
    if (auto it = doc.find("config"); it != doc.end() && !it->is_null()) {
        nn.config = json_detail::read_config(*it, "/config");
    }
    if (auto it = doc.find("datasets"); it != doc.end()) {
        if (!it->is_array()) json_detail::fail("/datasets", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            nn.datasets.push_back(json_detail::read_dataset((*it)[i], "/datasets/" + std::to_string(i)));
        }
    }
    if (auto it = doc.find("sub_networks"); it != doc.end()) {
        if (!it->is_array()) json_detail::fail("/sub_networks", "expected an array");
        for (size_t i = 0; i < it->size(); ++i) {
            nn.sub_networks.push_back(json_detail::read_network((*it)[i], "/sub_networks/" + std::to_string(i), false));
        }
    }
    if (auto diags = validate(nn); !diags.empty()) {
        const auto& d = diags.front();
        const auto ptr = json_detail::pointer_for(nn, d.module);
        throw MigrationError(d.code, "at " + (ptr.empty() ? std::string("/") : ptr) + ": " + d.message, {}, d.module);
    }
    return nn;
}

}  // namespace nnmig
