// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Native shape propagation over a pivot network. All shapes are channel-last with the
// symbolic batch on axis 0.

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "nnmig/diagnostics.hpp"
#include "nnmig/pivot.hpp"

namespace nnmig {

struct ModuleShapes {
    std::vector<TensorShape> inputs;
    TensorShape output;
    friend bool operator==(const ModuleShapes&, const ModuleShapes&) = default;
};

struct ShapeAnnotation {
    TensorShape input;
    std::map<std::string, ModuleShapes> modules;
    /// Per SubNetRef module: the annotation of the referenced network for that call.
    std::map<std::string, ShapeAnnotation> sub;

    const TensorShape& output_of(const std::string& module) const {
        if (module == kInputToken) return input;
        return modules.at(module).output;
    }
    friend bool operator==(const ShapeAnnotation&, const ShapeAnnotation&) = default;
};

namespace shape_detail {

[[noreturn]] inline void mismatch(const ModuleSpec& m, const std::string& detail) {
    throw MigrationError(ErrorCode::ShapeMismatch, detail, m.origin, m.name);
}

inline int64_t known_dim(const ModuleSpec& m, const TensorShape& s, size_t axis, std::string_view what) {
    const Dim& d = s.dims.at(axis);
    if (d.batch) {
        throw MigrationError(ErrorCode::UnresolvedBatch,
                             std::string(what) + " depends on the batch dimension of " + s.to_string(), m.origin,
                             m.name);
    }
    return d.value;
}

inline void require_rank(const ModuleSpec& m, const TensorShape& s, size_t rank, std::string_view what) {
    if (s.rank() != rank) {
        mismatch(m, std::string(what) + " expects a rank-" + std::to_string(rank) + " input, got " + s.to_string());
    }
}

inline int64_t checked(const ModuleSpec& m, int64_t v, const std::string& what) {
    if (v < 1) {
        throw MigrationError(ErrorCode::NegativeDim, what + " would be " + std::to_string(v), m.origin, m.name);
    }
    return v;
}

inline int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Spatial output extent for conv/pool windows.
inline int64_t window_out(const ModuleSpec& m, int64_t in, int64_t kernel, int64_t stride, const Padding& p, size_t i) {
    switch (p.mode) {
    case Padding::Mode::Same: return checked(m, (in + stride - 1) / stride, "spatial extent");
    case Padding::Mode::Explicit: {
        const int64_t padded = in + 2 * p.amounts.at(i);
        if (padded < kernel) {
            mismatch(m, "kernel " + std::to_string(kernel) + " larger than padded extent " + std::to_string(padded));
        }
        return checked(m, floor_div(padded - kernel, stride) + 1, "spatial extent");
    }
    case Padding::Mode::Valid:
        if (in < kernel) {
            mismatch(m, "kernel " + std::to_string(kernel) + " larger than spatial extent " + std::to_string(in));
        }
        return checked(m, floor_div(in - kernel, stride) + 1, "spatial extent");
    }
    return in;
}

inline TensorShape layer_output(const ModuleSpec& m, const LayerSpec& l, const TensorShape& in) {
    if (in.rank() < 2 || !in.has_batch()) mismatch(m, "input " + in.to_string() + " has no leading batch axis");
    TensorShape out = in;
    if (l.kind == LayerKind::Linear) {
        known_dim(m, in, in.rank() - 1, "in_features");
        out.dims.back() = Dim::known(l.as<LinearAttrs>().out_features);
        return out;
    }
    if (is_conv(l.kind) || is_pool(l.kind)) {
        const size_t sr = static_cast<size_t>(spatial_rank(l.kind));
        require_rank(m, in, sr + 2, to_string(l.kind));
        const bool conv = is_conv(l.kind);
        const Ints& kernel = conv ? l.as<ConvAttrs>().kernel : l.as<PoolAttrs>().kernel;
        const Ints& stride = conv ? l.as<ConvAttrs>().stride : l.as<PoolAttrs>().stride;
        const Padding& pad = conv ? l.as<ConvAttrs>().padding : l.as<PoolAttrs>().padding;
        for (size_t i = 0; i < sr; ++i) {
            const int64_t n = known_dim(m, in, i + 1, "spatial extent");
            out.dims[i + 1] = Dim::known(window_out(m, n, kernel.at(i), stride.at(i), pad, i));
        }
        known_dim(m, in, sr + 1, "channel count");
        if (conv) out.dims[sr + 1] = Dim::known(l.as<ConvAttrs>().out_channels);
        return out;
    }
    switch (l.kind) {
    case LayerKind::Flatten: {
        int64_t prod = 1;
        for (size_t i = 1; i < in.rank(); ++i) prod *= known_dim(m, in, i, "flattened extent");
        return TensorShape({Dim::symbolic_batch(), Dim::known(prod)});
    }
    case LayerKind::Dropout: return out;
    case LayerKind::Embedding:
        require_rank(m, in, 2, "Embedding");
        out.dims.push_back(Dim::known(l.as<EmbeddingAttrs>().embedding_dim));
        return out;
    case LayerKind::SimpleRNN:
    case LayerKind::LSTM:
    case LayerKind::GRU: {
        require_rank(m, in, 3, to_string(l.kind));
        known_dim(m, in, 2, "input_size");
        const auto& a = l.as<RecurrentAttrs>();
        const int64_t width = a.hidden_size * (a.bidirectional ? 2 : 1);
        if (a.return_sequences) return TensorShape({Dim::symbolic_batch(), in.dims[1], Dim::known(width)});
        return TensorShape({Dim::symbolic_batch(), Dim::known(width)});
    }
    default: break;
    }
    return out;
}

inline size_t norm_axis(const ModuleSpec& m, int64_t axis, size_t rank) {
    const int64_t r = static_cast<int64_t>(rank);
    const int64_t a = axis < 0 ? axis + r : axis;
    if (a < 0 || a >= r) mismatch(m, "axis " + std::to_string(axis) + " out of range for rank " + std::to_string(rank));
    return static_cast<size_t>(a);
}

inline TensorShape op_output(const ModuleSpec& m, const TensorOpSpec& op, const std::vector<TensorShape>& ins) {
    const TensorShape& in = ins.front();
    switch (op.kind) {
    case TensorOpKind::Permute: {
        if (op.dims.size() != in.rank()) {
            mismatch(m, "permutation of length " + std::to_string(op.dims.size()) + " applied to " + in.to_string());
        }
        TensorShape out;
        for (int64_t d : op.dims) out.dims.push_back(in.dims.at(static_cast<size_t>(d)));
        return out;
    }
    case TensorOpKind::Reshape: {
        int64_t total = 1;
        for (size_t i = 1; i < in.rank(); ++i) total *= known_dim(m, in, i, "reshaped extent");
        int64_t known = 1;
        int wild = -1;
        for (size_t i = 0; i < op.dims.size(); ++i) {
            if (op.dims[i] == -1) wild = static_cast<int>(i);
            else known *= checked(m, op.dims[i], "reshape extent");
        }
        TensorShape out({Dim::symbolic_batch()});
        for (size_t i = 0; i < op.dims.size(); ++i) {
            if (static_cast<int>(i) == wild) {
                if (total % known != 0) {
                    mismatch(m, "cannot reshape " + in.to_string() + " with an inferred extent");
                }
                out.dims.push_back(Dim::known(checked(m, total / known, "inferred extent")));
            } else {
                out.dims.push_back(Dim::known(op.dims[i]));
            }
        }
        if (wild < 0 && known != total) {
            mismatch(m, "cannot reshape " + in.to_string() + " (" + std::to_string(total) + " elements) to " +
                            out.to_string());
        }
        return out;
    }
    case TensorOpKind::Transpose: {
        const size_t a = norm_axis(m, op.dims.at(0), in.rank());
        const size_t b = norm_axis(m, op.dims.at(1), in.rank());
        TensorShape out = in;
        std::swap(out.dims[a], out.dims[b]);
        return out;
    }
    case TensorOpKind::Concatenate: {
        const size_t axis = norm_axis(m, op.axis, in.rank());
        if (axis == 0) mismatch(m, "concatenation along the batch axis");
        TensorShape out = in;
        int64_t sum = 0;
        for (const auto& s : ins) {
            if (s.rank() != in.rank()) mismatch(m, "concatenated inputs differ in rank: " + in.to_string() + " vs " + s.to_string());
            for (size_t i = 0; i < s.rank(); ++i) {
                if (i != axis && !(s.dims[i] == in.dims[i])) {
                    mismatch(m, "concatenated inputs disagree off the concatenation axis: " + in.to_string() + " vs " +
                                    s.to_string());
                }
            }
            sum += known_dim(m, s, axis, "concatenated extent");
        }
        out.dims[axis] = Dim::known(sum);
        return out;
    }
    case TensorOpKind::Add:
    case TensorOpKind::Multiply:
        for (const auto& s : ins) {
            if (!(s == in)) mismatch(m, "element-wise operands differ: " + in.to_string() + " vs " + s.to_string());
        }
        return in;
    case TensorOpKind::Matmul: {
        const TensorShape& b = ins.at(1);
        if (in.rank() < 3 || b.rank() != in.rank()) {
            mismatch(m, "matmul needs operands of equal rank >= 3, got " + in.to_string() + " and " + b.to_string());
        }
        for (size_t i = 0; i + 2 < in.rank(); ++i) {
            if (!(in.dims[i] == b.dims[i])) mismatch(m, "matmul leading dimensions differ: " + in.to_string() + " vs " + b.to_string());
        }
        const int64_t k1 = known_dim(m, in, in.rank() - 1, "contracted extent");
        const int64_t k2 = known_dim(m, b, b.rank() - 2, "contracted extent");
        if (k1 != k2) mismatch(m, "matmul contracts " + std::to_string(k1) + " against " + std::to_string(k2));
        TensorShape out = in;
        out.dims.back() = b.dims.back();
        return out;
    }
    }
    return in;
}

inline ShapeAnnotation propagate_net(const PivotNN& root, const PivotNN& net, const TensorShape& input, int depth) {
    ShapeAnnotation ann;
    ann.input = input;
    for (const auto& m : net.modules) {
        ModuleShapes ms;
        for (const auto& in : m.inputs) ms.inputs.push_back(ann.output_of(in));
        if (const auto* l = std::get_if<LayerSpec>(&m.kind)) {
            ms.output = layer_output(m, *l, ms.inputs.front());
        } else if (const auto* op = std::get_if<TensorOpSpec>(&m.kind)) {
            ms.output = op_output(m, *op, ms.inputs);
        } else {
            const PivotNN* sub = root.find_subnet(m.subnet().network);
            if (!sub || depth > kMaxNesting) {
                throw MigrationError(ErrorCode::UnknownSubNetwork, "cannot resolve sub-network '" + m.subnet().network + "'",
                                     m.origin, m.name);
            }
            ShapeAnnotation inner = propagate_net(root, *sub, ms.inputs.front(), depth + 1);
            ms.output = inner.output_of(terminal_module(*sub));
            ann.sub.emplace(m.name, std::move(inner));
        }
        ann.modules.emplace(m.name, std::move(ms));
    }
    return ann;
}

inline void fill(std::optional<int64_t>& slot, int64_t inferred, const ModuleSpec& m, std::string_view attr) {
    if (slot && *slot != inferred) {
        throw MigrationError(ErrorCode::ConflictingAttribute,
                             std::string(attr) + " declared " + std::to_string(*slot) + " but the input provides " +
                                 std::to_string(inferred),
                             m.origin, m.name);
    }
    slot = inferred;
}

inline void infer_net(PivotNN& root, PivotNN& net, const ShapeAnnotation& ann, int depth) {
    for (auto& m : net.modules) {
        auto it = ann.modules.find(m.name);
        if (it == ann.modules.end()) {
            throw MigrationError(ErrorCode::InvalidArgument, "shape annotation does not cover this module", m.origin, m.name);
        }
        const TensorShape& in = it->second.inputs.front();
        if (auto* l = std::get_if<LayerSpec>(&m.kind)) {
            const size_t last = in.rank() - 1;
            if (l->kind == LayerKind::Linear) {
                fill(l->as<LinearAttrs>().in_features, known_dim(m, in, last, "in_features"), m, "in_features");
            } else if (is_conv(l->kind)) {
                fill(l->as<ConvAttrs>().in_channels, known_dim(m, in, last, "in_channels"), m, "in_channels");
            } else if (is_recurrent(l->kind)) {
                fill(l->as<RecurrentAttrs>().input_size, known_dim(m, in, last, "input_size"), m, "input_size");
            }
        } else if (m.is_subnet()) {
            const std::string target = m.subnet().network;
            PivotNN* sub = nullptr;
            for (auto& s : root.sub_networks) {
                if (s.name == target) sub = &s;
            }
            if (!sub || depth > kMaxNesting) {
                throw MigrationError(ErrorCode::UnknownSubNetwork, "cannot resolve sub-network '" + target + "'", m.origin, m.name);
            }
            infer_net(root, *sub, ann.sub.at(m.name), depth + 1);
        }
    }
}

}  // namespace shape_detail

/// Annotates every module of `nn` with its input and output shapes.
inline ShapeAnnotation propagate(const PivotNN& nn, const TensorShape& input_shape) {
    if (!input_shape.has_batch() || input_shape.rank() < 2) {
        throw MigrationError(ErrorCode::MissingInputShape,
                             "input shape must be (Batch, d1, ...) with at least one known dimension");
    }
    for (size_t i = 1; i < input_shape.rank(); ++i) {
        if (input_shape.dims[i].batch || input_shape.dims[i].value < 1) {
            throw MigrationError(ErrorCode::MissingInputShape, "input shape " + input_shape.to_string() +
                                                                   " must have positive known extents after the batch");
        }
    }
    return shape_detail::propagate_net(nn, nn, input_shape, 0);
}

/// propagate() with the network's own declared input shape.
inline ShapeAnnotation propagate(const PivotNN& nn) {
    if (!nn.input_shape) {
        throw MigrationError(ErrorCode::MissingInputShape,
                             "network '" + nn.name + "' declares no input shape; pass one with --input-shape");
    }
    return propagate(nn, *nn.input_shape);
}

/// Copy of `nn` with every absent input-dimension attribute filled from `ann`; present values
/// are checked against it.
inline PivotNN infer_missing_inputs(const PivotNN& nn, const ShapeAnnotation& ann) {
    PivotNN out = nn;
    shape_detail::infer_net(out, out, ann, 0);
    return out;
}

}  // namespace nnmig
