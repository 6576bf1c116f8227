// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Terse constructors for hand-written pivots in unit tests.

#include <string>
#include <utility>
#include <vector>

#include "nnmig/pivot.hpp"

namespace nnmig::testing {

inline LayerSpec dense(int64_t out, ActivationRef act = ActivationRef::none()) {
    LayerSpec l = make_layer(LayerKind::Linear);
    l.as<LinearAttrs>().out_features = out;
    l.activation = std::move(act);
    return l;
}

inline LayerSpec conv2d(int64_t out, int64_t k, int64_t stride = 1, Padding p = Padding::valid(),
                        ActivationRef act = ActivationRef::none()) {
    LayerSpec l = make_layer(LayerKind::Conv2D);
    auto& c = l.as<ConvAttrs>();
    c.out_channels = out;
    c.kernel = {k, k};
    c.stride = {stride, stride};
    c.padding = std::move(p);
    l.activation = std::move(act);
    return l;
}

inline LayerSpec maxpool2d(int64_t k) {
    LayerSpec l = make_layer(LayerKind::MaxPool2D);
    l.as<PoolAttrs>().kernel = {k, k};
    l.as<PoolAttrs>().stride = {k, k};
    return l;
}

inline LayerSpec dropout(double rate) {
    LayerSpec l = make_layer(LayerKind::Dropout);
    l.as<DropoutAttrs>().rate = rate;
    return l;
}

inline LayerSpec flatten() { return make_layer(LayerKind::Flatten); }

inline ModuleSpec module(std::string name, ModuleKind kind, std::vector<std::string> inputs) {
    ModuleSpec m;
    m.name = std::move(name);
    m.kind = std::move(kind);
    m.inputs = std::move(inputs);
    return m;
}

/// Linear chain fed from INPUT, each module consuming the previous one.
inline PivotNN chain(std::string name, const Ints& input, std::vector<std::pair<std::string, ModuleKind>> mods) {
    PivotNN nn;
    nn.name = std::move(name);
    nn.input_shape = TensorShape::batched(input);
    std::string prev(kInputToken);
    for (auto& [n, k] : mods) {
        nn.modules.push_back(module(n, std::move(k), {prev}));
        prev = n;
    }
    return nn;
}

}  // namespace nnmig::testing
