// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The five reference networks of the corpus and helpers to load them.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nnmig/nnmig.hpp"

#ifndef NNMIG_CORPUS_DIR
#error "NNMIG_CORPUS_DIR must point at the corpus directory"
#endif

namespace nnmig::testing {

struct Fixture {
    std::string label;
    std::string file;
    Dialect dialect;                  // dialect the hand-written source is in
    std::optional<Ints> input_shape;  // supplied on the command line when the source has none
    size_t layers;                    // layer count reported for the network
    bool subclassing_only;            // recurrent or branching: no Sequential form exists
};

inline const std::vector<Fixture>& fixtures() {
    static const std::vector<Fixture> kFixtures = {
        {"AlexNet", "alexnet.py", {Framework::ChannelFirst, Style::Subclassing}, Ints{32, 32, 3}, 15, false},
        {"LSTM", "lstm.py", {Framework::ChannelLast, Style::Subclassing}, std::nullopt, 6, true},
        {"VGG16", "vgg16.py", {Framework::ChannelFirst, Style::Sequential}, Ints{32, 32, 3}, 25, false},
        {"CNN-RNN", "cnn_rnn.py", {Framework::ChannelLast, Style::Subclassing}, std::nullopt, 11, true},
        {"TF-Tutorial", "tf_tutorial.py", {Framework::ChannelLast, Style::Sequential}, std::nullopt, 8, false},
    };
    return kFixtures;
}

inline std::string corpus_path(const std::string& file) { return std::string(NNMIG_CORPUS_DIR) + "/" + file; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Extracted pivot with the fixture's input shape applied and input dimensions filled.
inline PivotNN load_fixture(const Fixture& f) {
    const SyntaxTree tree = parse_source(read_text(corpus_path(f.file)));
    PivotNN nn = extract(tree, detect_dialect(tree).dialect);
    if (f.input_shape) nn.input_shape = TensorShape::batched(*f.input_shape);
    return infer_missing_inputs(nn, propagate(nn));
}

/// Source for `nn` in `target`, or the error diagnostic when the target cannot express it.
inline std::string emit_for(const PivotNN& nn, const Dialect& target, const std::string& label = "pivot") {
    EmitOptions opts;
    opts.source_label = label;
    return generate(nn, propagate(nn), target, opts);
}

/// Parses, detects and extracts generated code; fills input dimensions like load_fixture.
inline PivotNN reextract(const std::string& code, Dialect* detected = nullptr) {
    const SyntaxTree tree = parse_source(code);
    const Dialect d = detect_dialect(tree).dialect;
    if (detected) *detected = d;
    PivotNN nn = extract(tree, d);
    return infer_missing_inputs(nn, propagate(nn));
}

}  // namespace nnmig::testing
