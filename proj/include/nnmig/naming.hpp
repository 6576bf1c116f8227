// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <string_view>

namespace nnmig {

inline bool is_python_keyword(std::string_view s) {
    static constexpr std::array<std::string_view, 35> kKeywords = {
        "False", "None",     "True",  "and",    "as",     "assert",   "async",  "await", "break",
        "class", "continue", "def",   "del",    "elif",   "else",     "except", "finally", "for",
        "from",  "global",   "if",    "import", "in",     "is",       "lambda", "nonlocal", "not",
        "or",    "pass",     "raise", "return", "try",    "while",    "with",   "yield"};
    return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

/// Names the generated files use for their own purposes; module variables must avoid them.
/// Names the generators use themselves, plus attributes the frameworks' model base classes
/// already define. Module names never take these.
inline bool is_reserved_name(std::string_view s) {
    static const std::set<std::string_view> kReserved = {
        // generated code
        "x", "self", "super", "os", "torch", "nn", "tf", "keras", "layers", "F", "OrderedDict", "DataLoader",
        "TensorDataset", "datasets", "transforms", "Permute", "Reshape", "Transpose", "resolve_activation",
        "text_folder", "INPUT_SHAPE", "METRICS", "train", "evaluate", "make_loader", "load_datasets", "model",
        "inputs", "targets", "loader", "optimizer", "criterion", "loss", "epoch", "dataset", "range", "len",
        "print", "isinstance", "list", "tuple", "dict", "object", "int", "float", "type", "_",
        // model base-class attributes
        "training", "forward", "call", "build", "compile", "fit", "predict", "parameters", "modules", "children",
        "name", "input", "output", "outputs", "weights", "variables", "trainable", "dtype", "built", "losses",
        "metrics", "summary", "state_dict", "to", "cuda", "cpu", "eval", "apply", "half", "double", "buffers",
        "add_module", "zero_grad", "save", "get_config", "submodules", "input_shape", "output_shape",
        "trainable_weights", "non_trainable_weights", "stop_training", "history"};
    return is_python_keyword(s) || kReserved.count(s) != 0;
}

inline bool is_python_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin(), s.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

/// Maps any string onto a Python identifier by replacing invalid characters.
inline std::string sanitize_identifier(std::string_view s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        out += ok ? c : '_';
    }
    if (out.empty() || (out.front() >= '0' && out.front() <= '9')) out.insert(out.begin(), '_');
    return out;
}

/// Hands out unique, non-reserved identifiers: `base`, then `base_1`, `base_2`, ...
class NameAllocator {
public:
    bool taken(const std::string& name) const { return used_.count(name) != 0 || is_reserved_name(name); }

    /// Claims `name` verbatim; false when it is reserved or already claimed.
    bool reserve(const std::string& name) {
        if (taken(name)) return false;
        used_.insert(name);
        return true;
    }

    std::string claim(const std::string& base_in) {
        const std::string base = sanitize_identifier(base_in);
        if (reserve(base)) return base;
        for (int i = 1;; ++i) {
            std::string candidate = base + "_" + std::to_string(i);
            if (reserve(candidate)) return candidate;
        }
    }

    /// claim() that also skips every name in `avoid` (names wanted later by someone else).
    std::string claim(const std::string& base_in, const std::set<std::string>& avoid) {
        const std::string base = sanitize_identifier(base_in);
        if (!avoid.count(base) && reserve(base)) return base;
        for (int i = 1;; ++i) {
            std::string candidate = base + "_" + std::to_string(i);
            if (!avoid.count(candidate) && reserve(candidate)) return candidate;
        }
    }

private:
    std::set<std::string> used_;
};

}  // namespace nnmig
