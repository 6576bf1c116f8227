// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nnmig/diagnostics.hpp"
#include "nnmig/syntax.hpp"

namespace nnmig {

enum class Framework { ChannelLast, ChannelFirst };
enum class Style { Sequential, Subclassing };

struct Dialect {
    Framework framework = Framework::ChannelLast;
    Style style = Style::Sequential;
    friend bool operator==(const Dialect&, const Dialect&) = default;
};

inline std::string_view short_name(Framework f) { return f == Framework::ChannelLast ? "tf" : "pt"; }
inline std::string_view short_name(Style s) { return s == Style::Sequential ? "seq" : "subc"; }
inline std::string to_string(const Dialect& d) {
    return std::string(short_name(d.framework)) + "/" + std::string(short_name(d.style));
}

inline constexpr Dialect kAllDialects[] = {
    {Framework::ChannelLast, Style::Sequential},
    {Framework::ChannelLast, Style::Subclassing},
    {Framework::ChannelFirst, Style::Sequential},
    {Framework::ChannelFirst, Style::Subclassing},
};

/// Local name -> fully qualified dotted path, built from the file's import statements.
/// Paths are canonicalized so every spelling of the Keras API starts with "keras.".
class ImportMap {
public:
    explicit ImportMap(const Node& module) {
        for (const auto& s : module.children) {
            if (s.is(NodeKind::Import)) {
                for (const auto& a : s.children) {
                    if (a.aux.empty()) {
                        const std::string root = a.text.substr(0, a.text.find('.'));
                        aliases_[root] = root;
                    } else {
                        aliases_[a.aux] = a.text;
                    }
                    roots_.push_back(a.text.substr(0, a.text.find('.')));
                }
            } else if (s.is(NodeKind::ImportFrom)) {
                if (s.text.empty() || s.text.front() == '.') continue;
                roots_.push_back(s.text.substr(0, s.text.find('.')));
                for (const auto& a : s.children) {
                    if (a.text == "*") {
                        star_modules_.push_back(s.text);
                        continue;
                    }
                    aliases_[a.aux.empty() ? a.text : a.aux] = s.text + "." + a.text;
                }
            }
        }
    }

    /// Root package names of every import, in order (duplicates kept).
    const std::vector<std::string>& roots() const { return roots_; }

    /// Qualified canonical path for a Name/Attribute chain; empty when the head is not an
    /// imported name.
    std::string resolve(const Node& n) const {
        const std::string dotted = dotted_name(n);
        if (dotted.empty()) return {};
        const auto dot = dotted.find('.');
        const std::string head = dotted.substr(0, dot);
        const std::string rest = dot == std::string::npos ? std::string{} : dotted.substr(dot);
        if (auto it = aliases_.find(head); it != aliases_.end()) return canonical(it->second + rest);
        if (!star_modules_.empty()) return canonical(star_modules_.front() + "." + dotted);
        return {};
    }

    static std::string canonical(std::string path) {
        for (std::string_view prefix : {"tensorflow.python.keras.", "tensorflow.keras.", "tf.keras."}) {
            if (path.rfind(prefix, 0) == 0) return "keras." + path.substr(prefix.size());
        }
        if (path == "tensorflow.keras") return "keras";
        return path;
    }

private:
    std::map<std::string, std::string> aliases_;
    std::vector<std::string> star_modules_;
    std::vector<std::string> roots_;
};

inline std::optional<Framework> framework_of_root(std::string_view root) {
    if (root == "tensorflow" || root == "keras" || root == "tf_keras") return Framework::ChannelLast;
    if (root == "torch" || root == "torchvision") return Framework::ChannelFirst;
    return std::nullopt;
}

/// Names of the helper classes and functions the channel-first generator writes into its
/// output. They are never treated as model classes.
inline bool is_generated_helper(std::string_view name) {
    return name == "Permute" || name == "Reshape" || name == "Transpose" || name == "resolve_activation";
}

/// Model-class test: a class deriving from the framework's base model class that defines the
/// forward method (`call` or `forward`).
inline bool is_model_class(const Node& cls, const ImportMap& imports, Framework fw) {
    if (!cls.is(NodeKind::ClassDef) || is_generated_helper(cls.text)) return false;
    bool derives = false;
    for (const auto& base : cls[0].children) {
        if (base.is(NodeKind::Keyword)) continue;
        std::string path = imports.resolve(base);
        if (path.empty()) path = dotted_name(base);
        if (fw == Framework::ChannelFirst && (path == "torch.nn.Module" || path == "torch.nn.modules.module.Module")) {
            derives = true;
        }
        if (fw == Framework::ChannelLast && (path == "keras.Model" || path == "keras.models.Model")) {
            derives = true;
        }
    }
    if (!derives) return false;
    const std::string_view method = fw == Framework::ChannelFirst ? "forward" : "call";
    for (const auto& s : cls[1].children) {
        if (s.is(NodeKind::FunctionDef) && s.text == method) return true;
    }
    return false;
}

/// Sequential-container construction test for a call node.
inline bool is_sequential_call(const Node& call, const ImportMap& imports, Framework fw) {
    if (!call.is(NodeKind::Call)) return false;
    const std::string path = imports.resolve(call[0]);
    if (fw == Framework::ChannelFirst) return path == "torch.nn.Sequential";
    return path == "keras.Sequential" || path == "keras.models.Sequential";
}

namespace dialect_detail {

inline void find_sequential_calls(const Node& n, const ImportMap& imports, Framework fw,
                                  std::vector<const Node*>& out) {
    if (n.is(NodeKind::ClassDef)) return;
    if (is_sequential_call(n, imports, fw)) out.push_back(&n);
    for (const auto& c : n.children) find_sequential_calls(c, imports, fw, out);
}

}  // namespace dialect_detail

/// Result of dialect detection; `note` is set when both styles were present.
struct DetectedDialect {
    Dialect dialect;
    std::optional<Diagnostic> note;
};

inline Framework detect_framework(const SyntaxTree& tree) {
    ImportMap imports(tree.root);
    bool tf = false;
    bool pt = false;
    for (const auto& root : imports.roots()) {
        if (auto fw = framework_of_root(root)) (*fw == Framework::ChannelLast ? tf : pt) = true;
    }
    if (tf && pt) {
        throw MigrationError(ErrorCode::MixedDialect,
                             "file imports both channel-last (tensorflow/keras) and channel-first (torch) frameworks",
                             {1, 1});
    }
    if (!tf && !pt) {
        throw MigrationError(ErrorCode::UnknownDialect,
                             "file imports neither tensorflow/keras nor torch", {1, 1});
    }
    return tf ? Framework::ChannelLast : Framework::ChannelFirst;
}

/// Framework by imported namespace roots; style by model-class vs Sequential construction.
/// When both styles appear, the one holding the last top-level model definition wins.
inline DetectedDialect detect_dialect(const SyntaxTree& tree) {
    const Framework fw = detect_framework(tree);
    ImportMap imports(tree.root);
    SourceLocation last_class;
    SourceLocation last_seq;
    for (const auto& s : tree.root.children) {
        if (s.is(NodeKind::ClassDef)) {
            if (is_model_class(s, imports, fw)) last_class = s.loc;
            continue;
        }
        std::vector<const Node*> calls;
        dialect_detail::find_sequential_calls(s, imports, fw, calls);
        if (!calls.empty()) last_seq = calls.back()->loc;
    }
    auto later = [](SourceLocation a, SourceLocation b) {
        return a.line > b.line || (a.line == b.line && a.column > b.column);
    };
    DetectedDialect out;
    out.dialect.framework = fw;
    if (!last_class.known() && !last_seq.known()) {
        throw MigrationError(ErrorCode::UnknownDialect,
                             "no model class or Sequential construction found", {1, 1});
    }
    if (last_class.known() && last_seq.known()) {
        const bool seq_wins = later(last_seq, last_class);
        out.dialect.style = seq_wins ? Style::Sequential : Style::Subclassing;
        const SourceLocation at = seq_wins ? last_seq : last_class;
        out.note = Diagnostic{ErrorCode::AmbiguousStyle, Severity::Note, {},
                              std::string("both Sequential and Subclassing models present; using ") +
                                  (seq_wins ? "the Sequential" : "the Subclassing") +
                                  " model defined last",
                              at};
        return out;
    }
    out.dialect.style = last_class.known() ? Style::Subclassing : Style::Sequential;
    return out;
}

}  // namespace nnmig
