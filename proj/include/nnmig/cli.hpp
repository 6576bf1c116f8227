// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The migration driver behind the command-line tool: parse -> extract -> shape -> plan -> emit.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nnmig/codegen.hpp"
#include "nnmig/dialect.hpp"
#include "nnmig/extract.hpp"
#include "nnmig/pivot_json.hpp"
#include "nnmig/shape.hpp"
#include "nnmig/syntax.hpp"

namespace nnmig {

struct CliRequest {
    std::string input_path;
    std::optional<Framework> source_framework;  // nullopt = detect
    std::optional<Style> source_style;          // nullopt = detect
    EmitTarget target;
    std::optional<TensorShape> input_shape;     // overrides a declared shape
    std::string output_path;                    // empty = standard output
    bool emit_training = true;
    bool dump_pivot = false;
    bool strict = false;
};

struct CliOutcome {
    int exit_code = 0;
    Diagnostics diagnostics;
    std::vector<std::string> written;
    std::string source;  // migrated code, also set when written to stdout
};

/// "32,32,3" -> (B, 32, 32, 3).
inline TensorShape parse_shape_csv(std::string_view csv) {
    Ints extents;
    std::string item;
    std::stringstream in{std::string(csv)};
    while (std::getline(in, item, ',')) {
        try {
            size_t used = 0;
            const long long v = std::stoll(item, &used);
            if (used != item.size() || v < 1) throw std::invalid_argument(item);
            extents.push_back(v);
        } catch (const std::exception&) {
            throw MigrationError(ErrorCode::InvalidArgument, "input shape must be positive integers separated by commas, got '" +
                                                                 std::string(csv) + "'");
        }
    }
    if (extents.empty()) throw MigrationError(ErrorCode::InvalidArgument, "input shape is empty");
    return TensorShape::batched(extents);
}

inline std::optional<Framework> parse_framework(std::string_view s) {
    if (s == "tf") return Framework::ChannelLast;
    if (s == "pt") return Framework::ChannelFirst;
    return std::nullopt;
}

inline std::optional<Style> parse_style(std::string_view s) {
    if (s == "seq") return Style::Sequential;
    if (s == "subc") return Style::Subclassing;
    return std::nullopt;
}

/// Writes through a sibling temporary and a rename, so readers never see a partial file.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
    std::random_device rd;
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw MigrationError(ErrorCode::IoError, "cannot write " + tmp.string());
        out << content;
        out.close();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw MigrationError(ErrorCode::IoError, "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw MigrationError(ErrorCode::IoError, "cannot write " + path.string());
    }
}

inline bool is_pivot_path(std::string_view p) {
    constexpr std::string_view suffix = ".nn.json";
    return p.size() >= suffix.size() && p.substr(p.size() - suffix.size()) == suffix;
}

/// Path of the pivot dump that goes with a migration: the output (or, for stdout, the
/// input) with its extension replaced by `.nn.json`.
inline std::filesystem::path pivot_dump_path(const CliRequest& req) {
    std::filesystem::path base = req.output_path.empty() ? req.input_path : req.output_path;
    base.replace_extension();
    base += ".nn.json";
    return base;
}

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw MigrationError(ErrorCode::MissingInputFile, "no such file: " + path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MigrationError(ErrorCode::IoError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    PivotNN nn;
    std::string label;
};

inline Loaded load(const CliRequest& req, Diagnostics& diags) {
    const std::string text = read_file(req.input_path);
    if (is_pivot_path(req.input_path)) return {deserialize(text), "pivot"};
    SyntaxTree tree = parse_source(text);
    Dialect d;
    if (req.source_framework && req.source_style) {
        d = {*req.source_framework, *req.source_style};
    } else {
        DetectedDialect det = detect_dialect(tree);
        if (det.note) diags.push_back(*det.note);
        d = det.dialect;
        if (req.source_framework) d.framework = *req.source_framework;
        if (req.source_style) d.style = *req.source_style;
    }
    ExtractOptions opts;
    opts.default_name = sanitize_identifier(std::filesystem::path(req.input_path).stem().string());
    if (!opts.default_name.empty()) opts.default_name[0] = static_cast<char>(std::toupper(opts.default_name[0]));
    return {extract(tree, d, opts, &diags), to_string(d)};
}

}  // namespace cli_detail

/// One migration. Never throws for pipeline failures: they come back as an E-diagnostic
/// with exit code 2. Outputs are only written when no error occurred.
inline CliOutcome run(const CliRequest& req) {
    CliOutcome out;
    try {
        cli_detail::Loaded loaded = cli_detail::load(req, out.diagnostics);
        PivotNN& nn = loaded.nn;
        if (req.input_shape) {
            if (nn.input_shape && *nn.input_shape != *req.input_shape) {
                out.diagnostics.push_back(Diagnostic{ErrorCode::InvalidArgument, Severity::Note, {},
                                                     "--input-shape " + req.input_shape->to_string() +
                                                         " overrides the declared " + nn.input_shape->to_string(),
                                                     {}});
            }
            nn.input_shape = req.input_shape;
        }
        const ShapeAnnotation ann = propagate(nn);
        nn = infer_missing_inputs(nn, ann);
        EmitOptions eo;
        eo.emit_training = req.emit_training;
        eo.source_label = loaded.label;
        Diagnostics warnings;
        out.source = generate(nn, ann, req.target, eo, &warnings);
        out.diagnostics.insert(out.diagnostics.end(), warnings.begin(), warnings.end());
        std::filesystem::path dump;
        std::string dump_text;
        if (req.dump_pivot) {
            dump = pivot_dump_path(req);
            if (std::filesystem::path(req.input_path) == dump) {
                throw MigrationError(ErrorCode::InvalidArgument, "pivot dump would overwrite the input " + dump.string());
            }
            dump_text = serialize(nn);
        }
        if (!req.output_path.empty()) {
            write_atomically(req.output_path, out.source);
            out.written.push_back(req.output_path);
        }
        if (req.dump_pivot) {
            write_atomically(dump, dump_text);
            out.written.push_back(dump.string());
        }
    } catch (const MigrationError& e) {
        out.diagnostics.push_back(e.diagnostic());
        out.source.clear();
        for (const auto& w : out.written) {
            std::error_code ec;
            std::filesystem::remove(w, ec);
        }
        out.written.clear();
    }
    Severity worst = Severity::Note;
    bool any = false;
    for (const auto& d : out.diagnostics) {
        any = true;
        worst = std::max(worst, d.severity);
    }
    out.exit_code = any && worst == Severity::Error ? 2 : (any && req.strict ? 1 : 0);
    return out;
}

}  // namespace nnmig
