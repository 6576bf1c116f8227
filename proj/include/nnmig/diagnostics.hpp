// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nnmig {

/// 1-based line/column into a source or pivot document. Zero means unknown.
struct SourceLocation {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class Severity { Note, Warning, Error };

// Numbered diagnostic codes. The numeric value is what the CLI prints.
enum class ErrorCode : int {
    // driver
    MissingInputFile = 1,
    IoError = 2,
    InvalidArgument = 3,
    // frontend
    SyntaxError = 10,
    UnknownDialect = 11,
    MixedDialect = 12,
    UnsupportedLayer = 13,
    UnsupportedAttribute = 14,
    UnresolvedDataflow = 15,
    NestingTooDeep = 16,
    // pivot validation
    DuplicateName = 30,
    InvalidName = 31,
    CycleOrForwardRef = 32,
    UnknownProducer = 33,
    NoInputConsumer = 34,
    MultipleOutputs = 35,
    ActivationOnNonLayer = 36,
    InputArity = 37,
    AttributeRange = 38,
    PermuteOrder = 39,
    BatchPosition = 40,
    ConfigRange = 41,
    DatasetPath = 42,
    UnknownSubNetwork = 43,
    MalformedPivot = 44,
    // shapes
    ShapeMismatch = 50,
    NegativeDim = 51,
    ConflictingAttribute = 52,
    UnresolvedBatch = 53,
    MissingInputShape = 54,
    // codegen
    NonChainForSequential = 60,
    MissingInputDims = 61,
    UnsupportedPadding = 62,
    UnsupportedInTarget = 63,
    // notes and warnings
    AmbiguousStyle = 90,
    DroppedConstruct = 91,
};

inline std::string_view code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingInputFile: return "MissingInputFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownDialect: return "UnknownDialect";
    case ErrorCode::MixedDialect: return "MixedDialect";
    case ErrorCode::UnsupportedLayer: return "UnsupportedLayer";
    case ErrorCode::UnsupportedAttribute: return "UnsupportedAttribute";
    case ErrorCode::UnresolvedDataflow: return "UnresolvedDataflow";
    case ErrorCode::NestingTooDeep: return "NestingTooDeep";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::CycleOrForwardRef: return "CycleOrForwardRef";
    case ErrorCode::UnknownProducer: return "UnknownProducer";
    case ErrorCode::NoInputConsumer: return "NoInputConsumer";
    case ErrorCode::MultipleOutputs: return "MultipleOutputs";
    case ErrorCode::ActivationOnNonLayer: return "ActivationOnNonLayer";
    case ErrorCode::InputArity: return "InputArity";
    case ErrorCode::AttributeRange: return "AttributeRange";
    case ErrorCode::PermuteOrder: return "PermuteOrder";
    case ErrorCode::BatchPosition: return "BatchPosition";
    case ErrorCode::ConfigRange: return "ConfigRange";
    case ErrorCode::DatasetPath: return "DatasetPath";
    case ErrorCode::UnknownSubNetwork: return "UnknownSubNetwork";
    case ErrorCode::MalformedPivot: return "MalformedPivot";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NegativeDim: return "NegativeDim";
    case ErrorCode::ConflictingAttribute: return "ConflictingAttribute";
    case ErrorCode::UnresolvedBatch: return "UnresolvedBatch";
    case ErrorCode::MissingInputShape: return "MissingInputShape";
    case ErrorCode::NonChainForSequential: return "NonChainForSequential";
    case ErrorCode::MissingInputDims: return "MissingInputDims";
    case ErrorCode::UnsupportedPadding: return "UnsupportedPadding";
    case ErrorCode::UnsupportedInTarget: return "UnsupportedInTarget";
    case ErrorCode::AmbiguousStyle: return "AmbiguousStyle";
    case ErrorCode::DroppedConstruct: return "DroppedConstruct";
    }
    return "Unknown";
}

/// "E013", "W090", "N091" style tag.
inline std::string code_tag(ErrorCode code, Severity severity = Severity::Error) {
    char prefix = severity == Severity::Error ? 'E' : severity == Severity::Warning ? 'W' : 'N';
    std::string digits = std::to_string(static_cast<int>(code));
    while (digits.size() < 3) {
        digits.insert(digits.begin(), '0');
    }
    return prefix + digits;
}

struct Diagnostic {
    ErrorCode code = ErrorCode::InvalidArgument;
    Severity severity = Severity::Error;
    std::string module;  // offending pivot module, empty when not module-specific
    std::string message;
    SourceLocation location;
};

using Diagnostics = std::vector<Diagnostic>;

/// Exception carrying one numbered diagnostic. Every stage reports hard failures this way.
class MigrationError : public std::runtime_error {
public:
    MigrationError(ErrorCode code, std::string message, SourceLocation location = {},
                   std::string module = {})
        : std::runtime_error(message),
          diagnostic_{code, Severity::Error, std::move(module), std::move(message), location} {}

    explicit MigrationError(Diagnostic diagnostic)
        : std::runtime_error(diagnostic.message), diagnostic_(std::move(diagnostic)) {}

    ErrorCode code() const { return diagnostic_.code; }
    const SourceLocation& location() const { return diagnostic_.location; }
    const std::string& module() const { return diagnostic_.module; }
    const Diagnostic& diagnostic() const { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

/// file:line:column: E013 UnsupportedLayer: message
inline std::string format_diagnostic(const Diagnostic& d, std::string_view file = {}) {
    std::string out;
    if (!file.empty()) {
        out += file;
        out += ':';
        out += std::to_string(d.location.line);
        out += ':';
        out += std::to_string(d.location.column);
        out += ": ";
    }
    out += code_tag(d.code, d.severity);
    out += ' ';
    out += code_name(d.code);
    out += ": ";
    if (!d.module.empty()) {
        out += "[" + d.module + "] ";
    }
    out += d.message;
    return out;
}

}  // namespace nnmig
