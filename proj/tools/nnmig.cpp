// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

// nnmig: migrate a neural-network definition between TensorFlow/Keras and PyTorch.
//
//   nnmig model.py --to pt --to-style subc -o model_pt.py
//   nnmig a.py b.py --to tf --to-style seq -o out/      (batch: -o names a directory)

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nnmig/cli.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Migrate neural-network source code between TensorFlow/Keras and PyTorch", "nnmig"};
    app.set_version_flag("--version", std::string(nnmig::kVersion));

    std::vector<std::string> inputs;
    std::string from = "auto";
    std::string from_style = "auto";
    std::string to;
    std::string to_style;
    std::string input_shape;
    std::string output;
    bool emit_training = true;
    bool dump_pivot = false;
    bool strict = false;

    app.add_option("inputs", inputs, "Source files (.py) or pivot documents (.nn.json)")->required();
    app.add_option("--from", from, "Source framework")->check(CLI::IsMember({"tf", "pt", "auto"}));
    app.add_option("--from-style", from_style, "Source model style")->check(CLI::IsMember({"seq", "subc", "auto"}));
    app.add_option("--to", to, "Target framework")->required()->check(CLI::IsMember({"tf", "pt"}));
    app.add_option("--to-style", to_style, "Target model style")->required()->check(CLI::IsMember({"seq", "subc"}));
    app.add_option("--input-shape", input_shape, "Input shape without the batch, channel-last (e.g. 32,32,3)");
    app.add_flag("--emit-training,!--no-emit-training", emit_training, "Emit the training scaffold (default on)");
    app.add_flag("--dump-pivot", dump_pivot, "Also write the pivot as <output>.nn.json");
    app.add_flag("--strict", strict, "Exit 1 when any warning or note is reported");
    app.add_option("-o,--output", output, "Output file; a directory in batch mode; stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    nnmig::CliRequest base;
    base.source_framework = nnmig::parse_framework(from);
    base.source_style = nnmig::parse_style(from_style);
    base.target = {*nnmig::parse_framework(to), *nnmig::parse_style(to_style)};
    base.emit_training = emit_training;
    base.dump_pivot = dump_pivot;
    base.strict = strict;
    if (!input_shape.empty()) {
        try {
            base.input_shape = nnmig::parse_shape_csv(input_shape);
        } catch (const nnmig::MigrationError& e) {
            std::cerr << nnmig::format_diagnostic(e.diagnostic()) << "\n";
            return 2;
        }
    }

    const bool batch = inputs.size() > 1 || (!output.empty() && fs::is_directory(output));
    if (batch && output.empty()) {
        std::cerr << nnmig::format_diagnostic(nnmig::Diagnostic{nnmig::ErrorCode::InvalidArgument, nnmig::Severity::Error, {},
                                                                "several inputs need -o DIR", {}})
                  << "\n";
        return 2;
    }
    if (batch) {
        std::error_code ec;
        fs::create_directories(output, ec);
    }

    int status = 0;
    for (const auto& in : inputs) {
        nnmig::CliRequest req = base;
        req.input_path = in;
        if (batch) {
            fs::path stem = fs::path(in).filename();
            while (stem.has_extension()) stem = stem.stem();
            req.output_path = (fs::path(output) / stem).string() + "_" + std::string(nnmig::short_name(req.target.framework)) + "_" +
                              std::string(nnmig::short_name(req.target.style)) + ".py";
        } else {
            req.output_path = output;
        }
        nnmig::CliOutcome r = nnmig::run(req);
        for (const auto& d : r.diagnostics) std::cerr << nnmig::format_diagnostic(d, in) << "\n";
        if (r.exit_code < 2 && req.output_path.empty()) std::cout << r.source;
        for (const auto& w : r.written) std::cerr << "wrote " << w << "\n";
        status = std::max(status, r.exit_code);
    }
    return status;
}
