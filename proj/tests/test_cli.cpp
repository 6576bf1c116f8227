// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"

#ifndef NNMIG_CLI_PATH
#error "NNMIG_CLI_PATH must name the nnmig executable"
#endif

using namespace nnmig;
using namespace nnmig::testing;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / ("nnmig_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    static CliRequest request(const std::string& input, Dialect target) {
        CliRequest r;
        r.input_path = input;
        r.target = target;
        return r;
    }

    std::vector<std::string> listing() const {
        std::vector<std::string> out;
        for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path().filename().string());
        std::sort(out.begin(), out.end());
        return out;
    }
};

bool has(const Diagnostics& ds, ErrorCode code) {
    return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

struct Process {
    int status = -1;
    std::string out;
    std::string err;
};

/// Runs the nnmig executable with `args`; stdout and stderr are captured through files.
Process nnmig_exec(const std::string& args, const fs::path& scratch) {
    const fs::path out = scratch / "stdout.txt";
    const fs::path err = scratch / "stderr.txt";
    const std::string cmd = std::string(NNMIG_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    Process p;
    const int raw = std::system(cmd.c_str());
    p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    p.out = read_text(out.string());
    p.err = read_text(err.string());
    fs::remove(out);
    fs::remove(err);
    return p;
}

constexpr Dialect kPtSubc{Framework::ChannelFirst, Style::Subclassing};
constexpr Dialect kTfSeq{Framework::ChannelLast, Style::Sequential};

}  // namespace

TEST(CliArgs, ShapeCsv) {
    EXPECT_EQ(parse_shape_csv("32,32,3"), TensorShape::batched({32, 32, 3}));
    EXPECT_EQ(parse_shape_csv("200"), TensorShape::batched({200}));
    for (const char* bad : {"", "32,,3", "32,x", "0,3", "-1", "3.5"}) {
        try {
            parse_shape_csv(bad);
            ADD_FAILURE() << bad;
        } catch (const MigrationError& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidArgument) << bad;
        }
    }
}

TEST(CliArgs, DumpPathFollowsTheOutput) {
    CliRequest r;
    r.input_path = "in/model.py";
    EXPECT_EQ(pivot_dump_path(r), fs::path("in/model.nn.json"));
    r.output_path = "out/model_pt.py";
    EXPECT_EQ(pivot_dump_path(r), fs::path("out/model_pt.nn.json"));
}

TEST_F(Cli, TfTutorialToChannelFirstSubclassing) {
    CliRequest req = request(corpus_path("tf_tutorial.py"), kPtSubc);
    req.output_path = path("net_pt.py");
    const CliOutcome r = run(req);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(r.diagnostics.empty());
    ASSERT_EQ(r.written, std::vector<std::string>{req.output_path});
    const std::string code = read_text(req.output_path);
    EXPECT_EQ(code, r.source);
    Dialect detected;
    const PivotNN back = reextract(code, &detected);
    EXPECT_EQ(detected, kPtSubc);
    // the driver names an unnamed Sequential after the file
    EXPECT_EQ(back.name, "Tf_tutorial");
    PivotNN expected = load_fixture(fixtures()[4]);
    expected.name = back.name;
    EXPECT_EQ(without_input_dims(back), without_input_dims(expected));
    EXPECT_EQ(listing(), std::vector<std::string>{"net_pt.py"});
}

TEST_F(Cli, MissingInputFile) {
    const CliOutcome r = run(request(path("absent.py"), kPtSubc));
    EXPECT_EQ(r.exit_code, 2);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(code_tag(r.diagnostics[0].code), "E001");
    EXPECT_TRUE(r.source.empty());
}

TEST_F(Cli, LstmToSequentialFailsWithoutOutput) {
    CliRequest req = request(corpus_path("lstm.py"), kTfSeq);
    req.output_path = path("lstm_seq.py");
    req.dump_pivot = true;
    const CliOutcome r = run(req);
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_TRUE(has(r.diagnostics, ErrorCode::NonChainForSequential));
    EXPECT_TRUE(r.written.empty());
    EXPECT_TRUE(listing().empty());
}

TEST_F(Cli, ChannelFirstSourceNeedsAnInputShape) {
    CliRequest req = request(corpus_path("alexnet.py"), kTfSeq);
    EXPECT_EQ(run(req).exit_code, 2);
    EXPECT_TRUE(has(run(req).diagnostics, ErrorCode::MissingInputShape));
    req.input_shape = parse_shape_csv("32,32,3");
    const CliOutcome r = run(req);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(r.source.find("INPUT_SHAPE = (32, 32, 3)") != std::string::npos);
}

TEST_F(Cli, StrictTurnsNotesIntoExitOne) {
    CliRequest req = request(corpus_path("tf_tutorial.py"), kPtSubc);
    req.input_shape = parse_shape_csv("28,28,3");
    const CliOutcome lax = run(req);
    EXPECT_EQ(lax.exit_code, 0);
    ASSERT_EQ(lax.diagnostics.size(), 1u);
    EXPECT_EQ(lax.diagnostics[0].severity, Severity::Note);
    req.strict = true;
    EXPECT_EQ(run(req).exit_code, 1);
    // the same declared shape is not an override
    req.input_shape = parse_shape_csv("32,32,3");
    EXPECT_EQ(run(req).exit_code, 0);
}

TEST_F(Cli, DumpPivotWritesBothFiles) {
    CliRequest req = request(corpus_path("cnn_rnn.py"), kPtSubc);
    req.output_path = path("cnn_rnn_pt.py");
    req.dump_pivot = true;
    const CliOutcome r = run(req);
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(listing(), (std::vector<std::string>{"cnn_rnn_pt.nn.json", "cnn_rnn_pt.py"}));
    EXPECT_EQ(deserialize(read_text(path("cnn_rnn_pt.nn.json"))), load_fixture(fixtures()[3]));
}

TEST_F(Cli, PivotDocumentsAreInputs) {
    const std::string pivot = path("alexnet.nn.json");
    fs::copy_file(corpus_path("alexnet.nn.json"), pivot);
    CliRequest req = request(pivot, kTfSeq);
    const CliOutcome r = run(req);
    ASSERT_EQ(r.exit_code, 0) << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
    EXPECT_EQ(r.source.rfind("# Generated by nnmig " + std::string(kVersion) + ": pivot -> tf/seq\n", 0), 0u);
    // a dump next to this output would replace the input
    req.output_path = path("alexnet.py");
    req.dump_pivot = true;
    const CliOutcome clash = run(req);
    EXPECT_EQ(clash.exit_code, 2);
    EXPECT_TRUE(has(clash.diagnostics, ErrorCode::InvalidArgument));
    EXPECT_EQ(listing(), std::vector<std::string>{"alexnet.nn.json"});
}

TEST_F(Cli, ExplicitSourceDialectOverridesDetection) {
    CliRequest req = request(corpus_path("tf_tutorial.py"), kPtSubc);
    req.source_framework = Framework::ChannelFirst;
    req.source_style = Style::Sequential;
    EXPECT_EQ(run(req).exit_code, 2);
}

TEST_F(Cli, SyntaxErrorsAreLocated) {
    const std::string src = path("broken.py");
    std::ofstream(src) << "import torch\nx = (1,\n";
    const CliOutcome r = run(request(src, kPtSubc));
    EXPECT_EQ(r.exit_code, 2);
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].code, ErrorCode::SyntaxError);
    EXPECT_TRUE(r.diagnostics[0].location.known());
}

TEST_F(Cli, AtomicWriteReplacesWholeFiles) {
    const std::string target = path("out.py");
    std::ofstream(target) << "old contents that are longer than the new ones\n";
    write_atomically(target, "new\n");
    EXPECT_EQ(read_text(target), "new\n");
    EXPECT_EQ(listing(), std::vector<std::string>{"out.py"});
    EXPECT_THROW(write_atomically(path("missing/dir/out.py"), "x"), MigrationError);
}

TEST_F(Cli, ExecutableWritesAndReports) {
    const std::string out = path("tutorial_pt.py");
    const Process ok = nnmig_exec(corpus_path("tf_tutorial.py") + " --to pt --to-style subc -o " + out, dir);
    EXPECT_EQ(ok.status, 0) << ok.err;
    EXPECT_TRUE(ok.out.empty());
    EXPECT_NE(ok.err.find("wrote " + out), std::string::npos) << ok.err;
    EXPECT_TRUE(fs::exists(out));
}

TEST_F(Cli, ExecutablePrintsToStdout) {
    const Process p = nnmig_exec(corpus_path("lstm.py") + " --to pt --to-style subc --no-emit-training", dir);
    EXPECT_EQ(p.status, 0) << p.err;
    EXPECT_NE(p.out.find("class LSTMClassifier(nn.Module):"), std::string::npos);
    EXPECT_EQ(p.out.find("def train("), std::string::npos);
}

TEST_F(Cli, ExecutableDiagnosticsCarryFileLineColumn) {
    const std::string missing = path("nope.py");
    const Process p = nnmig_exec(missing + " --to tf --to-style seq", dir);
    EXPECT_EQ(p.status, 2);
    EXPECT_NE(p.err.find(missing + ":0:0: E001 MissingInputFile"), std::string::npos) << p.err;
    const Process lstm = nnmig_exec(corpus_path("lstm.py") + " --to tf --to-style seq", dir);
    EXPECT_EQ(lstm.status, 2);
    EXPECT_NE(lstm.err.find("E060 NonChainForSequential"), std::string::npos) << lstm.err;
    EXPECT_TRUE(lstm.out.empty());
}

TEST_F(Cli, ExecutableRejectsBadArguments) {
    EXPECT_EQ(nnmig_exec(corpus_path("lstm.py") + " --to jax --to-style seq", dir).status, 2);
    EXPECT_EQ(nnmig_exec(corpus_path("lstm.py") + " --to pt", dir).status, 2);
    EXPECT_EQ(nnmig_exec(corpus_path("alexnet.py") + " --to tf --to-style seq --input-shape 32,x", dir).status, 2);
    const Process v = nnmig_exec("--version", dir);
    EXPECT_EQ(v.status, 0);
    EXPECT_NE(v.out.find(kVersion), std::string::npos);
}

TEST_F(Cli, ExecutableBatchMode) {
    const fs::path outdir = dir / "out";
    const Process p = nnmig_exec(corpus_path("lstm.py") + " " + corpus_path("cnn_rnn.py") + " " + corpus_path("tf_tutorial.py") +
                                     " --to pt --to-style subc -o " + outdir.string(),
                                 dir);
    EXPECT_EQ(p.status, 0) << p.err;
    for (const char* name : {"lstm_pt_subc.py", "cnn_rnn_pt_subc.py", "tf_tutorial_pt_subc.py"}) {
        EXPECT_TRUE(fs::exists(outdir / name)) << name;
    }
    // one failure in the batch sets the exit status but the others are still written
    const fs::path seqdir = dir / "seq";
    const Process mixed = nnmig_exec(corpus_path("lstm.py") + " " + corpus_path("tf_tutorial.py") +
                                         " --to pt --to-style seq -o " + seqdir.string(),
                                     dir);
    EXPECT_EQ(mixed.status, 2);
    EXPECT_FALSE(fs::exists(seqdir / "lstm_pt_seq.py"));
    EXPECT_TRUE(fs::exists(seqdir / "tf_tutorial_pt_seq.py"));
}

TEST_F(Cli, ExecutableStrictExitCode) {
    const Process p = nnmig_exec(corpus_path("tf_tutorial.py") + " --to pt --to-style seq --input-shape 28,28,3 --strict", dir);
    EXPECT_EQ(p.status, 1);
    EXPECT_NE(p.err.find("N003"), std::string::npos) << p.err;
}
