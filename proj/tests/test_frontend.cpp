// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace nnmig;
using namespace nnmig::testing;

namespace {

ErrorCode parse_error(const std::string& text, int* line = nullptr) {
    try {
        parse_source(text);
    } catch (const MigrationError& e) {
        if (line) *line = e.location().line;
        return e.code();
    }
    ADD_FAILURE() << "parsed:\n" << text;
    return ErrorCode::InvalidArgument;
}

/// The first call expression statement of `text`, interpreted in `fw`.
std::optional<Construct> construct(const std::string& text, Framework fw) {
    const SyntaxTree tree = parse_source(text);
    const ImportMap imports(tree.root);
    const SymbolTable symbols = module_symbols(tree);
    for (const auto& s : tree.root.children) {
        if (s.is(NodeKind::ExprStmt)) return interpret_constructor(s[0], fw, imports, symbols);
    }
    ADD_FAILURE() << "no expression statement";
    return std::nullopt;
}

ErrorCode construct_error(const std::string& text, Framework fw) {
    try {
        construct(text, fw);
    } catch (const MigrationError& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted:\n" << text;
    return ErrorCode::InvalidArgument;
}

const std::string kTf = "from tensorflow.keras import layers\n";
const std::string kPt = "import torch.nn as nn\n";

}  // namespace

TEST(Syntax, KeywordArgumentsOfALayerCall) {
    const SyntaxTree tree = parse_source("layers.Dense(units=10, activation='relu')\n");
    ASSERT_EQ(tree.root.size(), 1u);
    EXPECT_EQ(dump(tree.root[0]),
              "(ExprStmt (Call (Attribute Dense (Name layers)) (Keyword units (Number 10)) "
              "(Keyword activation (String 'relu'))))");
}

TEST(Syntax, EmptyFile) {
    EXPECT_EQ(parse_source("").root.size(), 0u);
    EXPECT_EQ(parse_source("\n# only a comment\n\n").root.size(), 0u);
}

TEST(Syntax, UnbalancedBracketReportsItsLine) {
    int line = 0;
    EXPECT_EQ(parse_error("x = 1\ny = (2,\nz = 3\n", &line), ErrorCode::SyntaxError);
    EXPECT_GE(line, 2);
    EXPECT_EQ(parse_error("x = [1, 2)\n", &line), ErrorCode::SyntaxError);
    EXPECT_EQ(line, 1);
}

TEST(Syntax, IndentationErrors) {
    EXPECT_EQ(parse_error("def f():\nreturn 1\n"), ErrorCode::SyntaxError);
    EXPECT_EQ(parse_error("if x:\n        a = 1\n    b = 2\n"), ErrorCode::SyntaxError);
}

TEST(Syntax, LocationsAreOneBased) {
    const SyntaxTree tree = parse_source("a = 1\n\nclass Net(nn.Module):\n    pass\n");
    EXPECT_EQ(tree.root[0].loc, (SourceLocation{1, 1}));
    EXPECT_EQ(tree.root[1].loc.line, 3);
    EXPECT_TRUE(tree.root[1].is(NodeKind::ClassDef));
    EXPECT_EQ(tree.root[1].text, "Net");
}

TEST(Syntax, CoversEverydayPython) {
    const std::string src = R"PY(
import os, sys as system
from . import sibling
from collections import OrderedDict as OD

@decorator(arg=1)
class A(Base, metaclass=Meta):
    """Docstring."""
    x: int = 3

    def f(self, a, /, b=2, *args, c, d=4, **kw) -> "A":
        y = [i * 2 for i in range(10) if i % 2 if i > 3]
        z = {k: v for k, v in kw.items()}
        s = {1, 2, *args}
        g = (t for t in y)
        lam = lambda p, q=1: p + q
        cond = a if b else c
        a, (b, *rest) = 1, (2, 3, 4)
        a += 1; b //= 2
        with open("f") as fh, open("g"):
            data = fh.read()[1:-1:2]
        try:
            pass
        except (ValueError, KeyError) as exc:
            raise RuntimeError("x") from exc
        else:
            pass
        finally:
            del data
        while not (a and b or c) and a is not None and b not in s:
            break
        for i, j in zip(y, y):
            continue
        else:
            pass
        if (n := len(y)) > 2:
            pass
        elif a <= b < c:
            pass
        assert a, "message"
        global counter
        return f"{a!r:>{b}}" + 'x' 'y' + r'\d' + b"\x00" + """
multi
line"""

async def main():
    await thing()
    async with lock:
        pass
    async for item in stream:
        yield item
    yield from other()

value = -x ** 2 @ m | 3 & ~4 ^ 5 << 1 >> 2
nums = [0x1f, 0o17, 0b101, 1_000, 1e-3, .5, 3j]
print(*args, **kwargs)
call(x
     for x in y)
long = 1 + \
    2
)PY";
    const SyntaxTree tree = parse_source(src);
    EXPECT_GT(tree.root.size(), 8u);
}

TEST(Syntax, ParsesEveryCorpusFile) {
    for (const auto& f : fixtures()) EXPECT_NO_THROW(parse_source(read_text(corpus_path(f.file)))) << f.file;
}

TEST(Dialect, Fixtures) {
    for (const auto& f : fixtures()) {
        const auto det = detect_dialect(parse_source(read_text(corpus_path(f.file))));
        EXPECT_EQ(det.dialect, f.dialect) << f.label;
        EXPECT_FALSE(det.note.has_value()) << f.label;
    }
}

TEST(Dialect, TfTutorialIsChannelLastSequential) {
    const auto det = detect_dialect(parse_source(read_text(corpus_path("tf_tutorial.py"))));
    EXPECT_EQ(det.dialect, (Dialect{Framework::ChannelLast, Style::Sequential}));
}

TEST(Dialect, AlexNetIsChannelFirstSubclassing) {
    const auto det = detect_dialect(parse_source(read_text(corpus_path("alexnet.py"))));
    EXPECT_EQ(det.dialect, (Dialect{Framework::ChannelFirst, Style::Subclassing}));
}

TEST(Dialect, NoFrameworkImport) {
    try {
        detect_dialect(parse_source("import numpy as np\nx = np.zeros(3)\n"));
        FAIL();
    } catch (const MigrationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownDialect);
    }
}

TEST(Dialect, BothFrameworks) {
    try {
        detect_dialect(parse_source("import torch\nimport tensorflow as tf\n"));
        FAIL();
    } catch (const MigrationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MixedDialect);
    }
}

TEST(Dialect, FrameworkWithoutModel) {
    try {
        detect_dialect(parse_source("import torch\nx = torch.zeros(3)\n"));
        FAIL();
    } catch (const MigrationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownDialect);
    }
}

TEST(Dialect, LastModelWinsWithANote) {
    const std::string src = kPt +
                            "class Net(nn.Module):\n"
                            "    def forward(self, x):\n"
                            "        return x\n"
                            "seq = nn.Sequential(nn.Linear(4, 2))\n";
    const auto det = detect_dialect(parse_source(src));
    EXPECT_EQ(det.dialect.style, Style::Sequential);
    ASSERT_TRUE(det.note.has_value());
    EXPECT_EQ(det.note->code, ErrorCode::AmbiguousStyle);
    EXPECT_EQ(det.note->severity, Severity::Note);
    EXPECT_EQ(det.note->location.line, 5);
}

TEST(Dialect, KerasFunctionalImportsAreChannelLast) {
    const auto det = detect_dialect(parse_source("import keras\nmodel = keras.Sequential([keras.layers.Dense(2)])\n"));
    EXPECT_EQ(det.dialect, (Dialect{Framework::ChannelLast, Style::Sequential}));
}

TEST(Symbols, ConstantsFoldAndReassignmentDemotes) {
    const SyntaxTree tree = parse_source(
        "k = 3\n"
        "size = (k, k * 2)\n"
        "rate = 0.5\n"
        "name = 'relu'\n"
        "neg = -k\n"
        "flag = True\n"
        "both = k\n"
        "both = 4\n"
        "runtime = get_flag()\n");
    const SymbolTable st = module_symbols(tree);
    EXPECT_EQ(st.lookup("k")->i, 3);
    EXPECT_EQ(st.lookup("size")->int_tuple(), (Ints{3, 6}));
    EXPECT_DOUBLE_EQ(st.lookup("rate")->f, 0.5);
    EXPECT_EQ(st.lookup("name")->s, "relu");
    EXPECT_EQ(st.lookup("neg")->i, -3);
    EXPECT_TRUE(st.lookup("flag")->b);
    EXPECT_FALSE(st.lookup("both")->known());
    EXPECT_FALSE(st.lookup("runtime")->known());
    EXPECT_EQ(st.lookup("runtime")->symbol, "runtime");
    EXPECT_FALSE(st.lookup("never").has_value());
}

TEST(Symbols, FunctionScopesSeeModuleConstants) {
    const SyntaxTree tree = parse_source("width = 8\ndef build(units):\n    depth = width * 2\n    return depth\n");
    const SymbolTable outer = module_symbols(tree);
    const SymbolTable inner = function_symbols(tree.root[1], &outer);
    EXPECT_EQ(inner.lookup("depth")->i, 16);
    EXPECT_FALSE(inner.lookup("units")->known());
}

TEST(Vocab, DenseUnitsAndActivation) {
    const auto c = construct(kTf + "layers.Dense(units=10, activation='relu')\n", Framework::ChannelLast);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->role, Construct::Role::Layer);
    EXPECT_EQ(c->layer.kind, LayerKind::Linear);
    EXPECT_EQ(c->layer.as<LinearAttrs>().out_features, 10);
    EXPECT_FALSE(c->layer.as<LinearAttrs>().in_features.has_value());
    EXPECT_EQ(c->layer.activation, ActivationRef::of(Activation::Relu));
}

TEST(Vocab, IndirectActivationStaysSymbolic) {
    const auto c = construct(kTf + "actv = get_flag()\nlayers.Dense(64, activation=actv)\n", Framework::ChannelLast);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->layer.activation, ActivationRef::dynamic("actv"));
    // a constant string bound to a name is resolved
    const auto lit = construct(kTf + "actv = 'tanh'\nlayers.Dense(64, activation=actv)\n", Framework::ChannelLast);
    EXPECT_EQ(lit->layer.activation, ActivationRef::of(Activation::Tanh));
}

TEST(Vocab, ChannelFirstConvolution) {
    const auto c = construct(kPt + "nn.Conv2d(3, 16, kernel_size=5, stride=2, padding=2)\n", Framework::ChannelFirst);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->layer.kind, LayerKind::Conv2D);
    const auto& a = c->layer.as<ConvAttrs>();
    EXPECT_EQ(a.in_channels, 3);
    EXPECT_EQ(a.out_channels, 16);
    EXPECT_EQ(a.kernel, (Ints{5, 5}));
    EXPECT_EQ(a.stride, (Ints{2, 2}));
    EXPECT_EQ(a.padding, Padding::explicit_({2, 2}));
}

TEST(Vocab, ChannelLastConvolutionAndPool) {
    const auto c = construct(kTf + "layers.Conv1D(8, 3, strides=2, padding='same')\n", Framework::ChannelLast);
    EXPECT_EQ(c->layer.kind, LayerKind::Conv1D);
    EXPECT_EQ(c->layer.as<ConvAttrs>().stride, (Ints{2}));
    EXPECT_EQ(c->layer.as<ConvAttrs>().padding, Padding::same());
    const auto p = construct(kTf + "layers.AveragePooling3D(pool_size=(2, 2, 2))\n", Framework::ChannelLast);
    EXPECT_EQ(p->layer.kind, LayerKind::AvgPool3D);
    EXPECT_EQ(p->layer.as<PoolAttrs>().stride, (Ints{2, 2, 2}));
}

TEST(Vocab, StandaloneActivationModule) {
    const auto c = construct(kPt + "nn.Sigmoid()\n", Framework::ChannelFirst);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->role, Construct::Role::Activation);
    EXPECT_EQ(c->activation, ActivationRef::of(Activation::Sigmoid));
}

TEST(Vocab, RecurrentFlags) {
    const auto c = construct(kPt + "nn.LSTM(32, 64, batch_first=True, bidirectional=True)\n", Framework::ChannelFirst);
    ASSERT_TRUE(c.has_value());
    const auto& a = c->layer.as<RecurrentAttrs>();
    EXPECT_EQ(a.input_size, 32);
    EXPECT_EQ(a.hidden_size, 64);
    EXPECT_TRUE(a.bidirectional);
}

TEST(Vocab, UnknownLayersAndAttributes) {
    EXPECT_EQ(construct_error(kTf + "layers.MultiHeadAttention(2, 4)\n", Framework::ChannelLast), ErrorCode::UnsupportedLayer);
    EXPECT_EQ(construct_error(kPt + "nn.Transformer()\n", Framework::ChannelFirst), ErrorCode::UnsupportedLayer);
    EXPECT_EQ(construct_error(kTf + "layers.Dense(4, use_bias=False)\n", Framework::ChannelLast),
              ErrorCode::UnsupportedAttribute);
    EXPECT_EQ(construct_error(kPt + "nn.Conv2d(3, 8, 3, dilation=2)\n", Framework::ChannelFirst),
              ErrorCode::UnsupportedAttribute);
    EXPECT_EQ(construct_error(kPt + "nn.LSTM(4, 8)\n", Framework::ChannelFirst), ErrorCode::UnsupportedAttribute);
}

TEST(Vocab, CallsOutsideTheFrameworkAreIgnored) {
    EXPECT_FALSE(construct(kTf + "print(3)\n", Framework::ChannelLast).has_value());
    EXPECT_FALSE(construct("import numpy as np\nnp.zeros(3)\n", Framework::ChannelLast).has_value());
}
