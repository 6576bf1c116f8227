// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized properties over generated pivots.

#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace nnmig;
using namespace nnmig::testing;

namespace {

constexpr int kCases = 300;

/// Error codes a target may legitimately raise for `nn`; empty means it must succeed.
std::set<ErrorCode> expected_rejections(const PivotNN& nn, const Dialect& target) {
    std::set<ErrorCode> out;
    const bool pt = target.framework == Framework::ChannelFirst;
    if (target.style == Style::Sequential) {
        bool chain = nn.sub_networks.empty();
        for (size_t i = 0; i < nn.modules.size(); ++i) {
            const auto& m = nn.modules[i];
            const std::string prev = i == 0 ? std::string(kInputToken) : nn.modules[i - 1].name;
            if (m.inputs != std::vector<std::string>{prev}) chain = false;
            if (m.is_layer() && is_recurrent(m.layer().kind)) chain = false;
        }
        if (!chain) out.insert(ErrorCode::NonChainForSequential);
    }
    std::vector<const PivotNN*> nets{&nn};
    for (const auto& s : nn.sub_networks) nets.push_back(&s);
    for (const PivotNN* net : nets) {
        for (const auto& m : net->modules) {
            if (m.is_tensor_op()) {
                const auto& op = m.tensor_op();
                if (!pt && target.style == Style::Sequential && op.kind == TensorOpKind::Transpose) {
                    out.insert(ErrorCode::UnsupportedInTarget);
                }
                if (pt && (op.kind == TensorOpKind::Add || op.kind == TensorOpKind::Multiply) && m.inputs.size() > 2) {
                    out.insert(ErrorCode::UnsupportedInTarget);
                }
                continue;
            }
            if (!m.is_layer()) continue;
            const LayerSpec& l = m.layer();
            if (is_pool(l.kind)) {
                const auto& p = l.as<PoolAttrs>();
                if (!pt && p.padding.normalized().mode == Padding::Mode::Explicit) out.insert(ErrorCode::UnsupportedPadding);
                if (pt && p.padding.mode == Padding::Mode::Same) out.insert(ErrorCode::UnsupportedPadding);
            }
            if (is_conv(l.kind) && pt) {
                const auto& c = l.as<ConvAttrs>();
                const bool strided = std::any_of(c.stride.begin(), c.stride.end(), [](int64_t s) { return s != 1; });
                if (c.padding.mode == Padding::Mode::Same && strided) out.insert(ErrorCode::UnsupportedPadding);
            }
        }
    }
    return out;
}

}  // namespace

TEST(Properties, GeneratedNetworksReplayInTheShapeOracle) {
    PivotGenerator gen(7);
    for (int i = 0; i < kCases; ++i) {
        const PivotNN nn = gen.network();
        ASSERT_TRUE(validate(nn).empty()) << serialize(nn);
        ShapeOracle oracle(nn);
        auto want = oracle.replay(nn, extents_of(*nn.input_shape));
        ASSERT_TRUE(want.has_value()) << serialize(nn);
        const ShapeAnnotation ann = propagate(nn);
        for (const auto& [name, shape] : *want) {
            EXPECT_EQ(extents_of(ann.output_of(name)), shape) << name << "\n" << serialize(nn);
        }
    }
}

TEST(Properties, DeclarationOrderAgreesWithBruteForceTopologicalOrder) {
    PivotGenerator gen(11);
    for (int i = 0; i < kCases; ++i) {
        const PivotNN nn = gen.network();
        const auto order = topo_order(nn);
        ASSERT_TRUE(brute_force_topo(nn).has_value());
        EXPECT_TRUE(respects_edges(nn, order));
        // reversing a network with an edge between two modules breaks declaration order
        PivotNN reversed = nn;
        std::reverse(reversed.modules.begin(), reversed.modules.end());
        std::vector<std::string> names;
        for (const auto& m : reversed.modules) names.push_back(m.name);
        if (respects_edges(reversed, names)) continue;
        EXPECT_THROW(topo_order(reversed), MigrationError);
        EXPECT_TRUE(brute_force_topo(reversed).has_value());  // still acyclic, only misordered
    }
}

TEST(Properties, PivotJsonRoundTrips) {
    PivotGenerator gen(3);
    for (int i = 0; i < kCases; ++i) {
        const PivotNN nn = gen.network();
        const std::string text = serialize(nn);
        const PivotNN back = deserialize(text);
        EXPECT_EQ(back, nn);
        EXPECT_EQ(serialize(back), text);
    }
}

TEST(Properties, EmitThenExtractIsIdentityInEveryTarget) {
    PivotGenerator gen(2026);
    int succeeded = 0;
    int rejected = 0;
    for (int i = 0; i < kCases; ++i) {
        PivotNN nn = gen.network();
        nn = infer_missing_inputs(nn, propagate(nn));
        for (const Dialect& target : kAllDialects) {
            const auto allowed = expected_rejections(nn, target);
            std::string code;
            try {
                code = emit_for(nn, target);
            } catch (const MigrationError& e) {
                EXPECT_TRUE(allowed.count(e.code())) << to_string(target) << ": " << e.what() << "\n" << serialize(nn);
                ++rejected;
                continue;
            }
            EXPECT_TRUE(allowed.empty()) << to_string(target) << " accepted a network it should reject\n" << serialize(nn);
            Dialect detected;
            PivotNN back;
            try {
                back = reextract(code, &detected);
            } catch (const MigrationError& e) {
                ADD_FAILURE() << to_string(target) << ": " << format_diagnostic(e.diagnostic()) << "\n" << code;
                continue;
            }
            EXPECT_EQ(detected, target);
            EXPECT_EQ(without_input_dims(back), without_input_dims(nn))
                << to_string(target) << "\n" << serialize(nn) << "\n----\n" << serialize(back) << "\n----\n" << code;
            ++succeeded;
        }
    }
    // the generator should mostly produce expressible networks
    EXPECT_GT(succeeded, rejected);
}

TEST(Properties, EmissionIsDeterministic) {
    PivotGenerator gen(99);
    for (int i = 0; i < 60; ++i) {
        PivotNN nn = gen.network();
        nn = infer_missing_inputs(nn, propagate(nn));
        for (const Dialect& target : kAllDialects) {
            std::string a;
            std::string b;
            try {
                a = emit_for(nn, target);
                b = emit_for(nn, target);
            } catch (const MigrationError&) {
                continue;
            }
            EXPECT_EQ(a, b);
        }
    }
}

TEST(Properties, ChannelFirstOutputsNeverLeaveARunWithoutItsInversePermute) {
    PivotGenerator gen(5);
    for (int i = 0; i < kCases; ++i) {
        PivotNN nn = gen.network();
        const ShapeAnnotation ann = propagate(nn);
        const GenPlan plan = plan_permutes(build_plan(nn, ann), ann, {Framework::ChannelFirst, Style::Subclassing});
        // composing every permute along the plan must give the identity
        Ints total;
        for (const auto& r : plan.records) {
            for (const auto& op : r.pre_ops) total = total.empty() ? op.dims : compose_orders(total, op.dims);
            for (const auto& op : r.post_ops) {
                total = compose_orders(total, op.dims);
                Ints identity(total.size());
                for (size_t k = 0; k < identity.size(); ++k) identity[k] = static_cast<int64_t>(k);
                EXPECT_EQ(total, identity);
                total.clear();
            }
        }
        EXPECT_TRUE(total.empty());
    }
}
