// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "builders.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace nnmig;
using namespace nnmig::testing;

namespace {

std::set<ErrorCode> codes(const Diagnostics& ds) {
    std::set<ErrorCode> out;
    for (const auto& d : ds) out.insert(d.code);
    return out;
}

PivotNN three_layer_chain() {
    return chain("Net", {16}, {{"a", dense(8)}, {"b", dense(4)}, {"c", dense(2)}});
}

PivotNN diamond() {
    PivotNN nn = chain("Net", {16}, {{"a", dense(8)}});
    nn.modules.push_back(module("b", dense(4), {"a"}));
    nn.modules.push_back(module("c", dense(4), {"a"}));
    nn.modules.push_back(module("concat", TensorOpSpec::concatenate(-1), {"b", "c"}));
    return nn;
}

MigrationError deserialize_error(const std::string& text) {
    try {
        deserialize(text);
    } catch (const MigrationError& e) {
        return e;
    }
    ADD_FAILURE() << "document was accepted:\n" << text;
    return MigrationError(ErrorCode::InvalidArgument, "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    if (at != std::string::npos) s.replace(at, from.size(), to);
    return s;
}

}  // namespace

TEST(Validate, WellFormedChainIsClean) { EXPECT_TRUE(validate(three_layer_chain()).empty()); }

TEST(Validate, ForwardReference) {
    PivotNN nn = three_layer_chain();
    nn.modules[0].inputs = {"b"};
    const auto ds = validate(nn);
    ASSERT_FALSE(ds.empty());
    EXPECT_TRUE(codes(ds).count(ErrorCode::CycleOrForwardRef));
    EXPECT_EQ(ds.front().module, "a");
}

TEST(Validate, DropoutRateOutOfRange) {
    PivotNN nn = chain("Net", {4}, {{"drop", dropout(1.5)}});
    const auto ds = validate(nn);
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds[0].code, ErrorCode::AttributeRange);
    EXPECT_EQ(ds[0].module, "drop");
    EXPECT_TRUE(validate(chain("Net", {4}, {{"drop", dropout(0.0)}})).empty());
}

TEST(Validate, EmptyNetworkHasNoInputConsumer) {
    PivotNN nn;
    nn.name = "Empty";
    EXPECT_EQ(codes(validate(nn)), std::set<ErrorCode>{ErrorCode::NoInputConsumer});
}

TEST(Validate, NamingViolations) {
    PivotNN nn = three_layer_chain();
    nn.modules[1].name = "a";
    nn.modules[2].inputs = {"a"};
    EXPECT_TRUE(codes(validate(nn)).count(ErrorCode::DuplicateName));
    PivotNN bad = three_layer_chain();
    bad.modules[2].name = "2nd";
    EXPECT_TRUE(codes(validate(bad)).count(ErrorCode::InvalidName));
    PivotNN input = three_layer_chain();
    input.modules[2].name = std::string(kInputToken);
    EXPECT_TRUE(codes(validate(input)).count(ErrorCode::InvalidName));
}

TEST(Validate, GraphViolations) {
    PivotNN unknown = three_layer_chain();
    unknown.modules[2].inputs = {"nowhere"};
    EXPECT_TRUE(codes(validate(unknown)).count(ErrorCode::UnknownProducer));
    PivotNN two_outputs = three_layer_chain();
    two_outputs.modules[2].inputs = {"a"};
    EXPECT_EQ(codes(validate(two_outputs)), std::set<ErrorCode>{ErrorCode::MultipleOutputs});
    PivotNN arity = three_layer_chain();
    arity.modules[2].inputs = {"a", "b"};
    EXPECT_TRUE(codes(validate(arity)).count(ErrorCode::InputArity));
    PivotNN lonely_concat = chain("Net", {4}, {{"cat", TensorOpSpec::concatenate(-1)}});
    EXPECT_TRUE(codes(validate(lonely_concat)).count(ErrorCode::InputArity));
}

TEST(Validate, AttributeViolations) {
    PivotNN act = chain("Net", {4}, {{"flat", flatten()}});
    act.modules[0].layer().activation = ActivationRef::of(Activation::Relu);
    EXPECT_EQ(codes(validate(act)), std::set<ErrorCode>{ErrorCode::ActivationOnNonLayer});
    PivotNN sym = chain("Net", {4}, {{"d", dense(2, ActivationRef::dynamic("not a name"))}});
    EXPECT_EQ(codes(validate(sym)), std::set<ErrorCode>{ErrorCode::InvalidName});
    PivotNN zero = chain("Net", {4}, {{"d", dense(0)}});
    EXPECT_EQ(codes(validate(zero)), std::set<ErrorCode>{ErrorCode::AttributeRange});
    PivotNN kernel = chain("Net", {8, 8, 1}, {{"c", conv2d(2, 3)}});
    kernel.modules[0].layer().as<ConvAttrs>().kernel = {3};
    EXPECT_EQ(codes(validate(kernel)), std::set<ErrorCode>{ErrorCode::AttributeRange});
    PivotNN reshape = chain("Net", {8}, {{"r", TensorOpSpec::reshape({-1, -1})}});
    EXPECT_EQ(codes(validate(reshape)), std::set<ErrorCode>{ErrorCode::AttributeRange});
}

TEST(Validate, PermuteMustBeAPermutation) {
    EXPECT_EQ(codes(validate(chain("Net", {4, 4}, {{"p", TensorOpSpec::permute({0, 2, 2})}}))),
              std::set<ErrorCode>{ErrorCode::PermuteOrder});
    EXPECT_EQ(codes(validate(chain("Net", {4, 4}, {{"t", TensorOpSpec::transpose(1, 1)}}))),
              std::set<ErrorCode>{ErrorCode::PermuteOrder});
    EXPECT_TRUE(validate(chain("Net", {4, 4}, {{"p", TensorOpSpec::permute({0, 2, 1})}})).empty());
}

TEST(Validate, ShapeConfigAndDatasets) {
    PivotNN nn = three_layer_chain();
    nn.input_shape = TensorShape({Dim::known(4), Dim::symbolic_batch()});
    EXPECT_TRUE(codes(validate(nn)).count(ErrorCode::BatchPosition));
    PivotNN cfg = three_layer_chain();
    cfg.config = TrainingConfig{};
    cfg.config->learning_rate = 0;
    cfg.config->epochs = 0;
    EXPECT_EQ(codes(validate(cfg)), std::set<ErrorCode>{ErrorCode::ConfigRange});
    PivotNN ds = three_layer_chain();
    ds.datasets.push_back(DatasetRef{"train", "", DatasetTask::Classification, InputFormat::Images});
    EXPECT_EQ(codes(validate(ds)), std::set<ErrorCode>{ErrorCode::DatasetPath});
}

TEST(Validate, SubNetworks) {
    PivotNN nn = chain("Net", {8}, {{"blk", SubNetRef{"Block"}}});
    EXPECT_EQ(codes(validate(nn)), std::set<ErrorCode>{ErrorCode::UnknownSubNetwork});
    PivotNN block = chain("Block", {8}, {{"inner", dense(2)}});
    block.input_shape.reset();
    nn.sub_networks.push_back(block);
    EXPECT_TRUE(validate(nn).empty());
    // a sub-network that calls itself never bottoms out
    nn.sub_networks[0].modules.push_back(module("again", SubNetRef{"Block"}, {"inner"}));
    EXPECT_TRUE(codes(validate(nn)).count(ErrorCode::NestingTooDeep));
}

TEST(TopoOrder, ChainAndDiamond) {
    EXPECT_EQ(topo_order(three_layer_chain()), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(topo_order(diamond()), (std::vector<std::string>{"a", "b", "c", "concat"}));
}

TEST(TopoOrder, CnnRnnJoinFollowsBothBranches) {
    const PivotNN nn = load_fixture(fixtures()[3]);
    const auto order = topo_order(nn);
    EXPECT_TRUE(respects_edges(nn, order));
    ASSERT_TRUE(brute_force_topo(nn).has_value());
    EXPECT_TRUE(respects_edges(nn, *brute_force_topo(nn)));
    const auto pos = [&](const std::string& n) { return std::find(order.begin(), order.end(), n) - order.begin(); };
    EXPECT_GT(pos("concat"), pos("flatten"));
    EXPECT_GT(pos("concat"), pos("rnn"));
}

TEST(TopoOrder, CycleIsRejected) {
    PivotNN nn = three_layer_chain();
    nn.modules[0].inputs = {"c"};
    EXPECT_FALSE(brute_force_topo(nn).has_value());
    try {
        topo_order(nn);
        FAIL();
    } catch (const MigrationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::CycleOrForwardRef);
        EXPECT_EQ(e.module(), "a");
    }
}

TEST(PivotJson, RoundTripsFixtures) {
    for (const auto& f : fixtures()) {
        const PivotNN nn = load_fixture(f);
        const std::string text = serialize(nn);
        EXPECT_EQ(deserialize(text), nn) << f.label;
        EXPECT_EQ(serialize(deserialize(text)), text) << f.label;
    }
}

TEST(PivotJson, CommittedAlexNetDocument) {
    const PivotNN nn = deserialize(read_text(corpus_path("alexnet.nn.json")));
    EXPECT_EQ(count_layers(nn), 15u);
    EXPECT_EQ(nn.modules.size(), 15u);
    EXPECT_EQ(nn, load_fixture(fixtures()[0]));
}

TEST(PivotJson, EmptyModuleListIsRejected) {
    const std::string text = R"({"schema_version": 1, "name": "Net", "modules": []})";
    EXPECT_EQ(deserialize_error(text).code(), ErrorCode::NoInputConsumer);
}

TEST(PivotJson, SyntaxErrorsCarryLineAndColumn) {
    const std::string text = "{\n  \"schema_version\": 1,\n  \"name\": \"Net\" \"modules\": []\n}";
    const auto e = deserialize_error(text);
    EXPECT_EQ(e.code(), ErrorCode::MalformedPivot);
    EXPECT_EQ(e.location().line, 3);
    EXPECT_GT(e.location().column, 1);
}

TEST(PivotJson, SchemaViolationsNameTheirPointer) {
    const std::string good = serialize(three_layer_chain());
    const auto kind = deserialize_error(replace(good, "\"Linear\"", "\"Bilinear\""));
    EXPECT_EQ(kind.code(), ErrorCode::MalformedPivot);
    EXPECT_NE(std::string(kind.what()).find("/modules/0"), std::string::npos) << kind.what();
    EXPECT_EQ(deserialize_error(replace(good, "\"out_features\": 8", "\"out_features\": \"8\"")).code(),
              ErrorCode::MalformedPivot);
    EXPECT_EQ(deserialize_error(replace(good, "\"out_features\": 8", "\"out_features\": 8, \"bias\": true")).code(),
              ErrorCode::MalformedPivot);
    EXPECT_EQ(deserialize_error(replace(good, "\"schema_version\": 1", "\"schema_version\": 7")).code(),
              ErrorCode::MalformedPivot);
    const auto fwd = deserialize_error(replace(good, "\"INPUT\"", "\"c\""));
    EXPECT_EQ(fwd.code(), ErrorCode::CycleOrForwardRef);
    EXPECT_NE(std::string(fwd.what()).find("/modules/0"), std::string::npos) << fwd.what();
}

TEST(PivotJson, SerializeRefusesInvalidPivots) {
    PivotNN nn = three_layer_chain();
    nn.modules[1].name = "a";
    EXPECT_THROW(serialize(nn), MigrationError);
}

TEST(PivotJson, ActivationsAndPaddingForms) {
    PivotNN nn = chain("Net", {8, 8, 2}, {{"c1", conv2d(4, 3, 1, Padding::same(), ActivationRef::dynamic("act"))},
                                          {"c2", conv2d(4, 3, 2, Padding::explicit_({1, 0}),
                                                        ActivationRef::of(Activation::LeakyRelu))},
                                          {"flat", flatten()},
                                          {"out", dense(3, ActivationRef::of(Activation::Softmax))}});
    EXPECT_EQ(deserialize(serialize(nn)), nn);
}

TEST(WithoutInputDims, IgnoresOnlyFilledDimensions) {
    const PivotNN nn = load_fixture(fixtures()[4]);
    PivotNN bare = nn;
    bare.find("linear")->layer().as<LinearAttrs>().in_features.reset();
    EXPECT_NE(bare, nn);
    EXPECT_EQ(without_input_dims(bare), without_input_dims(nn));
    bare.find("linear")->layer().as<LinearAttrs>().out_features = 65;
    EXPECT_NE(without_input_dims(bare), without_input_dims(nn));
}

TEST(Naming, SanitizeAndReserved) {
    EXPECT_EQ(sanitize_identifier("conv-1.a"), "conv_1_a");
    EXPECT_EQ(sanitize_identifier("3d"), "_3d");
    EXPECT_EQ(sanitize_identifier(""), "_");
    EXPECT_TRUE(is_reserved_name("class"));
    EXPECT_TRUE(is_reserved_name("training"));
    EXPECT_TRUE(is_reserved_name("x"));
    EXPECT_FALSE(is_reserved_name("conv1"));
}

TEST(Naming, AllocatorSuffixesDeterministically) {
    NameAllocator names;
    EXPECT_EQ(names.claim("layer"), "layer");
    EXPECT_TRUE(names.reserve("layer_1"));
    EXPECT_EQ(names.claim("layer"), "layer_2");
    EXPECT_EQ(names.claim("lay-er"), "lay_er");
    EXPECT_EQ(names.claim("lay_er"), "lay_er_1");
    EXPECT_EQ(names.claim("forward"), "forward_1");
    EXPECT_EQ(names.claim("dense", {"dense", "dense_1"}), "dense_2");
    EXPECT_FALSE(names.reserve("layer"));
}

TEST(Layout, ChannelOrdersAreInverse) {
    for (size_t rank = 3; rank <= 5; ++rank) {
        const Ints first = to_channel_first_order(rank);
        const Ints last = to_channel_last_order(rank);
        Ints identity(rank);
        for (size_t i = 0; i < rank; ++i) identity[i] = static_cast<int64_t>(i);
        EXPECT_EQ(compose_orders(first, last), identity);
        EXPECT_EQ(compose_orders(last, first), identity);
    }
    EXPECT_EQ(to_channel_first_order(4), (Ints{0, 3, 1, 2}));
    EXPECT_EQ(to_channel_last_order(4), (Ints{0, 2, 3, 1}));
}

TEST(Layout, RunsCoverConsecutiveChannelSensitiveLayers) {
    const PivotNN nn = chain("Net", {16, 16, 3}, {{"c1", conv2d(4, 3)}, {"p", maxpool2d(2)}, {"c2", conv2d(4, 3)},
                                                  {"flat", flatten()}, {"d", dense(2)}});
    const auto runs = channel_runs(nn);
    ASSERT_EQ(runs.size(), 1u);
    EXPECT_EQ(runs[0].first, 0u);
    EXPECT_EQ(runs[0].last, 2u);
    EXPECT_EQ(runs[0].tensor_rank(), 4u);
    EXPECT_TRUE(channel_runs(chain("Net", {8}, {{"d", dense(2)}, {"e", dense(2)}})).empty());
}
