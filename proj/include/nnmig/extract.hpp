// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Lifts a parsed source file into a PivotNN. One extractor per (framework, style) pair; the
// shared pieces are constructor interpretation (vocab.hpp), the Sequential entry walker and
// the forward-method dataflow interpreter below.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nnmig/dialect.hpp"
#include "nnmig/layout.hpp"
#include "nnmig/naming.hpp"
#include "nnmig/pivot.hpp"
#include "nnmig/symbols.hpp"
#include "nnmig/syntax.hpp"
#include "nnmig/vocab.hpp"

namespace nnmig {

struct ExtractOptions {
    /// Network name when the source names none (no name keyword, class or build_ function).
    std::string default_name = "Net";
};

namespace extract_detail {

[[noreturn]] inline void fail(ErrorCode code, SourceLocation loc, const std::string& msg) {
    throw MigrationError(code, msg, loc);
}

struct Raw {
    ModuleSpec spec;
    bool zero_pad = false;
    Ints pad;
};

enum class RnnMode { Unknown, Sequence, Last };

/// Module list under construction with the bookkeeping needed for activation folding.
class Graph {
public:
    std::vector<Raw> mods;
    NameAllocator names;
    std::map<std::string, int> stamp;
    std::map<std::string, size_t> uses;
    std::map<std::string, RnnMode> rnn_mode;

    Raw* find(const std::string& name) {
        for (auto& r : mods) {
            if (r.spec.name == name) return &r;
        }
        return nullptr;
    }

    /// Names that named modules will ask for later; unnamed modules never take them.
    std::set<std::string> preferred;

    std::string add(const std::string& hint, ModuleKind kind, std::vector<std::string> inputs, SourceLocation loc,
                    bool anonymous = false) {
        Raw r;
        r.spec.name = anonymous ? names.claim(hint, preferred) : names.claim(hint);
        r.spec.kind = std::move(kind);
        r.spec.inputs = std::move(inputs);
        r.spec.origin = loc;
        for (const auto& in : r.spec.inputs) {
            if (in != kInputToken) ++uses[in];
        }
        mods.push_back(std::move(r));
        return mods.back().spec.name;
    }

    std::string add_zero_pad(const std::string& hint, Ints amounts, const std::string& input, SourceLocation loc) {
        const std::string name = add(hint, LayerSpec{}, {input}, loc);
        mods.back().zero_pad = true;
        mods.back().pad = std::move(amounts);
        return name;
    }

    /// Folds `act` into the layer producing `producer` (at activation version `version`).
    /// Returns the new version.
    int fold_activation(const std::string& producer, int version, const ActivationRef& act, SourceLocation loc) {
        if (act.is_none()) return version;
        if (producer == kInputToken) {
            fail(ErrorCode::ActivationOnNonLayer, loc, "activation applied directly to the network input");
        }
        Raw* r = find(producer);
        if (!r || r->zero_pad || !r->spec.is_layer() || !accepts_activation(r->spec.layer().kind)) {
            const std::string what = r && r->spec.is_layer() && !r->zero_pad
                                         ? std::string(to_string(r->spec.layer().kind))
                                         : std::string("this module");
            fail(ErrorCode::ActivationOnNonLayer, loc,
                 "activation after " + what + " '" + producer + "' cannot be represented; only Linear and Conv layers carry activations");
        }
        if (!r->spec.layer().activation.is_none()) {
            fail(ErrorCode::ActivationOnNonLayer, loc, "layer '" + producer + "' already has an activation");
        }
        if (version != stamp[producer] || uses[producer] > 0) {
            fail(ErrorCode::UnresolvedDataflow, loc,
                 "the pre-activation output of '" + producer + "' is used elsewhere; the activation cannot be folded");
        }
        r->spec.layer().activation = act;
        return ++stamp[producer];
    }

    void check_version(const std::string& producer, int version, SourceLocation loc) {
        if (producer == kInputToken) return;
        if (version != stamp[producer]) {
            fail(ErrorCode::UnresolvedDataflow, loc,
                 "the pre-activation output of '" + producer + "' is used after its activation was applied");
        }
    }

    void set_rnn_mode(const std::string& module, RnnMode mode, SourceLocation loc) {
        RnnMode& cur = rnn_mode[module];
        if (cur != RnnMode::Unknown && cur != mode) {
            fail(ErrorCode::UnsupportedAttribute, loc,
                 "recurrent layer '" + module + "' is used both as a full sequence and as its last step");
        }
        cur = mode;
    }
};

inline bool has_weights(LayerKind k) {
    return k == LayerKind::Linear || is_conv(k) || k == LayerKind::Embedding || is_recurrent(k);
}

/// ZeroPadding immediately feeding a valid-padding convolution becomes explicit conv padding.
inline void fold_zero_padding(std::vector<Raw>& mods) {
    for (size_t i = 0; i < mods.size(); ++i) {
        if (!mods[i].zero_pad) continue;
        const std::string pad_name = mods[i].spec.name;
        std::vector<size_t> readers;
        for (size_t j = 0; j < mods.size(); ++j) {
            if (std::count(mods[j].spec.inputs.begin(), mods[j].spec.inputs.end(), pad_name)) readers.push_back(j);
        }
        bool ok = readers.size() == 1;
        ModuleSpec* conv = ok ? &mods[readers[0]].spec : nullptr;
        if (ok) {
            ok = conv->is_layer() && is_conv(conv->layer().kind) && !mods[readers[0]].zero_pad &&
                 conv->inputs.size() == 1 &&
                 spatial_rank(conv->layer().kind) == static_cast<int>(mods[i].pad.size()) &&
                 conv->layer().as<ConvAttrs>().padding.mode == Padding::Mode::Valid;
        }
        if (!ok) {
            fail(ErrorCode::UnsupportedLayer, mods[i].spec.origin,
                 "ZeroPadding is supported only directly before a valid-padding convolution of the same rank");
        }
        conv->layer().as<ConvAttrs>().padding = Padding::explicit_(mods[i].pad).normalized();
        conv->inputs = mods[i].spec.inputs;
        mods.erase(mods.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
    }
}

/// Removes permute pairs that wrap a channel-sensitive run the way the channel-first
/// generator injects them.
inline void drop_injected_permutes(PivotNN& nn) {
    bool changed = true;
    while (changed) {
        changed = false;
        const auto readers = consumers_of(nn);
        auto readers_of = [&](const std::string& n) {
            auto it = readers.find(n);
            return it == readers.end() ? std::vector<std::string>{} : it->second;
        };
        for (size_t i = 0; i + 1 < nn.modules.size() && !changed; ++i) {
            const ModuleSpec& p = nn.modules[i];
            if (!p.is_tensor_op() || p.tensor_op().kind != TensorOpKind::Permute) continue;
            const Ints& order = p.tensor_op().dims;
            const ModuleSpec& first = nn.modules[i + 1];
            if (!is_channel_sensitive_module(first)) continue;
            const int sr = spatial_rank(first.layer().kind);
            const size_t rank = static_cast<size_t>(sr) + 2;
            if (order != to_channel_first_order(rank)) continue;
            if (first.inputs != std::vector<std::string>{p.name} || readers_of(p.name).size() != 1) continue;
            size_t last = i + 1;
            while (last + 1 < nn.modules.size()) {
                const ModuleSpec& next = nn.modules[last + 1];
                if (!is_channel_sensitive_module(next) || spatial_rank(next.layer().kind) != sr) break;
                if (next.inputs != std::vector<std::string>{nn.modules[last].name}) break;
                if (readers_of(nn.modules[last].name).size() != 1) break;
                ++last;
            }
            if (last + 1 >= nn.modules.size()) continue;
            const ModuleSpec& q = nn.modules[last + 1];
            if (!q.is_tensor_op() || q.tensor_op().kind != TensorOpKind::Permute ||
                q.tensor_op().dims != to_channel_last_order(rank) ||
                q.inputs != std::vector<std::string>{nn.modules[last].name} ||
                readers_of(nn.modules[last].name).size() != 1) {
                continue;
            }
            const std::string p_name = p.name;
            const std::string q_name = q.name;
            const std::string last_name = nn.modules[last].name;
            const std::vector<std::string> p_inputs = p.inputs;
            nn.modules[i + 1].inputs = p_inputs;
            for (auto& m : nn.modules) {
                for (auto& in : m.inputs) {
                    if (in == q_name) in = last_name;
                }
            }
            nn.modules.erase(nn.modules.begin() + static_cast<std::ptrdiff_t>(last + 1));
            nn.modules.erase(nn.modules.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
        }
    }
}

inline void throw_if_invalid(const PivotNN& nn, SourceLocation fallback) {
    Diagnostics diags = validate(nn);
    if (diags.empty()) return;
    Diagnostic d = diags.front();
    if (!d.location.known()) {
        d.location = fallback;
        std::string mod = d.module;
        if (auto slash = mod.rfind('/'); slash != std::string::npos) mod = mod.substr(slash + 1);
        if (const ModuleSpec* m = nn.find(mod)) d.location = m->origin;
    }
    throw MigrationError(d);
}

/// One element of a Sequential container.
struct SeqEntry {
    const Node* call = nullptr;
    std::string key;  // OrderedDict key, when given
};

/// Shared state of one extraction run.
struct Context {
    const SyntaxTree& tree;
    Framework fw;
    ImportMap imports;
    SymbolTable module_symbols;
    Diagnostics* notes;

    Context(const SyntaxTree& t, Framework f, Diagnostics* n)
        : tree(t), fw(f), imports(t.root), module_symbols(nnmig::module_symbols(t)), notes(n) {}

    void note(ErrorCode code, SourceLocation loc, std::string msg) const {
        if (notes) notes->push_back(Diagnostic{code, Severity::Note, {}, std::move(msg), loc});
    }

    bool is_sequential(const Node& call) const { return is_sequential_call(call, imports, fw); }

    std::optional<Construct> construct(const Node& call, const SymbolTable& st) const {
        return interpret_constructor(call, fw, imports, st);
    }
};

/// Elements of a Sequential construction (list form, positional form or OrderedDict form).
inline std::vector<SeqEntry> sequential_entries(const Context& ctx, const Node& call) {
    std::vector<SeqEntry> out;
    auto from_list = [&](const Node& list) {
        if (!list.is(NodeKind::List) && !list.is(NodeKind::Tuple)) {
            fail(ErrorCode::UnsupportedAttribute, list.loc, "Sequential layers must be an inline list");
        }
        for (const auto& item : list.children) out.push_back({&item, {}});
    };
    if (ctx.fw == Framework::ChannelLast) {
        for (size_t i = 1; i < call.size(); ++i) {
            const Node& a = call[i];
            if (a.is(NodeKind::Keyword)) {
                if (a.text == "layers") from_list(a[0]);
                else if (a.text != "name" && a.text != "trainable") {
                    fail(ErrorCode::UnsupportedAttribute, a.loc, "unsupported Sequential argument '" + a.text + "'");
                }
            } else if (i == 1) {
                from_list(a);
            } else {
                fail(ErrorCode::UnsupportedAttribute, a.loc, "unexpected Sequential argument");
            }
        }
        return out;
    }
    if (call.size() == 2 && call[1].is(NodeKind::Call)) {
        const std::string path = ctx.imports.resolve(call[1][0]);
        const std::string local = dotted_name(call[1][0]);
        if (path == "collections.OrderedDict" || local == "OrderedDict") {
            if (call[1].size() != 2 || !(call[1][1].is(NodeKind::List) || call[1][1].is(NodeKind::Tuple))) {
                fail(ErrorCode::UnsupportedAttribute, call[1].loc, "OrderedDict must hold an inline list of (name, layer) pairs");
            }
            for (const auto& pair : call[1][1].children) {
                if (!pair.is(NodeKind::Tuple) || pair.size() != 2 || !pair[0].is(NodeKind::String)) {
                    fail(ErrorCode::UnsupportedAttribute, pair.loc, "OrderedDict entries must be ('name', layer) pairs");
                }
                out.push_back({&pair[1], pair[0].text});
            }
            return out;
        }
    }
    for (size_t i = 1; i < call.size(); ++i) {
        if (call[i].is(NodeKind::Keyword) || call[i].is(NodeKind::Starred)) {
            fail(ErrorCode::UnsupportedAttribute, call[i].loc, "Sequential takes layers as positional arguments");
        }
        out.push_back({&call[i], {}});
    }
    return out;
}

/// `resolve_activation(sym[, dim=d])`, the runtime activation lookup the channel-first
/// generator writes for Dynamic activations.
inline std::optional<Construct> resolver_construct(const Node& call, const SymbolTable& st) {
    if (!call.is(NodeKind::Call) || !call[0].is(NodeKind::Name) || call[0].text != "resolve_activation") {
        return std::nullopt;
    }
    const Node* sym = nullptr;
    for (size_t i = 1; i < call.size(); ++i) {
        const Node& a = call[i];
        if (a.is(NodeKind::Keyword) && a.text == "dim") continue;
        if (a.is(NodeKind::Keyword) || sym) {
            fail(ErrorCode::UnsupportedAttribute, a.loc, "resolve_activation takes one variable and an optional dim");
        }
        sym = &a;
    }
    if (!sym || !(sym->is(NodeKind::Name) || sym->is(NodeKind::Attribute) || sym->is(NodeKind::String))) {
        fail(ErrorCode::UnsupportedAttribute, call.loc, "resolve_activation takes one variable");
    }
    Construct c;
    c.role = Construct::Role::Activation;
    c.loc = call.loc;
    c.path = "resolve_activation";
    Const v = eval_const(*sym, st);
    if (v.is_str()) {
        if (v.s == "linear") return c;
        auto a = parse_activation(v.s);
        if (!a) fail(ErrorCode::UnsupportedAttribute, sym->loc, "unsupported activation '" + v.s + "'");
        c.activation = ActivationRef::of(*a);
    } else {
        const std::string name = dotted_name(*sym);
        c.activation = ActivationRef::dynamic(name.substr(name.rfind('.') + 1));
    }
    return c;
}

/// Appends the modules of a Sequential container to `g`, chaining from `prev`.
/// `prefix` is non-empty for containers held in a model attribute.
inline void append_sequential(const Context& ctx, Graph& g, const SymbolTable& st, const std::vector<SeqEntry>& entries,
                              const std::string& prefix, std::string& prev, int& prev_version,
                              std::optional<Ints>* input_shape) {
    for (size_t idx = 0; idx < entries.size(); ++idx) {
        const SeqEntry& e = entries[idx];
        if (!e.call->is(NodeKind::Call)) {
            fail(ErrorCode::UnsupportedLayer, e.call->loc, "Sequential entries must be inline layer constructions");
        }
        auto c = ctx.construct(*e.call, st);
        if (!c) c = resolver_construct(*e.call, st);
        if (!c) {
            fail(ErrorCode::UnsupportedLayer, e.call->loc,
                 "unsupported Sequential entry '" + dotted_name((*e.call)[0]) + "'");
        }
        auto hint = [&](const std::string& base) {
            std::string own = !e.key.empty() ? e.key : !c->name.empty() ? c->name : std::string{};
            if (prefix.empty()) return own.empty() ? base : own;
            return prefix + "_" + (own.empty() ? std::to_string(idx) : own);
        };
        if (input_shape && c->input_shape) {
            if (!g.mods.empty()) {
                fail(ErrorCode::UnsupportedAttribute, e.call->loc, "input shape declared after the first layer");
            }
            *input_shape = c->input_shape;
        }
        switch (c->role) {
        case Construct::Role::Input:
            if (!input_shape || !g.mods.empty()) {
                fail(ErrorCode::UnsupportedLayer, e.call->loc, "Input is only supported as the first Sequential entry");
            }
            break;
        case Construct::Role::Layer:
            if (is_recurrent(c->layer.kind) && ctx.fw == Framework::ChannelFirst) {
                fail(ErrorCode::UnsupportedLayer, e.call->loc,
                     "recurrent layers return (output, state) in this framework and need the Subclassing style");
            }
            g.check_version(prev, prev_version, e.call->loc);
            prev = g.add(hint(auto_name_base(c->layer.kind)), c->layer, {prev}, c->loc);
            prev_version = 0;
            break;
        case Construct::Role::Activation:
            prev_version = g.fold_activation(prev, prev_version, c->activation, e.call->loc);
            break;
        case Construct::Role::ZeroPad:
            g.check_version(prev, prev_version, e.call->loc);
            prev = g.add_zero_pad(hint("zero_padding"), c->amounts, prev, c->loc);
            prev_version = 0;
            break;
        case Construct::Role::TensorOp: {
            if (c->op.kind != TensorOpKind::Permute && c->op.kind != TensorOpKind::Reshape &&
                c->op.kind != TensorOpKind::Transpose) {
                fail(ErrorCode::UnsupportedLayer, e.call->loc,
                     std::string(to_string(c->op.kind)) + " merges several inputs and needs the Subclassing style");
            }
            g.check_version(prev, prev_version, e.call->loc);
            prev = g.add(hint(std::string(to_string(c->op.kind))), c->op, {prev}, c->loc);
            prev_version = 0;
            break;
        }
        case Construct::Role::Sequential: {
            auto nested = sequential_entries(ctx, *e.call);
            append_sequential(ctx, g, st, nested, hint("sequential"), prev, prev_version, nullptr);
            break;
        }
        }
    }
}

/// Module-level `INPUT_SHAPE = (...)`, the channel-last input shape the generators write.
inline std::optional<Ints> declared_input_constant(const Context& ctx) {
    auto v = ctx.module_symbols.lookup("INPUT_SHAPE");
    if (!v || !v->known()) return std::nullopt;
    return v->int_tuple();
}

/// `<model>.build((None, d1, ...))` anywhere in the file.
inline std::optional<Ints> build_call_shape(const Context& ctx, const Node& n, const SymbolTable& st) {
    if (n.is(NodeKind::Call) && n[0].is(NodeKind::Attribute) && n[0].text == "build" && n.size() == 2) {
        const Node& arg = n[1].is(NodeKind::Keyword) ? n[1][0] : n[1];
        if (n[1].is(NodeKind::Keyword) && n[1].text != "input_shape") return std::nullopt;
        Const c = eval_const(arg, st);
        if (c.type == Const::Type::Tuple && !c.items.empty() && c.items[0].type == Const::Type::None) {
            Ints dims;
            for (size_t i = 1; i < c.items.size(); ++i) {
                if (!c.items[i].is_int()) return std::nullopt;
                dims.push_back(c.items[i].i);
            }
            return dims;
        }
        return std::nullopt;
    }
    for (const auto& c : n.children) {
        if (n.is(NodeKind::ClassDef)) break;
        if (auto s = build_call_shape(ctx, c, st)) return s;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Sequential style
// ---------------------------------------------------------------------------------------

struct SeqCandidate {
    const Node* call = nullptr;
    std::string var;                           // assigned variable, empty for `return Sequential(...)`
    const std::vector<Node>* block = nullptr;  // statement list holding the construction
    size_t index = 0;
    const Node* function = nullptr;            // enclosing top-level function
};

inline void find_seq_candidates(const Context& ctx, const std::vector<Node>& stmts, const Node* fn,
                                std::vector<SeqCandidate>& out) {
    for (size_t i = 0; i < stmts.size(); ++i) {
        const Node& s = stmts[i];
        if (s.is(NodeKind::FunctionDef) && !fn) {
            find_seq_candidates(ctx, s[1].children, &s, out);
            continue;
        }
        if (s.is(NodeKind::Assign) && s.children.back().is(NodeKind::Call) && ctx.is_sequential(s.children.back())) {
            out.push_back({&s.children.back(), s[0].is(NodeKind::Name) ? s[0].text : std::string{}, &stmts, i, fn});
        } else if (s.is(NodeKind::Return) && s.size() == 1 && s[0].is(NodeKind::Call) && ctx.is_sequential(s[0])) {
            out.push_back({&s[0], {}, &stmts, i, fn});
        }
    }
}

inline std::string network_name_from_function(const Node* fn) {
    if (!fn) return {};
    const std::string& n = fn->text;
    if (n.rfind("build_", 0) == 0 && n.size() > 6) return n.substr(6);
    return n;
}

inline PivotNN extract_sequential(const Context& ctx, const ExtractOptions& opts) {
    std::vector<SeqCandidate> cands;
    find_seq_candidates(ctx, ctx.tree.root.children, nullptr, cands);
    if (cands.empty()) {
        fail(ErrorCode::UnresolvedDataflow, {1, 1}, "no Sequential model construction found");
    }
    const SeqCandidate& sc = cands.back();
    if (cands.size() > 1) {
        ctx.note(ErrorCode::AmbiguousStyle, sc.call->loc, "several Sequential models found; using the last one");
    }
    SymbolTable fn_symbols = sc.function ? function_symbols(*sc.function, &ctx.module_symbols) : SymbolTable(&ctx.module_symbols);
    const SymbolTable& st = sc.function ? fn_symbols : ctx.module_symbols;

    std::vector<SeqEntry> entries = sequential_entries(ctx, *sc.call);
    std::optional<Ints> build_shape;
    if (!sc.var.empty()) {
        for (size_t i = sc.index + 1; i < sc.block->size(); ++i) {
            const Node& s = (*sc.block)[i];
            if (!s.is(NodeKind::ExprStmt) || !s[0].is(NodeKind::Call)) continue;
            const Node& call = s[0];
            if (!call[0].is(NodeKind::Attribute) || !call[0][0].is(NodeKind::Name) || call[0][0].text != sc.var) continue;
            if (call[0].text == "add") {
                if (call.size() != 2 || call[1].is(NodeKind::Keyword)) {
                    fail(ErrorCode::UnsupportedAttribute, call.loc, "add() takes one layer");
                }
                entries.push_back({&call[1], {}});
            }
        }
    }

    PivotNN nn;
    nn.name = network_name_from_function(sc.function);
    for (size_t i = 1; i < sc.call->size(); ++i) {
        const Node& a = (*sc.call)[i];
        if (a.is(NodeKind::Keyword) && a.text == "name") {
            Const c = eval_const(a[0], st);
            if (c.is_str()) nn.name = c.s;
        }
    }
    if (nn.name.empty()) nn.name = opts.default_name;
    nn.name = sanitize_identifier(nn.name);

    Graph g;
    std::string prev(kInputToken);
    int version = 0;
    std::optional<Ints> input_shape;
    append_sequential(ctx, g, st, entries, {}, prev, version, &input_shape);
    if (g.mods.empty()) fail(ErrorCode::UnresolvedDataflow, sc.call->loc, "Sequential model has no layers");
    if (!input_shape) input_shape = build_call_shape(ctx, ctx.tree.root, ctx.module_symbols);
    if (!input_shape) input_shape = declared_input_constant(ctx);

    if (ctx.fw == Framework::ChannelLast) fold_zero_padding(g.mods);
    for (auto& r : g.mods) nn.modules.push_back(std::move(r.spec));
    if (input_shape) nn.input_shape = TensorShape::batched(*input_shape);
    if (ctx.fw == Framework::ChannelFirst) drop_injected_permutes(nn);
    return nn;
}

// ---------------------------------------------------------------------------------------
// Subclassing style
// ---------------------------------------------------------------------------------------

/// A value flowing through the forward method.
struct Value {
    enum class Kind {
        Tensor,      // module output (or INPUT) at an activation version
        Seq,         // tuple/list of values
        RnnResult,   // channel-first recurrent call result: (output, state)
        RnnOutput,   // its full output sequence
        RnnStates,   // LSTM (h_n, c_n)
        RnnHidden,   // h_n
        RnnCell,     // c_n
        HiddenAt,    // h_n[index]
        Shape,       // x.shape / x.size()
        Batch,       // batch extent read from a tensor
        Int,
        None,
    };
    Kind kind = Kind::None;
    std::string module;
    int version = 0;
    int64_t index = 0;
    std::vector<Value> items;

    static Value tensor(std::string m, int v = 0) { return {Kind::Tensor, std::move(m), v, 0, {}}; }
    static Value of(Kind k, std::string m = {}, int64_t idx = 0) { return {k, std::move(m), 0, idx, {}}; }
    static Value integer(int64_t i) { return {Kind::Int, {}, 0, i, {}}; }
};

struct Member {
    enum class Kind { Construct, Block, SubNet };
    Kind kind = Kind::Construct;
    Construct construct;
    std::vector<SeqEntry> entries;
    std::string subnet;
    SourceLocation loc;
    int applications = 0;
};

class SubclassExtractor {
public:
    SubclassExtractor(const Context& ctx, const ExtractOptions& opts) : ctx_(ctx), opts_(opts) {
        for (const auto& s : ctx.tree.root.children) {
            if (s.is(NodeKind::ClassDef) && is_model_class(s, ctx.imports, ctx.fw)) {
                classes_[s.text] = &s;
                order_.push_back(&s);
            }
            if (s.is(NodeKind::ClassDef)) all_classes_.insert(s.text);
        }
    }

    PivotNN run() {
        if (order_.empty()) fail(ErrorCode::UnresolvedDataflow, {1, 1}, "no model class found");
        std::set<std::string> referenced;
        for (const Node* cls : order_) {
            for (const auto& [name, _] : classes_) {
                if (name != cls->text && instantiates(*cls, name)) referenced.insert(name);
            }
        }
        const Node* main = nullptr;
        for (const Node* cls : order_) {
            if (!referenced.count(cls->text)) main = cls;
        }
        if (!main) fail(ErrorCode::NestingTooDeep, order_.back()->loc, "model classes reference each other recursively");
        PivotNN nn = extract_class(*main, 0);
        nn.sub_networks = std::move(subnets_);
        return nn;
    }

private:
    static bool instantiates(const Node& n, const std::string& cls) {
        if (n.is(NodeKind::Call) && n[0].is(NodeKind::Name) && n[0].text == cls) return true;
        return std::any_of(n.children.begin(), n.children.end(), [&](const Node& c) { return instantiates(c, cls); });
    }

    static const Node* method(const Node& cls, std::string_view name) {
        for (const auto& s : cls[1].children) {
            if (s.is(NodeKind::FunctionDef) && s.text == name) return &s;
        }
        return nullptr;
    }

    void ensure_subnet(const std::string& name, int depth, SourceLocation loc) {
        if (done_.count(name)) return;
        if (in_progress_.count(name)) {
            fail(ErrorCode::NestingTooDeep, loc, "model class '" + name + "' contains itself");
        }
        if (depth > kMaxNesting) {
            fail(ErrorCode::NestingTooDeep, loc, "sub-network nesting deeper than " + std::to_string(kMaxNesting));
        }
        PivotNN sub = extract_class(*classes_.at(name), depth);
        done_.insert(name);
        subnets_.push_back(std::move(sub));
    }

    std::map<std::string, Member> scan_constructor(const Node& cls, const SymbolTable& st) {
        std::map<std::string, Member> members;
        const Node* ctor = method(cls, "__init__");
        if (!ctor) return members;
        for (const auto& s : (*ctor)[1].children) {
            switch (s.kind) {
            case NodeKind::For:
            case NodeKind::While:
            case NodeKind::If:
            case NodeKind::With:
            case NodeKind::Try:
                fail(ErrorCode::UnresolvedDataflow, s.loc, "control flow in the constructor is not supported");
            case NodeKind::Assign: break;
            default: continue;
            }
            const Node& value = s.children.back();
            if (s.size() != 2 || !s[0].is(NodeKind::Attribute) || !s[0][0].is(NodeKind::Name) || s[0][0].text != "self") {
                continue;
            }
            const std::string attr = s[0].text;
            if (!value.is(NodeKind::Call)) continue;
            Member m;
            m.loc = value.loc;
            if (ctx_.is_sequential(value)) {
                m.kind = Member::Kind::Block;
                m.entries = sequential_entries(ctx_, value);
            } else if (auto c = ctx_.construct(value, st)) {
                if (c->role == Construct::Role::Input) {
                    fail(ErrorCode::UnsupportedLayer, value.loc, "Input layers are not supported in a model class");
                }
                if (c->role == Construct::Role::Sequential) {
                    m.kind = Member::Kind::Block;
                    m.entries = sequential_entries(ctx_, value);
                } else {
                    m.construct = *c;
                }
            } else if (auto r = resolver_construct(value, st)) {
                m.construct = *r;
            } else if (value[0].is(NodeKind::Name) && classes_.count(value[0].text)) {
                m.kind = Member::Kind::SubNet;
                m.subnet = value[0].text;
            } else if (value[0].is(NodeKind::Name) && all_classes_.count(value[0].text)) {
                fail(ErrorCode::UnsupportedLayer, value.loc, "custom layer class '" + value[0].text + "' is not supported");
            } else {
                continue;
            }
            members[attr] = std::move(m);
        }
        return members;
    }

    PivotNN extract_class(const Node& cls, int depth) {
        in_progress_.insert(cls.text);
        const Node* ctor = method(cls, "__init__");
        SymbolTable ctor_st = ctor ? function_symbols(*ctor, &ctx_.module_symbols) : SymbolTable(&ctx_.module_symbols);
        members_ = scan_constructor(cls, ctor_st);
        const Node* fwd = method(cls, ctx_.fw == Framework::ChannelFirst ? "forward" : "call");
        SymbolTable fwd_st = function_symbols(*fwd, &ctor_st);
        fwd_st_ = &fwd_st;
        g_ = Graph{};
        env_.clear();

        const auto& params = (*fwd)[0].children;
        std::string input_param;
        for (size_t i = 1; i < params.size(); ++i) {
            const Node& p = params[i];
            if (!p.aux.empty()) continue;
            if (input_param.empty()) {
                input_param = p.text;
                continue;
            }
            if (p[1].is(NodeKind::Empty)) {
                fail(ErrorCode::UnsupportedAttribute, p.loc, "networks with several inputs are not supported");
            }
        }
        if (input_param.empty()) fail(ErrorCode::UnresolvedDataflow, fwd->loc, "forward method takes no input tensor");
        env_[input_param] = Value::tensor(std::string(kInputToken));
        assign_counts_.clear();
        count_assignments((*fwd)[1].children);
        assign_counts_[input_param] += 2;
        for (const auto& [attr, m] : members_) {
            g_.preferred.insert(attr);
            for (size_t i = 0; i < m.entries.size(); ++i) {
                g_.preferred.insert(attr + "_" + (m.entries[i].key.empty() ? std::to_string(i) : m.entries[i].key));
            }
        }
        for (const auto& [var, count] : assign_counts_) {
            if (count == 1) g_.preferred.insert(var);
        }

        std::optional<Value> result;
        SourceLocation result_loc = fwd->loc;
        for (const auto& s : (*fwd)[1].children) {
            if (result) fail(ErrorCode::UnresolvedDataflow, s.loc, "statement after return");
            switch (s.kind) {
            case NodeKind::Assign: {
                hint_ = (s.size() == 2 && s[0].is(NodeKind::Name) && assign_counts_[s[0].text] == 1) ? s[0].text : std::string{};
                hint_node_ = &s.children.back();
                Value v = eval(s.children.back());
                hint_.clear();
                hint_node_ = nullptr;
                for (size_t i = 0; i + 1 < s.size(); ++i) bind(s[i], v);
                break;
            }
            case NodeKind::AnnAssign:
                if (s.size() > 2) bind(s[0], eval(s[2]));
                break;
            case NodeKind::Return:
                if (s.size() != 1) fail(ErrorCode::UnresolvedDataflow, s.loc, "forward returns nothing");
                result = eval(s[0]);
                result_loc = s.loc;
                break;
            case NodeKind::Pass: break;
            case NodeKind::ExprStmt:
                if (s[0].is(NodeKind::String)) break;
                ctx_.note(ErrorCode::DroppedConstruct, s.loc, "expression statement in the forward pass ignored");
                break;
            default:
                fail(ErrorCode::UnresolvedDataflow, s.loc, "control flow in the forward pass is not supported");
            }
        }
        if (!result) fail(ErrorCode::UnresolvedDataflow, fwd->loc, "forward method does not return a tensor");
        Value out = materialize(*result, result_loc);
        if (out.module == kInputToken) fail(ErrorCode::UnresolvedDataflow, result_loc, "forward returns its input unchanged");

        for (const auto& [name, m] : members_) {
            if (m.applications == 0 && !(m.kind == Member::Kind::Construct && m.construct.role == Construct::Role::Activation)) {
                ctx_.note(ErrorCode::DroppedConstruct, m.loc, "module self." + name + " is never used in the forward pass");
            }
        }

        if (ctx_.fw == Framework::ChannelLast) fold_zero_padding(g_.mods);
        PivotNN nn;
        nn.name = sanitize_identifier(cls.text);
        for (auto& r : g_.mods) {
            if (r.spec.is_layer() && is_recurrent(r.spec.layer().kind) && ctx_.fw == Framework::ChannelFirst) {
                r.spec.layer().as<RecurrentAttrs>().return_sequences = g_.rnn_mode[r.spec.name] != RnnMode::Last;
            }
            nn.modules.push_back(std::move(r.spec));
        }
        if (ctx_.fw == Framework::ChannelFirst) drop_injected_permutes(nn);
        in_progress_.erase(cls.text);
        // sub-network extraction reuses the member state, so it runs after this class is done
        auto pending = pending_subnets_;
        pending_subnets_.clear();
        for (const auto& [name, loc] : pending) ensure_subnet(name, depth + 1, loc);
        return nn;
    }

    void count_assignments(const std::vector<Node>& stmts) {
        for (const auto& s : stmts) {
            if (s.is(NodeKind::Assign) || s.is(NodeKind::AnnAssign)) {
                std::vector<const Node*> names;
                const size_t n = s.is(NodeKind::Assign) ? s.size() - 1 : 1;
                for (size_t i = 0; i < n; ++i) symbols_detail::collect_targets(s[i], names);
                for (const Node* t : names) {
                    if (t->is(NodeKind::Name)) ++assign_counts_[t->text];
                }
            }
        }
    }

    // ----- values -------------------------------------------------------------------

    void bind(const Node& target, const Value& v) {
        if (target.is(NodeKind::Name)) {
            env_[target.text] = v;
            return;
        }
        if (target.is(NodeKind::Tuple) || target.is(NodeKind::List)) {
            std::vector<Value> parts;
            if (v.kind == Value::Kind::Seq) {
                parts = v.items;
            } else if (v.kind == Value::Kind::RnnResult) {
                parts = {index_value(v, 0, target.loc), index_value(v, 1, target.loc)};
            } else if (v.kind == Value::Kind::RnnStates) {
                parts = {index_value(v, 0, target.loc), index_value(v, 1, target.loc)};
            } else {
                fail(ErrorCode::UnresolvedDataflow, target.loc, "cannot unpack this value");
            }
            if (parts.size() != target.size()) fail(ErrorCode::UnresolvedDataflow, target.loc, "unpacking arity mismatch");
            for (size_t i = 0; i < parts.size(); ++i) bind(target[i], parts[i]);
            return;
        }
        fail(ErrorCode::UnresolvedDataflow, target.loc, "unsupported assignment target in the forward pass");
    }

    LayerKind recurrent_kind(const std::string& module) {
        Raw* r = g_.find(module);
        return r->spec.layer().kind;
    }

    bool bidirectional(const std::string& module) {
        return g_.find(module)->spec.layer().as<RecurrentAttrs>().bidirectional;
    }

    Value index_value(const Value& v, int64_t idx, SourceLocation loc) {
        switch (v.kind) {
        case Value::Kind::RnnResult:
            if (idx == 0) return Value::of(Value::Kind::RnnOutput, v.module);
            if (idx == 1) {
                return Value::of(recurrent_kind(v.module) == LayerKind::LSTM ? Value::Kind::RnnStates : Value::Kind::RnnHidden,
                                 v.module);
            }
            break;
        case Value::Kind::RnnStates:
            if (idx == 0) return Value::of(Value::Kind::RnnHidden, v.module);
            if (idx == 1) return Value::of(Value::Kind::RnnCell, v.module);
            break;
        case Value::Kind::RnnHidden: {
            const bool bi = bidirectional(v.module);
            int64_t norm = idx;
            if (norm >= 0) norm -= bi ? 2 : 1;
            if (norm == -1 || (bi && norm == -2)) return Value::of(Value::Kind::HiddenAt, v.module, norm);
            break;
        }
        case Value::Kind::Shape:
            if (idx == 0) return Value::of(Value::Kind::Batch);
            break;
        case Value::Kind::Seq:
            if (idx >= 0 && static_cast<size_t>(idx) < v.items.size()) return v.items[static_cast<size_t>(idx)];
            break;
        default: break;
        }
        fail(ErrorCode::UnresolvedDataflow, loc, "unsupported indexing in the forward pass");
    }

    /// Turns a value into a tensor reference, resolving recurrent-output idioms.
    Value materialize(const Value& v, SourceLocation loc) {
        switch (v.kind) {
        case Value::Kind::Tensor:
            g_.check_version(v.module, v.version, loc);
            return v;
        case Value::Kind::RnnOutput:
            g_.set_rnn_mode(v.module, RnnMode::Sequence, loc);
            return Value::tensor(v.module);
        case Value::Kind::HiddenAt:
            if (!bidirectional(v.module) && v.index == -1) {
                g_.set_rnn_mode(v.module, RnnMode::Last, loc);
                return Value::tensor(v.module);
            }
            fail(ErrorCode::UnresolvedDataflow, loc,
                 "a single direction of a bidirectional state cannot be represented; concatenate h_n[-2] and h_n[-1]");
        case Value::Kind::RnnResult:
            fail(ErrorCode::UnresolvedDataflow, loc,
                 "recurrent call result used as a tensor; select the output with [0] or unpack it");
        default: fail(ErrorCode::UnresolvedDataflow, loc, "value is not a tensor");
        }
    }

    /// The assignment-target name when `n` is the whole right-hand side, else nullopt.
    std::optional<std::string> target_name(const Node& n) const {
        if (&n != hint_node_ || hint_.empty() || g_.names.taken(hint_)) return std::nullopt;
        return hint_;
    }

    std::string add_named(const std::string& base, const Node& n, ModuleKind kind, std::vector<std::string> inputs) {
        if (auto t = target_name(n)) return g_.add(*t, std::move(kind), std::move(inputs), n.loc);
        return g_.add(base, std::move(kind), std::move(inputs), n.loc, true);
    }

    Value add_op(const TensorOpSpec& op, const std::vector<Value>& ins, const Node& n) {
        std::vector<std::string> inputs;
        for (const auto& v : ins) inputs.push_back(materialize(v, n.loc).module);
        return Value::tensor(add_named(std::string(to_string(op.kind)), n, op, inputs));
    }

    Value add_layer(const std::string& hint, const LayerSpec& layer, const Value& in, SourceLocation loc,
                    SourceLocation origin, bool anonymous = false) {
        const std::string input = materialize(in, loc).module;
        const std::string name = g_.add(hint, layer, {input}, origin, anonymous);
        if (is_recurrent(layer.kind) && ctx_.fw == Framework::ChannelFirst) return Value::of(Value::Kind::RnnResult, name);
        return Value::tensor(name);
    }

    Value fold(const Value& in, const ActivationRef& act, SourceLocation loc) {
        Value t = materialize(in, loc);
        const int version = g_.fold_activation(t.module, t.version, act, loc);
        return Value::tensor(t.module, version);
    }

    std::vector<Value> tensor_list(const Value& v, SourceLocation loc) {
        if (v.kind != Value::Kind::Seq) fail(ErrorCode::UnresolvedDataflow, loc, "expected a list of tensors");
        return v.items;
    }

    Value eval(const Node& n) {
        switch (n.kind) {
        case NodeKind::Name: {
            if (auto it = env_.find(n.text); it != env_.end()) return it->second;
            Const c = eval_const(n, *fwd_st_);
            if (c.is_int()) return Value::integer(c.i);
            if (c.type == Const::Type::None) return Value::of(Value::Kind::None);
            fail(ErrorCode::UnresolvedDataflow, n.loc, "'" + n.text + "' is used before it is defined");
        }
        case NodeKind::Number:
        case NodeKind::UnaryOp: {
            Const c = eval_const(n, *fwd_st_);
            if (c.is_int()) return Value::integer(c.i);
            fail(ErrorCode::UnresolvedDataflow, n.loc, "unsupported expression in the forward pass");
        }
        case NodeKind::Constant:
            if (n.text == "None") return Value::of(Value::Kind::None);
            fail(ErrorCode::UnresolvedDataflow, n.loc, "unsupported constant in the forward pass");
        case NodeKind::Tuple:
        case NodeKind::List: {
            Value v = Value::of(Value::Kind::Seq);
            for (const auto& c : n.children) v.items.push_back(eval(c));
            return v;
        }
        case NodeKind::BinOp: return eval_binop(n);
        case NodeKind::Subscript: return eval_subscript(n);
        case NodeKind::Attribute: {
            if (n.text == "shape") return Value::of(Value::Kind::Shape, materialize(eval(n[0]), n.loc).module);
            Const c = eval_const(n, *fwd_st_);
            if (c.is_int()) return Value::integer(c.i);
            fail(ErrorCode::UnresolvedDataflow, n.loc, "unsupported attribute access in the forward pass");
        }
        case NodeKind::Call: return eval_call(n);
        default: fail(ErrorCode::UnresolvedDataflow, n.loc, "unsupported expression in the forward pass");
        }
    }

    Value eval_binop(const Node& n) {
        Value a = eval(n[0]);
        Value b = eval(n[1]);
        if (a.kind == Value::Kind::Int && b.kind == Value::Kind::Int) {
            Const c = eval_const(n, *fwd_st_);
            if (c.is_int()) return Value::integer(c.i);
        }
        TensorOpKind kind;
        if (n.text == "+") kind = TensorOpKind::Add;
        else if (n.text == "*") kind = TensorOpKind::Multiply;
        else if (n.text == "@") kind = TensorOpKind::Matmul;
        else fail(ErrorCode::UnresolvedDataflow, n.loc, "unsupported operator '" + n.text + "' in the forward pass");
        return add_op(TensorOpSpec::binary(kind), {a, b}, n);
    }

    static bool is_full_slice(const Node& n) {
        return n.is(NodeKind::Slice) && n[0].is(NodeKind::Empty) && n[1].is(NodeKind::Empty) && n[2].is(NodeKind::Empty);
    }

    Value eval_subscript(const Node& n) {
        Value base = eval(n[0]);
        const Node& idx = n[1];
        if (base.kind == Value::Kind::RnnOutput && idx.is(NodeKind::Tuple) && (idx.size() == 2 || idx.size() == 3) &&
            is_full_slice(idx[0]) && (idx.size() == 2 || is_full_slice(idx[2]))) {
            Const t = eval_const(idx[1], *fwd_st_);
            if (t.is_int() && t.i == -1) {
                if (bidirectional(base.module)) {
                    fail(ErrorCode::UnresolvedDataflow, n.loc,
                         "the last time step of a bidirectional output is not its final state; use h_n[-2] and h_n[-1]");
                }
                g_.set_rnn_mode(base.module, RnnMode::Last, n.loc);
                return Value::tensor(base.module);
            }
        }
        Const c = eval_const(idx, *fwd_st_);
        if (c.is_int()) return index_value(base, c.i, n.loc);
        fail(ErrorCode::UnresolvedDataflow, n.loc, "unsupported indexing in the forward pass");
    }

    std::vector<const Node*> positional(const Node& call) {
        std::vector<const Node*> out;
        for (size_t i = 1; i < call.size(); ++i) {
            if (!call[i].is(NodeKind::Keyword)) out.push_back(&call[i]);
        }
        return out;
    }
    const Node* keyword(const Node& call, std::string_view name) {
        for (size_t i = 1; i < call.size(); ++i) {
            if (call[i].is(NodeKind::Keyword) && call[i].text == name) return &call[i][0];
        }
        return nullptr;
    }
    int64_t int_arg(const Node* n, SourceLocation loc, std::string_view what) {
        if (!n) fail(ErrorCode::UnsupportedAttribute, loc, std::string(what) + " is required");
        Value v = eval(*n);
        if (v.kind != Value::Kind::Int) fail(ErrorCode::UnsupportedAttribute, n->loc, std::string(what) + " must be a constant integer");
        return v.index;
    }

    Value apply_member(const std::string& attr, const Node& call) {
        auto it = members_.find(attr);
        if (it == members_.end()) {
            fail(ErrorCode::UnresolvedDataflow, call.loc, "self." + attr + " is not a module created in the constructor");
        }
        Member& m = it->second;
        std::vector<const Node*> args = positional(call);
        for (size_t i = 1; i < call.size(); ++i) {
            if (call[i].is(NodeKind::Keyword) && call[i].text != "training" && call[i].text != "mask") {
                fail(ErrorCode::UnsupportedAttribute, call[i].loc, "unsupported call argument '" + call[i].text + "'");
            }
        }
        if (args.size() != 1) fail(ErrorCode::UnsupportedAttribute, call.loc, "modules are applied to exactly one argument");
        Value in = eval(*args[0]);
        ++m.applications;
        switch (m.kind) {
        case Member::Kind::SubNet: {
            if (m.applications > 1) fail(ErrorCode::UnsupportedAttribute, call.loc, "sub-network self." + attr + " is applied twice (shared weights)");
            const std::string input = materialize(in, call.loc).module;
            pending_subnets_.emplace_back(m.subnet, m.loc);
            return Value::tensor(g_.add(attr, SubNetRef{sanitize_identifier(m.subnet)}, {input}, m.loc));
        }
        case Member::Kind::Block: {
            if (m.applications > 1) fail(ErrorCode::UnsupportedAttribute, call.loc, "self." + attr + " is applied twice (shared weights)");
            Value t = materialize(in, call.loc);
            std::string prev = t.module;
            int version = t.version;
            append_sequential(ctx_, g_, *fwd_st_, m.entries, attr, prev, version, nullptr);
            return Value::tensor(prev, version);
        }
        case Member::Kind::Construct: break;
        }
        return apply_construct(m.construct, attr, in, call.loc, m.applications);
    }

    Value apply_construct(const Construct& c, const std::string& hint, const Value& in, SourceLocation loc, int applications,
                          bool anonymous = false) {
        switch (c.role) {
        case Construct::Role::Layer:
            if (applications > 1 && has_weights(c.layer.kind)) {
                fail(ErrorCode::UnsupportedAttribute, loc, "layer '" + hint + "' is applied more than once (shared weights)");
            }
            return add_layer(hint, c.layer, in, loc, c.loc, anonymous);
        case Construct::Role::Activation: return fold(in, c.activation, loc);
        case Construct::Role::ZeroPad: {
            const std::string input = materialize(in, loc).module;
            const std::string name = g_.add_zero_pad(hint, c.amounts, input, c.loc);
            return Value::tensor(name);
        }
        case Construct::Role::TensorOp: {
            std::vector<Value> ins = in.kind == Value::Kind::Seq ? in.items : std::vector<Value>{in};
            std::vector<std::string> inputs;
            for (const auto& v : ins) inputs.push_back(materialize(v, loc).module);
            return Value::tensor(g_.add(hint, c.op, inputs, c.loc, anonymous));
        }
        default: fail(ErrorCode::UnsupportedLayer, loc, "this module cannot be applied in the forward pass");
        }
    }

    Value eval_call(const Node& call) {
        const Node& func = call[0];
        // self.<member>(...)
        if (func.is(NodeKind::Attribute) && func[0].is(NodeKind::Name) && func[0].text == "self") {
            return apply_member(func.text, call);
        }
        // layers.X(...)(y): inline parameter-free layers
        if (func.is(NodeKind::Call)) {
            auto c = ctx_.construct(func, *fwd_st_);
            if (!c) fail(ErrorCode::UnresolvedDataflow, call.loc, "unsupported call in the forward pass");
            if (c->role == Construct::Role::Layer && has_weights(c->layer.kind)) {
                fail(ErrorCode::UnsupportedAttribute, call.loc, "layers with weights must be created in the constructor");
            }
            std::vector<const Node*> args = positional(call);
            if (args.size() != 1) fail(ErrorCode::UnsupportedAttribute, call.loc, "layers are applied to exactly one argument");
            std::string base = c->role == Construct::Role::Layer ? auto_name_base(c->layer.kind)
                               : c->role == Construct::Role::TensorOp ? std::string(to_string(c->op.kind))
                                                                      : std::string("zero_padding");
            Value in = eval(*args[0]);
            auto named = target_name(call);
            return apply_construct(*c, named ? *named : base, in, call.loc, 1, !named);
        }
        const std::string path = ctx_.imports.resolve(func);
        if (!path.empty()) return eval_function(path, call);
        if (func.is(NodeKind::Attribute)) return eval_method(func.text, eval(func[0]), call);
        fail(ErrorCode::UnresolvedDataflow, call.loc, "unsupported call '" + dotted_name(func) + "' in the forward pass");
    }

    std::optional<Activation> activation_function(const std::string& path) {
        static const std::vector<std::pair<std::string, Activation>> kTable = {
            {"torch.relu", Activation::Relu},
            {"torch.nn.functional.relu", Activation::Relu},
            {"torch.sigmoid", Activation::Sigmoid},
            {"torch.nn.functional.sigmoid", Activation::Sigmoid},
            {"torch.tanh", Activation::Tanh},
            {"torch.nn.functional.tanh", Activation::Tanh},
            {"torch.softmax", Activation::Softmax},
            {"torch.nn.functional.softmax", Activation::Softmax},
            {"torch.nn.functional.leaky_relu", Activation::LeakyRelu},
            {"tensorflow.nn.relu", Activation::Relu},
            {"tensorflow.nn.sigmoid", Activation::Sigmoid},
            {"tensorflow.sigmoid", Activation::Sigmoid},
            {"tensorflow.math.sigmoid", Activation::Sigmoid},
            {"tensorflow.nn.tanh", Activation::Tanh},
            {"tensorflow.tanh", Activation::Tanh},
            {"tensorflow.math.tanh", Activation::Tanh},
            {"tensorflow.nn.softmax", Activation::Softmax},
            {"tensorflow.nn.leaky_relu", Activation::LeakyRelu},
            {"keras.activations.relu", Activation::Relu},
            {"keras.activations.sigmoid", Activation::Sigmoid},
            {"keras.activations.tanh", Activation::Tanh},
            {"keras.activations.softmax", Activation::Softmax},
            {"keras.activations.leaky_relu", Activation::LeakyRelu},
        };
        for (const auto& [p, a] : kTable) {
            if (p == path) return a;
        }
        return std::nullopt;
    }

    Value eval_activation_call(Activation a, const std::string& path, const Node& call) {
        std::vector<const Node*> args = positional(call);
        if (args.empty()) fail(ErrorCode::UnsupportedAttribute, call.loc, path + " needs a tensor argument");
        const bool torch = path.rfind("torch", 0) == 0;
        for (size_t i = 1; i < call.size(); ++i) {
            const Node& arg = call[i];
            if (!arg.is(NodeKind::Keyword)) continue;
            if (arg.text == "inplace" || arg.text == "name") continue;
            if ((arg.text == "dim" || arg.text == "axis") && a == Activation::Softmax) continue;
            if ((arg.text == "negative_slope" || arg.text == "alpha") && a == Activation::LeakyRelu) continue;
            fail(ErrorCode::UnsupportedAttribute, arg.loc, "unsupported argument '" + arg.text + "' of " + path);
        }
        if (a == Activation::Softmax) {
            const Node* dim = keyword(call, torch ? "dim" : "axis");
            if (!dim && args.size() > 1) dim = args[1];
            if (torch && !dim) fail(ErrorCode::UnsupportedAttribute, call.loc, "softmax needs an explicit dim");
            if (dim) {
                const int64_t d = int_arg(dim, call.loc, "dim");
                if (d != -1 && d != 1) fail(ErrorCode::UnsupportedAttribute, dim->loc, "softmax supports dim 1 or -1 only");
            }
        }
        if (a == Activation::LeakyRelu) {
            const Node* slope = keyword(call, torch ? "negative_slope" : "alpha");
            if (!slope && args.size() > 1) slope = args[1];
            Const c = slope ? eval_const(*slope, *fwd_st_) : Const::real(torch ? 0.01 : 0.2);
            if (!c.is_number() || c.number() != 0.2) {
                fail(ErrorCode::UnsupportedAttribute, call.loc, "leaky_relu is supported with slope 0.2 only");
            }
        }
        return fold(eval(*args[0]), ActivationRef::of(a), call.loc);
    }

    Value flatten_layer(const Value& in, const Node& n) {
        const std::string input = materialize(in, n.loc).module;
        return Value::tensor(add_named("flatten", n, make_layer(LayerKind::Flatten), {input}));
    }

    /// view/reshape arguments: (batch, -1) and (-1, k) flatten; (batch | -1, d1, ...) reshape.
    Value eval_reshape(const Value& in, const std::vector<Value>& dims_in, const Node& n) {
        const SourceLocation loc = n.loc;
        std::vector<Value> dims = dims_in;
        if (dims.size() == 1 && dims[0].kind == Value::Kind::Seq) dims = dims[0].items;
        if (dims.size() < 2) fail(ErrorCode::UnsupportedAttribute, loc, "reshape must keep the batch dimension");
        const bool batch_first = dims[0].kind == Value::Kind::Batch ||
                                 (dims[0].kind == Value::Kind::Int && dims[0].index == -1) ||
                                 dims[0].kind == Value::Kind::None;
        if (!batch_first) fail(ErrorCode::UnsupportedAttribute, loc, "reshape must keep the batch dimension first");
        Ints rest;
        for (size_t i = 1; i < dims.size(); ++i) {
            if (dims[i].kind != Value::Kind::Int) fail(ErrorCode::UnsupportedAttribute, loc, "reshape extents must be constants");
            rest.push_back(dims[i].index);
        }
        const bool batch_wild = dims[0].kind != Value::Kind::Batch;
        if (rest.size() == 1 && (rest[0] == -1 || batch_wild)) return flatten_layer(in, n);
        if (batch_wild && std::count(rest.begin(), rest.end(), -1) > 0) {
            fail(ErrorCode::UnsupportedAttribute, loc, "reshape with an inferred batch needs known extents");
        }
        return add_op(TensorOpSpec::reshape(rest), {in}, n);
    }

    Ints int_list(const std::vector<const Node*>& nodes, SourceLocation loc) {
        Ints out;
        for (const Node* n : nodes) {
            Value v = eval(*n);
            if (v.kind == Value::Kind::Seq) {
                for (const auto& it : v.items) {
                    if (it.kind != Value::Kind::Int) fail(ErrorCode::UnsupportedAttribute, loc, "expected constant integers");
                    out.push_back(it.index);
                }
            } else if (v.kind == Value::Kind::Int) {
                out.push_back(v.index);
            } else {
                fail(ErrorCode::UnsupportedAttribute, loc, "expected constant integers");
            }
        }
        return out;
    }

    Value eval_method(const std::string& name, const Value& self, const Node& call) {
        std::vector<const Node*> args = positional(call);
        const SourceLocation loc = call.loc;
        if (name == "contiguous" && args.empty()) return self;
        if (name == "size") {
            Value shape = Value::of(Value::Kind::Shape, materialize(self, loc).module);
            if (args.empty()) return shape;
            return index_value(shape, int_arg(args[0], loc, "dim"), loc);
        }
        if (name == "squeeze" && self.kind == Value::Kind::RnnHidden && args.size() == 1 &&
            int_arg(args[0], loc, "dim") == 0 && !bidirectional(self.module)) {
            return Value::of(Value::Kind::HiddenAt, self.module, -1);
        }
        if (name == "permute") return add_op(TensorOpSpec::permute(int_list(args, loc)), {self}, call);
        if (name == "view" || name == "reshape") {
            std::vector<Value> dims;
            for (const Node* a : args) dims.push_back(eval(*a));
            return eval_reshape(self, dims, call);
        }
        if (name == "transpose") {
            Ints axes = int_list(args, loc);
            if (axes.size() != 2 || axes[0] < 0 || axes[1] < 0) {
                fail(ErrorCode::UnsupportedAttribute, loc, "transpose needs two non-negative axes");
            }
            return add_op(TensorOpSpec::transpose(axes[0], axes[1]), {self}, call);
        }
        if (name == "flatten") {
            const Node* start = keyword(call, "start_dim");
            if (!start && !args.empty()) start = args[0];
            if (!start || int_arg(start, loc, "start_dim") != 1) {
                fail(ErrorCode::UnsupportedAttribute, loc, "flatten must start at dim 1 to keep the batch");
            }
            return flatten_layer(self, call);
        }
        fail(ErrorCode::UnresolvedDataflow, loc, "unsupported tensor method '" + name + "'");
    }

    Value eval_function(const std::string& path, const Node& call) {
        const SourceLocation loc = call.loc;
        std::vector<const Node*> args = positional(call);
        if (auto a = activation_function(path)) return eval_activation_call(*a, path, call);
        auto arg = [&](size_t i, std::string_view kw) -> const Node* {
            if (const Node* k = keyword(call, kw)) return k;
            return i < args.size() ? args[i] : nullptr;
        };
        auto need = [&](const Node* n, std::string_view what) -> const Node& {
            if (!n) fail(ErrorCode::UnsupportedAttribute, loc, path + " needs " + std::string(what));
            return *n;
        };

        if (path == "torch.cat" || path == "torch.concat" || path == "torch.concatenate" || path == "tensorflow.concat" ||
            path == "keras.layers.concatenate" || path == "keras.ops.concatenate") {
            const bool tf = path.rfind("torch", 0) != 0;
            Value list = eval(need(arg(0, tf ? (path == "tensorflow.concat" ? "values" : "inputs") : "tensors"), "a tensor list"));
            const Node* ax = arg(1, tf ? "axis" : "dim");
            int64_t axis = ax ? int_arg(ax, loc, "axis") : (path == "keras.layers.concatenate" ? -1 : 0);
            std::vector<Value> items = tensor_list(list, loc);
            // h_n[-2] ++ h_n[-1] of a bidirectional layer is its final state
            if (items.size() == 2 && items[0].kind == Value::Kind::HiddenAt && items[1].kind == Value::Kind::HiddenAt &&
                items[0].module == items[1].module && items[0].index == -2 && items[1].index == -1 && (axis == 1 || axis == -1)) {
                g_.set_rnn_mode(items[0].module, RnnMode::Last, loc);
                hint_.clear();
                return Value::tensor(items[0].module);
            }
            return add_op(TensorOpSpec::concatenate(axis), items, call);
        }
        if (path == "torch.add" || path == "tensorflow.add" || path == "tensorflow.math.add") {
            return add_op(TensorOpSpec::binary(TensorOpKind::Add), {eval(need(arg(0, "input"), "two tensors")), eval(need(arg(1, "other"), "two tensors"))}, call);
        }
        if (path == "torch.mul" || path == "torch.multiply" || path == "tensorflow.multiply" || path == "tensorflow.math.multiply") {
            return add_op(TensorOpSpec::binary(TensorOpKind::Multiply), {eval(need(arg(0, "input"), "two tensors")), eval(need(arg(1, "other"), "two tensors"))}, call);
        }
        if (path == "torch.matmul" || path == "tensorflow.matmul" || path == "tensorflow.linalg.matmul") {
            return add_op(TensorOpSpec::binary(TensorOpKind::Matmul), {eval(need(arg(0, "a"), "two tensors")), eval(need(arg(1, "b"), "two tensors"))}, call);
        }
        if (path == "keras.layers.add" || path == "keras.layers.multiply") {
            Value list = eval(need(arg(0, "inputs"), "a tensor list"));
            return add_op(TensorOpSpec::binary(path == "keras.layers.add" ? TensorOpKind::Add : TensorOpKind::Multiply),
                          tensor_list(list, loc), call);
        }
        if (path == "torch.flatten") {
            const Node* start = arg(1, "start_dim");
            if (!start || int_arg(start, loc, "start_dim") != 1) {
                fail(ErrorCode::UnsupportedAttribute, loc, "flatten must start at dim 1 to keep the batch");
            }
            return flatten_layer(eval(need(arg(0, "input"), "a tensor")), call);
        }
        if (path == "torch.permute") {
            return add_op(TensorOpSpec::permute(int_list({&need(arg(1, "dims"), "dims")}, loc)), {eval(need(arg(0, "input"), "a tensor"))}, call);
        }
        if (path == "torch.reshape" || path == "tensorflow.reshape") {
            Value in = eval(need(arg(0, path == "torch.reshape" ? "input" : "tensor"), "a tensor"));
            Value shape = eval(need(arg(1, "shape"), "a shape"));
            return eval_reshape(in, shape.kind == Value::Kind::Seq ? shape.items : std::vector<Value>{shape}, call);
        }
        if (path == "torch.transpose") {
            Value in = eval(need(arg(0, "input"), "a tensor"));
            const int64_t a = int_arg(arg(1, "dim0"), loc, "dim0");
            const int64_t b = int_arg(arg(2, "dim1"), loc, "dim1");
            if (a < 0 || b < 0) fail(ErrorCode::UnsupportedAttribute, loc, "transpose needs two non-negative axes");
            return add_op(TensorOpSpec::transpose(a, b), {in}, call);
        }
        if (path == "tensorflow.transpose") {
            Value in = eval(need(arg(0, "a"), "a tensor"));
            Ints perm = int_list({&need(arg(1, "perm"), "perm")}, loc);
            return add_op(TensorOpSpec::permute(perm), {in}, call);
        }
        if (path == "tensorflow.experimental.numpy.swapaxes") {
            Value in = eval(need(arg(0, "a"), "a tensor"));
            const int64_t a = int_arg(arg(1, "axis1"), loc, "axis1");
            const int64_t b = int_arg(arg(2, "axis2"), loc, "axis2");
            if (a < 0 || b < 0) fail(ErrorCode::UnsupportedAttribute, loc, "swapaxes needs two non-negative axes");
            return add_op(TensorOpSpec::transpose(a, b), {in}, call);
        }
        if (path == "torch.squeeze") {
            Value in = eval(need(arg(0, "input"), "a tensor"));
            return eval_method("squeeze", in, call);
        }
        fail(ErrorCode::UnresolvedDataflow, loc, "unsupported function '" + path + "' in the forward pass");
    }

    const Context& ctx_;
    const ExtractOptions& opts_;
    std::map<std::string, const Node*> classes_;
    std::set<std::string> all_classes_;
    std::vector<const Node*> order_;
    std::vector<PivotNN> subnets_;
    std::set<std::string> in_progress_;
    std::set<std::string> done_;
    std::vector<std::pair<std::string, SourceLocation>> pending_subnets_;

    // per-class state
    std::map<std::string, Member> members_;
    const SymbolTable* fwd_st_ = nullptr;
    Graph g_;
    std::map<std::string, Value> env_;
    std::map<std::string, int> assign_counts_;
    std::string hint_;
    const Node* hint_node_ = nullptr;
};

// ---------------------------------------------------------------------------------------
// Training configuration, datasets, input shape
// ---------------------------------------------------------------------------------------

inline void walk(const Node& n, const std::function<void(const Node&)>& fn) {
    fn(n);
    for (const auto& c : n.children) walk(c, fn);
}

inline const Node* kwarg(const Node& call, std::string_view name) {
    for (size_t i = 1; i < call.size(); ++i) {
        if (call[i].is(NodeKind::Keyword) && call[i].text == name) return &call[i][0];
    }
    return nullptr;
}

inline const Node* posarg(const Node& call, size_t idx) {
    size_t k = 0;
    for (size_t i = 1; i < call.size(); ++i) {
        if (call[i].is(NodeKind::Keyword)) continue;
        if (k++ == idx) return &call[i];
    }
    return nullptr;
}

inline double default_learning_rate(Framework fw, Optimizer o) {
    if (fw == Framework::ChannelLast) return o == Optimizer::Sgd ? 0.01 : 0.001;
    return o == Optimizer::RmsProp ? 0.01 : 0.001;
}

inline std::optional<Optimizer> optimizer_from_name(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return parse_optimizer(s);
}

inline std::optional<Loss> loss_from_name(const std::string& s) {
    if (s == "sparse_categorical_crossentropy" || s == "categorical_crossentropy" ||
        s == "SparseCategoricalCrossentropy" || s == "CategoricalCrossentropy" || s == "CrossEntropyLoss") {
        return Loss::CrossEntropy;
    }
    if (s == "binary_crossentropy" || s == "BinaryCrossentropy" || s == "BCELoss" ||
        s == "BCEWithLogitsLoss") {
        return Loss::BinaryCrossEntropy;
    }
    if (s == "mse" || s == "mean_squared_error" || s == "MeanSquaredError" || s == "MSELoss") return Loss::Mse;
    return std::nullopt;
}

inline std::optional<Metric> metric_from(const Node& n, const Context& ctx, const SymbolTable& st) {
    Const c = eval_const(n, st);
    if (c.is_str()) {
        if (c.s == "accuracy" || c.s == "acc") return Metric::Accuracy;
        if (c.s == "f1-score" || c.s == "f1_score") return Metric::F1Score;
        return std::nullopt;
    }
    if (n.is(NodeKind::Call)) {
        const std::string p = ctx.imports.resolve(n[0]);
        if (p == "keras.metrics.F1Score") return Metric::F1Score;
        if (p == "keras.metrics.Accuracy" || p == "keras.metrics.SparseCategoricalAccuracy") return Metric::Accuracy;
    }
    return std::nullopt;
}

inline std::optional<TrainingConfig> extract_tf_config(const Context& ctx) {
    const SymbolTable& st = ctx.module_symbols;
    std::optional<TrainingConfig> cfg;
    walk(ctx.tree.root, [&](const Node& n) {
        if (!n.is(NodeKind::Call) || !n[0].is(NodeKind::Attribute) || n[0].text != "compile" || cfg) return;
        const Node* opt = kwarg(n, "optimizer");
        if (!opt) opt = posarg(n, 0);
        if (!opt) return;
        TrainingConfig c;
        Const oc = eval_const(*opt, st);
        if (oc.is_str()) {
            auto o = optimizer_from_name(oc.s);
            if (!o) fail(ErrorCode::UnsupportedAttribute, opt->loc, "unsupported optimizer '" + oc.s + "'");
            c.optimizer = *o;
            c.learning_rate = default_learning_rate(Framework::ChannelLast, *o);
        } else if (opt->is(NodeKind::Call)) {
            const std::string p = ctx.imports.resolve((*opt)[0]);
            const std::string leaf = p.substr(p.rfind('.') + 1);
            auto o = p.rfind("keras.optimizers.", 0) == 0 ? optimizer_from_name(leaf) : std::nullopt;
            if (!o) fail(ErrorCode::UnsupportedAttribute, opt->loc, "unsupported optimizer " + dotted_name((*opt)[0]));
            c.optimizer = *o;
            c.learning_rate = default_learning_rate(Framework::ChannelLast, *o);
            const Node* lr = kwarg(*opt, "learning_rate");
            if (!lr) lr = kwarg(*opt, "lr");
            if (!lr) lr = posarg(*opt, 0);
            if (lr) {
                Const v = eval_const(*lr, st);
                if (!v.is_number()) fail(ErrorCode::UnsupportedAttribute, lr->loc, "learning rate must be a constant");
                c.learning_rate = v.number();
            }
        } else {
            fail(ErrorCode::UnsupportedAttribute, opt->loc, "optimizer must be a name or an optimizer construction");
        }
        if (const Node* loss = kwarg(n, "loss") ? kwarg(n, "loss") : posarg(n, 1)) {
            Const lc = eval_const(*loss, st);
            std::optional<Loss> l;
            if (lc.is_str()) l = loss_from_name(lc.s);
            else if (loss->is(NodeKind::Call)) {
                const std::string p = ctx.imports.resolve((*loss)[0]);
                if (p.rfind("keras.losses.", 0) == 0) l = loss_from_name(p.substr(p.rfind('.') + 1));
            }
            if (!l) fail(ErrorCode::UnsupportedAttribute, loss->loc, "unsupported loss");
            c.loss = *l;
        }
        if (const Node* metrics = kwarg(n, "metrics")) {
            if (!metrics->is(NodeKind::List) && !metrics->is(NodeKind::Tuple)) {
                fail(ErrorCode::UnsupportedAttribute, metrics->loc, "metrics must be an inline list");
            }
            for (const auto& m : metrics->children) {
                if (auto mm = metric_from(m, ctx, st)) c.metrics.push_back(*mm);
                else ctx.note(ErrorCode::DroppedConstruct, m.loc, "unsupported metric dropped");
            }
        }
        cfg = c;
    });
    if (!cfg) return cfg;
    bool fit_seen = false;
    walk(ctx.tree.root, [&](const Node& n) {
        if (fit_seen || !n.is(NodeKind::Call) || !n[0].is(NodeKind::Attribute) || n[0].text != "fit") return;
        fit_seen = true;
        const Node* epochs = kwarg(n, "epochs");
        if (!epochs) epochs = posarg(n, 3);
        if (epochs) {
            Const v = eval_const(*epochs, st);
            if (!v.is_int()) fail(ErrorCode::UnsupportedAttribute, epochs->loc, "epochs must be a constant integer");
            cfg->epochs = v.i;
        }
        const Node* batch = kwarg(n, "batch_size");
        if (!batch) batch = posarg(n, 2);
        if (batch) {
            Const v = eval_const(*batch, st);
            if (!v.is_int()) fail(ErrorCode::UnsupportedAttribute, batch->loc, "batch_size must be a constant integer");
            cfg->batch_size = v.i;
        }
    });
    return cfg;
}

inline bool contains_backward_call(const Node& n) {
    if (n.is(NodeKind::Call) && n[0].is(NodeKind::Attribute) && (n[0].text == "backward" || n[0].text == "step")) return true;
    return std::any_of(n.children.begin(), n.children.end(), contains_backward_call);
}

inline std::optional<TrainingConfig> extract_pt_config(const Context& ctx) {
    const SymbolTable& st = ctx.module_symbols;
    std::optional<TrainingConfig> cfg;
    walk(ctx.tree.root, [&](const Node& n) {
        if (cfg || !n.is(NodeKind::Call)) return;
        const std::string p = ctx.imports.resolve(n[0]);
        if (p.rfind("torch.optim.", 0) != 0) return;
        const std::string leaf = p.substr(p.rfind('.') + 1);
        auto o = optimizer_from_name(leaf);
        if (!o) fail(ErrorCode::UnsupportedAttribute, n.loc, "unsupported optimizer " + p);
        TrainingConfig c;
        c.optimizer = *o;
        c.learning_rate = default_learning_rate(Framework::ChannelFirst, *o);
        const Node* lr = kwarg(n, "lr");
        if (!lr) lr = posarg(n, 1);
        if (lr) {
            Const v = eval_const(*lr, st);
            if (!v.is_number()) fail(ErrorCode::UnsupportedAttribute, lr->loc, "learning rate must be a constant");
            c.learning_rate = v.number();
        }
        cfg = c;
    });
    if (!cfg) return cfg;
    bool loss_seen = false;
    bool loader_seen = false;
    bool epochs_seen = false;
    walk(ctx.tree.root, [&](const Node& n) {
        if (n.is(NodeKind::Call)) {
            const std::string p = ctx.imports.resolve(n[0]);
            if (!loss_seen && p.rfind("torch.nn.", 0) == 0 && p.size() > 4 && p.substr(p.size() - 4) == "Loss") {
                auto l = loss_from_name(p.substr(p.rfind('.') + 1));
                if (!l) fail(ErrorCode::UnsupportedAttribute, n.loc, "unsupported loss " + p);
                cfg->loss = *l;
                loss_seen = true;
            }
            if (!loader_seen && p == "torch.utils.data.DataLoader") {
                loader_seen = true;
                cfg->batch_size = 1;
                const Node* b = kwarg(n, "batch_size");
                if (!b) b = posarg(n, 1);
                if (b) {
                    Const v = eval_const(*b, st);
                    if (!v.is_int()) fail(ErrorCode::UnsupportedAttribute, b->loc, "batch_size must be a constant integer");
                    cfg->batch_size = v.i;
                }
            }
        }
        if (!epochs_seen && n.is(NodeKind::For) && n[1].is(NodeKind::Call) && dotted_name(n[1][0]) == "range" &&
            contains_backward_call(n[2])) {
            epochs_seen = true;
            const Node* stop = n[1].size() == 2 ? &n[1][1] : n[1].size() == 3 ? &n[1][2] : nullptr;
            Const v = stop ? eval_const(*stop, st) : Const::unknown();
            if (!v.is_int()) fail(ErrorCode::UnsupportedAttribute, n[1].loc, "epoch count must be a constant integer");
            cfg->epochs = n[1].size() == 3 ? v.i - eval_const(n[1][1], st).i : v.i;
        }
    });
    if (auto metrics = st.lookup("METRICS"); metrics && metrics->type == Const::Type::Tuple) {
        for (const auto& m : metrics->items) {
            if (m.is_str() && m.s == "accuracy") cfg->metrics.push_back(Metric::Accuracy);
            else if (m.is_str() && (m.s == "f1-score" || m.s == "f1_score")) cfg->metrics.push_back(Metric::F1Score);
        }
    }
    return cfg;
}

inline std::vector<DatasetRef> extract_datasets(const Context& ctx) {
    std::vector<DatasetRef> out;
    std::set<std::string> seen;
    walk(ctx.tree.root, [&](const Node& n) {
        if (!n.is(NodeKind::Assign) || n.size() != 2 || !n[0].is(NodeKind::Name) || !n[1].is(NodeKind::Call)) return;
        const Node& call = n[1];
        const std::string p = ctx.imports.resolve(call[0]);
        InputFormat fmt;
        std::string_view path_kw;
        if (p == "keras.utils.image_dataset_from_directory" || p == "keras.preprocessing.image_dataset_from_directory") {
            fmt = InputFormat::Images;
            path_kw = "directory";
        } else if (p == "keras.utils.text_dataset_from_directory" || p == "keras.preprocessing.text_dataset_from_directory") {
            fmt = InputFormat::Sequences;
            path_kw = "directory";
        } else if (p == "torchvision.datasets.ImageFolder") {
            fmt = InputFormat::Images;
            path_kw = "root";
        } else if (p.empty() && call[0].is(NodeKind::Name) && call[0].text == "text_folder" &&
                   ctx.fw == Framework::ChannelFirst) {
            fmt = InputFormat::Sequences;
            path_kw = "root";
        } else {
            return;
        }
        const Node* dir = kwarg(call, path_kw);
        if (!dir) dir = posarg(call, 0);
        Const c = dir ? eval_const(*dir, ctx.module_symbols) : Const::unknown();
        if (!c.is_str()) {
            ctx.note(ErrorCode::DroppedConstruct, call.loc, "dataset with a non-constant path dropped");
            return;
        }
        if (!seen.insert(n[0].text).second) return;
        out.push_back(DatasetRef{n[0].text, c.s, DatasetTask::Classification, fmt});
    });
    return out;
}

}  // namespace extract_detail

/// Lifts `tree` (already known to be in `dialect`) into a validated PivotNN.
inline PivotNN extract(const SyntaxTree& tree, const Dialect& dialect, const ExtractOptions& opts = {},
                       Diagnostics* notes = nullptr) {
    using namespace extract_detail;
    Context ctx(tree, dialect.framework, notes);
    PivotNN nn;
    if (dialect.style == Style::Sequential) {
        nn = extract_sequential(ctx, opts);
    } else {
        SubclassExtractor sub(ctx, opts);
        nn = sub.run();
        if (auto shape = build_call_shape(ctx, tree.root, ctx.module_symbols)) {
            nn.input_shape = TensorShape::batched(*shape);
        } else if (auto declared = declared_input_constant(ctx)) {
            nn.input_shape = TensorShape::batched(*declared);
        }
    }
    nn.config = dialect.framework == Framework::ChannelLast ? extract_tf_config(ctx) : extract_pt_config(ctx);
    nn.datasets = extract_datasets(ctx);
    throw_if_invalid(nn, {1, 1});
    return nn;
}

}  // namespace nnmig
