// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Pivot -> target source. build_plan fixes emitted names and dataflow variables,
// plan_permutes adds the layout permutes a channel-first target needs, and emit renders
// one of the four (framework, style) generators.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nnmig/dialect.hpp"
#include "nnmig/layout.hpp"
#include "nnmig/naming.hpp"
#include "nnmig/pivot.hpp"
#include "nnmig/pivot_json.hpp"
#include "nnmig/shape.hpp"
#include "nnmig/version.hpp"

namespace nnmig {

using EmitTarget = Dialect;

struct PlanRecord {
    std::string module;        // pivot module name
    std::string emitted_name;  // attribute / layer name in the output
    std::vector<std::string> input_vars;
    std::string output_var;
    std::vector<TensorOpSpec> pre_ops;
    std::vector<TensorOpSpec> post_ops;
    int channel_rank = 0;      // spatial rank for conv/pool records, else 0
    std::string act_name;      // standalone activation module (channel-first targets)
    std::string pad_name;      // ZeroPadding layer for explicit conv padding (channel-last targets)
    std::string state_var;     // final hidden state of a bidirectional recurrent layer
};

struct GenPlan {
    std::string network;
    std::string class_name;
    std::string input_var = "x";
    std::vector<PlanRecord> records;
    std::vector<GenPlan> subnets;  // root plan only; dependency order
    NameAllocator names;

    const PlanRecord* find(std::string_view module) const {
        for (const auto& r : records) {
            if (r.module == module) return &r;
        }
        return nullptr;
    }
};

struct EmitOptions {
    bool emit_training = true;
    std::string source_label = "pivot";  // header note on where the pivot came from
};

inline uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string pivot_hash(const PivotNN& nn) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize(nn))));
    return buf;
}

namespace codegen_detail {

[[noreturn]] inline void fail(ErrorCode code, const ModuleSpec* m, const std::string& msg) {
    throw MigrationError(code, msg, m ? m->origin : SourceLocation{}, m ? m->name : std::string{});
}

/// Shortest decimal that reads back as the same double, always with a '.' or exponent.
inline std::string py_float(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s = buf;
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

inline std::string py_str(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\\' || c == '\'') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "'";
}

inline std::string py_tuple(const Ints& v) {
    std::string out = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out + (v.size() == 1 ? ",)" : ")");
}

inline std::string py_args(const Ints& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out;
}

inline std::string py_list(const std::vector<std::string>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i];
    }
    return out + "]";
}

/// An int when every entry is equal, else a tuple.
inline std::string int_or_tuple(const Ints& v) {
    if (!v.empty() && std::all_of(v.begin(), v.end(), [&](int64_t e) { return e == v.front(); })) {
        return std::to_string(v.front());
    }
    return py_tuple(v);
}

inline bool all_ones(const Ints& v) {
    return std::all_of(v.begin(), v.end(), [](int64_t e) { return e == 1; });
}

class Writer {
public:
    void line(int indent, const std::string& text) {
        out_.append(static_cast<size_t>(indent) * 4, ' ');
        out_ += text;
        out_ += '\n';
    }
    void blank(int n = 1) {
        for (int i = 0; i < n; ++i) out_ += '\n';
    }
    std::string str() const { return out_; }

private:
    std::string out_;
};

inline void collect_symbols(const PivotNN& root, const PivotNN& net, std::vector<std::string>& out, int depth) {
    for (const auto& m : net.modules) {
        if (m.is_layer() && m.layer().activation.is_dynamic()) {
            const std::string& s = m.layer().activation.symbol;
            if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
        }
        if (m.is_subnet() && depth <= kMaxNesting) {
            if (const PivotNN* sub = root.find_subnet(m.subnet().network)) collect_symbols(root, *sub, out, depth + 1);
        }
    }
}

/// Dynamic activation symbols reachable from `net`, in first-use order.
inline std::vector<std::string> dynamic_symbols(const PivotNN& root, const PivotNN& net) {
    std::vector<std::string> out;
    collect_symbols(root, net, out, 0);
    return out;
}

inline GenPlan plan_network(const PivotNN& net) {
    GenPlan plan;
    plan.network = net.name;
    plan.class_name = plan.names.claim(net.name);
    plan.names.reserve(plan.input_var);
    std::map<std::string, std::string> var_of{{std::string(kInputToken), plan.input_var}};
    for (const auto& name : topo_order(net)) {
        const ModuleSpec& m = *net.find(name);
        PlanRecord r;
        r.module = m.name;
        r.emitted_name = plan.names.claim(is_python_identifier(m.name) ? m.name : sanitize_identifier(m.name));
        r.output_var = r.emitted_name;
        for (const auto& in : m.inputs) r.input_vars.push_back(var_of.at(in));
        if (is_channel_sensitive_module(m)) r.channel_rank = spatial_rank(m.layer().kind);
        var_of[m.name] = r.output_var;
        plan.records.push_back(std::move(r));
    }
    // auxiliary names only after every module name is settled
    for (auto& r : plan.records) {
        const ModuleSpec& m = *net.find(r.module);
        if (!m.is_layer()) continue;
        const LayerSpec& l = m.layer();
        if (!l.activation.is_none()) r.act_name = plan.names.claim(r.emitted_name + "_act");
        if (is_conv(l.kind) && l.as<ConvAttrs>().padding.mode == Padding::Mode::Explicit) {
            r.pad_name = plan.names.claim(r.emitted_name + "_pad");
        }
        if (is_recurrent(l.kind) && l.as<RecurrentAttrs>().bidirectional) {
            r.state_var = plan.names.claim(r.emitted_name + "_h");
        }
    }
    return plan;
}

inline void add_runs(GenPlan& plan) {
    std::map<std::string, size_t> readers;
    for (const auto& r : plan.records) {
        for (const auto& v : r.input_vars) ++readers[v];
    }
    size_t i = 0;
    while (i < plan.records.size()) {
        if (!plan.records[i].channel_rank) {
            ++i;
            continue;
        }
        size_t last = i;
        while (last + 1 < plan.records.size()) {
            const PlanRecord& prev = plan.records[last];
            const PlanRecord& next = plan.records[last + 1];
            if (next.channel_rank != prev.channel_rank) break;
            if (next.input_vars != std::vector<std::string>{prev.output_var} || readers[prev.output_var] != 1) break;
            ++last;
        }
        const size_t rank = static_cast<size_t>(plan.records[i].channel_rank) + 2;
        plan.records[i].pre_ops.push_back(TensorOpSpec::permute(to_channel_first_order(rank)));
        plan.records[last].post_ops.push_back(TensorOpSpec::permute(to_channel_last_order(rank)));
        i = last + 1;
    }
}

}  // namespace codegen_detail

/// Emission plan: records in topological order with collision-free emitted names.
inline GenPlan build_plan(const PivotNN& nn, const ShapeAnnotation& ann) {
    for (const auto& m : nn.modules) {
        if (!ann.modules.count(m.name)) {
            throw MigrationError(ErrorCode::InvalidArgument, "shape annotation does not cover this module", m.origin, m.name);
        }
    }
    GenPlan plan = codegen_detail::plan_network(nn);
    // sub-networks in dependency order (referenced before referencing)
    std::set<std::string> done;
    std::function<void(const PivotNN&, int)> visit = [&](const PivotNN& net, int depth) {
        for (const auto& m : net.modules) {
            if (!m.is_subnet() || done.count(m.subnet().network) || depth > kMaxNesting) continue;
            const PivotNN* sub = nn.find_subnet(m.subnet().network);
            if (!sub) continue;
            visit(*sub, depth + 1);
            if (done.insert(sub->name).second) plan.subnets.push_back(codegen_detail::plan_network(*sub));
        }
    };
    visit(nn, 0);
    // class names of sub-networks must not collide with the main network's
    std::set<std::string> classes{plan.class_name};
    for (auto& s : plan.subnets) {
        while (classes.count(s.class_name)) s.class_name += "_";
        classes.insert(s.class_name);
    }
    return plan;
}

/// Wraps each maximal channel-sensitive run in a channel-last -> channel-first permute and
/// its inverse. No-op for channel-last targets.
inline GenPlan plan_permutes(GenPlan plan, const ShapeAnnotation& ann, const EmitTarget& target) {
    if (target.framework != Framework::ChannelFirst) return plan;
    codegen_detail::add_runs(plan);
    for (auto& s : plan.subnets) codegen_detail::add_runs(s);
    for (const auto& r : plan.records) {
        if (r.pre_ops.empty()) continue;
        auto it = ann.modules.find(r.module);
        if (it != ann.modules.end() && it->second.inputs.front().rank() != r.pre_ops.front().dims.size()) {
            throw MigrationError(ErrorCode::ShapeMismatch, "layout permute does not match the input rank", {}, r.module);
        }
    }
    return plan;
}

}  // namespace nnmig

#include "nnmig/codegen_emit.hpp"
