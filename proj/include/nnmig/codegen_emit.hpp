// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Source rendering for the four generators. Included from codegen.hpp.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "nnmig/codegen.hpp"

namespace nnmig {

namespace codegen_detail {

inline std::string dims_suffix(int rank) { return std::to_string(rank) + "D"; }

class Emitter {
public:
    Emitter(const PivotNN& root, const EmitTarget& target, const EmitOptions& opts, Diagnostics* warnings)
        : root_(root), target_(target), opts_(opts), warnings_(warnings) {}

    std::string run(const GenPlan& plan) {
        const bool pt = target_.framework == Framework::ChannelFirst;
        if (target_.style == Style::Sequential) check_sequential(plan);
        Writer body;
        if (target_.style == Style::Sequential) {
            pt ? pt_sequential(body, plan) : tf_sequential(body, plan);
        } else {
            for (const auto& sub : plan.subnets) {
                const PivotNN& net = *root_.find_subnet(sub.network);
                pt ? pt_class(body, sub, net) : tf_class(body, sub, net);
                body.blank(2);
            }
            pt ? pt_class(body, plan, root_) : tf_class(body, plan, root_);
        }
        Writer tail;
        if (opts_.emit_training && root_.config) {
            tail.blank(2);
            pt ? pt_training(tail, *root_.config) : tf_training(tail, *root_.config);
        }
        if (opts_.emit_training && !root_.datasets.empty()) {
            tail.blank(2);
            datasets(tail);
        }

        Writer out;
        out.line(0, "# Generated by nnmig " + std::string(kVersion) + ": " + opts_.source_label + " -> " + to_string(target_));
        out.line(0, "# pivot fnv1a64: " + pivot_hash(root_));
        imports(out);
        if (root_.input_shape) {
            Ints extents;
            for (size_t i = 1; i < root_.input_shape->rank(); ++i) extents.push_back(root_.input_shape->dims[i].value);
            out.blank();
            out.line(0, "INPUT_SHAPE = " + py_tuple(extents) + "  # channel-last, batch excluded");
        }
        helpers(out);
        out.blank(2);
        return out.str() + body.str() + tail.str();
    }

private:
    const PivotNN& root_;
    const EmitTarget& target_;
    const EmitOptions& opts_;
    Diagnostics* warnings_;

    std::set<std::string> helper_classes_;
    bool resolver_ = false;
    bool ordered_dict_ = false;
    bool text_folder_ = false;
    bool image_folder_ = false;

    void warn(ErrorCode code, const std::string& module, std::string msg) {
        if (warnings_) warnings_->push_back(Diagnostic{code, Severity::Warning, module, std::move(msg), {}});
    }

    // --- shared -----------------------------------------------------------

    void check_sequential(const GenPlan& plan) {
        if (!plan.subnets.empty() || !root_.sub_networks.empty()) {
            fail(ErrorCode::NonChainForSequential, nullptr, "network contains sub-networks; use a Subclassing target");
        }
        if (!is_chain(root_)) {
            fail(ErrorCode::NonChainForSequential, nullptr, "network is not a linear chain; use a Subclassing target");
        }
        for (const auto& m : root_.modules) {
            if (m.is_layer() && is_recurrent(m.layer().kind)) {
                fail(ErrorCode::NonChainForSequential, &m, "recurrent layers need a Subclassing target");
            }
        }
    }

    const LayerSpec* terminal_layer() const {
        const ModuleSpec* m = root_.find(terminal_module(root_));
        return m && m->is_layer() ? &m->layer() : nullptr;
    }
    bool terminal_has(Activation a) const {
        const LayerSpec* l = terminal_layer();
        return l && l->activation.is_literal() && l->activation.literal == a;
    }

    static std::string ctor_params(const std::vector<std::string>& syms) {
        std::string out;
        for (const auto& s : syms) out += ", " + s;
        return out;
    }
    static std::string call_args(const std::vector<std::string>& syms) {
        std::string out;
        for (size_t i = 0; i < syms.size(); ++i) out += (i ? ", " : "") + syms[i];
        return out;
    }

    static std::string terminal_var(const GenPlan& plan, const PivotNN& net) {
        const std::string t = terminal_module(net);
        const PlanRecord* r = plan.find(t.empty() ? net.modules.back().name : t);
        return r ? r->output_var : plan.input_var;
    }

    // --- channel-last (tf) --------------------------------------------------

    static std::string tf_activation(const ActivationRef& a) {
        if (a.is_none()) return {};
        if (a.is_dynamic()) return ", activation=" + a.symbol;
        return ", activation=" + py_str(to_string(a.literal));
    }

    std::string tf_layer(const ModuleSpec& m, const std::string& name_kw) {
        const LayerSpec& l = m.layer();
        const int rank = spatial_rank(l.kind);
        switch (attribute_index(l.kind)) {
        case 0:
            return "layers.Dense(" + std::to_string(l.as<LinearAttrs>().out_features) + tf_activation(l.activation) + name_kw + ")";
        case 1: {
            const auto& c = l.as<ConvAttrs>();
            std::string s = "layers.Conv" + dims_suffix(rank) + "(" + std::to_string(c.out_channels) + ", " + int_or_tuple(c.kernel);
            if (!all_ones(c.stride)) s += ", strides=" + int_or_tuple(c.stride);
            if (c.padding.mode == Padding::Mode::Same) s += ", padding='same'";
            return s + tf_activation(l.activation) + name_kw + ")";
        }
        case 2: {
            const auto& p = l.as<PoolAttrs>();
            if (p.padding.normalized().mode == Padding::Mode::Explicit) {
                fail(ErrorCode::UnsupportedPadding, &m, "explicit pooling padding has no channel-last equivalent");
            }
            std::string s = std::string("layers.") + (is_max_pool(l.kind) ? "MaxPooling" : "AveragePooling") + dims_suffix(rank) +
                            "(pool_size=" + int_or_tuple(p.kernel);
            if (p.stride != p.kernel) s += ", strides=" + int_or_tuple(p.stride);
            if (p.padding.mode == Padding::Mode::Same) s += ", padding='same'";
            return s + name_kw + ")";
        }
        case 3: return "layers.Flatten(" + strip_comma(name_kw) + ")";
        case 4: return "layers.Dropout(" + py_float(l.as<DropoutAttrs>().rate) + name_kw + ")";
        case 5: {
            const auto& e = l.as<EmbeddingAttrs>();
            return "layers.Embedding(" + std::to_string(e.vocab_size) + ", " + std::to_string(e.embedding_dim) + name_kw + ")";
        }
        default: {
            const auto& r = l.as<RecurrentAttrs>();
            const std::string cls = l.kind == LayerKind::LSTM ? "LSTM" : l.kind == LayerKind::GRU ? "GRU" : "SimpleRNN";
            std::string inner = "layers." + cls + "(" + std::to_string(r.hidden_size) +
                                (r.return_sequences ? ", return_sequences=True" : "");
            if (r.bidirectional) return "layers.Bidirectional(" + inner + ")" + name_kw + ")";
            return inner + name_kw + ")";
        }
        }
    }

    static std::string strip_comma(const std::string& kw) { return kw.empty() ? kw : kw.substr(2); }

    static std::string tf_zero_pad(const ModuleSpec& m, const std::string& name_kw) {
        const auto& c = m.layer().as<ConvAttrs>();
        return "layers.ZeroPadding" + dims_suffix(spatial_rank(m.layer().kind)) + "(padding=" + int_or_tuple(c.padding.amounts) +
               name_kw + ")";
    }

    /// Keras layer for a tensor op, or empty when the op is written as a function call.
    std::string tf_op_layer(const ModuleSpec& m, const std::string& name_kw) {
        const TensorOpSpec& op = m.tensor_op();
        switch (op.kind) {
        case TensorOpKind::Permute: {
            if (op.dims.empty() || op.dims.front() != 0) {
                fail(ErrorCode::UnsupportedInTarget, &m, "permute must keep the batch axis first");
            }
            return "layers.Permute(" + py_tuple(Ints(op.dims.begin() + 1, op.dims.end())) + name_kw + ")";
        }
        case TensorOpKind::Reshape: return "layers.Reshape(" + py_tuple(op.dims) + name_kw + ")";
        case TensorOpKind::Concatenate: return "layers.Concatenate(axis=" + std::to_string(op.axis) + name_kw + ")";
        case TensorOpKind::Add: return "layers.Add(" + strip_comma(name_kw) + ")";
        case TensorOpKind::Multiply: return "layers.Multiply(" + strip_comma(name_kw) + ")";
        default: return {};
        }
    }

    void tf_sequential(Writer& w, const GenPlan& plan) {
        const auto syms = dynamic_symbols(root_, root_);
        w.line(0, "def build_" + plan.class_name + "(" + call_args(syms) + "):");
        w.line(1, "return keras.Sequential([");
        if (root_.input_shape) w.line(2, "layers.Input(shape=INPUT_SHAPE),");
        for (const auto& r : plan.records) {
            const ModuleSpec& m = *root_.find(r.module);
            const std::string kw = ", name=" + py_str(r.emitted_name);
            if (m.is_tensor_op()) {
                std::string layer = tf_op_layer(m, kw);
                if (layer.empty()) {
                    fail(ErrorCode::UnsupportedInTarget, &m,
                         std::string(to_string(m.tensor_op().kind)) + " has no Sequential layer in the channel-last target");
                }
                w.line(2, layer + ",");
                continue;
            }
            if (!r.pad_name.empty()) w.line(2, tf_zero_pad(m, ", name=" + py_str(r.pad_name)) + ",");
            w.line(2, tf_layer(m, kw) + ",");
        }
        w.line(1, "], name=" + py_str(plan.class_name) + ")");
    }

    void tf_class(Writer& w, const GenPlan& plan, const PivotNN& net) {
        const auto syms = dynamic_symbols(root_, net);
        w.line(0, "class " + plan.class_name + "(keras.Model):");
        w.line(1, "def __init__(self" + ctor_params(syms) + "):");
        w.line(2, "super().__init__()");
        for (const auto& r : plan.records) {
            const ModuleSpec& m = *net.find(r.module);
            const std::string lhs = "self." + r.emitted_name + " = ";
            if (m.is_subnet()) {
                w.line(2, lhs + subnet_class(m) + "(" + call_args(dynamic_symbols(root_, *root_.find_subnet(m.subnet().network))) + ")");
            } else if (m.is_tensor_op()) {
                const std::string layer = tf_op_layer(m, "");
                if (!layer.empty()) w.line(2, lhs + layer);
            } else {
                if (!r.pad_name.empty()) w.line(2, "self." + r.pad_name + " = " + tf_zero_pad(m, ""));
                w.line(2, lhs + tf_layer(m, ""));
            }
        }
        w.blank();
        w.line(1, "def call(self, " + plan.input_var + "):");
        for (const auto& r : plan.records) {
            const ModuleSpec& m = *net.find(r.module);
            w.line(2, r.output_var + " = " + tf_forward_expr(r, m));
        }
        w.line(2, "return " + terminal_var(plan, net));
    }

    std::string subnet_class(const ModuleSpec& m) const {
        return subnet_classes_.count(m.subnet().network) ? subnet_classes_.at(m.subnet().network) : m.subnet().network;
    }

    std::string tf_forward_expr(const PlanRecord& r, const ModuleSpec& m) {
        const std::string self = "self." + r.emitted_name;
        if (m.is_tensor_op()) {
            const TensorOpSpec& op = m.tensor_op();
            switch (op.kind) {
            case TensorOpKind::Transpose:
                return "tf.experimental.numpy.swapaxes(" + r.input_vars[0] + ", " + std::to_string(op.dims[0]) + ", " +
                       std::to_string(op.dims[1]) + ")";
            case TensorOpKind::Matmul: return "tf.matmul(" + r.input_vars[0] + ", " + r.input_vars[1] + ")";
            case TensorOpKind::Concatenate:
            case TensorOpKind::Add:
            case TensorOpKind::Multiply: return self + "(" + py_list(r.input_vars) + ")";
            default: return self + "(" + r.input_vars[0] + ")";
            }
        }
        std::string arg = r.input_vars[0];
        if (!r.pad_name.empty()) arg = "self." + r.pad_name + "(" + arg + ")";
        return self + "(" + arg + ")";
    }

    // --- channel-first (pt) -------------------------------------------------

    std::string pt_activation(const ModuleSpec& m) {
        const LayerSpec& l = m.layer();
        const bool conv = is_conv(l.kind);
        if (l.activation.is_dynamic()) {
            resolver_ = true;
            return "resolve_activation(" + l.activation.symbol + (conv ? ", dim=1" : "") + ")";
        }
        switch (l.activation.literal) {
        case Activation::Relu: return "nn.ReLU()";
        case Activation::Sigmoid: return "nn.Sigmoid()";
        case Activation::Tanh: return "nn.Tanh()";
        case Activation::Softmax: return conv ? "nn.Softmax(dim=1)" : "nn.Softmax(dim=-1)";
        case Activation::LeakyRelu: return "nn.LeakyReLU(negative_slope=0.2)";
        }
        return "nn.Identity()";
    }

    template <typename T>
    static int64_t need_input(const ModuleSpec& m, const std::optional<T>& v, std::string_view what) {
        if (!v) {
            fail(ErrorCode::MissingInputDims, &m,
                 std::string(what) + " is unknown; the channel-first target needs it (give an input shape)");
        }
        return *v;
    }

    std::string pt_layer(const ModuleSpec& m) {
        const LayerSpec& l = m.layer();
        const int rank = spatial_rank(l.kind);
        switch (attribute_index(l.kind)) {
        case 0: {
            const auto& a = l.as<LinearAttrs>();
            return "nn.Linear(" + std::to_string(need_input(m, a.in_features, "in_features")) + ", " +
                   std::to_string(a.out_features) + ")";
        }
        case 1: {
            const auto& c = l.as<ConvAttrs>();
            std::string s = "nn.Conv" + std::to_string(rank) + "d(" + std::to_string(need_input(m, c.in_channels, "in_channels")) +
                            ", " + std::to_string(c.out_channels) + ", kernel_size=" + int_or_tuple(c.kernel);
            if (!all_ones(c.stride)) s += ", stride=" + int_or_tuple(c.stride);
            const Padding p = c.padding.normalized();
            if (p.mode == Padding::Mode::Same) {
                if (!all_ones(c.stride)) {
                    fail(ErrorCode::UnsupportedPadding, &m, "'same' padding with stride > 1 has no channel-first equivalent");
                }
                s += ", padding='same'";
            } else if (p.mode == Padding::Mode::Explicit) {
                s += ", padding=" + int_or_tuple(p.amounts);
            }
            return s + ")";
        }
        case 2: {
            const auto& p = l.as<PoolAttrs>();
            std::string s = std::string("nn.") + (is_max_pool(l.kind) ? "MaxPool" : "AvgPool") + std::to_string(rank) +
                            "d(kernel_size=" + int_or_tuple(p.kernel);
            if (p.stride != p.kernel) s += ", stride=" + int_or_tuple(p.stride);
            const Padding pad = p.padding.normalized();
            if (pad.mode == Padding::Mode::Same) {
                fail(ErrorCode::UnsupportedPadding, &m, "'same' pooling padding has no channel-first equivalent");
            }
            if (pad.mode == Padding::Mode::Explicit) {
                for (size_t i = 0; i < pad.amounts.size(); ++i) {
                    if (2 * pad.amounts[i] > p.kernel[i]) {
                        fail(ErrorCode::UnsupportedPadding, &m, "pooling padding larger than half the kernel");
                    }
                }
                s += ", padding=" + int_or_tuple(pad.amounts);
            }
            return s + ")";
        }
        case 3: return "nn.Flatten()";
        case 4: return "nn.Dropout(p=" + py_float(l.as<DropoutAttrs>().rate) + ")";
        case 5: {
            const auto& e = l.as<EmbeddingAttrs>();
            return "nn.Embedding(" + std::to_string(e.vocab_size) + ", " + std::to_string(e.embedding_dim) + ")";
        }
        default: {
            const auto& r = l.as<RecurrentAttrs>();
            const std::string cls = l.kind == LayerKind::LSTM ? "LSTM" : l.kind == LayerKind::GRU ? "GRU" : "RNN";
            return "nn." + cls + "(" + std::to_string(need_input(m, r.input_size, "input_size")) + ", " +
                   std::to_string(r.hidden_size) + ", batch_first=True" + (r.bidirectional ? ", bidirectional=True" : "") + ")";
        }
        }
    }

    static std::string permute_args(const TensorOpSpec& op) { return py_args(op.dims); }

    std::string pt_helper(const ModuleSpec& m) {
        const TensorOpSpec& op = m.tensor_op();
        switch (op.kind) {
        case TensorOpKind::Permute: helper_classes_.insert("Permute"); return "Permute(" + py_args(op.dims) + ")";
        case TensorOpKind::Reshape: helper_classes_.insert("Reshape"); return "Reshape(" + py_args(op.dims) + ")";
        case TensorOpKind::Transpose: helper_classes_.insert("Transpose"); return "Transpose(" + py_args(op.dims) + ")";
        default:
            fail(ErrorCode::NonChainForSequential, &m, "multi-input tensor ops need a Subclassing target");
        }
    }

    void pt_sequential(Writer& w, const GenPlan& plan) {
        ordered_dict_ = true;
        NameAllocator names = plan.names;
        const auto syms = dynamic_symbols(root_, root_);
        auto entry = [&](const std::string& key, const std::string& ctor) { w.line(2, "(" + py_str(key) + ", " + ctor + "),"); };
        auto permute_entry = [&](const TensorOpSpec& op) {
            helper_classes_.insert("Permute");
            entry(names.claim("permute"), "Permute(" + permute_args(op) + ")");
        };
        w.line(0, "def build_" + plan.class_name + "(" + call_args(syms) + "):");
        w.line(1, "return nn.Sequential(OrderedDict([");
        for (const auto& r : plan.records) {
            const ModuleSpec& m = *root_.find(r.module);
            for (const auto& op : r.pre_ops) permute_entry(op);
            if (m.is_tensor_op()) {
                entry(r.emitted_name, pt_helper(m));
            } else {
                entry(r.emitted_name, pt_layer(m));
                if (!m.layer().activation.is_none()) entry(r.act_name, pt_activation(m));
            }
            for (const auto& op : r.post_ops) permute_entry(op);
        }
        w.line(1, "]))");
    }

    void pt_class(Writer& w, const GenPlan& plan, const PivotNN& net) {
        const auto syms = dynamic_symbols(root_, net);
        w.line(0, "class " + plan.class_name + "(nn.Module):");
        w.line(1, "def __init__(self" + ctor_params(syms) + "):");
        w.line(2, "super().__init__()");
        for (const auto& r : plan.records) {
            const ModuleSpec& m = *net.find(r.module);
            const std::string lhs = "self." + r.emitted_name + " = ";
            if (m.is_subnet()) {
                w.line(2, lhs + subnet_class(m) + "(" + call_args(dynamic_symbols(root_, *root_.find_subnet(m.subnet().network))) + ")");
            } else if (m.is_layer()) {
                w.line(2, lhs + pt_layer(m));
                if (!m.layer().activation.is_none()) w.line(2, "self." + r.act_name + " = " + pt_activation(m));
            }
        }
        w.blank();
        w.line(1, "def forward(self, " + plan.input_var + "):");
        for (const auto& r : plan.records) pt_forward(w, r, *net.find(r.module));
        w.line(2, "return " + terminal_var(plan, net));
    }

    static std::string with_ops(std::string expr, const std::vector<TensorOpSpec>& ops) {
        for (const auto& op : ops) expr += ".permute(" + permute_args(op) + ")";
        return expr;
    }

    void pt_forward(Writer& w, const PlanRecord& r, const ModuleSpec& m) {
        const std::string self = "self." + r.emitted_name;
        const std::string out = r.output_var;
        if (m.is_tensor_op()) {
            const TensorOpSpec& op = m.tensor_op();
            const auto& in = r.input_vars;
            std::string e;
            switch (op.kind) {
            case TensorOpKind::Permute: e = in[0] + ".permute(" + py_args(op.dims) + ")"; break;
            case TensorOpKind::Reshape: e = in[0] + ".reshape(" + in[0] + ".size(0), " + py_args(op.dims) + ")"; break;
            case TensorOpKind::Transpose: e = in[0] + ".transpose(" + py_args(op.dims) + ")"; break;
            case TensorOpKind::Concatenate: {
                std::string t = "(";
                for (size_t i = 0; i < in.size(); ++i) t += (i ? ", " : "") + in[i];
                e = "torch.cat(" + t + (in.size() == 1 ? ",)" : ")") + ", dim=" + std::to_string(op.axis) + ")";
                break;
            }
            case TensorOpKind::Add:
            case TensorOpKind::Multiply:
                if (in.size() != 2) {
                    fail(ErrorCode::UnsupportedInTarget, &m, "element-wise ops over more than two inputs are not emitted for the channel-first target");
                }
                e = in[0] + (op.kind == TensorOpKind::Add ? " + " : " * ") + in[1];
                break;
            case TensorOpKind::Matmul: e = "torch.matmul(" + in[0] + ", " + in[1] + ")"; break;
            }
            w.line(2, out + " = " + e);
            return;
        }
        const std::string arg = with_ops(r.input_vars[0], r.pre_ops);
        if (m.is_subnet()) {
            w.line(2, out + " = " + with_ops(self + "(" + arg + ")", r.post_ops));
            return;
        }
        const LayerSpec& l = m.layer();
        if (is_recurrent(l.kind)) {
            const auto& a = l.as<RecurrentAttrs>();
            if (a.return_sequences) {
                w.line(2, out + ", _ = " + self + "(" + arg + ")");
            } else if (!a.bidirectional) {
                w.line(2, out + " = " + self + "(" + arg + ")[0][:, -1, :]");
            } else {
                const std::string h = r.state_var;
                w.line(2, (l.kind == LayerKind::LSTM ? "_, (" + h + ", _)" : "_, " + h) + " = " + self + "(" + arg + ")");
                w.line(2, out + " = torch.cat((" + h + "[-2], " + h + "[-1]), dim=1)");
            }
            return;
        }
        std::string e = self + "(" + arg + ")";
        if (!l.activation.is_none()) e = "self." + r.act_name + "(" + e + ")";
        w.line(2, out + " = " + with_ops(e, r.post_ops));
    }

    // --- training scaffolds --------------------------------------------------

    void tf_training(Writer& w, const TrainingConfig& c) {
        static const std::map<Optimizer, std::string> kOpt{
            {Optimizer::Sgd, "SGD"}, {Optimizer::Adam, "Adam"}, {Optimizer::AdamW, "AdamW"}, {Optimizer::RmsProp, "RMSprop"}};
        std::string loss;
        switch (c.loss) {
        case Loss::CrossEntropy:
            loss = terminal_has(Activation::Softmax) ? "'sparse_categorical_crossentropy'"
                                                     : "keras.losses.SparseCategoricalCrossentropy(from_logits=True)";
            break;
        case Loss::BinaryCrossEntropy:
            loss = terminal_has(Activation::Sigmoid) ? "'binary_crossentropy'" : "keras.losses.BinaryCrossentropy(from_logits=True)";
            break;
        case Loss::Mse: loss = "'mse'"; break;
        }
        std::vector<std::string> metrics;
        for (Metric m : c.metrics) metrics.push_back(m == Metric::Accuracy ? "'accuracy'" : "keras.metrics.F1Score()");
        w.line(0, "def train(model, x_train, y_train):");
        w.line(1, "model.compile(");
        w.line(2, "optimizer=keras.optimizers." + kOpt.at(c.optimizer) + "(learning_rate=" + py_float(c.learning_rate) + "),");
        w.line(2, "loss=" + loss + ",");
        w.line(2, "metrics=" + py_list(metrics) + ",");
        w.line(1, ")");
        w.line(1, "model.fit(x_train, y_train, batch_size=" + std::to_string(c.batch_size) + ", epochs=" + std::to_string(c.epochs) + ")");
        w.line(1, "return model");
        w.blank(2);
        w.line(0, "def evaluate(model, x_test, y_test):");
        w.line(1, "return model.evaluate(x_test, y_test, batch_size=" + std::to_string(c.batch_size) + ")");
    }

    std::string pt_criterion(const TrainingConfig& c) const {
        switch (c.loss) {
        case Loss::CrossEntropy: return "nn.CrossEntropyLoss()";
        case Loss::BinaryCrossEntropy: return terminal_has(Activation::Sigmoid) ? "nn.BCELoss()" : "nn.BCEWithLogitsLoss()";
        case Loss::Mse: return "nn.MSELoss()";
        }
        return "nn.MSELoss()";
    }

    void pt_training(Writer& w, const TrainingConfig& c) {
        static const std::map<Optimizer, std::string> kOpt{
            {Optimizer::Sgd, "SGD"}, {Optimizer::Adam, "Adam"}, {Optimizer::AdamW, "AdamW"}, {Optimizer::RmsProp, "RMSprop"}};
        // class-index targets for cross-entropy, float targets shaped like the output otherwise
        const bool float_targets = c.loss != Loss::CrossEntropy;
        const std::string apply = float_targets ? "criterion(out, batch_y.float().view_as(out))" : "criterion(out, batch_y)";
        if (!c.metrics.empty()) {
            std::vector<std::string> names;
            for (Metric m : c.metrics) names.push_back(py_str(to_string(m)));
            std::string t = "(";
            for (size_t i = 0; i < names.size(); ++i) t += (i ? ", " : "") + names[i];
            w.line(0, "METRICS = " + t + (names.size() == 1 ? ",)" : ")"));
            w.blank(2);
        }
        w.line(0, "def make_loader(inputs, targets, shuffle=True):");
        w.line(1, "return DataLoader(TensorDataset(inputs, targets), batch_size=" + std::to_string(c.batch_size) + ", shuffle=shuffle)");
        w.blank(2);
        w.line(0, "def train(model, inputs, targets):");
        w.line(1, "loader = make_loader(inputs, targets)");
        w.line(1, "optimizer = torch.optim." + kOpt.at(c.optimizer) + "(model.parameters(), lr=" + py_float(c.learning_rate) + ")");
        w.line(1, "criterion = " + pt_criterion(c));
        w.line(1, "model.train()");
        w.line(1, "for epoch in range(" + std::to_string(c.epochs) + "):");
        w.line(2, "for batch_x, batch_y in loader:");
        w.line(3, "optimizer.zero_grad()");
        w.line(3, "out = model(batch_x)");
        w.line(3, "loss = " + apply);
        w.line(3, "loss.backward()");
        w.line(3, "optimizer.step()");
        w.line(1, "return model");
        w.blank(2);
        w.line(0, "def evaluate(model, inputs, targets):");
        w.line(1, "loader = make_loader(inputs, targets, shuffle=False)");
        w.line(1, "criterion = " + pt_criterion(c));
        w.line(1, "model.eval()");
        w.line(1, "total = 0.0");
        w.line(1, "with torch.no_grad():");
        w.line(2, "for batch_x, batch_y in loader:");
        w.line(3, "out = model(batch_x)");
        w.line(3, "total += " + apply + ".item()");
        w.line(1, "return total / max(len(loader), 1)");
    }

    void datasets(Writer& w) {
        const bool pt = target_.framework == Framework::ChannelFirst;
        w.line(0, "def load_datasets():");
        std::vector<std::string> vars;
        NameAllocator names;
        for (const auto& d : root_.datasets) {
            if (d.task == DatasetTask::Regression) {
                warn(ErrorCode::DroppedConstruct, "", "dataset '" + d.name + "' is a regression dataset; emitted as a classification folder");
            }
            const std::string var = names.claim(d.name);
            vars.push_back(var);
            std::string ctor;
            if (pt) {
                if (d.input_format == InputFormat::Images) {
                    image_folder_ = true;
                    ctor = "datasets.ImageFolder(" + py_str(d.path) + ", transform=transforms.ToTensor())";
                } else {
                    text_folder_ = true;
                    ctor = "text_folder(" + py_str(d.path) + ")";
                }
            } else if (d.input_format == InputFormat::Images) {
                ctor = "keras.utils.image_dataset_from_directory(" + py_str(d.path);
                if (root_.input_shape && root_.input_shape->rank() == 4) {
                    ctor += ", image_size=(" + std::to_string(root_.input_shape->dims[1].value) + ", " +
                            std::to_string(root_.input_shape->dims[2].value) + ")";
                }
                ctor += ")";
            } else {
                ctor = "keras.utils.text_dataset_from_directory(" + py_str(d.path) + ")";
            }
            w.line(1, var + " = " + ctor);
        }
        std::string ret;
        for (size_t i = 0; i < vars.size(); ++i) ret += (i ? ", " : "") + vars[i];
        w.line(1, "return " + ret);
    }

    // --- prologue ------------------------------------------------------------

    void imports(Writer& w) {
        w.blank();
        if (target_.framework == Framework::ChannelLast) {
            w.line(0, "import tensorflow as tf");
            w.line(0, "from tensorflow import keras");
            w.line(0, "from tensorflow.keras import layers");
            return;
        }
        if (text_folder_) w.line(0, "import os");
        if (ordered_dict_) w.line(0, "from collections import OrderedDict");
        if (text_folder_ || ordered_dict_) w.blank();
        w.line(0, "import torch");
        w.line(0, "import torch.nn as nn");
        if (opts_.emit_training && root_.config) w.line(0, "from torch.utils.data import DataLoader, TensorDataset");
        if (image_folder_) w.line(0, "from torchvision import datasets, transforms");
    }

    void helpers(Writer& w) {
        auto gap = [&] { w.blank(2); };
        if (helper_classes_.count("Permute")) {
            gap();
            w.line(0, "class Permute(nn.Module):");
            w.line(1, "def __init__(self, *dims):");
            w.line(2, "super().__init__()");
            w.line(2, "self.dims = dims");
            w.blank();
            w.line(1, "def forward(self, x):");
            w.line(2, "return x.permute(*self.dims)");
        }
        if (helper_classes_.count("Reshape")) {
            gap();
            w.line(0, "class Reshape(nn.Module):");
            w.line(1, "def __init__(self, *shape):");
            w.line(2, "super().__init__()");
            w.line(2, "self.shape = shape");
            w.blank();
            w.line(1, "def forward(self, x):");
            w.line(2, "return x.reshape(x.size(0), *self.shape)");
        }
        if (helper_classes_.count("Transpose")) {
            gap();
            w.line(0, "class Transpose(nn.Module):");
            w.line(1, "def __init__(self, dim0, dim1):");
            w.line(2, "super().__init__()");
            w.line(2, "self.dim0 = dim0");
            w.line(2, "self.dim1 = dim1");
            w.blank();
            w.line(1, "def forward(self, x):");
            w.line(2, "return x.transpose(self.dim0, self.dim1)");
        }
        if (resolver_) {
            gap();
            w.line(0, "def resolve_activation(name, dim=-1):");
            w.line(1, "if name is None or name == 'linear':");
            w.line(2, "return nn.Identity()");
            w.line(1, "if name == 'relu':");
            w.line(2, "return nn.ReLU()");
            w.line(1, "if name == 'sigmoid':");
            w.line(2, "return nn.Sigmoid()");
            w.line(1, "if name == 'tanh':");
            w.line(2, "return nn.Tanh()");
            w.line(1, "if name == 'softmax':");
            w.line(2, "return nn.Softmax(dim=dim)");
            w.line(1, "if name == 'leaky_relu':");
            w.line(2, "return nn.LeakyReLU(negative_slope=0.2)");
            w.line(1, "raise ValueError('unsupported activation: ' + str(name))");
        }
        if (text_folder_) {
            gap();
            w.line(0, "def text_folder(root):");
            w.line(1, "samples = []");
            w.line(1, "for label, cls in enumerate(sorted(os.listdir(root))):");
            w.line(2, "folder = os.path.join(root, cls)");
            w.line(2, "for fname in sorted(os.listdir(folder)):");
            w.line(3, "with open(os.path.join(folder, fname), encoding='utf-8') as fh:");
            w.line(4, "samples.append((fh.read(), label))");
            w.line(1, "return samples");
        }
    }

public:
    std::map<std::string, std::string> subnet_classes_;  // network name -> emitted class name
};

}  // namespace codegen_detail

/// Renders `plan` (from build_plan / plan_permutes on the same pivot) as target source.
inline std::string emit(const GenPlan& plan, const PivotNN& nn, const EmitTarget& target, const EmitOptions& opts = {},
                        Diagnostics* warnings = nullptr) {
    codegen_detail::Emitter e(nn, target, opts, warnings);
    for (const auto& s : plan.subnets) e.subnet_classes_[s.network] = s.class_name;
    return e.run(plan);
}

/// build_plan + plan_permutes + emit.
inline std::string generate(const PivotNN& nn, const ShapeAnnotation& ann, const EmitTarget& target, const EmitOptions& opts = {},
                            Diagnostics* warnings = nullptr) {
    return emit(plan_permutes(build_plan(nn, ann), ann, target), nn, target, opts, warnings);
}

}  // namespace nnmig
