// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nnmig/pivot.hpp"
#include "nnmig/syntax.hpp"

namespace nnmig {

/// Compile-time value of an expression, or Unknown when it depends on runtime state.
struct Const {
    enum class Type { Unknown, None, Bool, Int, Float, Str, Tuple };

    Type type = Type::Unknown;
    bool b = false;
    int64_t i = 0;
    double f = 0.0;
    std::string s;
    std::vector<Const> items;
    std::string symbol;  // for Unknown values read through a name: that name

    static Const unknown(std::string sym = {}) {
        Const c;
        c.symbol = std::move(sym);
        return c;
    }
    static Const none() { return make(Type::None); }
    static Const boolean(bool v) { auto c = make(Type::Bool); c.b = v; return c; }
    static Const integer(int64_t v) { auto c = make(Type::Int); c.i = v; return c; }
    static Const real(double v) { auto c = make(Type::Float); c.f = v; return c; }
    static Const str(std::string v) { auto c = make(Type::Str); c.s = std::move(v); return c; }
    static Const tuple(std::vector<Const> v) { auto c = make(Type::Tuple); c.items = std::move(v); return c; }

    bool known() const {
        if (type == Type::Unknown) return false;
        for (const auto& it : items) {
            if (!it.known()) return false;
        }
        return true;
    }
    bool is_int() const { return type == Type::Int; }
    bool is_number() const { return type == Type::Int || type == Type::Float; }
    bool is_str() const { return type == Type::Str; }
    double number() const { return type == Type::Int ? static_cast<double>(i) : f; }

    /// Int, or a tuple of ints.
    std::optional<Ints> int_tuple() const {
        if (type == Type::Int) return Ints{i};
        if (type != Type::Tuple) return std::nullopt;
        Ints out;
        for (const auto& it : items) {
            if (it.type != Type::Int) return std::nullopt;
            out.push_back(it.i);
        }
        return out;
    }

    /// Python-ish rendering for messages.
    std::string repr() const {
        switch (type) {
        case Type::Unknown: return symbol.empty() ? "<runtime value>" : symbol;
        case Type::None: return "None";
        case Type::Bool: return b ? "True" : "False";
        case Type::Int: return std::to_string(i);
        case Type::Float: {
            std::string out = std::to_string(f);
            return out;
        }
        case Type::Str: return "'" + s + "'";
        case Type::Tuple: {
            std::string out = "(";
            for (size_t k = 0; k < items.size(); ++k) {
                if (k) out += ", ";
                out += items[k].repr();
            }
            return out + (items.size() == 1 ? ",)" : ")");
        }
        }
        return "?";
    }

private:
    static Const make(Type t) {
        Const c;
        c.type = t;
        return c;
    }
};

/// Identifier -> single-assignment constant, or Unknown. Keys for instance attributes are
/// "self.<attr>".
class SymbolTable {
public:
    SymbolTable() = default;
    explicit SymbolTable(const SymbolTable* parent) : parent_(parent) {}

    /// Records one assignment. A second assignment to the same key demotes it to Unknown.
    void assign(const std::string& key, Const value) {
        auto [it, inserted] = values_.emplace(key, value);
        if (!inserted) it->second = Const::unknown(key);
        if (!it->second.known()) it->second = Const::unknown(key);
    }

    /// Marks a name as runtime-bound (function parameter, loop variable).
    void bind_unknown(const std::string& key) { values_[key] = Const::unknown(key); }

    /// Lookup through enclosing scopes; nullopt when the name was never assigned.
    std::optional<Const> lookup(const std::string& key) const {
        if (auto it = values_.find(key); it != values_.end()) return it->second;
        if (parent_) return parent_->lookup(key);
        return std::nullopt;
    }

    bool defines(const std::string& key) const { return values_.count(key) != 0; }

private:
    const SymbolTable* parent_ = nullptr;
    std::map<std::string, Const> values_;
};

namespace symbols_detail {

inline std::optional<Const> parse_number(const std::string& lit) {
    std::string clean;
    for (char c : lit) {
        if (c != '_') clean += c;
    }
    if (clean.empty() || clean.back() == 'j' || clean.back() == 'J') return std::nullopt;
    try {
        if (clean.size() > 2 && clean[0] == '0' && std::isalpha(static_cast<unsigned char>(clean[1]))) {
            const char base = static_cast<char>(std::tolower(clean[1]));
            const int radix = base == 'x' ? 16 : base == 'o' ? 8 : 2;
            return Const::integer(std::stoll(clean.substr(2), nullptr, radix));
        }
        if (clean.find_first_of(".eE") == std::string::npos) {
            return Const::integer(std::stoll(clean));
        }
        return Const::real(std::stod(clean));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace symbols_detail

/// Folds literals, tuples/lists of literals, unary minus, and names bound to constants.
inline Const eval_const(const Node& n, const SymbolTable& symbols) {
    switch (n.kind) {
    case NodeKind::Number: {
        auto v = symbols_detail::parse_number(n.text);
        return v ? *v : Const::unknown();
    }
    case NodeKind::String:
        if (n.aux.find('f') != std::string::npos || n.aux.find('b') != std::string::npos) return Const::unknown();
        return Const::str(n.text);
    case NodeKind::Constant:
        if (n.text == "True") return Const::boolean(true);
        if (n.text == "False") return Const::boolean(false);
        if (n.text == "None") return Const::none();
        return Const::unknown();
    case NodeKind::Tuple:
    case NodeKind::List: {
        std::vector<Const> items;
        for (const auto& c : n.children) items.push_back(eval_const(c, symbols));
        return Const::tuple(std::move(items));
    }
    case NodeKind::UnaryOp: {
        Const v = eval_const(n[0], symbols);
        if (n.text == "-" && v.type == Const::Type::Int) return Const::integer(-v.i);
        if (n.text == "-" && v.type == Const::Type::Float) return Const::real(-v.f);
        if (n.text == "+" && v.is_number()) return v;
        return Const::unknown();
    }
    case NodeKind::BinOp: {
        Const a = eval_const(n[0], symbols);
        Const b = eval_const(n[1], symbols);
        if (a.is_int() && b.is_int()) {
            if (n.text == "+") return Const::integer(a.i + b.i);
            if (n.text == "-") return Const::integer(a.i - b.i);
            if (n.text == "*") return Const::integer(a.i * b.i);
            if (n.text == "//" && b.i != 0) {
                const int64_t q = a.i / b.i;
                return Const::integer((a.i % b.i != 0 && ((a.i < 0) != (b.i < 0))) ? q - 1 : q);
            }
        } else if (a.is_number() && b.is_number()) {
            if (n.text == "+") return Const::real(a.number() + b.number());
            if (n.text == "-") return Const::real(a.number() - b.number());
            if (n.text == "*") return Const::real(a.number() * b.number());
            if (n.text == "/" && b.number() != 0.0) return Const::real(a.number() / b.number());
        }
        return Const::unknown();
    }
    case NodeKind::Name:
    case NodeKind::Attribute: {
        const std::string key = dotted_name(n);
        if (key.empty()) return Const::unknown();
        if (auto v = symbols.lookup(key)) {
            if (!v->known()) return Const::unknown(key);
            return *v;
        }
        return Const::unknown(key);
    }
    default: return Const::unknown();
    }
}

namespace symbols_detail {

inline void collect_targets(const Node& target, std::vector<const Node*>& out) {
    if (target.is(NodeKind::Tuple) || target.is(NodeKind::List)) {
        for (const auto& c : target.children) collect_targets(c, out);
    } else if (target.is(NodeKind::Starred)) {
        collect_targets(target[0], out);
    } else {
        out.push_back(&target);
    }
}

inline void record_assignment(SymbolTable& table, const Node& target, const Node* value,
                              const SymbolTable& eval_scope) {
    if (target.is(NodeKind::Name) || (target.is(NodeKind::Attribute) && !dotted_name(target).empty())) {
        const std::string key = dotted_name(target);
        table.assign(key, value ? eval_const(*value, eval_scope) : Const::unknown(key));
        return;
    }
    std::vector<const Node*> names;
    collect_targets(target, names);
    for (const Node* t : names) {
        const std::string key = dotted_name(*t);
        if (!key.empty()) table.bind_unknown(key);
    }
}

// Assignments of a statement list, not descending into nested defs/classes. Statements
// inside control flow count as (possibly repeated) assignments, so they end up Unknown.
inline void scan_block(SymbolTable& table, const std::vector<Node>& stmts, int depth) {
    for (const auto& s : stmts) {
        switch (s.kind) {
        case NodeKind::Assign: {
            const Node& value = s.children.back();
            for (size_t i = 0; i + 1 < s.size(); ++i) {
                record_assignment(table, s[i], depth == 0 ? &value : nullptr, table);
            }
            break;
        }
        case NodeKind::AnnAssign:
            record_assignment(table, s[0], s.size() > 2 && depth == 0 ? &s[2] : nullptr, table);
            break;
        case NodeKind::AugAssign: {
            const std::string key = dotted_name(s[0]);
            if (!key.empty()) table.bind_unknown(key);
            break;
        }
        case NodeKind::For:
            record_assignment(table, s[0], nullptr, table);
            scan_block(table, s[2].children, depth + 1);
            if (s.size() > 3) scan_block(table, s[3].children, depth + 1);
            break;
        case NodeKind::While:
        case NodeKind::If:
        case NodeKind::With:
        case NodeKind::Try:
            for (const auto& c : s.children) {
                if (c.is(NodeKind::Block)) scan_block(table, c.children, depth + 1);
                if (c.is(NodeKind::If)) scan_block(table, {c}, depth + 1);
                if (c.is(NodeKind::ExceptHandler)) scan_block(table, c[1].children, depth + 1);
                if (c.is(NodeKind::WithItem) && c.size() > 1) record_assignment(table, c[1], nullptr, table);
            }
            break;
        case NodeKind::Import:
        case NodeKind::ImportFrom:
            for (const auto& a : s.children) {
                std::string bound = a.aux.empty() ? a.text.substr(0, a.text.find('.')) : a.aux;
                if (bound != "*") table.bind_unknown(bound);
            }
            break;
        case NodeKind::FunctionDef:
        case NodeKind::ClassDef: table.bind_unknown(s.text); break;
        default: break;
        }
    }
}

}  // namespace symbols_detail

/// Module-scope table for a parsed file.
inline SymbolTable module_symbols(const SyntaxTree& tree) {
    SymbolTable table;
    symbols_detail::scan_block(table, tree.root.children, 0);
    return table;
}

/// Table for a function body: parameters are runtime-bound, locals are scanned, and
/// enclosing-scope constants stay visible through `parent`.
inline SymbolTable function_symbols(const Node& fn, const SymbolTable* parent) {
    SymbolTable table(parent);
    for (const auto& p : fn[0].children) {
        if (!p.text.empty()) table.bind_unknown(p.text);
    }
    symbols_detail::scan_block(table, fn[1].children, 0);
    return table;
}

}  // namespace nnmig
