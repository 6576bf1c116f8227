// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Tokenizer and recursive-descent parser for the Python 3.10 grammar, minus the `match`
// statement and type-parameter syntax. Produces a generic syntax tree where each node
// kind uses a fixed child layout (documented on NodeKind).

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nnmig/diagnostics.hpp"

namespace nnmig {

enum class NodeKind {
    // statements
    Module,       // children: statements
    Block,        // children: statements; text "else"/"finally" when used as a Try clause
    ClassDef,     // text: name; [Arguments(bases), Block, Decorators]
    FunctionDef,  // text: name; aux "async" or ""; [Parameters, Block, Decorators, returns|Empty]
    Parameters,   // children: Param
    Param,        // text: name; aux "", "*", "**", "/" (marker), "*" with empty text (bare star); [annotation|Empty, default|Empty]
    Decorators,   // children: expressions
    Arguments,    // children: positional exprs, Keyword, Starred, DoubleStarred
    Return,       // [value?]
    Assign,       // [target..., value]
    AugAssign,    // text: operator ("+="); [target, value]
    AnnAssign,    // [target, annotation, value?]
    ExprStmt,     // [expr]
    Import,       // children: Alias
    ImportFrom,   // text: module (leading dots kept); children: Alias
    Alias,        // text: dotted name or "*"; aux: as-name
    If,           // [test, Block, orelse?]  orelse is Block or If (elif)
    For,          // aux "async"?; [target, iter, Block, Block(else)?]
    While,        // [test, Block, Block(else)?]
    With,         // [WithItem..., Block]
    WithItem,     // [expr, target?]
    Try,          // [Block, ExceptHandler..., Block("else")?, Block("finally")?]
    ExceptHandler,  // aux: bound name; [type|Empty, Block]
    Pass,
    Break,
    Continue,
    Raise,     // [exc?, cause?]
    Assert,    // [test, msg?]
    Global,    // children: Alias
    Nonlocal,  // children: Alias
    Del,       // children: targets
    // expressions
    Name,           // text: identifier
    Number,         // text: literal as written
    String,         // text: decoded value; aux: lowercase prefix
    Constant,       // text: True, False, None, ...
    Attribute,      // text: attribute; [value]
    Call,           // [func, arg...]  arg is expr, Keyword, Starred or DoubleStarred
    Keyword,        // text: name; [value]
    Starred,        // [value]
    DoubleStarred,  // [value]
    Subscript,      // [value, index]
    Slice,          // [lower|Empty, upper|Empty, step|Empty]
    Empty,
    Tuple,
    List,
    Dict,  // children: KeyValue or DoubleStarred
    KeyValue,
    Set,
    BinOp,      // text: operator; [left, right]
    UnaryOp,    // text: "-", "+", "~", "not"; [operand]
    BoolOp,     // text: "and"/"or"; children: operands
    Compare,    // aux: operators joined by '|'; children: operands
    IfExp,      // [body, test, orelse]
    Lambda,     // [Parameters, body]
    Comprehension,  // [target, iter, if...]
    ListComp,       // [elt, Comprehension...]
    SetComp,
    GeneratorExp,
    DictComp,   // [key, value, Comprehension...]
    NamedExpr,  // [target, value]
    Yield,      // text "from" for yield-from; [value?]
    Await,      // [value]
};

struct Node {
    NodeKind kind = NodeKind::Empty;
    std::string text;
    std::string aux;
    std::vector<Node> children;
    SourceLocation loc;

    Node() = default;
    Node(NodeKind k, SourceLocation l, std::string t = {}) : kind(k), text(std::move(t)), loc(l) {}

    bool is(NodeKind k) const { return kind == k; }
    const Node& operator[](size_t i) const { return children.at(i); }
    size_t size() const { return children.size(); }
};

/// Parsed source file. `root` is a Module node.
struct SyntaxTree {
    Node root;
};

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class TokenType { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
    TokenType type = TokenType::End;
    std::string text;    // decoded value for strings
    std::string prefix;  // string prefix, lowercase
    SourceLocation loc;
};

namespace syntax_detail {

[[noreturn]] inline void syntax_error(SourceLocation loc, const std::string& what) {
    throw MigrationError(ErrorCode::SyntaxError, what, loc);
}

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}
inline bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Tokenizer {
public:
    explicit Tokenizer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        indents_.push_back(0);
        at_line_start_ = true;
        while (true) {
            if (at_line_start_ && brackets_.empty()) {
                if (!handle_indentation()) break;
            }
            skip_spaces();
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                continue;
            }
            if (c == '\\') {
                size_t save = pos_;
                advance();
                if (pos_ < src_.size() && src_[pos_] == '\r') advance();
                if (pos_ < src_.size() && src_[pos_] == '\n') {
                    advance();
                    continue;
                }
                pos_ = save;
                syntax_error(here(), "unexpected character after line continuation character");
            }
            if (c == '\n' || c == '\r') {
                SourceLocation loc = here();
                if (c == '\r') advance();
                if (pos_ < src_.size() && src_[pos_] == '\n') advance();
                if (brackets_.empty()) {
                    emit(TokenType::Newline, "", loc);
                    at_line_start_ = true;
                }
                continue;
            }
            if (is_string_start()) {
                lex_string();
                continue;
            }
            if (is_ident_start(static_cast<unsigned char>(c))) {
                lex_name();
                continue;
            }
            if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
                lex_number();
                continue;
            }
            lex_operator();
        }
        if (!brackets_.empty()) {
            const auto& open = brackets_.back();
            syntax_error(open.second, std::string("'") + open.first + "' was never closed");
        }
        if (!tokens_.empty() && tokens_.back().type != TokenType::Newline &&
            tokens_.back().type != TokenType::Dedent) {
            emit(TokenType::Newline, "", here());
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            emit(TokenType::Dedent, "", here());
        }
        emit(TokenType::End, "", here());
        return std::move(tokens_);
    }

private:
    SourceLocation here() const { return {line_, col_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void emit(TokenType t, std::string text, SourceLocation loc, std::string prefix = {}) {
        tokens_.push_back(Token{t, std::move(text), std::move(prefix), loc});
    }

    void skip_spaces() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) advance();
    }

    // Returns false at end of input.
    bool handle_indentation() {
        while (true) {
            int width = 0;
            while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) {
                width = src_[pos_] == '\t' ? (width / 8 + 1) * 8 : width + 1;
                advance();
            }
            if (pos_ >= src_.size()) return false;
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                continue;
            }
            if (c == '\r' || c == '\n') {
                if (c == '\r') advance();
                if (pos_ < src_.size() && src_[pos_] == '\n') advance();
                continue;
            }
            at_line_start_ = false;
            SourceLocation loc = here();
            if (width > indents_.back()) {
                indents_.push_back(width);
                emit(TokenType::Indent, "", loc);
            } else {
                while (width < indents_.back()) {
                    indents_.pop_back();
                    emit(TokenType::Dedent, "", loc);
                }
                if (width != indents_.back()) {
                    syntax_error(loc, "unindent does not match any outer indentation level");
                }
            }
            return true;
        }
    }

    bool is_string_start() const {
        size_t p = pos_;
        size_t n = 0;
        while (p < src_.size() && n < 2 && std::string_view("rRbBuUfF").find(src_[p]) != std::string_view::npos) {
            ++p;
            ++n;
        }
        return p < src_.size() && (src_[p] == '\'' || src_[p] == '"');
    }

    void lex_name() {
        SourceLocation loc = here();
        size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) advance();
        emit(TokenType::Name, std::string(src_.substr(start, pos_ - start)), loc);
    }

    void lex_number() {
        SourceLocation loc = here();
        size_t start = pos_;
        auto digits = [&](auto pred) {
            while (pos_ < src_.size() && (pred(src_[pos_]) || src_[pos_] == '_')) advance();
        };
        if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
            std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos) {
            advance();
            advance();
            digits([](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
        } else {
            digits(is_digit);
            if (pos_ < src_.size() && src_[pos_] == '.') {
                advance();
                digits(is_digit);
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t save = pos_;
                int scol = col_;
                advance();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
                if (pos_ < src_.size() && is_digit(src_[pos_])) {
                    digits(is_digit);
                } else {
                    pos_ = save;
                    col_ = scol;
                }
            }
            if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) advance();
        }
        if (pos_ < src_.size() && is_ident_start(static_cast<unsigned char>(src_[pos_]))) {
            syntax_error(here(), "invalid decimal literal");
        }
        emit(TokenType::Number, std::string(src_.substr(start, pos_ - start)), loc);
    }

    void lex_string() {
        SourceLocation loc = here();
        std::string prefix;
        while (src_[pos_] != '\'' && src_[pos_] != '"') {
            prefix += static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_])));
            advance();
        }
        const bool raw = prefix.find('r') != std::string::npos;
        const char quote = src_[pos_];
        const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
        for (int i = 0; i < (triple ? 3 : 1); ++i) advance();
        std::string value;
        while (true) {
            if (pos_ >= src_.size()) syntax_error(loc, "unterminated string literal");
            char c = src_[pos_];
            if (c == quote) {
                if (!triple) {
                    advance();
                    break;
                }
                if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
                    advance();
                    advance();
                    advance();
                    break;
                }
            }
            if (c == '\n' && !triple) syntax_error(loc, "unterminated string literal");
            if (c == '\\' && pos_ + 1 < src_.size()) {
                if (raw) {
                    value += c;
                    advance();
                    value += src_[pos_];
                    advance();
                    continue;
                }
                advance();
                char e = src_[pos_];
                advance();
                switch (e) {
                case '\n': break;
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case '0': value += '\0'; break;
                case 'a': value += '\a'; break;
                case 'b': value += '\b'; break;
                case 'f': value += '\f'; break;
                case 'v': value += '\v'; break;
                case '\\': value += '\\'; break;
                case '\'': value += '\''; break;
                case '"': value += '"'; break;
                case 'x':
                case 'u':
                case 'U': {
                    const int n = e == 'x' ? 2 : e == 'u' ? 4 : 8;
                    uint32_t cp = 0;
                    for (int i = 0; i < n; ++i) {
                        if (pos_ >= src_.size() || !std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
                            syntax_error(here(), "truncated escape sequence");
                        }
                        const char h = src_[pos_];
                        cp = cp * 16 + static_cast<uint32_t>(is_digit(h) ? h - '0' : (std::tolower(h) - 'a' + 10));
                        advance();
                    }
                    append_utf8(value, cp);
                    break;
                }
                default:
                    value += '\\';
                    value += e;
                    break;
                }
                continue;
            }
            value += c;
            advance();
        }
        emit(TokenType::String, std::move(value), loc, std::move(prefix));
    }

    void lex_operator() {
        static constexpr std::array<std::string_view, 25> kMulti = {
            "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=",
            "==",  "!=",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "@=", "<>"};
        SourceLocation loc = here();
        std::string_view rest = src_.substr(pos_);
        for (auto op : kMulti) {
            if (op == "<>") continue;
            if (rest.substr(0, op.size()) == op) {
                for (size_t i = 0; i < op.size(); ++i) advance();
                emit(TokenType::Op, std::string(op), loc);
                return;
            }
        }
        const char c = src_[pos_];
        if (std::string_view("+-*/%@&|^~<>()[]{},:.;=").find(c) == std::string_view::npos) {
            syntax_error(loc, std::string("invalid character '") + c + "'");
        }
        if (c == '(' || c == '[' || c == '{') {
            brackets_.emplace_back(c, loc);
        } else if (c == ')' || c == ']' || c == '}') {
            const char expect = c == ')' ? '(' : c == ']' ? '[' : '{';
            if (brackets_.empty()) syntax_error(loc, std::string("unmatched '") + c + "'");
            if (brackets_.back().first != expect) {
                syntax_error(loc, std::string("closing parenthesis '") + c +
                                      "' does not match opening parenthesis '" + brackets_.back().first + "'");
            }
            brackets_.pop_back();
        }
        advance();
        emit(TokenType::Op, std::string(1, c), loc);
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    bool at_line_start_ = true;
    std::vector<int> indents_;
    std::vector<std::pair<char, SourceLocation>> brackets_;
    std::vector<Token> tokens_;
};

inline bool is_keyword(std::string_view s) {
    static constexpr std::array<std::string_view, 35> kKeywords = {
        "False", "None",   "True",    "and",      "as",   "assert", "async", "await",  "break",
        "class", "continue", "def",   "del",      "elif", "else",   "except", "finally", "for",
        "from",  "global", "if",      "import",   "in",   "is",     "lambda", "nonlocal", "not",
        "or",    "pass",   "raise",   "return",   "try",  "while",  "with",  "yield"};
    return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Node parse_module() {
        Node mod(NodeKind::Module, {1, 1});
        while (!at(TokenType::End)) {
            if (accept_newline()) continue;
            parse_statement(mod.children);
        }
        return mod;
    }

private:
    // --- token helpers ---------------------------------------------------
    const Token& peek(size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(TokenType t) const { return peek().type == t; }
    bool at_op(std::string_view op, size_t ahead = 0) const {
        return peek(ahead).type == TokenType::Op && peek(ahead).text == op;
    }
    bool at_kw(std::string_view kw, size_t ahead = 0) const {
        return peek(ahead).type == TokenType::Name && peek(ahead).text == kw;
    }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept_op(std::string_view op) {
        if (at_op(op)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_kw(std::string_view kw) {
        if (at_kw(kw)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_newline() {
        if (at(TokenType::Newline)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void unexpected(std::string_view expected) const {
        const Token& t = peek();
        std::string got;
        switch (t.type) {
        case TokenType::Newline: got = "end of line"; break;
        case TokenType::Indent: got = "unexpected indent"; break;
        case TokenType::Dedent: got = "dedent"; break;
        case TokenType::End: got = "end of file"; break;
        case TokenType::String: got = "string literal"; break;
        default: got = "'" + t.text + "'"; break;
        }
        syntax_error(t.loc, "expected " + std::string(expected) + ", got " + got);
    }

    void expect_op(std::string_view op) {
        if (!accept_op(op)) unexpected("'" + std::string(op) + "'");
    }
    void expect_kw(std::string_view kw) {
        if (!accept_kw(kw)) unexpected("'" + std::string(kw) + "'");
    }
    std::string expect_name() {
        if (!at(TokenType::Name) || is_keyword(peek().text)) unexpected("identifier");
        return next().text;
    }
    void expect_newline() {
        if (at(TokenType::End)) return;
        if (!accept_newline()) unexpected("end of line");
    }

    bool at_expression_start() const {
        const Token& t = peek();
        switch (t.type) {
        case TokenType::Name:
            return !is_keyword(t.text) || t.text == "None" || t.text == "True" || t.text == "False" ||
                   t.text == "not" || t.text == "lambda" || t.text == "await" || t.text == "yield";
        case TokenType::Number:
        case TokenType::String: return true;
        case TokenType::Op:
            return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
                   t.text == "~" || t.text == "*" || t.text == "..." || t.text == "**";
        default: return false;
        }
    }

    // --- statements ------------------------------------------------------
    void parse_statement(std::vector<Node>& out) {
        if (at(TokenType::Indent)) syntax_error(peek().loc, "unexpected indent");
        if (at(TokenType::Dedent)) unexpected("statement");
        if (at_op("@")) {
            out.push_back(parse_decorated());
            return;
        }
        if (at_kw("if")) { out.push_back(parse_if()); return; }
        if (at_kw("for")) { out.push_back(parse_for("")); return; }
        if (at_kw("while")) { out.push_back(parse_while()); return; }
        if (at_kw("with")) { out.push_back(parse_with()); return; }
        if (at_kw("try")) { out.push_back(parse_try()); return; }
        if (at_kw("def")) { out.push_back(parse_funcdef(Node(NodeKind::Decorators, peek().loc), "")); return; }
        if (at_kw("class")) { out.push_back(parse_classdef(Node(NodeKind::Decorators, peek().loc))); return; }
        if (at_kw("async")) {
            ++pos_;
            if (at_kw("def")) { out.push_back(parse_funcdef(Node(NodeKind::Decorators, peek().loc), "async")); return; }
            if (at_kw("for")) { out.push_back(parse_for("async")); return; }
            if (at_kw("with")) { Node w = parse_with(); w.aux = "async"; out.push_back(std::move(w)); return; }
            unexpected("'def', 'for' or 'with' after 'async'");
        }
        parse_simple_statements(out);
    }

    void parse_simple_statements(std::vector<Node>& out) {
        out.push_back(parse_small_statement());
        while (accept_op(";")) {
            if (at(TokenType::Newline) || at(TokenType::End)) break;
            out.push_back(parse_small_statement());
        }
        expect_newline();
    }

    Node parse_block() {
        expect_op(":");
        Node block(NodeKind::Block, peek().loc);
        if (!at(TokenType::Newline)) {
            parse_simple_statements(block.children);
            return block;
        }
        ++pos_;
        if (!at(TokenType::Indent)) unexpected("an indented block");
        ++pos_;
        while (!at(TokenType::Dedent) && !at(TokenType::End)) {
            if (accept_newline()) continue;
            parse_statement(block.children);
        }
        if (at(TokenType::Dedent)) ++pos_;
        return block;
    }

    Node parse_decorated() {
        Node decos(NodeKind::Decorators, peek().loc);
        while (accept_op("@")) {
            decos.children.push_back(parse_named_test());
            expect_newline();
        }
        if (at_kw("def")) return parse_funcdef(std::move(decos), "");
        if (at_kw("async") && at_kw("def", 1)) {
            ++pos_;
            return parse_funcdef(std::move(decos), "async");
        }
        if (at_kw("class")) return parse_classdef(std::move(decos));
        unexpected("'def' or 'class' after decorator");
    }

    Node parse_funcdef(Node decorators, std::string async_marker) {
        SourceLocation loc = peek().loc;
        expect_kw("def");
        Node fn(NodeKind::FunctionDef, loc, expect_name());
        fn.aux = std::move(async_marker);
        expect_op("(");
        Node params = parse_parameters(")", true);
        expect_op(")");
        Node returns(NodeKind::Empty, peek().loc);
        if (accept_op("->")) returns = parse_test();
        fn.children.push_back(std::move(params));
        fn.children.push_back(parse_block());
        fn.children.push_back(std::move(decorators));
        fn.children.push_back(std::move(returns));
        return fn;
    }

    Node parse_parameters(std::string_view closer, bool annotations) {
        Node params(NodeKind::Parameters, peek().loc);
        while (!at_op(closer)) {
            Node p(NodeKind::Param, peek().loc);
            if (accept_op("/")) {
                p.aux = "/";
            } else {
                if (accept_op("**")) p.aux = "**";
                else if (accept_op("*")) p.aux = "*";
                if (p.aux != "*" || at(TokenType::Name)) p.text = expect_name();
            }
            Node annotation(NodeKind::Empty, peek().loc);
            Node def(NodeKind::Empty, peek().loc);
            if (annotations && !p.text.empty() && accept_op(":")) annotation = parse_test();
            if (!p.text.empty() && accept_op("=")) def = parse_test();
            p.children.push_back(std::move(annotation));
            p.children.push_back(std::move(def));
            params.children.push_back(std::move(p));
            if (!accept_op(",")) break;
        }
        return params;
    }

    Node parse_classdef(Node decorators) {
        SourceLocation loc = peek().loc;
        expect_kw("class");
        Node cls(NodeKind::ClassDef, loc, expect_name());
        Node bases(NodeKind::Arguments, peek().loc);
        if (accept_op("(")) {
            parse_call_arguments(bases);
            expect_op(")");
        }
        cls.children.push_back(std::move(bases));
        cls.children.push_back(parse_block());
        cls.children.push_back(std::move(decorators));
        return cls;
    }

    Node parse_if() {
        SourceLocation loc = peek().loc;
        ++pos_;  // 'if' or 'elif'
        Node node(NodeKind::If, loc);
        node.children.push_back(parse_named_test());
        node.children.push_back(parse_block());
        if (at_kw("elif")) {
            node.children.push_back(parse_if());
        } else if (at_kw("else")) {
            ++pos_;
            Node b = parse_block();
            b.text = "else";
            node.children.push_back(std::move(b));
        }
        return node;
    }

    Node parse_for(std::string async_marker) {
        SourceLocation loc = peek().loc;
        expect_kw("for");
        Node node(NodeKind::For, loc);
        node.aux = std::move(async_marker);
        node.children.push_back(parse_target_list());
        expect_kw("in");
        node.children.push_back(parse_testlist_star());
        node.children.push_back(parse_block());
        if (accept_kw("else")) {
            Node b = parse_block();
            b.text = "else";
            node.children.push_back(std::move(b));
        }
        return node;
    }

    Node parse_while() {
        SourceLocation loc = peek().loc;
        expect_kw("while");
        Node node(NodeKind::While, loc);
        node.children.push_back(parse_named_test());
        node.children.push_back(parse_block());
        if (accept_kw("else")) {
            Node b = parse_block();
            b.text = "else";
            node.children.push_back(std::move(b));
        }
        return node;
    }

    Node parse_with() {
        SourceLocation loc = peek().loc;
        expect_kw("with");
        Node node(NodeKind::With, loc);
        const bool parenthesized = at_op("(") && paren_group_is_with_items();
        if (parenthesized) ++pos_;
        while (true) {
            Node item(NodeKind::WithItem, peek().loc);
            item.children.push_back(parse_test());
            if (accept_kw("as")) item.children.push_back(parse_target());
            node.children.push_back(std::move(item));
            if (!accept_op(",")) break;
            if (parenthesized && at_op(")")) break;
        }
        if (parenthesized) expect_op(")");
        node.children.push_back(parse_block());
        return node;
    }

    // `with (a as b, c):` vs `with (a):` -- look for a top-level 'as' before the matching ')'.
    bool paren_group_is_with_items() const {
        int depth = 0;
        for (size_t i = pos_; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.type == TokenType::Op && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
            if (t.type == TokenType::Op && (t.text == ")" || t.text == "]" || t.text == "}")) {
                if (--depth == 0) return i + 1 < toks_.size() && toks_[i + 1].type == TokenType::Op && toks_[i + 1].text == ":";
            }
            if (depth == 1 && t.type == TokenType::Name && t.text == "as") return true;
        }
        return false;
    }

    Node parse_try() {
        SourceLocation loc = peek().loc;
        expect_kw("try");
        Node node(NodeKind::Try, loc);
        node.children.push_back(parse_block());
        bool handlers = false;
        while (at_kw("except")) {
            handlers = true;
            Node h(NodeKind::ExceptHandler, peek().loc);
            ++pos_;
            accept_op("*");
            Node type(NodeKind::Empty, peek().loc);
            if (!at_op(":")) {
                type = parse_test();
                if (accept_kw("as")) h.aux = expect_name();
                else if (accept_op(",")) {
                    Node tup(NodeKind::Tuple, type.loc);
                    tup.children.push_back(std::move(type));
                    tup.children.push_back(parse_test());
                    type = std::move(tup);
                }
            }
            h.children.push_back(std::move(type));
            h.children.push_back(parse_block());
            node.children.push_back(std::move(h));
        }
        if (handlers && accept_kw("else")) {
            Node b = parse_block();
            b.text = "else";
            node.children.push_back(std::move(b));
        }
        if (accept_kw("finally")) {
            Node b = parse_block();
            b.text = "finally";
            node.children.push_back(std::move(b));
        } else if (!handlers) {
            unexpected("'except' or 'finally' block");
        }
        return node;
    }

    Node parse_small_statement() {
        const Token& t = peek();
        SourceLocation loc = t.loc;
        if (t.type == TokenType::Name) {
            if (t.text == "pass") { ++pos_; return Node(NodeKind::Pass, loc); }
            if (t.text == "break") { ++pos_; return Node(NodeKind::Break, loc); }
            if (t.text == "continue") { ++pos_; return Node(NodeKind::Continue, loc); }
            if (t.text == "return") {
                ++pos_;
                Node r(NodeKind::Return, loc);
                if (at_expression_start()) r.children.push_back(parse_testlist_star());
                return r;
            }
            if (t.text == "raise") {
                ++pos_;
                Node r(NodeKind::Raise, loc);
                if (at_expression_start()) {
                    r.children.push_back(parse_test());
                    if (accept_kw("from")) r.children.push_back(parse_test());
                }
                return r;
            }
            if (t.text == "global" || t.text == "nonlocal") {
                ++pos_;
                Node g(t.text == "global" ? NodeKind::Global : NodeKind::Nonlocal, loc);
                do {
                    Node a(NodeKind::Alias, peek().loc, expect_name());
                    g.children.push_back(std::move(a));
                } while (accept_op(","));
                return g;
            }
            if (t.text == "del") {
                ++pos_;
                Node d(NodeKind::Del, loc);
                Node targets = parse_target_list();
                if (targets.is(NodeKind::Tuple) && targets.aux == "bare") d.children = std::move(targets.children);
                else d.children.push_back(std::move(targets));
                return d;
            }
            if (t.text == "assert") {
                ++pos_;
                Node a(NodeKind::Assert, loc);
                a.children.push_back(parse_test());
                if (accept_op(",")) a.children.push_back(parse_test());
                return a;
            }
            if (t.text == "import") return parse_import();
            if (t.text == "from") return parse_from_import();
        }
        return parse_expression_statement();
    }

    std::string parse_dotted_name() {
        std::string name = expect_name();
        while (accept_op(".")) name += "." + expect_name();
        return name;
    }

    Node parse_import() {
        Node node(NodeKind::Import, peek().loc);
        ++pos_;
        do {
            Node alias(NodeKind::Alias, peek().loc, parse_dotted_name());
            if (accept_kw("as")) alias.aux = expect_name();
            node.children.push_back(std::move(alias));
        } while (accept_op(","));
        return node;
    }

    Node parse_from_import() {
        Node node(NodeKind::ImportFrom, peek().loc);
        ++pos_;
        std::string module;
        while (at_op(".") || at_op("...")) module += next().text;
        if (!at_kw("import")) module += parse_dotted_name();
        node.text = module;
        expect_kw("import");
        if (at_op("*")) {
            node.children.emplace_back(NodeKind::Alias, peek().loc, "*");
            ++pos_;
            return node;
        }
        const bool paren = accept_op("(");
        do {
            if (paren && at_op(")")) break;
            Node alias(NodeKind::Alias, peek().loc, expect_name());
            if (accept_kw("as")) alias.aux = expect_name();
            node.children.push_back(std::move(alias));
        } while (accept_op(","));
        if (paren) expect_op(")");
        return node;
    }

    static bool is_augassign(const Token& t) {
        static constexpr std::array<std::string_view, 13> kOps = {
            "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "|=", "^=", "@="};
        return t.type == TokenType::Op && std::find(kOps.begin(), kOps.end(), t.text) != kOps.end();
    }

    Node parse_expression_statement() {
        SourceLocation loc = peek().loc;
        if (!at_expression_start()) unexpected("statement");
        Node first = parse_testlist_star();
        if (is_augassign(peek())) {
            Node node(NodeKind::AugAssign, loc, next().text);
            node.children.push_back(std::move(first));
            node.children.push_back(at_kw("yield") ? parse_yield() : parse_testlist_star());
            return node;
        }
        if (at_op(":")) {
            ++pos_;
            Node node(NodeKind::AnnAssign, loc);
            node.children.push_back(std::move(first));
            node.children.push_back(parse_test());
            if (accept_op("=")) node.children.push_back(at_kw("yield") ? parse_yield() : parse_testlist_star());
            return node;
        }
        if (at_op("=")) {
            Node node(NodeKind::Assign, loc);
            node.children.push_back(std::move(first));
            while (accept_op("=")) {
                node.children.push_back(at_kw("yield") ? parse_yield() : parse_testlist_star());
            }
            return node;
        }
        Node node(NodeKind::ExprStmt, loc);
        node.children.push_back(std::move(first));
        return node;
    }

    // --- expressions -----------------------------------------------------

    // Comma-separated list of tests/starred; a single item without a trailing comma is
    // returned bare. Bare tuples get aux "bare".
    Node parse_testlist_star() {
        if (at_kw("yield")) return parse_yield();
        SourceLocation loc = peek().loc;
        Node first = at_op("*") ? parse_star_expr() : parse_named_test();
        if (!at_op(",")) return first;
        Node tup(NodeKind::Tuple, loc);
        tup.aux = "bare";
        tup.children.push_back(std::move(first));
        while (accept_op(",")) {
            if (!at_expression_start()) break;
            tup.children.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
        }
        return tup;
    }

    Node parse_target() { return at_op("*") ? parse_star_expr() : parse_bitor(); }

    Node parse_target_list() {
        SourceLocation loc = peek().loc;
        Node first = parse_target();
        if (!at_op(",")) return first;
        Node tup(NodeKind::Tuple, loc);
        tup.aux = "bare";
        tup.children.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_kw("in") || at_op("=") || at(TokenType::Newline)) break;
            tup.children.push_back(parse_target());
        }
        return tup;
    }

    Node parse_star_expr() {
        SourceLocation loc = peek().loc;
        expect_op("*");
        Node s(NodeKind::Starred, loc);
        s.children.push_back(parse_bitor());
        return s;
    }

    Node parse_yield() {
        SourceLocation loc = peek().loc;
        expect_kw("yield");
        Node y(NodeKind::Yield, loc);
        if (accept_kw("from")) {
            y.text = "from";
            y.children.push_back(parse_test());
        } else if (at_expression_start()) {
            y.children.push_back(parse_testlist_star());
        }
        return y;
    }

    Node parse_named_test() {
        if (peek().type == TokenType::Name && at_op(":=", 1)) {
            SourceLocation loc = peek().loc;
            Node target(NodeKind::Name, loc, expect_name());
            ++pos_;
            Node n(NodeKind::NamedExpr, loc);
            n.children.push_back(std::move(target));
            n.children.push_back(parse_test());
            return n;
        }
        return parse_test();
    }

    Node parse_test() {
        if (at_kw("lambda")) return parse_lambda(true);
        SourceLocation loc = peek().loc;
        Node body = parse_or_test();
        if (at_kw("if")) {
            ++pos_;
            Node cond = parse_or_test();
            expect_kw("else");
            Node orelse = parse_test();
            Node n(NodeKind::IfExp, loc);
            n.children.push_back(std::move(body));
            n.children.push_back(std::move(cond));
            n.children.push_back(std::move(orelse));
            return n;
        }
        return body;
    }

    Node parse_test_nocond() {
        if (at_kw("lambda")) return parse_lambda(false);
        return parse_or_test();
    }

    Node parse_lambda(bool allow_cond) {
        SourceLocation loc = peek().loc;
        expect_kw("lambda");
        Node n(NodeKind::Lambda, loc);
        n.children.push_back(parse_parameters(":", false));
        expect_op(":");
        n.children.push_back(allow_cond ? parse_test() : parse_test_nocond());
        return n;
    }

    Node parse_or_test() {
        SourceLocation loc = peek().loc;
        Node first = parse_and_test();
        if (!at_kw("or")) return first;
        Node n(NodeKind::BoolOp, loc, "or");
        n.children.push_back(std::move(first));
        while (accept_kw("or")) n.children.push_back(parse_and_test());
        return n;
    }

    Node parse_and_test() {
        SourceLocation loc = peek().loc;
        Node first = parse_not_test();
        if (!at_kw("and")) return first;
        Node n(NodeKind::BoolOp, loc, "and");
        n.children.push_back(std::move(first));
        while (accept_kw("and")) n.children.push_back(parse_not_test());
        return n;
    }

    Node parse_not_test() {
        if (at_kw("not")) {
            SourceLocation loc = next().loc;
            Node n(NodeKind::UnaryOp, loc, "not");
            n.children.push_back(parse_not_test());
            return n;
        }
        return parse_comparison();
    }

    std::string comparison_operator() {
        static constexpr std::array<std::string_view, 6> kOps = {"<", ">", "==", ">=", "<=", "!="};
        const Token& t = peek();
        if (t.type == TokenType::Op && std::find(kOps.begin(), kOps.end(), t.text) != kOps.end()) {
            return next().text;
        }
        if (at_kw("in")) { ++pos_; return "in"; }
        if (at_kw("not") && at_kw("in", 1)) { pos_ += 2; return "not in"; }
        if (at_kw("is")) {
            ++pos_;
            if (accept_kw("not")) return "is not";
            return "is";
        }
        return {};
    }

    Node parse_comparison() {
        SourceLocation loc = peek().loc;
        Node first = parse_bitor();
        std::string op = comparison_operator();
        if (op.empty()) return first;
        Node n(NodeKind::Compare, loc);
        n.children.push_back(std::move(first));
        std::string ops;
        while (!op.empty()) {
            if (!ops.empty()) ops += '|';
            ops += op;
            n.children.push_back(parse_bitor());
            op = comparison_operator();
        }
        n.aux = ops;
        return n;
    }

    template <typename Sub>
    Node parse_binary(std::initializer_list<std::string_view> ops, Sub sub) {
        SourceLocation loc = peek().loc;
        Node left = (this->*sub)();
        while (true) {
            bool matched = false;
            for (auto op : ops) {
                if (at_op(op)) {
                    ++pos_;
                    Node n(NodeKind::BinOp, loc, std::string(op));
                    n.children.push_back(std::move(left));
                    n.children.push_back((this->*sub)());
                    left = std::move(n);
                    matched = true;
                    break;
                }
            }
            if (!matched) return left;
        }
    }

    Node parse_bitor() { return parse_binary({"|"}, &Parser::parse_bitxor); }
    Node parse_bitxor() { return parse_binary({"^"}, &Parser::parse_bitand); }
    Node parse_bitand() { return parse_binary({"&"}, &Parser::parse_shift); }
    Node parse_shift() { return parse_binary({"<<", ">>"}, &Parser::parse_arith); }
    Node parse_arith() { return parse_binary({"+", "-"}, &Parser::parse_term); }
    Node parse_term() { return parse_binary({"*", "/", "//", "%", "@"}, &Parser::parse_factor); }

    Node parse_factor() {
        if (at_op("-") || at_op("+") || at_op("~")) {
            SourceLocation loc = peek().loc;
            Node n(NodeKind::UnaryOp, loc, next().text);
            n.children.push_back(parse_factor());
            return n;
        }
        return parse_power();
    }

    Node parse_power() {
        SourceLocation loc = peek().loc;
        Node base;
        if (at_kw("await")) {
            ++pos_;
            base = Node(NodeKind::Await, loc);
            base.children.push_back(parse_primary());
        } else {
            base = parse_primary();
        }
        if (accept_op("**")) {
            Node n(NodeKind::BinOp, loc, "**");
            n.children.push_back(std::move(base));
            n.children.push_back(parse_factor());
            return n;
        }
        return base;
    }

    Node parse_primary() {
        Node node = parse_atom();
        while (true) {
            SourceLocation loc = peek().loc;
            if (accept_op("(")) {
                Node call(NodeKind::Call, node.loc);
                call.children.push_back(std::move(node));
                Node args(NodeKind::Arguments, loc);
                parse_call_arguments(args);
                expect_op(")");
                for (auto& a : args.children) call.children.push_back(std::move(a));
                node = std::move(call);
            } else if (accept_op("[")) {
                Node sub(NodeKind::Subscript, node.loc);
                sub.children.push_back(std::move(node));
                sub.children.push_back(parse_subscript_list());
                expect_op("]");
                node = std::move(sub);
            } else if (accept_op(".")) {
                Node attr(NodeKind::Attribute, node.loc, expect_name());
                attr.children.push_back(std::move(node));
                node = std::move(attr);
            } else {
                return node;
            }
        }
    }

    void parse_call_arguments(Node& args) {
        while (!at_op(")")) {
            SourceLocation loc = peek().loc;
            if (accept_op("**")) {
                Node d(NodeKind::DoubleStarred, loc);
                d.children.push_back(parse_test());
                args.children.push_back(std::move(d));
            } else if (accept_op("*")) {
                Node s(NodeKind::Starred, loc);
                s.children.push_back(parse_test());
                args.children.push_back(std::move(s));
            } else if (peek().type == TokenType::Name && at_op("=", 1) && !is_keyword(peek().text)) {
                Node kw(NodeKind::Keyword, loc, next().text);
                ++pos_;
                kw.children.push_back(parse_test());
                args.children.push_back(std::move(kw));
            } else {
                Node value = parse_named_test();
                if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
                    Node gen(NodeKind::GeneratorExp, loc);
                    gen.children.push_back(std::move(value));
                    parse_comprehensions(gen);
                    value = std::move(gen);
                }
                args.children.push_back(std::move(value));
            }
            if (!accept_op(",")) break;
        }
    }

    Node parse_subscript_list() {
        SourceLocation loc = peek().loc;
        Node first = parse_subscript_item();
        if (!at_op(",")) return first;
        Node tup(NodeKind::Tuple, loc);
        tup.children.push_back(std::move(first));
        while (accept_op(",")) {
            if (at_op("]")) break;
            tup.children.push_back(parse_subscript_item());
        }
        return tup;
    }

    Node parse_subscript_item() {
        SourceLocation loc = peek().loc;
        if (at_op("*")) return parse_star_expr();
        Node lower(NodeKind::Empty, loc);
        if (!at_op(":")) {
            lower = parse_named_test();
            if (!at_op(":")) return lower;
        }
        Node slice(NodeKind::Slice, loc);
        expect_op(":");
        Node upper(NodeKind::Empty, peek().loc);
        if (!at_op(":") && !at_op(",") && !at_op("]")) upper = parse_test();
        Node step(NodeKind::Empty, peek().loc);
        if (accept_op(":")) {
            if (!at_op(",") && !at_op("]")) step = parse_test();
        }
        slice.children.push_back(std::move(lower));
        slice.children.push_back(std::move(upper));
        slice.children.push_back(std::move(step));
        return slice;
    }

    void parse_comprehensions(Node& owner) {
        while (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
            SourceLocation loc = peek().loc;
            Node comp(NodeKind::Comprehension, loc);
            if (accept_kw("async")) comp.aux = "async";
            expect_kw("for");
            comp.children.push_back(parse_target_list());
            expect_kw("in");
            comp.children.push_back(parse_or_test());
            while (accept_kw("if")) comp.children.push_back(parse_test_nocond());
            owner.children.push_back(std::move(comp));
        }
    }

    Node parse_atom() {
        const Token& t = peek();
        SourceLocation loc = t.loc;
        switch (t.type) {
        case TokenType::Name: {
            if (t.text == "True" || t.text == "False" || t.text == "None") {
                return Node(NodeKind::Constant, loc, next().text);
            }
            if (is_keyword(t.text)) unexpected("expression");
            return Node(NodeKind::Name, loc, next().text);
        }
        case TokenType::Number: return Node(NodeKind::Number, loc, next().text);
        case TokenType::String: {
            Node s(NodeKind::String, loc);
            s.aux = t.prefix;
            while (at(TokenType::String)) {
                const Token& part = next();
                s.text += part.text;
                if (part.prefix.find('f') != std::string::npos && s.aux.find('f') == std::string::npos) {
                    s.aux += 'f';
                }
            }
            return s;
        }
        case TokenType::Op: break;
        default: unexpected("expression");
        }
        if (accept_op("...")) return Node(NodeKind::Constant, loc, "...");
        if (accept_op("(")) {
            if (accept_op(")")) return Node(NodeKind::Tuple, loc);
            if (at_kw("yield")) {
                Node y = parse_yield();
                expect_op(")");
                return y;
            }
            Node first = at_op("*") ? parse_star_expr() : parse_named_test();
            if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
                Node gen(NodeKind::GeneratorExp, loc);
                gen.children.push_back(std::move(first));
                parse_comprehensions(gen);
                expect_op(")");
                return gen;
            }
            if (accept_op(")")) {
                first.aux = first.is(NodeKind::Tuple) && first.aux == "bare" ? "" : first.aux;
                return first;
            }
            Node tup(NodeKind::Tuple, loc);
            tup.children.push_back(std::move(first));
            while (accept_op(",")) {
                if (at_op(")")) break;
                tup.children.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
            }
            expect_op(")");
            return tup;
        }
        if (accept_op("[")) {
            Node list(NodeKind::List, loc);
            if (accept_op("]")) return list;
            Node first = at_op("*") ? parse_star_expr() : parse_named_test();
            if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
                Node comp(NodeKind::ListComp, loc);
                comp.children.push_back(std::move(first));
                parse_comprehensions(comp);
                expect_op("]");
                return comp;
            }
            list.children.push_back(std::move(first));
            while (accept_op(",")) {
                if (at_op("]")) break;
                list.children.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
            }
            expect_op("]");
            return list;
        }
        if (accept_op("{")) {
            if (accept_op("}")) return Node(NodeKind::Dict, loc);
            Node first;
            bool dict = false;
            if (accept_op("**")) {
                first = Node(NodeKind::DoubleStarred, loc);
                first.children.push_back(parse_bitor());
                dict = true;
            } else {
                first = at_op("*") ? parse_star_expr() : parse_named_test();
                if (accept_op(":")) {
                    Node kv(NodeKind::KeyValue, first.loc);
                    kv.children.push_back(std::move(first));
                    kv.children.push_back(parse_test());
                    first = std::move(kv);
                    dict = true;
                }
            }
            if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
                Node comp(dict ? NodeKind::DictComp : NodeKind::SetComp, loc);
                if (dict) {
                    if (!first.is(NodeKind::KeyValue)) unexpected("key: value in dict comprehension");
                    comp.children.push_back(std::move(first.children[0]));
                    comp.children.push_back(std::move(first.children[1]));
                } else {
                    comp.children.push_back(std::move(first));
                }
                parse_comprehensions(comp);
                expect_op("}");
                return comp;
            }
            Node coll(dict ? NodeKind::Dict : NodeKind::Set, loc);
            coll.children.push_back(std::move(first));
            while (accept_op(",")) {
                if (at_op("}")) break;
                if (dict) {
                    SourceLocation iloc = peek().loc;
                    if (accept_op("**")) {
                        Node d(NodeKind::DoubleStarred, iloc);
                        d.children.push_back(parse_bitor());
                        coll.children.push_back(std::move(d));
                        continue;
                    }
                    Node kv(NodeKind::KeyValue, iloc);
                    kv.children.push_back(parse_test());
                    expect_op(":");
                    kv.children.push_back(parse_test());
                    coll.children.push_back(std::move(kv));
                } else {
                    coll.children.push_back(at_op("*") ? parse_star_expr() : parse_named_test());
                }
            }
            expect_op("}");
            return coll;
        }
        unexpected("expression");
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

}  // namespace syntax_detail

/// Tokenizes and parses `text`. Throws MigrationError(SyntaxError) with line/column.
inline SyntaxTree parse_source(std::string_view text) {
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
        text.remove_prefix(3);
    }
    syntax_detail::Tokenizer lexer(text);
    syntax_detail::Parser parser(lexer.run());
    return SyntaxTree{parser.parse_module()};
}

/// Dotted name for Name/Attribute chains ("tf.keras.layers.Dense"); empty otherwise.
inline std::string dotted_name(const Node& n) {
    if (n.is(NodeKind::Name)) return n.text;
    if (n.is(NodeKind::Attribute)) {
        std::string base = dotted_name(n[0]);
        return base.empty() ? std::string{} : base + "." + n.text;
    }
    return {};
}

/// S-expression rendering, for tests and debugging.
inline std::string dump(const Node& n) {
    static constexpr std::array<std::string_view, 63> kNames = {
        "Module", "Block", "ClassDef", "FunctionDef", "Parameters", "Param", "Decorators", "Arguments",
        "Return", "Assign", "AugAssign", "AnnAssign", "ExprStmt", "Import", "ImportFrom", "Alias", "If",
        "For", "While", "With", "WithItem", "Try", "ExceptHandler", "Pass", "Break", "Continue", "Raise",
        "Assert", "Global", "Nonlocal", "Del", "Name", "Number", "String", "Constant", "Attribute", "Call",
        "Keyword", "Starred", "DoubleStarred", "Subscript", "Slice", "Empty", "Tuple", "List", "Dict",
        "KeyValue", "Set", "BinOp", "UnaryOp", "BoolOp", "Compare", "IfExp", "Lambda", "Comprehension",
        "ListComp", "SetComp", "GeneratorExp", "DictComp", "NamedExpr", "Yield", "Await", ""};
    std::string out = "(";
    out += kNames[static_cast<size_t>(n.kind)];
    if (!n.text.empty()) out += " " + (n.is(NodeKind::String) ? "'" + n.text + "'" : n.text);
    if (!n.aux.empty() && !n.is(NodeKind::String)) out += " [" + n.aux + "]";
    for (const auto& c : n.children) out += " " + dump(c);
    return out + ")";
}

}  // namespace nnmig
