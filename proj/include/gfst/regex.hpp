// regex.hpp -- syntax tree, parser, printer and desugaring for weighted
// output-producing regular expressions.
//
// Concrete syntax:
//
//   expr    := union
//   union   := concat ('|' concat)*
//   concat  := term+
//   term    := INT? factor (INT | ':' STRING | '*' | '+' | '?')*
//   factor  := STRING | CLASS | '.' | '(' expr ')' | ':' STRING
//   CLASS   := '[' CHAR '-' CHAR ']' ('@' IDENT)?
//   STRING  := "'" chars "'" ('@' IDENT)?
//
// A leading INT weights the term from the left, trailing INTs weight it from
// the right. `:'out'` appends output; a bare `:'out'` stands for `'':'out'`.
// Escapes: \n \t \\ \' \uXXXX (plus \[ \] \- inside classes). `#` starts a
// comment running to the end of the line.

#ifndef GFST_REGEX_HPP
#define GFST_REGEX_HPP

#include <charconv>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "core.hpp"
#include "text.hpp"

namespace gfst {

enum class NodeKind {
    Epsilon,
    Atom,
    Union,
    Concat,
    Star,
    OutputConcat,
    WeightAfter,
    WeightBefore,
    // sugar, removed by desugar()
    Plus,
    Optional,
    Any,
};

struct SourceLoc {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

/// Immutable expression tree node. Fields not used by a kind stay defaulted:
/// `label`/`alphabet` for Atom, `out` for OutputConcat, `weight` for the two
/// weight kinds. Unary kinds use `left` only.
struct Ast {
    NodeKind kind = NodeKind::Epsilon;
    RangeLabel label;
    std::optional<std::string> alphabet;
    OutputString out;
    Weight weight = 0;
    AstPtr left;
    AstPtr right;
    SourceLoc loc;
};

namespace ast {

inline AstPtr make(Ast node) { return std::make_shared<const Ast>(std::move(node)); }

inline AstPtr epsilon(SourceLoc loc = {}) { return make({.kind = NodeKind::Epsilon, .loc = loc}); }

inline AstPtr atom(Symbol lo, Symbol hi, std::optional<std::string> alphabet = std::nullopt, SourceLoc loc = {}) {
    return make({.kind = NodeKind::Atom, .label = make_range(lo, hi), .alphabet = std::move(alphabet), .loc = loc});
}

inline AstPtr symbol(Symbol c, std::optional<std::string> alphabet = std::nullopt) {
    return atom(c, c, std::move(alphabet));
}

inline AstPtr union_of(AstPtr a, AstPtr b, SourceLoc loc = {}) {
    return make({.kind = NodeKind::Union, .left = std::move(a), .right = std::move(b), .loc = loc});
}

inline AstPtr concat(AstPtr a, AstPtr b, SourceLoc loc = {}) {
    return make({.kind = NodeKind::Concat, .left = std::move(a), .right = std::move(b), .loc = loc});
}

inline AstPtr star(AstPtr a, SourceLoc loc = {}) {
    return make({.kind = NodeKind::Star, .left = std::move(a), .loc = loc});
}

inline AstPtr plus(AstPtr a, SourceLoc loc = {}) {
    return make({.kind = NodeKind::Plus, .left = std::move(a), .loc = loc});
}

inline AstPtr optional(AstPtr a, SourceLoc loc = {}) {
    return make({.kind = NodeKind::Optional, .left = std::move(a), .loc = loc});
}

inline AstPtr any(SourceLoc loc = {}) { return make({.kind = NodeKind::Any, .loc = loc}); }

inline AstPtr output(AstPtr a, OutputString out, SourceLoc loc = {}) {
    return make({.kind = NodeKind::OutputConcat, .out = std::move(out), .left = std::move(a), .loc = loc});
}

inline AstPtr weight_after(AstPtr a, Weight w, SourceLoc loc = {}) {
    return make({.kind = NodeKind::WeightAfter, .weight = w, .left = std::move(a), .loc = loc});
}

inline AstPtr weight_before(Weight w, AstPtr a, SourceLoc loc = {}) {
    return make({.kind = NodeKind::WeightBefore, .weight = w, .left = std::move(a), .loc = loc});
}

/// Concatenation of single-symbol atoms; the empty string yields Epsilon.
inline AstPtr literal(std::u32string_view text, std::optional<std::string> alphabet = std::nullopt, SourceLoc loc = {}) {
    if (text.empty()) return epsilon(loc);
    AstPtr acc;
    for (Symbol c : text) {
        auto a = atom(c, c, alphabet, loc);
        acc = acc ? concat(acc, a, loc) : a;
    }
    return acc;
}

} // namespace ast

inline bool is_core_kind(NodeKind k) noexcept {
    return k != NodeKind::Plus && k != NodeKind::Optional && k != NodeKind::Any;
}

/// Structural equality, ignoring source locations.
inline bool same_structure(const Ast& a, const Ast& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Atom:
            return a.label == b.label && a.alphabet == b.alphabet;
        case NodeKind::OutputConcat:
            if (a.out != b.out) return false;
            break;
        case NodeKind::WeightAfter:
        case NodeKind::WeightBefore:
            if (a.weight != b.weight) return false;
            break;
        default:
            break;
    }
    auto same_child = [](const AstPtr& x, const AstPtr& y) {
        if (!x || !y) return !x && !y;
        return same_structure(*x, *y);
    };
    return same_child(a.left, b.left) && same_child(a.right, b.right);
}

inline std::size_t count_atoms(const Ast& a) {
    if (a.kind == NodeKind::Atom) return 1;
    std::size_t n = 0;
    if (a.left) n += count_atoms(*a.left);
    if (a.right) n += count_atoms(*a.right);
    return n;
}

inline std::size_t depth(const Ast& a) {
    std::size_t d = 0;
    if (a.left) d = std::max(d, depth(*a.left));
    if (a.right) d = std::max(d, depth(*a.right));
    return d + 1;
}

/// Rewrites `+`, `?` and `.` into core node kinds.
inline AstPtr desugar(const AstPtr& node) {
    const Ast& n = *node;
    switch (n.kind) {
        case NodeKind::Epsilon:
        case NodeKind::Atom:
            return node;
        case NodeKind::Any:
            // Two atoms so that neither range covers the surrogate block.
            return ast::union_of(ast::atom(0x0, 0xD7FF, std::nullopt, n.loc),
                                 ast::atom(0xE000, kMaxSymbol, std::nullopt, n.loc), n.loc);
        case NodeKind::Plus: {
            auto inner = desugar(n.left);
            return ast::concat(inner, ast::star(inner, n.loc), n.loc);
        }
        case NodeKind::Optional:
            return ast::union_of(ast::epsilon(n.loc), desugar(n.left), n.loc);
        default:
            break;
    }
    Ast copy = n;
    if (copy.left) copy.left = desugar(copy.left);
    if (copy.right) copy.right = desugar(copy.right);
    return ast::make(std::move(copy));
}

// Printer {{{

namespace detail {

inline void print_union(std::string& dst, const Ast& n);

inline void print_atom(std::string& dst, const Ast& n) {
    if (n.label.lo == n.label.hi) {
        dst += quote_literal(std::u32string(1, n.label.lo));
    } else {
        dst += '[';
        dst += class_char(n.label.lo);
        dst += '-';
        dst += class_char(n.label.hi);
        dst += ']';
    }
    if (n.alphabet) {
        dst += '@';
        dst += *n.alphabet;
    }
}

inline bool is_postfix(NodeKind k) {
    switch (k) {
        case NodeKind::Star:
        case NodeKind::Plus:
        case NodeKind::Optional:
        case NodeKind::OutputConcat:
        case NodeKind::WeightAfter:
            return true;
        default:
            return false;
    }
}

// factor or postfix chain: everything that may stand before a postfix operator
inline void print_postfixed(std::string& dst, const Ast& n) {
    switch (n.kind) {
        case NodeKind::Epsilon:
            dst += "''";
            return;
        case NodeKind::Atom:
            print_atom(dst, n);
            return;
        case NodeKind::Any:
            dst += '.';
            return;
        default:
            break;
    }
    if (!is_postfix(n.kind)) {
        dst += '(';
        print_union(dst, n);
        dst += ')';
        return;
    }
    print_postfixed(dst, *n.left);
    switch (n.kind) {
        case NodeKind::Star: dst += '*'; break;
        case NodeKind::Plus: dst += '+'; break;
        case NodeKind::Optional: dst += '?'; break;
        case NodeKind::OutputConcat:
            dst += ':';
            dst += quote_literal(n.out);
            break;
        case NodeKind::WeightAfter:
            dst += ' ';
            dst += std::to_string(n.weight);
            break;
        default: break;
    }
}

inline void print_term(std::string& dst, const Ast& n) {
    if (n.kind == NodeKind::WeightBefore) {
        dst += std::to_string(n.weight);
        dst += ' ';
        print_postfixed(dst, *n.left);
        return;
    }
    print_postfixed(dst, n);
}

inline void print_concat(std::string& dst, const Ast& n) {
    if (n.kind != NodeKind::Concat) {
        if (n.kind == NodeKind::Union) {
            dst += '(';
            print_union(dst, n);
            dst += ')';
        } else {
            print_term(dst, n);
        }
        return;
    }
    print_concat(dst, *n.left);
    dst += ' ';
    const Ast& r = *n.right;
    // a non-leading term cannot start with a weight, and concatenation nests to the left
    if (r.kind == NodeKind::Concat || r.kind == NodeKind::Union || r.kind == NodeKind::WeightBefore) {
        dst += '(';
        print_union(dst, r);
        dst += ')';
    } else {
        print_term(dst, r);
    }
}

inline void print_union(std::string& dst, const Ast& n) {
    if (n.kind != NodeKind::Union) {
        print_concat(dst, n);
        return;
    }
    print_union(dst, *n.left);
    dst += " | ";
    if (n.right->kind == NodeKind::Union) {
        dst += '(';
        print_union(dst, *n.right);
        dst += ')';
    } else {
        print_concat(dst, *n.right);
    }
}

} // namespace detail

/// Renders an expression in the concrete syntax; parse(to_string(e)) is
/// structurally identical to e.
inline std::string to_string(const Ast& n) {
    std::string out;
    detail::print_union(out, n);
    return out;
}

// }}}

// Parser {{{

namespace detail {

class Parser {
public:
    explicit Parser(std::u32string_view text) : text_(text) {}

    AstPtr parse_all() {
        skip_blank();
        if (at_end()) fail("expected an expression");
        auto e = parse_union();
        skip_blank();
        if (!at_end()) {
            if (peek() == ')') fail("unbalanced ')'");
            fail("unexpected character");
        }
        return e;
    }

private:
    std::u32string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line_, col_, what); }
    [[noreturn]] void fail_at(SourceLoc at, const std::string& what) const {
        throw SyntaxError(at.line, at.column, what);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    Symbol peek() const { return at_end() ? Symbol{0} : text_[pos_]; }
    Symbol peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : Symbol{0}; }
    SourceLoc here() const { return {line_, col_}; }

    Symbol advance() {
        Symbol c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_blank() {
        while (!at_end()) {
            Symbol c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    bool starts_int() const {
        return (peek() >= '0' && peek() <= '9') || (peek() == '-' && peek2() >= '0' && peek2() <= '9');
    }

    bool starts_term() const {
        Symbol c = peek();
        return c == '\'' || c == '[' || c == '.' || c == '(' || c == ':' || starts_int();
    }

    AstPtr parse_union() {
        auto loc = here();
        auto acc = parse_concat();
        skip_blank();
        while (!at_end() && peek() == '|') {
            advance();
            skip_blank();
            auto rhs = parse_concat();
            acc = ast::union_of(acc, rhs, loc);
            skip_blank();
        }
        return acc;
    }

    AstPtr parse_concat() {
        skip_blank();
        if (at_end() || !starts_term()) fail("expected an expression");
        auto loc = here();
        auto acc = parse_term();
        skip_blank();
        while (!at_end() && starts_term()) {
            if (starts_int()) fail("weight must follow a term or start a concatenation");
            acc = ast::concat(acc, parse_term(), loc);
            skip_blank();
        }
        return acc;
    }

    Weight parse_int() {
        auto loc = here();
        std::string digits;
        if (peek() == '-') digits += static_cast<char>(advance());
        while (!at_end() && peek() >= '0' && peek() <= '9') digits += static_cast<char>(advance());
        Weight w = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), w);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            fail_at(loc, "weight literal out of range: " + digits);
        return w;
    }

    AstPtr parse_term() {
        auto loc = here();
        std::optional<Weight> leading;
        if (starts_int()) {
            leading = parse_int();
            skip_blank();
            if (at_end() || !starts_term() || starts_int()) fail("expected an expression after weight");
        }
        auto node = parse_factor();
        for (;;) {
            skip_blank();
            if (at_end()) break;
            Symbol c = peek();
            auto ploc = here();
            if (starts_int()) {
                node = ast::weight_after(node, parse_int(), ploc);
            } else if (c == ':') {
                advance();
                node = ast::output(node, parse_output_operand(), ploc);
            } else if (c == '*') {
                advance();
                node = ast::star(node, ploc);
            } else if (c == '+') {
                advance();
                node = ast::plus(node, ploc);
            } else if (c == '?') {
                advance();
                node = ast::optional(node, ploc);
            } else {
                break;
            }
        }
        if (leading) node = ast::weight_before(*leading, node, loc);
        return node;
    }

    OutputString parse_output_operand() {
        skip_blank();
        if (at_end() || peek() != '\'') fail("right side of `:` must be a string");
        auto s = parse_quoted();
        if (!at_end() && peek() == '@') fail("output strings cannot carry an alphabet annotation");
        return s;
    }

    AstPtr parse_factor() {
        auto loc = here();
        Symbol c = peek();
        if (c == '\'') {
            auto s = parse_quoted();
            auto name = parse_annotation();
            if (s.empty() && name) fail_at(loc, "annotation on an empty string");
            return ast::literal(s, name, loc);
        }
        if (c == '[') return parse_class();
        if (c == '.') {
            advance();
            return ast::any(loc);
        }
        if (c == '(') {
            advance();
            skip_blank();
            if (!at_end() && peek() == ')') fail("empty group");
            auto inner = parse_union();
            skip_blank();
            if (at_end() || peek() != ')') fail("expected ')'");
            advance();
            return inner;
        }
        if (c == ':') {
            advance();
            return ast::output(ast::epsilon(loc), parse_output_operand(), loc);
        }
        fail("expected an expression");
    }

    std::optional<std::string> parse_annotation() {
        if (at_end() || peek() != '@') return std::nullopt;
        advance();
        std::string name;
        while (!at_end() && is_ident_char(peek())) name += static_cast<char>(advance());
        if (!is_identifier(name)) fail("expected an alphabet name after '@'");
        return name;
    }

    Symbol parse_escape(bool in_class) {
        auto loc = here();
        advance(); // backslash
        if (at_end()) fail("unterminated escape");
        Symbol c = advance();
        switch (c) {
            case 'n': return '\n';
            case 't': return '\t';
            case '\\': return '\\';
            case '\'': return '\'';
            case 'u': {
                Symbol v = 0;
                for (int i = 0; i < 4; ++i) {
                    if (at_end()) fail("truncated \\u escape");
                    Symbol h = advance();
                    int d;
                    if (h >= '0' && h <= '9') d = static_cast<int>(h - '0');
                    else if (h >= 'a' && h <= 'f') d = static_cast<int>(h - 'a' + 10);
                    else if (h >= 'A' && h <= 'F') d = static_cast<int>(h - 'A' + 10);
                    else fail("bad hex digit in \\u escape");
                    v = v * 16 + static_cast<Symbol>(d);
                }
                if (!is_scalar_value(v)) fail_at(loc, "escape is not a Unicode scalar value");
                return v;
            }
            default:
                if (in_class && (c == '[' || c == ']' || c == '-')) return c;
                fail_at(loc, "unknown escape");
        }
    }

    OutputString parse_quoted() {
        auto loc = here();
        advance(); // opening quote
        OutputString s;
        for (;;) {
            if (at_end()) fail_at(loc, "unterminated string");
            Symbol c = peek();
            if (c == '\'') {
                advance();
                return s;
            }
            if (c == '\\') {
                s += parse_escape(false);
            } else {
                s += advance();
            }
        }
    }

    Symbol parse_class_char() {
        if (at_end()) fail("unterminated character class");
        Symbol c = peek();
        if (c == '\\') return parse_escape(true);
        if (c == ']') fail("empty character class");
        if (c == '-' || c == '[') fail("character must be escaped inside a class");
        return advance();
    }

    AstPtr parse_class() {
        auto loc = here();
        advance(); // [
        if (!at_end() && peek() == ']') fail("empty character class");
        Symbol lo = parse_class_char();
        Symbol hi = lo;
        if (!at_end() && peek() == '-') {
            advance();
            if (!at_end() && peek() == ']') fail("missing upper bound in range");
            hi = parse_class_char();
        }
        if (at_end() || peek() != ']') fail("expected ']'");
        advance();
        if (lo > hi) fail_at(loc, "range bounds out of order");
        auto name = parse_annotation();
        return ast::atom(lo, hi, name, loc);
    }
};

} // namespace detail

inline AstPtr parse(std::u32string_view text) { return detail::Parser(text).parse_all(); }

inline AstPtr parse(std::string_view utf8) {
    std::u32string text;
    try {
        text = decode_utf8(utf8);
    } catch (const SyntaxError&) {
        throw;
    } catch (const Error& e) {
        throw SyntaxError(1, 1, e.what());
    }
    return parse(std::u32string_view(text));
}

// }}}

} // namespace gfst

#endif // GFST_REGEX_HPP
