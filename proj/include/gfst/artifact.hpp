// artifact.hpp -- line-based text format for compiled machines.
//
//   FST1
//   policy max|min
//   states <count>
//   initial <id>
//   state <id> [tau '<out>' <weight>] [color <name>]
//   trans <src> <lo> <hi> <dst> '<out>' <weight>
//
// Symbols in `trans` lines are decimal code points; outputs are quoted
// literals with the expression syntax escapes. One `state` line is written per
// state, transitions follow in machine order.

#ifndef GFST_ARTIFACT_HPP
#define GFST_ARTIFACT_HPP

#include <charconv>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "text.hpp"

namespace gfst {

inline constexpr std::string_view kArtifactMagic = "FST1";
inline constexpr std::size_t kMaxArtifactStates = std::size_t{1} << 24;

inline std::string save_artifact(const Transducer& t) {
    t.validate();
    std::string out;
    out += kArtifactMagic;
    out += "\npolicy ";
    out += to_string(t.policy);
    out += "\nstates " + std::to_string(t.state_count);
    out += "\ninitial " + std::to_string(t.initial) + "\n";
    for (std::size_t s = 0; s < t.state_count; ++s) {
        out += "state " + std::to_string(s);
        if (const auto& tau = t.tau[s]) out += " tau " + quote_literal(tau->out) + " " + std::to_string(tau->weight);
        if (const auto& c = t.colors[s]) out += " color " + *c;
        out += "\n";
    }
    for (const auto& tr : t.transitions) {
        out += "trans " + std::to_string(tr.src) + " " + std::to_string(std::uint32_t{tr.label.lo}) + " "
               + std::to_string(std::uint32_t{tr.label.hi}) + " " + std::to_string(tr.dst) + " "
               + quote_literal(tr.eff.out) + " " + std::to_string(tr.eff.weight) + "\n";
    }
    return out;
}

namespace detail {

struct ArtifactToken {
    bool quoted = false;
    std::u32string text;
};

class ArtifactLine {
public:
    ArtifactLine(std::string_view raw, std::size_t lineno) : lineno_(lineno) {
        std::u32string s;
        try {
            s = decode_utf8(raw);
        } catch (const Error& e) {
            fail(e.what());
        }
        std::size_t i = 0;
        while (i < s.size()) {
            if (s[i] == ' ' || s[i] == '\t' || s[i] == '\r') {
                ++i;
                continue;
            }
            ArtifactToken tok;
            if (s[i] == '\'') {
                tok.quoted = true;
                ++i;
                for (;;) {
                    if (i >= s.size()) fail("unterminated literal");
                    Symbol c = s[i++];
                    if (c == '\'') break;
                    if (c != '\\') {
                        tok.text += c;
                        continue;
                    }
                    if (i >= s.size()) fail("unterminated escape");
                    c = s[i++];
                    if (c == 'n') tok.text += U'\n';
                    else if (c == 't') tok.text += U'\t';
                    else if (c == '\\' || c == '\'') tok.text += c;
                    else if (c == 'u') {
                        if (i + 4 > s.size()) fail("truncated \\u escape");
                        auto hex = encode_utf8(s.substr(i, 4));
                        i += 4;
                        std::uint32_t v = 0;
                        auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
                        if (ec != std::errc{} || p != hex.data() + hex.size() || !is_scalar_value(v))
                            fail("bad \\u escape");
                        tok.text += static_cast<Symbol>(v);
                    } else {
                        fail("unknown escape");
                    }
                }
            } else {
                while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r' && s[i] != '\'') tok.text += s[i++];
            }
            tokens_.push_back(std::move(tok));
        }
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("artifact line " + std::to_string(lineno_) + ": " + what);
    }

    bool empty() const { return tokens_.empty(); }
    bool more() const { return next_ < tokens_.size(); }

    std::string word() {
        if (!more() || tokens_[next_].quoted) fail("expected a word");
        return encode_utf8(tokens_[next_++].text);
    }

    std::u32string literal() {
        if (!more() || !tokens_[next_].quoted) fail("expected a quoted literal");
        return tokens_[next_++].text;
    }

    template <class Int>
    Int number() {
        auto w = word();
        Int v{};
        auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc{} || p != w.data() + w.size()) fail("bad number '" + w + "'");
        return v;
    }

    void finish() const {
        if (more()) fail("trailing tokens");
    }

private:
    std::vector<ArtifactToken> tokens_;
    std::size_t next_ = 0;
    std::size_t lineno_;
};

} // namespace detail

inline Transducer load_artifact(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    auto next_line = [&]() -> detail::ArtifactLine {
        while (std::getline(in, raw)) {
            detail::ArtifactLine line(raw, ++lineno);
            if (!line.empty()) return line;
        }
        throw FormatError("artifact ends early at line " + std::to_string(lineno));
    };
    auto header = [&](const char* key) {
        auto line = next_line();
        if (line.word() != key) line.fail(std::string("expected '") + key + "'");
        return line;
    };

    {
        auto line = next_line();
        if (line.word() != kArtifactMagic) line.fail("missing FST1 header");
        line.finish();
    }
    Transducer t;
    {
        auto line = header("policy");
        auto p = line.word();
        if (p != "min" && p != "max") line.fail("policy must be min or max");
        t.policy = parse_policy(p);
        line.finish();
    }
    {
        auto line = header("states");
        auto n = line.number<std::size_t>();
        if (n == 0 || n > kMaxArtifactStates) line.fail("bad state count");
        t = make_transducer(n, t.policy);
        line.finish();
    }
    {
        auto line = header("initial");
        t.initial = line.number<StateId>();
        if (t.initial >= t.state_count) line.fail("initial state out of range");
        line.finish();
    }
    std::vector<bool> declared(t.state_count, false);
    while (std::getline(in, raw)) {
        detail::ArtifactLine line(raw, ++lineno);
        if (line.empty()) continue;
        auto kind = line.word();
        if (kind == "state") {
            auto s = line.number<StateId>();
            if (s >= t.state_count) line.fail("state out of range");
            if (declared[s]) line.fail("state declared twice");
            declared[s] = true;
            while (line.more()) {
                auto attr = line.word();
                if (attr == "tau" && !t.tau[s]) {
                    auto out = line.literal();
                    t.tau[s] = Effect{std::move(out), line.number<Weight>()};
                } else if (attr == "color" && !t.colors[s]) {
                    auto name = line.word();
                    if (!is_identifier(name)) line.fail("bad color name");
                    t.colors[s] = name;
                } else {
                    line.fail("unexpected state attribute '" + attr + "'");
                }
            }
        } else if (kind == "trans") {
            Transition tr;
            tr.src = line.number<StateId>();
            auto lo = line.number<std::uint32_t>();
            auto hi = line.number<std::uint32_t>();
            tr.dst = line.number<StateId>();
            tr.eff.out = line.literal();
            tr.eff.weight = line.number<Weight>();
            line.finish();
            tr.label = {static_cast<Symbol>(lo), static_cast<Symbol>(hi)};
            if (tr.src >= t.state_count || tr.dst >= t.state_count) line.fail("transition references a missing state");
            if (!tr.label.valid()) line.fail("invalid range");
            t.transitions.push_back(std::move(tr));
        } else {
            line.fail("unknown record '" + kind + "'");
        }
    }
    for (std::size_t s = 0; s < t.state_count; ++s)
        if (!declared[s]) throw FormatError("state " + std::to_string(s) + " is never declared");
    t.validate();
    return t;
}

} // namespace gfst

#endif // GFST_ARTIFACT_HPP
