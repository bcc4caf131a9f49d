// interleave.hpp -- interleaved alphabets: named sub-alphabets plus a local
// language over their names (allowed first names, allowed adjacent pairs,
// allowed last names). Machines are checked against it by coloring every
// state with the alphabet of the symbols that enter it.

#ifndef GFST_INTERLEAVE_HPP
#define GFST_INTERLEAVE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "text.hpp"

namespace gfst {

inline bool ranges_cover(std::vector<RangeLabel> ranges, RangeLabel r) {
    std::sort(ranges.begin(), ranges.end());
    std::uint64_t next = r.lo; // first symbol of r not yet covered
    for (const auto& x : ranges) {
        if (x.lo > next) break;
        if (x.hi >= next) next = std::uint64_t{x.hi} + 1;
        if (next > r.hi) return true;
    }
    return next > r.hi;
}

inline bool ranges_overlap(const std::vector<RangeLabel>& a, const std::vector<RangeLabel>& b) {
    for (const auto& x : a)
        for (const auto& y : b)
            if (range_intersect(x, y)) return true;
    return false;
}

struct InterleaveSpec {
    std::map<std::string, std::vector<RangeLabel>> alphabets;
    std::set<std::string> initial;
    std::set<std::pair<std::string, std::string>> pairs;
    std::set<std::string> final;
    bool epsilon_allowed = true;

    bool has(const std::string& name) const { return alphabets.count(name) != 0; }

    /// Throws FormatError unless every referenced name is defined, the initial
    /// alphabets are pairwise disjoint and so are the successors of each name.
    void validate() const {
        auto need = [&](const std::string& name) {
            if (!has(name)) throw FormatError("undefined alphabet '" + name + "'");
        };
        for (const auto& n : initial) need(n);
        for (const auto& n : final) need(n);
        for (const auto& [a, b] : pairs) {
            need(a);
            need(b);
        }
        auto disjoint = [&](const std::vector<std::string>& names, const std::string& context) {
            for (std::size_t i = 0; i < names.size(); ++i)
                for (std::size_t k = i + 1; k < names.size(); ++k)
                    if (ranges_overlap(alphabets.at(names[i]), alphabets.at(names[k])))
                        throw FormatError(context + " alphabets '" + names[i] + "' and '" + names[k] + "' overlap");
        };
        disjoint({initial.begin(), initial.end()}, "initial");
        std::map<std::string, std::vector<std::string>> successors;
        for (const auto& [a, b] : pairs) successors[a].push_back(b);
        for (const auto& [a, next] : successors) disjoint(next, "successor of '" + a + "':");
    }

    /// Brute-force membership of a word of alphabet names.
    bool accepts(const std::vector<std::string>& word) const {
        if (word.empty()) return epsilon_allowed;
        if (!initial.count(word.front()) || !final.count(word.back())) return false;
        for (std::size_t i = 1; i < word.size(); ++i)
            if (!pairs.count({word[i - 1], word[i]})) return false;
        return true;
    }
};

// Spec file {{{

namespace detail {

class SpecLineReader {
public:
    SpecLineReader(std::u32string line, std::size_t lineno) : s_(std::move(line)), lineno_(lineno) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("line " + std::to_string(lineno_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    bool eat(Symbol c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Symbol c) {
        if (!eat(c)) fail(std::string("expected '") + static_cast<char>(c) + "'");
    }

    std::string ident() {
        skip_ws();
        std::string out;
        while (pos_ < s_.size() && is_ident_char(s_[pos_])) out += static_cast<char>(s_[pos_++]);
        if (!is_identifier(out)) fail("expected a name");
        return out;
    }

    std::vector<std::string> ident_list() {
        std::vector<std::string> out{ident()};
        while (eat(',')) out.push_back(ident());
        return out;
    }

    Symbol range_char() {
        if (pos_ >= s_.size()) fail("unterminated range");
        Symbol c = s_[pos_++];
        if (c != '\\') {
            if (c == '[' || c == ']' || c == '-') fail("character must be escaped inside a range");
            return c;
        }
        if (pos_ >= s_.size()) fail("unterminated escape");
        c = s_[pos_++];
        switch (c) {
            case 'n': return '\n';
            case 't': return '\t';
            case '\\': case '\'': case '[': case ']': case '-': return c;
            case 'u': {
                if (pos_ + 4 > s_.size()) fail("truncated \\u escape");
                std::string hex = encode_utf8(s_.substr(pos_, 4));
                pos_ += 4;
                if (hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) fail("bad \\u escape");
                Symbol v = static_cast<Symbol>(std::stoul(hex, nullptr, 16));
                if (!is_scalar_value(v)) fail("escape is not a Unicode scalar value");
                return v;
            }
            default: fail("unknown escape");
        }
    }

    RangeLabel range() {
        expect('[');
        Symbol lo = range_char();
        Symbol hi = lo;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            ++pos_;
            hi = range_char();
        }
        if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
        ++pos_;
        if (lo > hi) fail("range bounds out of order");
        return {lo, hi};
    }

    std::u32string rest() {
        skip_ws();
        auto r = s_.substr(pos_);
        while (!r.empty() && (r.back() == ' ' || r.back() == '\t' || r.back() == '\r')) r.pop_back();
        pos_ = s_.size();
        return r;
    }

private:
    std::u32string s_;
    std::size_t pos_ = 0;
    std::size_t lineno_;
};

} // namespace detail

/// Parses the line-based format:
///
///   alphabet Latin = [a-z],[A-Z]
///   initial: Latin
///   pairs: Latin->Digit, Digit->Latin
///   final: Digit
///   epsilon: allowed | forbidden
///
/// `#` starts a comment. The result is validated.
inline InterleaveSpec parse_interleave_spec(std::string_view text) {
    InterleaveSpec spec;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = decode_utf8(raw);
        if (auto hash = line.find(U'#'); hash != std::u32string::npos) line.resize(hash);
        detail::SpecLineReader r(line, lineno);
        if (r.done()) continue;
        auto key = r.ident();
        if (key == "alphabet") {
            auto name = r.ident();
            r.expect('=');
            if (spec.alphabets.count(name)) r.fail("alphabet '" + name + "' defined twice");
            auto& ranges = spec.alphabets[name];
            ranges.push_back(r.range());
            while (r.eat(',')) ranges.push_back(r.range());
        } else if (key == "initial" || key == "final") {
            r.expect(':');
            auto& dst = key == "initial" ? spec.initial : spec.final;
            for (auto& n : r.ident_list()) dst.insert(n);
        } else if (key == "pairs") {
            r.expect(':');
            do {
                auto a = r.ident();
                r.expect('-');
                r.expect('>');
                spec.pairs.emplace(a, r.ident());
            } while (r.eat(','));
        } else if (key == "epsilon") {
            r.expect(':');
            auto v = encode_utf8(r.rest());
            if (v == "allowed") spec.epsilon_allowed = true;
            else if (v == "forbidden") spec.epsilon_allowed = false;
            else r.fail("epsilon must be 'allowed' or 'forbidden'");
        } else {
            r.fail("unknown directive '" + key + "'");
        }
        if (!r.done()) r.fail("trailing characters");
    }
    spec.validate();
    return spec;
}

// }}}

enum class ColoringRule {
    Unresolved,      // no unique alphabet contains the state's symbols
    UnknownAlphabet, // annotation names an alphabet the spec lacks
    Label,           // a symbol entering the state lies outside its alphabet
    Initial,         // first symbol from an alphabet not allowed to start
    Pair,            // adjacent alphabets not an allowed pair
    Final,           // last symbol from an alphabet not allowed to end
    Epsilon,         // empty word accepted but forbidden
};

struct ColoringViolation {
    ColoringRule rule;
    StateId state = 0;
    std::optional<StateId> from;
    std::string message;
};

struct ColoringReport {
    std::vector<std::optional<std::string>> colors;
    std::vector<ColoringViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Colors every non-start state (its own annotation, or the single alphabet
/// containing all symbols entering it) and checks the machine against the
/// local language of the spec.
inline ColoringReport check_coloring(const Transducer& t, const InterleaveSpec& spec) {
    t.validate();
    ColoringReport rep;
    rep.colors.assign(t.state_count, std::nullopt);
    std::vector<std::vector<RangeLabel>> incoming(t.state_count);
    for (const auto& tr : t.transitions) incoming[tr.dst].push_back(tr.label);
    auto name_of = [](StateId s) { return "state " + std::to_string(s); };
    auto violate = [&](ColoringRule rule, StateId s, std::optional<StateId> from, std::string msg) {
        rep.violations.push_back({rule, s, from, std::move(msg)});
    };

    for (StateId s = 0; s < t.state_count; ++s) {
        if (s == t.initial) continue;
        if (const auto& c = t.colors[s]) {
            if (spec.has(*c)) rep.colors[s] = c;
            else violate(ColoringRule::UnknownAlphabet, s, std::nullopt, name_of(s) + ": unknown alphabet '" + *c + "'");
            continue;
        }
        if (incoming[s].empty()) continue;
        std::vector<std::string> fits;
        for (const auto& [name, ranges] : spec.alphabets) {
            bool all = std::all_of(incoming[s].begin(), incoming[s].end(),
                                   [&](const RangeLabel& l) { return ranges_cover(ranges, l); });
            if (all) fits.push_back(name);
        }
        if (fits.size() == 1) {
            rep.colors[s] = fits.front();
        } else if (fits.empty()) {
            violate(ColoringRule::Unresolved, s, std::nullopt, name_of(s) + ": no alphabet contains its symbols");
        } else {
            std::string names;
            for (const auto& f : fits) names += (names.empty() ? "" : ", ") + f;
            violate(ColoringRule::Unresolved, s, std::nullopt,
                    name_of(s) + ": annotation required, symbols fit " + names);
        }
    }

    for (const auto& tr : t.transitions) {
        const auto& dst = rep.colors[tr.dst];
        if (!dst) continue;
        if (!ranges_cover(spec.alphabets.at(*dst), tr.label))
            violate(ColoringRule::Label, tr.dst, tr.src,
                    name_of(tr.dst) + ": entered by symbols outside alphabet '" + *dst + "'");
        if (tr.src == t.initial) {
            if (!spec.initial.count(*dst))
                violate(ColoringRule::Initial, tr.dst, tr.src,
                        name_of(tr.dst) + ": alphabet '" + *dst + "' may not start a word");
        } else if (const auto& src = rep.colors[tr.src]) {
            if (!spec.pairs.count({*src, *dst}))
                violate(ColoringRule::Pair, tr.dst, tr.src,
                        "transition " + std::to_string(tr.src) + " -> " + std::to_string(tr.dst) + ": '" + *src
                            + "' may not be followed by '" + *dst + "'");
        }
    }

    for (StateId s = 0; s < t.state_count; ++s) {
        if (!t.tau[s]) continue;
        if (s == t.initial) {
            if (!spec.epsilon_allowed)
                violate(ColoringRule::Epsilon, s, std::nullopt, "the empty word is accepted but forbidden");
        } else if (rep.colors[s] && !spec.final.count(*rep.colors[s])) {
            violate(ColoringRule::Final, s, std::nullopt,
                    name_of(s) + ": alphabet '" + *rep.colors[s] + "' may not end a word");
        }
    }
    return rep;
}

} // namespace gfst

#endif // GFST_INTERLEAVE_HPP
