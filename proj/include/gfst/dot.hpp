// dot.hpp -- Graphviz rendering of a machine.

#ifndef GFST_DOT_HPP
#define GFST_DOT_HPP

#include <string>

#include "core.hpp"
#include "text.hpp"

namespace gfst {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string range_text(const RangeLabel& r) {
    return "[" + class_char(r.lo) + "-" + class_char(r.hi) + "]";
}

} // namespace detail

/// States with a state output are double circles labelled with that output;
/// edges read `[lo-hi] : 'out' / weight`.
inline std::string to_dot(const Transducer& t) {
    std::string out = "digraph fst {\n  rankdir=LR;\n";
    for (std::size_t s = 0; s < t.state_count; ++s) {
        std::string label = std::to_string(s);
        if (t.colors[s]) label += " @" + *t.colors[s];
        std::string shape = "circle";
        if (const auto& tau = t.tau[s]) {
            shape = "doublecircle";
            label += "\\n" + detail::dot_escape(quote_literal(tau->out)) + " / " + std::to_string(tau->weight);
        }
        out += "  " + std::to_string(s) + " [shape=" + shape + ", label=\"" + label + "\"";
        if (s == t.initial) out += ", style=bold";
        out += "];\n";
    }
    for (const auto& tr : t.transitions) {
        out += "  " + std::to_string(tr.src) + " -> " + std::to_string(tr.dst) + " [label=\""
               + detail::dot_escape(detail::range_text(tr.label) + " : " + quote_literal(tr.eff.out) + " / "
                                    + std::to_string(tr.eff.weight))
               + "\"];\n";
    }
    out += "}\n";
    return out;
}

} // namespace gfst

#endif // GFST_DOT_HPP
