// glushkov.hpp -- position automaton construction for weighted transducer
// expressions.
//
// Every atom of the expression becomes a position (state); the machine moves
// from position p to position q reading q's range. Four recursive functions
// over the localized expression drive the construction:
//
//   lambda  effect of matching the empty word (absent if it cannot)
//   begins  positions that may come first, with the effect produced before them
//   ends    positions that may come last, with the effect produced after them
//   links   adjacent position pairs, with the effect produced between them

#ifndef GFST_GLUSHKOV_HPP
#define GFST_GLUSHKOV_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "regex.hpp"
#include "text.hpp"

namespace gfst {

/// Dense position id, 1-based. State 0 of an assembled machine is the start.
using Position = std::uint32_t;

struct OmegaNode {
    NodeKind kind = NodeKind::Epsilon;
    Position position = 0; // Atom only
    OutputString out;
    Weight weight = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    SourceLoc loc;
};

struct PositionInfo {
    RangeLabel label;
    std::optional<std::string> alphabet;

    friend bool operator==(const PositionInfo&, const PositionInfo&) = default;
};

/// Expression with every atom replaced by a unique position. Nodes are stored
/// children-first, so the root is the last node.
struct LocalizedExpr {
    std::vector<OmegaNode> nodes;
    std::vector<PositionInfo> alpha; // alpha[p - 1] describes position p

    std::size_t root() const { return nodes.size() - 1; }
    std::size_t position_count() const { return alpha.size(); }
    const PositionInfo& info(Position p) const { return alpha.at(p - 1); }
};

using PositionMap = std::map<Position, Effect>;
using LinkMap = std::map<std::pair<Position, Position>, Effect>;

namespace detail {

inline std::int32_t localize_into(const Ast& n, LocalizedExpr& out) {
    if (!is_core_kind(n.kind)) throw ContractError("localize: expression must be desugared");
    OmegaNode node{.kind = n.kind, .out = n.out, .weight = n.weight, .loc = n.loc};
    if (n.left) node.left = localize_into(*n.left, out);
    if (n.right) node.right = localize_into(*n.right, out);
    if (n.kind == NodeKind::Atom) {
        out.alpha.push_back({n.label, n.alphabet});
        node.position = static_cast<Position>(out.alpha.size());
    }
    out.nodes.push_back(std::move(node));
    return static_cast<std::int32_t>(out.nodes.size() - 1);
}

inline std::string where(const OmegaNode& n) {
    if (n.loc.line == 0) return "";
    return " at " + std::to_string(n.loc.line) + ":" + std::to_string(n.loc.column);
}

inline PositionMap scale(const std::optional<Effect>& before, PositionMap m) {
    if (!before) return {};
    for (auto& [p, e] : m) e = effect_mul(*before, e);
    return m;
}

inline PositionMap scale(PositionMap m, const std::optional<Effect>& after) {
    if (!after) return {};
    for (auto& [p, e] : m) e = effect_mul(e, *after);
    return m;
}

inline void disjoint_merge(PositionMap& dst, PositionMap src) {
    for (auto& [p, e] : src)
        if (!dst.emplace(p, std::move(e)).second)
            throw ContractError("position " + std::to_string(p) + " occurs twice in one expression");
}

} // namespace detail

/// Numbers atoms 1..n in document order.
inline LocalizedExpr localize(const Ast& expr) {
    LocalizedExpr out;
    detail::localize_into(expr, out);
    return out;
}

/// Results of the four construction functions at the root of an expression.
struct GlushkovSets {
    std::optional<Effect> lambda;
    PositionMap begins;
    PositionMap ends;
    LinkMap links;
};

/// Evaluates lambda, begins, ends and links bottom-up in one pass. Throws
/// AmbiguityError where the expression cannot denote a function.
inline GlushkovSets analyze(const LocalizedExpr& expr) {
    const auto n = expr.nodes.size();
    std::vector<std::optional<Effect>> lam(n);
    std::vector<PositionMap> beg(n), end(n);
    LinkMap links;

    auto add_links = [&](const PositionMap& e, const PositionMap& b, const OmegaNode& at) {
        for (const auto& [p, pe] : e) {
            for (const auto& [q, qe] : b) {
                Effect eff = effect_mul(pe, qe);
                auto [it, fresh] = links.emplace(std::pair{p, q}, eff);
                if (!fresh && it->second != eff)
                    throw AmbiguityError("positions " + std::to_string(p) + " -> " + std::to_string(q)
                                         + " are linked with both " + describe(it->second) + " and "
                                         + describe(eff) + detail::where(at)
                                         + "; add weights to tell the iterations apart");
            }
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const OmegaNode& node = expr.nodes[i];
        const auto l = node.left;
        const auto r = node.right;
        switch (node.kind) {
            case NodeKind::Epsilon:
                lam[i] = Effect{};
                break;
            case NodeKind::Atom:
                beg[i] = {{node.position, Effect{}}};
                end[i] = beg[i];
                break;
            case NodeKind::Union:
                if (lam[l] && lam[r])
                    throw AmbiguityError("both sides of a union match the empty word ("
                                         + describe(*lam[l]) + " and " + describe(*lam[r]) + ")"
                                         + detail::where(node));
                lam[i] = lam[l] ? lam[l] : lam[r];
                beg[i] = std::move(beg[l]);
                detail::disjoint_merge(beg[i], std::move(beg[r]));
                end[i] = std::move(end[l]);
                detail::disjoint_merge(end[i], std::move(end[r]));
                break;
            case NodeKind::Concat:
                add_links(end[l], beg[r], node);
                lam[i] = effect_mul(lam[l], lam[r]);
                beg[i] = std::move(beg[l]);
                detail::disjoint_merge(beg[i], detail::scale(lam[l], std::move(beg[r])));
                end[i] = detail::scale(std::move(end[l]), lam[r]);
                detail::disjoint_merge(end[i], std::move(end[r]));
                break;
            case NodeKind::Star:
                if (lam[l] && !lam[l]->out.empty())
                    throw AmbiguityError("starred expression produces output " + quote_literal(lam[l]->out)
                                         + " on the empty word" + detail::where(node));
                add_links(end[l], beg[l], node);
                lam[i] = Effect{};
                beg[i] = std::move(beg[l]);
                end[i] = std::move(end[l]);
                break;
            case NodeKind::OutputConcat: {
                Effect d{node.out, 0};
                lam[i] = effect_mul(lam[l], std::optional<Effect>(d));
                beg[i] = std::move(beg[l]);
                end[i] = detail::scale(std::move(end[l]), d);
                break;
            }
            case NodeKind::WeightAfter: {
                Effect w{{}, node.weight};
                lam[i] = effect_mul(lam[l], std::optional<Effect>(w));
                beg[i] = std::move(beg[l]);
                end[i] = detail::scale(std::move(end[l]), w);
                break;
            }
            case NodeKind::WeightBefore: {
                Effect w{{}, node.weight};
                lam[i] = effect_mul(lam[l], std::optional<Effect>(w));
                beg[i] = detail::scale(w, std::move(beg[l]));
                end[i] = std::move(end[l]);
                break;
            }
            default:
                throw ContractError("analyze: unexpected sugar node");
        }
    }
    const auto root = expr.root();
    return {lam[root], std::move(beg[root]), std::move(end[root]), std::move(links)};
}

inline std::optional<Effect> lambda(const LocalizedExpr& expr) { return analyze(expr).lambda; }
inline PositionMap begins(const LocalizedExpr& expr) { return analyze(expr).begins; }
inline PositionMap ends(const LocalizedExpr& expr) { return analyze(expr).ends; }
inline LinkMap links(const LocalizedExpr& expr) { return analyze(expr).links; }

/// Builds the machine: state 0 is the start, state p is position p.
inline Transducer assemble(const LocalizedExpr& expr, const GlushkovSets& sets, Policy policy) {
    Transducer t = make_transducer(expr.position_count() + 1, policy);
    for (const auto& [p, e] : sets.begins) t.transitions.push_back({0, expr.info(p).label, p, e});
    for (const auto& [pq, e] : sets.links) t.transitions.push_back({pq.first, expr.info(pq.second).label, pq.second, e});
    for (const auto& [p, e] : sets.ends) t.tau[p] = e;
    t.tau[0] = sets.lambda;
    for (Position p = 1; p <= expr.position_count(); ++p) t.colors[p] = expr.info(p).alphabet;
    return t;
}

inline Transducer assemble(const LocalizedExpr& expr, Policy policy) {
    return assemble(expr, analyze(expr), policy);
}

inline Transducer compile(const AstPtr& expr, Policy policy = Policy::Max) {
    return assemble(localize(*desugar(expr)), policy);
}

inline Transducer compile(std::string_view text, Policy policy = Policy::Max) {
    return compile(parse(text), policy);
}

/// Checks the shape every assembled machine has: start state 0 with no
/// incoming transitions, and all transitions into a state share one label.
inline bool is_position_automaton(const Transducer& t) {
    if (t.initial != 0) return false;
    std::vector<std::optional<RangeLabel>> incoming(t.state_count);
    for (const auto& tr : t.transitions) {
        if (tr.dst == 0) return false;
        auto& in = incoming[tr.dst];
        if (in && *in != tr.label) return false;
        in = tr.label;
    }
    return true;
}

} // namespace gfst

#endif // GFST_GLUSHKOV_HPP
