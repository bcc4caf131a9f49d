// oracle.hpp -- brute-force valuation of an expression into a finite relation,
// used as the reference the compiled machines are tested against.
//
// Every pair carries the weights split into segments: segment i collects the
// weight annotations met between input symbol i-1 and input symbol i, so an
// input of length n has n+1 segments. That is the same sequence a compiled
// machine accumulates along a run (one weight per transition plus the final
// one), which lets the oracle disambiguate with the same order.

#ifndef GFST_ORACLE_HPP
#define GFST_ORACLE_HPP

#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "regex.hpp"

namespace gfst {

struct OraclePair {
    std::u32string input;
    OutputString out;
    std::vector<Weight> weights;

    Weight total_weight() const {
        Weight w = 0;
        for (Weight s : weights) w = add_weights(w, s);
        return w;
    }

    friend auto operator<=>(const OraclePair&, const OraclePair&) = default;
};

using Relation = std::set<OraclePair>;

inline constexpr std::size_t kOracleMaxLength = 8;
inline constexpr std::uint64_t kOracleMaxRange = 64;

namespace detail {

inline OraclePair join(const OraclePair& a, const OraclePair& b) {
    OraclePair r;
    r.input = a.input + b.input;
    r.out = a.out + b.out;
    r.weights = a.weights;
    r.weights.back() = add_weights(r.weights.back(), b.weights.front());
    r.weights.insert(r.weights.end(), b.weights.begin() + 1, b.weights.end());
    return r;
}

inline Relation product(const Relation& a, const Relation& b, std::size_t max_len) {
    Relation r;
    for (const auto& x : a)
        for (const auto& y : b)
            if (x.input.size() + y.input.size() <= max_len) r.insert(join(x, y));
    return r;
}

inline Relation valuate(const Ast& n, std::size_t max_len) {
    switch (n.kind) {
        case NodeKind::Epsilon:
            return {OraclePair{{}, {}, {0}}};
        case NodeKind::Atom: {
            if (n.label.size() > kOracleMaxRange)
                throw ContractError("oracle: atom range too large to enumerate");
            Relation r;
            if (max_len == 0) return r;
            for (Symbol s = n.label.lo;; ++s) {
                r.insert(OraclePair{std::u32string(1, s), {}, {0, 0}});
                if (s == n.label.hi) break;
            }
            return r;
        }
        case NodeKind::Union: {
            Relation r = valuate(*n.left, max_len);
            r.merge(valuate(*n.right, max_len));
            return r;
        }
        case NodeKind::Concat:
            return product(valuate(*n.left, max_len), valuate(*n.right, max_len), max_len);
        case NodeKind::Star: {
            // Iterations that read nothing are skipped: they cannot change the
            // input and only repeat a fixed effect.
            Relation step;
            for (auto& p : valuate(*n.left, max_len))
                if (!p.input.empty()) step.insert(p);
            Relation result{OraclePair{{}, {}, {0}}};
            Relation frontier = result;
            while (!frontier.empty()) {
                Relation next;
                for (const auto& p : product(frontier, step, max_len))
                    if (result.insert(p).second) next.insert(p);
                frontier = std::move(next);
            }
            return result;
        }
        case NodeKind::OutputConcat: {
            Relation r;
            for (auto p : valuate(*n.left, max_len)) {
                p.out += n.out;
                r.insert(std::move(p));
            }
            return r;
        }
        case NodeKind::WeightAfter:
        case NodeKind::WeightBefore: {
            Relation r;
            for (auto p : valuate(*n.left, max_len)) {
                Weight& seg = n.kind == NodeKind::WeightAfter ? p.weights.back() : p.weights.front();
                seg = add_weights(seg, n.weight);
                r.insert(std::move(p));
            }
            return r;
        }
        default:
            throw ContractError("oracle: expression must be desugared");
    }
}

} // namespace detail

/// All (input, output, weights) triples of the expression with inputs no
/// longer than `max_len`. Exponential; test-scale inputs only.
inline Relation oracle_valuate(const Ast& expr, std::size_t max_len) {
    if (max_len > kOracleMaxLength) throw ContractError("oracle: max_len above 8");
    auto core = desugar(std::make_shared<const Ast>(expr));
    return detail::valuate(*core, max_len);
}

struct OracleVerdict {
    enum class Kind { NoMatch, Match, Ambiguous };
    Kind kind = Kind::NoMatch;
    OutputString out;

    friend bool operator==(const OracleVerdict&, const OracleVerdict&) = default;
};

/// Picks the best pair for `input` under `policy`; distinct outputs that tie
/// on weights make the verdict ambiguous.
inline OracleVerdict oracle_best(const Relation& rel, std::u32string_view input, Policy policy) {
    const OraclePair* best = nullptr;
    bool tie = false;
    auto lo = rel.lower_bound(OraclePair{std::u32string(input), {}, {}});
    for (auto it = lo; it != rel.end() && it->input == input; ++it) {
        if (!best) {
            best = &*it;
            continue;
        }
        auto c = lex_compare(it->weights, best->weights);
        if (is_better(c, policy)) {
            best = &*it;
            tie = false;
        } else if (c == 0 && it->out != best->out) {
            tie = true;
        }
    }
    if (!best) return {};
    if (tie) return {OracleVerdict::Kind::Ambiguous, {}};
    return {OracleVerdict::Kind::Match, best->out};
}

} // namespace gfst

#endif // GFST_ORACLE_HPP
