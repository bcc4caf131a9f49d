// analysis.hpp -- weight-conflict search, which certifies that a machine is
// functional.
//
// Two states are simultaneously reachable when some input leads to both with
// the same weight at every step. Such a pair is in conflict when both states
// can enter a common state over a shared symbol with equal weights, or both
// carry a state output with equal weights. A machine without conflicts never
// produces two different outputs for one input.

#ifndef GFST_ANALYSIS_HPP
#define GFST_ANALYSIS_HPP

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "text.hpp"

namespace gfst {

struct ConflictWitness {
    StateId first = 0;                 // first <= second; equal for parallel transitions
    StateId second = 0;
    std::optional<StateId> target;     // absent: both states carry a state output
    std::optional<RangeLabel> label;   // shared part of the two labels
    Weight weight = 0;

    friend bool operator==(const ConflictWitness&, const ConflictWitness&) = default;
};

inline std::string describe(const ConflictWitness& w) {
    std::string s = "states " + std::to_string(w.first) + " and " + std::to_string(w.second) + " -> ";
    if (w.target) {
        s += std::to_string(*w.target) + " on [" + std::to_string(w.label->lo) + "-" + std::to_string(w.label->hi) + "]";
    } else {
        s += "final output";
    }
    return s + " with weight " + std::to_string(w.weight);
}

struct ConflictSearch {
    std::vector<std::pair<StateId, StateId>> reachable; // in discovery order, includes the diagonal
    std::vector<ConflictWitness> witnesses;
};

/// Explores the product of the machine with itself, pairing transitions over
/// intersecting labels with equal weights. Visits at most |Q|^2 pairs.
inline ConflictSearch search_conflicts(const Transducer& t) {
    t.validate();
    const std::size_t n = t.state_count;
    std::vector<std::vector<const Transition*>> out(n);
    for (const auto& tr : t.transitions) out[tr.src].push_back(&tr);

    ConflictSearch res;
    std::vector<bool> seen(n * n, false);
    std::deque<std::pair<StateId, StateId>> queue;
    auto visit = [&](StateId a, StateId b) {
        if (seen[std::size_t{a} * n + b]) return;
        seen[std::size_t{a} * n + b] = true;
        res.reachable.emplace_back(a, b);
        queue.emplace_back(a, b);
    };
    visit(t.initial, t.initial);
    while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        for (const auto* a : out[p])
            for (const auto* b : out[q])
                if (a->eff.weight == b->eff.weight && range_intersect(a->label, b->label)) visit(a->dst, b->dst);
    }

    for (auto [p, q] : res.reachable) {
        if (p > q) continue;
        for (const auto* a : out[p]) {
            for (const auto* b : out[q]) {
                if (p == q && a >= b) continue; // parallel transitions of one state
                if (a->dst != b->dst || a->eff.weight != b->eff.weight) continue;
                if (auto common = range_intersect(a->label, b->label))
                    res.witnesses.push_back({p, q, a->dst, common, a->eff.weight});
            }
        }
        if (p != q && t.tau[p] && t.tau[q] && t.tau[p]->weight == t.tau[q]->weight)
            res.witnesses.push_back({p, q, std::nullopt, std::nullopt, t.tau[p]->weight});
    }
    return res;
}

inline std::vector<ConflictWitness> find_weight_conflicts(const Transducer& t) {
    return search_conflicts(t).witnesses;
}

struct FunctionalityVerdict {
    bool certified = false;
    std::vector<ConflictWitness> witnesses;
};

/// Certified when there are no conflicts; otherwise undecided, since a
/// conflict does not by itself prove two outputs exist.
inline FunctionalityVerdict is_functional(const Transducer& t) {
    auto w = find_weight_conflicts(t);
    return {w.empty(), std::move(w)};
}

} // namespace gfst

#endif // GFST_ANALYSIS_HPP
