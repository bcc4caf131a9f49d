// eval.hpp -- dynamic-programming evaluation of a transducer with backtracking.
//
// Column j of the table holds the states reachable after reading j symbols.
// Each cell keeps only the best run into it: runs are ordered by their weight
// sequences with the last weight dominant, so two runs entering the same cell
// compare by (entering weight, order of their predecessor cells). Cells are
// ranked within their column by that key, which makes every comparison O(1).

#ifndef GFST_EVAL_HPP
#define GFST_EVAL_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "range_index.hpp"
#include "text.hpp"

namespace gfst {

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr std::uint32_t kNoTransition = std::numeric_limits<std::uint32_t>::max();

struct DpCell {
    StateId state = 0;
    StateId prev_state = kNoState;         // kNoState marks the start cell
    std::uint32_t transition = kNoTransition;
    Weight weight = 0;                     // weight of the entering transition
    std::uint32_t prev_rank = 0;
    std::uint32_t rank = 0;                // position of the run's weights within the column
    bool conflict = false;                 // an equally weighted run with another output met here

    friend bool operator==(const DpCell&, const DpCell&) = default;
};

/// Sparse table: columns[j] lists the occupied cells of column j by state.
struct DpTable {
    std::size_t state_count = 0;
    std::vector<std::vector<DpCell>> columns;

    const DpCell* find(std::size_t column, StateId s) const {
        const auto& col = columns.at(column);
        auto it = std::lower_bound(col.begin(), col.end(), s,
                                   [](const DpCell& c, StateId v) { return c.state < v; });
        return it != col.end() && it->state == s ? &*it : nullptr;
    }

    friend bool operator==(const DpTable&, const DpTable&) = default;
};

struct EvalStats {
    std::size_t cell_visits = 0;
    std::size_t transition_probes = 0;
};

namespace detail {

class SparseColumns {
public:
    explicit SparseColumns(std::size_t states) : slot_(states, kNoSlot) { table_.state_count = states; }

    void open() { table_.columns.emplace_back(); }

    DpCell* find_open(StateId s) {
        auto k = slot_[s];
        return k == kNoSlot ? nullptr : &table_.columns.back()[k];
    }

    DpCell& insert_open(StateId s) {
        auto& col = table_.columns.back();
        slot_[s] = static_cast<std::uint32_t>(col.size());
        col.push_back(DpCell{.state = s});
        return col.back();
    }

    void close() {
        auto& col = table_.columns.back();
        for (const auto& c : col) slot_[c.state] = kNoSlot;
        std::sort(col.begin(), col.end(), [](const DpCell& a, const DpCell& b) { return a.state < b.state; });
    }

    std::vector<DpCell*> cells(std::size_t column) {
        std::vector<DpCell*> out;
        for (auto& c : table_.columns[column]) out.push_back(&c);
        return out;
    }

    template <class F>
    void scan(std::size_t column, EvalStats& stats, F&& f) const {
        for (const auto& c : table_.columns[column]) {
            ++stats.cell_visits;
            f(c);
        }
    }

    const DpCell* find(std::size_t column, StateId s) const { return table_.find(column, s); }
    DpTable take() && { return std::move(table_); }

private:
    static constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();
    DpTable table_;
    std::vector<std::uint32_t> slot_;
};

class DenseColumns {
public:
    explicit DenseColumns(std::size_t states) : states_(states) {}

    void open() { cols_.emplace_back(states_); }
    DpCell* find_open(StateId s) { return cols_.back()[s] ? &*cols_.back()[s] : nullptr; }

    DpCell& insert_open(StateId s) {
        cols_.back()[s] = DpCell{.state = s};
        return *cols_.back()[s];
    }

    void close() {}

    std::vector<DpCell*> cells(std::size_t column) {
        std::vector<DpCell*> out;
        for (auto& c : cols_[column])
            if (c) out.push_back(&*c);
        return out;
    }

    template <class F>
    void scan(std::size_t column, EvalStats& stats, F&& f) const {
        for (const auto& c : cols_[column]) {
            ++stats.cell_visits;
            if (c) f(*c);
        }
    }

    const DpCell* find(std::size_t column, StateId s) const {
        const auto& c = cols_.at(column)[s];
        return c ? &*c : nullptr;
    }

    DpTable take() && {
        DpTable t;
        t.state_count = states_;
        for (const auto& col : cols_) {
            auto& out = t.columns.emplace_back();
            for (const auto& c : col)
                if (c) out.push_back(*c);
        }
        return t;
    }

private:
    std::size_t states_;
    std::vector<std::vector<std::optional<DpCell>>> cols_;
};

} // namespace detail

/// Evaluation front end for one machine. Holds a range index per state over
/// its outgoing transitions; the machine must outlive the evaluator.
class Evaluator {
public:
    explicit Evaluator(const Transducer& t) : t_(&t), outgoing_(t.state_count), index_(t.state_count) {
        t.validate();
        std::vector<std::vector<RangeLabel>> labels(t.state_count);
        for (std::uint32_t i = 0; i < t.transitions.size(); ++i) {
            const auto& tr = t.transitions[i];
            outgoing_[tr.src].push_back(i);
            labels[tr.src].push_back(tr.label);
        }
        for (std::size_t s = 0; s < t.state_count; ++s) index_[s] = RangeIndex(labels[s]);
    }

    explicit Evaluator(Transducer&&) = delete;

    const Transducer& machine() const { return *t_; }
    std::size_t outgoing_count(StateId s) const { return outgoing_.at(s).size(); }

    DpTable trace(std::u32string_view input, EvalStats* stats = nullptr) const {
        return fill<detail::SparseColumns>(input, stats);
    }

    /// Same table as trace(), built over a full |Q| x (|x|+1) matrix.
    DpTable trace_dense(std::u32string_view input, EvalStats* stats = nullptr) const {
        return fill<detail::DenseColumns>(input, stats);
    }

    /// Picks the winning accepting run of a filled table and concatenates its
    /// outputs. Throws RuntimeAmbiguity when the winner is not unique.
    std::optional<OutputString> resolve(const DpTable& table) const {
        const auto last = table.columns.size() - 1;
        const DpCell* best = nullptr;
        bool tie = false;
        for (const auto& c : table.columns[last]) {
            const auto& tau = t_->tau[c.state];
            if (!tau) continue;
            if (!best) {
                best = &c;
                continue;
            }
            const auto& best_tau = *t_->tau[best->state];
            auto cmp = tau->weight <=> best_tau.weight;
            if (cmp == 0) cmp = c.rank <=> best->rank;
            if (is_better(cmp, t_->policy)) {
                best = &c;
                tie = false;
            } else if (cmp == 0 && !tie) {
                bool marked = false;
                auto a = run_output(table, last, c.state, &marked) + tau->out;
                auto b = run_output(table, last, best->state) + best_tau.out;
                tie = marked || a != b;
            }
        }
        if (!best) return std::nullopt;
        if (tie) throw RuntimeAmbiguity("two accepting runs tie on weight with different outputs");
        bool conflict = false;
        auto out = run_output(table, last, best->state, &conflict);
        if (conflict)
            throw RuntimeAmbiguity("the winning run passes a state reached by equally weighted runs "
                                   "with different outputs");
        return out + t_->tau[best->state]->out;
    }

    std::optional<OutputString> evaluate(std::u32string_view input, EvalStats* stats = nullptr) const {
        return resolve(trace(input, stats));
    }

    std::optional<OutputString> evaluate_dense(std::u32string_view input, EvalStats* stats = nullptr) const {
        return resolve(trace_dense(input, stats));
    }

private:
    const Transducer* t_;
    std::vector<std::vector<std::uint32_t>> outgoing_;
    std::vector<RangeIndex> index_;

    // Output of the best run ending at (column, s), excluding any state output.
    // Sets *conflict when the run passes a cell marked as tied.
    template <class Table>
    OutputString run_output(const Table& table, std::size_t column, StateId s, bool* conflict = nullptr) const {
        std::vector<std::uint32_t> path;
        for (const DpCell* c = table.find(column, s); c && c->transition != kNoTransition;
             c = table.find(--column, c->prev_state)) {
            if (conflict && c->conflict) *conflict = true;
            path.push_back(c->transition);
        }
        OutputString out;
        for (auto it = path.rbegin(); it != path.rend(); ++it) out += t_->transitions[*it].eff.out;
        return out;
    }

    template <class Store>
    DpTable fill(std::u32string_view input, EvalStats* stats) const {
        EvalStats local;
        EvalStats& st = stats ? *stats : local;
        Store store(t_->state_count);
        store.open();
        store.insert_open(t_->initial);
        store.close();

        for (std::size_t j = 0; j < input.size(); ++j) {
            const Symbol x = input[j];
            store.open();
            store.scan(j, st, [&](const DpCell& from) {
                for (auto id : index_[from.state].lookup(x)) {
                    ++st.transition_probes;
                    const auto tid = outgoing_[from.state][id];
                    const auto& tr = t_->transitions[tid];
                    DpCell* cell = store.find_open(tr.dst);
                    if (!cell) {
                        DpCell& fresh = store.insert_open(tr.dst);
                        fresh.prev_state = from.state;
                        fresh.transition = tid;
                        fresh.weight = tr.eff.weight;
                        fresh.prev_rank = from.rank;
                        continue;
                    }
                    auto cmp = tr.eff.weight <=> cell->weight;
                    if (cmp == 0) cmp = from.rank <=> cell->prev_rank;
                    if (is_better(cmp, t_->policy)) {
                        cell->prev_state = from.state;
                        cell->transition = tid;
                        cell->weight = tr.eff.weight;
                        cell->prev_rank = from.rank;
                        cell->conflict = false;
                    } else if (cmp == 0 && !cell->conflict) {
                        bool marked = false;
                        auto a = run_output(store, j, from.state, &marked) + tr.eff.out;
                        auto b = run_output(store, j, cell->prev_state) + t_->transitions[cell->transition].eff.out;
                        cell->conflict = marked || a != b;
                    }
                }
            });
            store.close();
            assign_ranks(store.cells(j + 1));
        }
        return std::move(store).take();
    }

    static void assign_ranks(std::vector<DpCell*> cells) {
        auto key_less = [](const DpCell* a, const DpCell* b) {
            return a->weight != b->weight ? a->weight < b->weight : a->prev_rank < b->prev_rank;
        };
        std::sort(cells.begin(), cells.end(), key_less);
        std::uint32_t rank = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0 && key_less(cells[i - 1], cells[i])) ++rank;
            cells[i]->rank = rank;
        }
    }
};

inline std::optional<OutputString> evaluate(const Transducer& t, std::u32string_view input) {
    return Evaluator(t).evaluate(input);
}

inline DpTable trace(const Transducer& t, std::u32string_view input) { return Evaluator(t).trace(input); }

} // namespace gfst

#endif // GFST_EVAL_HPP
