// range_index.hpp -- stabbing queries over a fixed set of symbol ranges.
//
// Breakpoints are every upper bound and the predecessor of every lower bound.
// Membership is constant on each half-open run (P[i-1], P[i]], so a symbol is
// answered by the ranges containing the first breakpoint at or above it.

#ifndef GFST_RANGE_INDEX_HPP
#define GFST_RANGE_INDEX_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "core.hpp"

namespace gfst {

class RangeIndex {
public:
    using RangeId = std::uint32_t;

    RangeIndex() = default;

    explicit RangeIndex(std::span<const RangeLabel> ranges) : ranges_(ranges.begin(), ranges.end()) {
        points_.reserve(2 * ranges_.size());
        for (const auto& r : ranges_) {
            if (!r.valid()) throw ContractError("RangeIndex: invalid range");
            points_.push_back(r.hi);
            if (r.lo > 0) points_.push_back(r.lo - 1);
        }
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());

        // CSR layout: ids_[offsets_[i] .. offsets_[i+1]) contain breakpoint i
        offsets_.assign(points_.size() + 1, 0);
        for (const auto& r : ranges_) {
            auto [first, last] = covered(r);
            for (auto i = first; i < last; ++i) ++offsets_[i + 1];
        }
        for (std::size_t i = 0; i < points_.size(); ++i) offsets_[i + 1] += offsets_[i];
        ids_.resize(offsets_.back());
        std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (RangeId id = 0; id < ranges_.size(); ++id) {
            auto [first, last] = covered(ranges_[id]);
            for (auto i = first; i < last; ++i) ids_[fill[i]++] = id;
        }
    }

    std::span<const Symbol> breakpoints() const { return points_; }
    std::span<const RangeLabel> ranges() const { return ranges_; }

    /// Ranges containing breakpoint i, ascending by id.
    std::span<const RangeId> at(std::size_t i) const {
        return std::span<const RangeId>(ids_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }

    /// Ranges containing `x`, ascending by id. `comparisons`, when given, is
    /// incremented once per symbol comparison made by the search.
    std::span<const RangeId> lookup(Symbol x, std::size_t* comparisons = nullptr) const {
        std::size_t lo = 0;
        std::size_t len = points_.size();
        while (len > 0) {
            std::size_t half = len / 2;
            if (comparisons) ++*comparisons;
            if (points_[lo + half] < x) {
                lo += half + 1;
                len -= half + 1;
            } else {
                len = half;
            }
        }
        if (lo == points_.size()) return {};
        return at(lo);
    }

private:
    std::vector<RangeLabel> ranges_;
    std::vector<Symbol> points_;
    std::vector<std::uint32_t> offsets_;
    std::vector<RangeId> ids_;

    // breakpoint indices lying inside r
    std::pair<std::size_t, std::size_t> covered(const RangeLabel& r) const {
        auto first = std::lower_bound(points_.begin(), points_.end(), r.lo) - points_.begin();
        auto last = std::upper_bound(points_.begin(), points_.end(), r.hi) - points_.begin();
        return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
    }
};

} // namespace gfst

#endif // GFST_RANGE_INDEX_HPP
