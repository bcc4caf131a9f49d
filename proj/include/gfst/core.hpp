// core.hpp -- symbols, ranges, effects and the transducer type shared by every
// other part of the library.

#ifndef GFST_CORE_HPP
#define GFST_CORE_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfst {

/// Unicode scalar value.
using Symbol = char32_t;
using Weight = std::int64_t;
using StateId = std::uint32_t;
using OutputString = std::u32string;

inline constexpr Symbol kMaxSymbol = 0x10FFFF;

constexpr bool is_scalar_value(Symbol s) noexcept {
    return s <= kMaxSymbol && !(s >= 0xD800 && s <= 0xDFFF);
}

// Errors {{{

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a precondition of an operation is violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// The expression cannot be compiled into a functional machine (empty-word
/// union clash, non-empty output under a star, colliding links).
class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Two equally weighted runs with different outputs met during evaluation.
class RuntimeAmbiguity : public Error {
public:
    using Error::Error;
};

/// Malformed artifact or alphabet specification file.
class FormatError : public Error {
public:
    using Error::Error;
};

// }}}

inline Weight add_weights(Weight a, Weight b) {
    Weight r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("weight overflow: " + std::to_string(a) + " + " + std::to_string(b));
    return r;
}

/// Inclusive interval [lo, hi] of symbols.
struct RangeLabel {
    Symbol lo = 0;
    Symbol hi = 0;

    constexpr bool contains(Symbol s) const noexcept { return lo <= s && s <= hi; }
    constexpr bool valid() const noexcept { return lo <= hi && is_scalar_value(lo) && is_scalar_value(hi); }
    constexpr std::uint64_t size() const noexcept { return std::uint64_t{hi} - lo + 1; }

    friend constexpr auto operator<=>(const RangeLabel&, const RangeLabel&) = default;
};

inline RangeLabel make_range(Symbol lo, Symbol hi) {
    RangeLabel r{lo, hi};
    if (!r.valid())
        throw ContractError("invalid range [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    return r;
}

constexpr std::optional<RangeLabel> range_intersect(RangeLabel a, RangeLabel b) noexcept {
    Symbol lo = std::max(a.lo, b.lo);
    Symbol hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return RangeLabel{lo, hi};
}

/// Element of the (output string, weight) monoid.
struct Effect {
    OutputString out;
    Weight weight = 0;

    friend bool operator==(const Effect&, const Effect&) = default;
    friend auto operator<=>(const Effect&, const Effect&) = default;
};

inline Effect effect_mul(const Effect& a, const Effect& b) {
    return Effect{a.out + b.out, add_weights(a.weight, b.weight)};
}

/// Absent effects act as the multiplicative zero.
inline std::optional<Effect> effect_mul(const std::optional<Effect>& a, const std::optional<Effect>& b) {
    if (!a || !b) return std::nullopt;
    return effect_mul(*a, *b);
}

/// Lexicographic order on equal-length weight sequences where the last
/// element dominates and ties fall back to the prefix.
inline std::strong_ordering lex_compare(std::span<const Weight> a, std::span<const Weight> b) {
    if (a.size() != b.size())
        throw ContractError("lex_compare: weight sequences differ in length ("
                            + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    for (std::size_t i = a.size(); i-- > 0;) {
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

enum class Policy { Min, Max };

/// True when a candidate ordered `c` relative to the incumbent should replace it.
constexpr bool is_better(std::strong_ordering c, Policy p) noexcept {
    return p == Policy::Max ? c > 0 : c < 0;
}

inline const char* to_string(Policy p) noexcept { return p == Policy::Max ? "max" : "min"; }

inline Policy parse_policy(const std::string& s) {
    if (s == "max") return Policy::Max;
    if (s == "min") return Policy::Min;
    throw ContractError("unknown policy '" + s + "' (expected min or max)");
}

struct Transition {
    StateId src = 0;
    RangeLabel label;
    StateId dst = 0;
    Effect eff;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Epsilon-free ranged transducer with state outputs. States are dense ids
/// [0, state_count); `tau` and `colors` are indexed by state.
struct Transducer {
    std::size_t state_count = 1;
    StateId initial = 0;
    std::vector<Transition> transitions;
    std::vector<std::optional<Effect>> tau = std::vector<std::optional<Effect>>(1);
    std::vector<std::optional<std::string>> colors = std::vector<std::optional<std::string>>(1);
    Policy policy = Policy::Max;

    friend bool operator==(const Transducer&, const Transducer&) = default;

    /// Throws ContractError describing the first broken structural invariant.
    void validate() const {
        if (state_count == 0) throw ContractError("transducer has no states");
        if (initial >= state_count) throw ContractError("initial state out of range");
        if (tau.size() != state_count) throw ContractError("tau table size mismatch");
        if (colors.size() != state_count) throw ContractError("color table size mismatch");
        for (const auto& t : transitions) {
            if (t.src >= state_count || t.dst >= state_count)
                throw ContractError("transition " + std::to_string(t.src) + "->" + std::to_string(t.dst)
                                    + " references a missing state");
            if (!t.label.valid())
                throw ContractError("transition " + std::to_string(t.src) + "->" + std::to_string(t.dst)
                                    + " has an invalid label");
        }
    }
};

/// Allocates a transducer with `n` states and no transitions.
inline Transducer make_transducer(std::size_t n, Policy policy = Policy::Max) {
    Transducer t;
    t.state_count = n;
    t.tau.assign(n, std::nullopt);
    t.colors.assign(n, std::nullopt);
    t.policy = policy;
    return t;
}

} // namespace gfst

#endif // GFST_CORE_HPP
