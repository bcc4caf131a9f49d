// Test-only generators and brute-force references.

#ifndef GFST_TESTS_GENERATORS_HPP
#define GFST_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include <gfst/gfst.hpp>

namespace gfst::testing {

/// Random expressions over a small alphabet. Sugar nodes are produced only
/// when `sugar` is set.
struct ExprGen {
    std::mt19937_64 rng;
    std::u32string symbols = U"abc";
    bool sugar = false;
    bool weights = true;
    bool outputs = true;
    std::vector<std::string> alphabets; // random annotations when non-empty

    explicit ExprGen(std::uint64_t seed) : rng(seed) {}

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    AstPtr leaf() {
        if (pick(8) == 0) return ast::epsilon();
        Symbol a = symbols[pick(static_cast<int>(symbols.size()))];
        Symbol b = a;
        if (pick(4) == 0) b = symbols[pick(static_cast<int>(symbols.size()))];
        if (b < a) std::swap(a, b);
        std::optional<std::string> name;
        if (!alphabets.empty() && pick(3) == 0) name = alphabets[pick(static_cast<int>(alphabets.size()))];
        return ast::atom(a, b, name);
    }

    OutputString out_string() {
        static const OutputString pool[] = {U"x", U"y", U"xy", U"", U"z"};
        return pool[pick(5)];
    }

    AstPtr expr(int depth) {
        if (depth <= 1) return leaf();
        int choice = pick(sugar ? 11 : 9);
        switch (choice) {
            case 0: return leaf();
            case 1:
            case 2: return ast::union_of(expr(depth - 1), expr(depth - 1));
            case 3:
            case 4: return ast::concat(expr(depth - 1), expr(depth - 1));
            case 5: return ast::star(expr(depth - 1));
            case 6:
                if (outputs) return ast::output(expr(depth - 1), out_string());
                return expr(depth - 1);
            case 7:
                if (weights) return ast::weight_after(expr(depth - 1), pick(5) - 1);
                return expr(depth - 1);
            case 8:
                if (weights) return ast::weight_before(pick(5) - 1, expr(depth - 1));
                return expr(depth - 1);
            case 9: return ast::plus(expr(depth - 1));
            default: return ast::optional(expr(depth - 1));
        }
    }
};

/// Every string over `symbols` with length <= max_len, shortest first.
inline std::vector<std::u32string> all_strings(std::u32string_view symbols, std::size_t max_len) {
    std::vector<std::u32string> out{U""};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (Symbol s : symbols) out.push_back(out[i] + s);
        begin = end;
    }
    return out;
}

/// Random ranged machine with dense state ids, used where an arbitrary
/// (not expression-derived) machine is wanted.
inline Transducer random_machine(std::mt19937_64& rng, std::size_t states, std::size_t transitions,
                                 Symbol max_symbol, int max_weight) {
    auto pick = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
    Transducer t = make_transducer(states, pick(2) ? Policy::Max : Policy::Min);
    for (std::size_t i = 0; i < transitions; ++i) {
        Symbol a = static_cast<Symbol>(pick(max_symbol + 1));
        Symbol b = static_cast<Symbol>(pick(max_symbol + 1));
        if (b < a) std::swap(a, b);
        if (a >= 0xD800 && a <= 0xDFFF) a = 0xD7FF;
        if (b >= 0xD800 && b <= 0xDFFF) b = 0xE000;
        OutputString out = pick(2) ? U"" : OutputString(1, static_cast<Symbol>('p' + pick(3)));
        t.transitions.push_back({static_cast<StateId>(pick(states)), {a, b}, static_cast<StateId>(pick(states)),
                                 {out, static_cast<Weight>(pick(max_weight + 1))}});
    }
    for (std::size_t s = 0; s < states; ++s)
        if (pick(3) == 0) t.tau[s] = Effect{pick(2) ? U"" : U"f", static_cast<Weight>(pick(max_weight + 1))};
    return t;
}

inline std::u32string U(std::string_view s) { return decode_utf8(s); }

} // namespace gfst::testing

#endif // GFST_TESTS_GENERATORS_HPP
