// Acceptance gate: one line per criterion, non-zero exit when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <gfst/gfst.hpp>

#include "support/generators.hpp"

using namespace gfst;
using gfst::testing::all_strings;
using gfst::testing::ExprGen;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    std::string note; // printed on success

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

const char* kFigure1 = "(('a':'d0d4') 2 ('b':'d3') 3 | ('a':'d3') 3 'b' 2):'d0'";

Transducer hand_figure1(Weight w2, Weight w3) {
    Transducer t = make_transducer(4, Policy::Min);
    t.transitions = {
        {0, {'a', 'a'}, 1, {U"d0d4", w2}},
        {0, {'a', 'a'}, 2, {U"d3", w3}},
        {1, {'b', 'b'}, 3, {U"d3", w3}},
        {2, {'b', 'b'}, 3, {U"", w2}},
    };
    t.tau[3] = Effect{U"d0", 1};
    return t;
}

// conflict-free machines compiled from random expressions, with their sources
struct Certified {
    AstPtr expr;
    Transducer machine;
};

std::vector<Certified> certified_corpus(std::size_t want) {
    ExprGen gen(2024);
    std::vector<Certified> out;
    while (out.size() < want) {
        auto e = gen.expr(5);
        try {
            auto t = compile(e, out.size() % 2 ? Policy::Min : Policy::Max);
            if (is_functional(t).certified) out.push_back({e, std::move(t)});
        } catch (const AmbiguityError&) {
        }
    }
    return out;
}

Outcome figure1() {
    Outcome o;
    o.require(evaluate(compile(kFigure1, Policy::Min), U"ab") == OutputString(U"d3d0"), "MIN output");
    o.require(evaluate(compile(kFigure1, Policy::Max), U"ab") == OutputString(U"d0d4d3d0"), "MAX output");
    return o;
}

Outcome glushkov_example() {
    Outcome o;
    // x0=a, x1=b, x2=d, x3=c, w0=7, w1=9
    auto s = analyze(localize(*desugar(parse("(:'a' 'a' ('a':'bc') 'c' 7) | ('bd')* 9"))));
    o.require(s.lambda == Effect{U"", 9}, "lambda");
    o.require(s.ends == PositionMap{{3, {U"", 7}}, {5, {U"", 9}}}, "ends");
    o.require(s.begins == PositionMap{{1, {U"a", 0}}, {4, {U"", 0}}}, "begins");
    o.require(s.links == LinkMap{{{1, 2}, {U"", 0}}, {{2, 3}, {U"bc", 0}}, {{4, 5}, {U"", 0}}, {{5, 4}, {U"", 0}}},
              "links");
    return o;
}

Outcome compactness() {
    Outcome o;
    ExprGen gen(7);
    gen.sugar = true;
    int built = 0;
    while (built < 500) {
        auto e = desugar(gen.expr(6));
        auto expr = localize(*e);
        GlushkovSets sets;
        try {
            sets = analyze(expr);
        } catch (const AmbiguityError&) {
            continue;
        }
        ++built;
        auto t = assemble(expr, sets, Policy::Max);
        o.require(t.state_count == expr.position_count() + 1, "state count");
        o.require(t.transitions.size() == sets.links.size() + sets.begins.size(), "transition count");
        for (const auto& tr : t.transitions) o.require(tr.label.valid(), "epsilon or empty label");
    }
    return o;
}

Outcome range_index() {
    Outcome o;
    auto brute = [](const std::vector<RangeLabel>& r, Symbol x) {
        std::vector<RangeIndex::RangeId> ids;
        for (RangeIndex::RangeId j = 0; j < r.size(); ++j)
            if (r[j].contains(x)) ids.push_back(j);
        return ids;
    };
    auto agrees = [&](const std::vector<RangeLabel>& r, Symbol upto) {
        RangeIndex idx(r);
        for (Symbol x = 0; x <= upto; ++x) {
            auto got = idx.lookup(x);
            if (std::vector<RangeIndex::RangeId>(got.begin(), got.end()) != brute(r, x)) return false;
        }
        return true;
    };
    std::vector<RangeLabel> paper{{1, 50}, {20, 80}};
    RangeIndex paper_index(paper);
    auto p = paper_index.breakpoints();
    o.require(std::vector<Symbol>(p.begin(), p.end()) == std::vector<Symbol>{0, 19, 50, 80}, "breakpoints");
    o.require(agrees(paper, 100), "lookup on the two-range example");

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> count(0, 20), sym(0, 300);
    for (int i = 0; i < 500; ++i) {
        std::vector<RangeLabel> r;
        for (int k = count(rng); k > 0; --k) {
            Symbol a = sym(rng), b = sym(rng);
            r.push_back({std::min(a, b), std::max(a, b)});
        }
        o.require(agrees(r, 300), "random lookup");
    }
    return o;
}

Outcome oracle_equivalence(const std::vector<Certified>& corpus) {
    Outcome o;
    const auto inputs = all_strings(U"abc", 4);
    std::size_t accepted = 0, states = 0;
    for (const auto& c : corpus) {
        auto rel = oracle_valuate(*c.expr, 4);
        Evaluator ev(c.machine);
        states += c.machine.state_count;
        for (const auto& x : inputs) {
            auto want = oracle_best(rel, x, c.machine.policy);
            std::optional<OutputString> got;
            try {
                got = ev.evaluate(x);
            } catch (const RuntimeAmbiguity&) {
                o.require(false, "ambiguous run on " + to_string(*c.expr));
                continue;
            }
            bool same = want.kind == OracleVerdict::Kind::Match ? got == want.out
                                                                 : (!got && want.kind == OracleVerdict::Kind::NoMatch);
            o.require(same, to_string(*c.expr) + " on '" + encode_utf8(x) + "'");
            accepted += got.has_value();
        }
    }
    o.note = std::to_string(corpus.size()) + " machines, " + std::to_string(states) + " states, "
             + std::to_string(corpus.size() * inputs.size()) + " inputs, " + std::to_string(accepted) + " accepted";
    return o;
}

Outcome soundness(const std::vector<Certified>& corpus) {
    Outcome o;
    const auto inputs = all_strings(U"abc", 4);
    std::size_t violations = 0;
    for (const auto& c : corpus) {
        auto rel = oracle_valuate(*c.expr, 4);
        Evaluator ev(c.machine);
        for (const auto& x : inputs) {
            if (oracle_best(rel, x, c.machine.policy).kind == OracleVerdict::Kind::Ambiguous) ++violations;
            try {
                ev.evaluate(x);
            } catch (const RuntimeAmbiguity&) {
                ++violations;
            }
        }
    }
    o.require(violations == 0, std::to_string(violations) + " violation(s)");
    return o;
}

Outcome conflicts() {
    Outcome o;
    o.require(find_weight_conflicts(hand_figure1(2, 3)).empty(), "w2 != w3 must have no witness");
    auto w = find_weight_conflicts(hand_figure1(2, 2));
    o.require(w.size() == 1, "w2 == w3 must have exactly one witness");
    if (w.size() == 1)
        o.require(w[0].first == 1 && w[0].second == 2 && w[0].target == StateId{3}, "witness must be (q1,q2)->q3");
    return o;
}

Outcome interleaving() {
    Outcome o;
    auto spec = parse_interleave_spec(
        "alphabet Sigma = [a-z]\nalphabet Gamma = [0-9]\n"
        "initial: Sigma\npairs: Sigma->Gamma, Gamma->Sigma\nfinal: Gamma\n");
    o.require(check_coloring(compile("('a' '1' 'b' | 'c') '2'"), spec).ok(), "valid pattern rejected");
    o.require(!check_coloring(compile("('a' '1' | 'c') '2'"), spec).ok(), "invalid pattern accepted");
    return o;
}

Outcome quadratic_bound() {
    Outcome o;
    std::string text = "(";
    for (int i = 0; i < 49; ++i) {
        char lo = static_cast<char>('a' + (i * 7) % 26);
        char hi = static_cast<char>(std::min<int>('z', lo + 3 + i % 11));
        text += (i ? " | " : "") + std::string("[") + lo + "-" + hi + "]:'" + static_cast<char>('A' + i % 26) + "' "
                + std::to_string(i + 1);
    }
    text += ")*";
    auto t = compile(text);
    o.require(t.state_count == 50, "machine must have 50 states");
    Evaluator ev(t);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> sym('a', 'z');
    for (std::size_t n : {0u, 1u, 100u, 1000u, 10000u, 10000u}) {
        std::u32string x;
        for (std::size_t i = 0; i < n; ++i) x += static_cast<Symbol>(sym(rng));
        EvalStats st;
        auto out = ev.evaluate(x, &st);
        o.require(out.has_value(), "input must be accepted");
        o.require(st.cell_visits <= t.state_count * (n + 1), "cell visits above |Q|(|x|+1)");
    }
    return o;
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    int failed = 0;
    std::vector<Certified> corpus;

    auto report = [&](int id, const char* name, double limit, const std::function<Outcome()>& f) {
        auto start = clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(clock::now() - start).count();
        if (limit > 0 && secs > limit) o.require(false, "took longer than " + std::to_string(limit) + " s");
        const auto& extra = o.ok ? o.note : o.detail;
        std::printf("[%s] %d %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name, secs, extra.empty() ? "" : ": ",
                    extra.c_str());
        failed += !o.ok;
    };

    report(1, "two-branch example output by policy", 1, figure1);
    report(2, "glushkov sets of the running example", 0, glushkov_example);
    report(3, "compactness on 500 random expressions", 10, compactness);
    report(4, "range index against brute force", 5, range_index);
    report(5, "oracle equivalence on 300 certified machines", 60, [&] {
        corpus = certified_corpus(300);
        return oracle_equivalence(corpus);
    });
    report(6, "functionality soundness on the same corpus", 60, [&] { return soundness(corpus); });
    report(7, "conflict witnesses", 0, conflicts);
    report(8, "interleaved alphabet validity", 0, interleaving);
    report(9, "quadratic evaluation bound", 1, quadratic_bound);

    std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria passed");
    return failed ? 1 : 0;
}
