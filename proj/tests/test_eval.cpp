#include <catch2/catch_amalgamated.hpp>

#include <gfst/analysis.hpp>
#include <gfst/eval.hpp>
#include <gfst/glushkov.hpp>
#include <gfst/oracle.hpp>

#include "support/generators.hpp"

using namespace gfst;
using gfst::testing::ExprGen;
using gfst::testing::all_strings;

namespace {

const char* kFigure1 = "(('a':'d0d4') 2 ('b':'d3') 3 | ('a':'d3') 3 'b' 2):'d0'";

// q0 -a-> q1 -b-> q3 and q0 -a-> q2 -b-> q3, q3 appends d0
Transducer hand_figure1(Weight w1, Weight w2, Weight w3, Policy policy) {
    Transducer t = make_transducer(4, policy);
    t.transitions = {
        {0, {'a', 'a'}, 1, {U"d0d4", w2}},
        {0, {'a', 'a'}, 2, {U"d3", w3}},
        {1, {'b', 'b'}, 3, {U"d3", w3}},
        {2, {'b', 'b'}, 3, {U"", w2}},
    };
    t.tau[3] = Effect{U"d0", w1};
    return t;
}

enum class Outcome { Reject, Match, Ambiguous };

std::pair<Outcome, OutputString> run(const Evaluator& ev, std::u32string_view x) {
    try {
        auto r = ev.evaluate(x);
        if (!r) return {Outcome::Reject, U""};
        return {Outcome::Match, *r};
    } catch (const RuntimeAmbiguity&) {
        return {Outcome::Ambiguous, U""};
    }
}

std::pair<Outcome, OutputString> expected(const Relation& rel, std::u32string_view x, Policy p) {
    auto v = oracle_best(rel, x, p);
    switch (v.kind) {
        case OracleVerdict::Kind::NoMatch: return {Outcome::Reject, U""};
        case OracleVerdict::Kind::Match: return {Outcome::Match, v.out};
        default: return {Outcome::Ambiguous, U""};
    }
}

} // namespace

TEST_CASE("two-branch example picks by policy") {
    auto tmin = compile(kFigure1, Policy::Min);
    auto tmax = compile(kFigure1, Policy::Max);
    CHECK(evaluate(tmin, U"ab") == OutputString(U"d3d0"));
    CHECK(evaluate(tmax, U"ab") == OutputString(U"d0d4d3d0"));
    CHECK_FALSE(evaluate(tmin, U"a"));
    CHECK_FALSE(evaluate(tmin, U""));
    CHECK_FALSE(evaluate(tmin, U"abb"));
    CHECK_FALSE(evaluate(tmin, U"zz"));

    CHECK(evaluate(hand_figure1(1, 2, 3, Policy::Min), U"ab") == OutputString(U"d3d0"));
    CHECK(evaluate(hand_figure1(1, 2, 3, Policy::Max), U"ab") == OutputString(U"d0d4d3d0"));
}

TEST_CASE("equal weights with different outputs are ambiguous at run time") {
    CHECK_THROWS_AS(evaluate(hand_figure1(1, 2, 2, Policy::Min), U"ab"), RuntimeAmbiguity);
    // a tie that the winning run avoids is harmless
    auto t = compile("'a':'x' 'b' 5 | 'a':'y' 'b' 5 | 'a' 'b':'z' 9");
    CHECK(evaluate(t, U"ab") == OutputString(U"z"));
    CHECK_THROWS_AS(evaluate(compile("'a':'x' 'b' 5 | 'a':'y' 'b' 5", Policy::Max), U"ab"), RuntimeAmbiguity);
    // equal outputs are not ambiguous
    CHECK(evaluate(compile("'a':'x' 'b' | 'a' 'b':'x'"), U"ab") == OutputString(U"x"));
}

TEST_CASE("empty input and state output") {
    CHECK(evaluate(compile("'':'e' | 'a'"), U"") == OutputString(U"e"));
    CHECK(evaluate(compile("'a'*"), U"") == OutputString(U""));
    CHECK(evaluate(compile("'a'*"), U"aaaa") == OutputString(U""));
    auto running = compile("(:'a' 'a' ('a':'bc') 'c' 7) | ('bd')* 9");
    CHECK(evaluate(running, U"aac") == OutputString(U"abc"));
    CHECK(evaluate(running, U"bdbd") == OutputString(U""));
    CHECK(evaluate(running, U"") == OutputString(U""));
    CHECK_FALSE(evaluate(running, U"bdb"));
}

TEST_CASE("ranges and non-ASCII input") {
    auto t = compile("([a-z]:'L' | [0-9]:'D' | 'é':'E')*");
    CHECK(evaluate(t, U"a1é") == OutputString(U"LDE"));
    CHECK_FALSE(evaluate(t, U"A"));
}

TEST_CASE("trace columns") {
    auto t = compile(kFigure1, Policy::Min);
    Evaluator ev(t);
    auto table = ev.trace(U"ab");
    REQUIRE(table.columns.size() == 3);
    CHECK(table.columns[0].size() == 1);
    CHECK(table.columns[0][0].prev_state == kNoState);
    CHECK(table.columns[1].size() == 2);
    CHECK(table.columns[2].size() == 2);
    auto* c = table.find(2, 4);
    REQUIRE(c);
    CHECK(c->prev_state == 3);
    CHECK(c->weight == 3);

    auto dead = ev.trace(U"zab");
    CHECK(dead.columns[1].empty());
    CHECK(dead.columns[3].empty());
    CHECK_FALSE(ev.resolve(dead));
}

TEST_CASE("sparse and dense tables agree") {
    ExprGen gen(31);
    gen.sugar = true;
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        Transducer t;
        try {
            t = compile(gen.expr(6), i % 2 ? Policy::Min : Policy::Max);
        } catch (const AmbiguityError&) {
            continue;
        }
        Evaluator ev(t);
        for (const auto& x : all_strings(U"abc", 3)) {
            REQUIRE(ev.trace(x) == ev.trace_dense(x));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("sparse and dense tables agree on arbitrary machines") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        auto t = testing::random_machine(rng, 6, 14, 'c', 2);
        t.transitions.erase(std::remove_if(t.transitions.begin(), t.transitions.end(),
                                           [](auto& tr) { return tr.label.hi < 'a'; }),
                            t.transitions.end());
        Evaluator ev(t);
        for (const auto& x : all_strings(U"abc", 3)) REQUIRE(ev.trace(x) == ev.trace_dense(x));
    }
}

TEST_CASE("evaluation agrees with the oracle") {
    ExprGen gen(77);
    int compiled = 0;
    for (int i = 0; i < 400; ++i) {
        auto e = gen.expr(5);
        auto policy = i % 2 ? Policy::Min : Policy::Max;
        Transducer t;
        try {
            t = compile(e, policy);
        } catch (const AmbiguityError&) {
            continue;
        }
        ++compiled;
        auto rel = oracle_valuate(*e, 4);
        Evaluator ev(t);
        for (const auto& x : all_strings(U"abc", 4)) {
            INFO(to_string(*e) << " on " << encode_utf8(x));
            REQUIRE(run(ev, x) == expected(rel, x, policy));
        }
    }
    CHECK(compiled > 200);
}

TEST_CASE("evaluation agrees with the oracle on the tricky weight order") {
    auto e = parse("'a':'x' 5 'b' 1 | 'a':'y' 'b' 2");
    auto rel = oracle_valuate(*e, 2);
    for (auto p : {Policy::Min, Policy::Max}) {
        auto t = compile(e, p);
        Evaluator ev(t);
        CHECK(run(ev, U"ab") == expected(rel, U"ab", p));
    }
}

TEST_CASE("cell visits stay within the table size") {
    auto t = compile("([a-c]:'x' 1 | [b-d]:'y' 2 | 'a' 'b' 3)*");
    Evaluator ev(t);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> sym('a', 'd');
    for (std::size_t n : {0u, 1u, 10u, 500u}) {
        std::u32string x;
        for (std::size_t i = 0; i < n; ++i) x += static_cast<Symbol>(sym(rng));
        EvalStats sparse, dense;
        auto a = ev.evaluate(x, &sparse);
        auto b = ev.evaluate_dense(x, &dense);
        CHECK(a == b);
        CHECK(sparse.cell_visits <= t.state_count * (n + 1));
        CHECK(dense.cell_visits == t.state_count * n);
        CHECK(sparse.transition_probes <= t.transitions.size() * n);
    }
}

TEST_CASE("evaluation is deterministic") {
    auto t = compile("([a-c]:'x' 1 | [b-d]:'y' 1 | 'b':'z' 2)*", Policy::Max);
    Evaluator ev(t);
    auto first = run(ev, U"abcbdab");
    for (int i = 0; i < 20; ++i) {
        Evaluator again(t);
        CHECK(run(again, U"abcbdab") == first);
    }
}

TEST_CASE("trace of the hand-built two-branch machine") {
    auto t = hand_figure1(1, 2, 3, Policy::Min);
    auto table = trace(t, U"ab");
    auto states = [&](std::size_t col) {
        std::vector<StateId> s;
        for (const auto& c : table.columns[col]) s.push_back(c.state);
        return s;
    };
    CHECK(states(0) == std::vector<StateId>{0});
    CHECK(states(1) == std::vector<StateId>{1, 2});
    CHECK(states(2) == std::vector<StateId>{3});
    CHECK(table.find(2, 3)->prev_state == 2);
    CHECK_FALSE(evaluate(t, U"a"));

    auto empty = trace(t, U"");
    REQUIRE(empty.columns.size() == 1);
    REQUIRE(empty.columns[0].size() == 1);
    CHECK(empty.columns[0][0].state == 0);
}
