#include <doctest.h>

#include "oracles.hpp"
#include "sirup/graph.hpp"

using namespace sirup;

namespace {

std::set<std::string> names(const LabelledGraph& g, const std::vector<int>& vs) {
    std::set<std::string> out;
    for (int v : vs) out.insert(g.name(v));
    return out;
}

} // namespace

TEST_CASE("parse: two nodes and one edge") {
    auto g = parse("T(a). R(a,b). F(b).");
    CHECK(g.size() == 2);
    CHECK(g.edges().size() == 1);
    CHECK(g.has_label(g.node("a"), kT));
    CHECK(g.has_edge(g.node("a"), g.node("b"), "R"));
}

TEST_CASE("parse: q2 is a three-node path") {
    auto g = oracle::load("q2.cq");
    CHECK(g.size() == 3);
    CHECK(g.labels(g.node("a")) == std::set<std::string, std::less<>>{"T"});
    CHECK(g.labels(g.node("b")) == std::set<std::string, std::less<>>{"T"});
    CHECK(g.labels(g.node("c")) == std::set<std::string, std::less<>>{"F"});
    CHECK(shape(g).is_path);
}

TEST_CASE("parse: empty text and comments") {
    CHECK(parse("").empty());
    CHECK(parse("# nothing here\n\n").empty());
}

TEST_CASE("parse: errors") {
    CHECK_THROWS_AS(parse("T(a"), Error);
    try {
        parse("R(a,b). R(a).");
        FAIL("expected an arity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::arity);
    }
    try {
        parse("T(a). %");
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::syntax);
    }
}

TEST_CASE("serialize then parse is the identity on random graphs") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto g = oracle::random_graph(rng, 1 + i % 7, i % 9, {"T", "F", "A"});
        auto back = parse(serialize(g));
        CHECK(back.atom_strings() == g.atom_strings());
        CHECK(serialize(back) == serialize(g));
    }
}

TEST_CASE("serialize: unary atoms first, sorted") {
    auto g = parse("R(b,a). T(b). F(a).");
    CHECK(serialize(g) == "F(a).\nT(b).\nR(b,a).\n");
}

TEST_CASE("shape: q4") {
    auto g = oracle::load("q4.cq");
    auto s = shape(g);
    CHECK(s.is_ditree);
    CHECK(s.solitary_f.size() == 1);
    CHECK(s.solitary_t.size() == 1);
    CHECK(s.ft_twins.empty());
    REQUIRE(s.lambda_span);
    CHECK(*s.lambda_span == 1);
}

TEST_CASE("shape: q6") {
    auto g = oracle::load("q6.cq");
    auto s = shape(g);
    CHECK(s.is_ditree);
    CHECK(names(g, s.solitary_f) == std::set<std::string>{"f"});
    CHECK(names(g, s.solitary_t) == std::set<std::string>{"t0", "t1"});
    CHECK(names(g, s.ft_twins) == std::set<std::string>{"n4"});
    REQUIRE(s.lambda_span);
    CHECK(*s.lambda_span == 2);
}

TEST_CASE("shape: single F node") {
    auto s = shape(parse("F(x)."));
    CHECK(s.is_ditree);
    CHECK(s.is_1cq);
    REQUIRE(s.lambda_span);
    CHECK(*s.lambda_span == 0);
}

TEST_CASE("shape invariants on random ditrees") {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto g = oracle::random_ditree(rng, 1 + i % 7, {"F", "T"}, 0.35);
        auto s = shape(g);
        CHECK(s.is_ditree);
        int f = 0, t = 0;
        for (std::size_t v = 0; v < g.size(); ++v) {
            bool hf = g.has_label(static_cast<int>(v), kF), ht = g.has_label(static_cast<int>(v), kT);
            f += hf && !ht;
            t += ht && !hf;
        }
        CHECK(static_cast<int>(s.solitary_f.size()) == f);
        CHECK(static_cast<int>(s.solitary_t.size()) == t);
        CHECK(s.is_1cq == (f == 1));
        bool lambda = s.is_1cq;
        if (lambda) {
            Ditree tree(g);
            for (int y : s.solitary_t)
                if (tree.comparable(y, s.solitary_f[0])) lambda = false;
        }
        CHECK(s.lambda_span.has_value() == lambda);
        if (lambda) CHECK(*s.lambda_span == t);
    }
}

TEST_CASE("shape: cycles are not dags") {
    auto s = shape(parse("R(a,b). R(b,a)."));
    CHECK_FALSE(s.is_dag);
    CHECK_FALSE(s.is_ditree);
}

TEST_CASE("solitary pairs: q3 comparable") {
    auto g = oracle::load("q3.cq");
    bool comparable = false;
    for (const auto& p : solitary_pairs(g)) comparable |= p.comparable;
    CHECK(comparable);
    CHECK_FALSE(is_quasi_symmetric(g));
}

TEST_CASE("solitary pairs: q4 symmetric at distance 2") {
    auto g = oracle::load("q4.cq");
    auto ps = solitary_pairs(g);
    REQUIRE(ps.size() == 1);
    CHECK_FALSE(ps[0].comparable);
    CHECK(ps[0].symmetric);
    CHECK(ps[0].distance == 2);
    CHECK(is_quasi_symmetric(g));
}

TEST_CASE("solitary pairs: q5 not symmetric") {
    auto g = oracle::load("q5.cq");
    auto ps = solitary_pairs(g);
    REQUIRE(ps.size() == 1);
    CHECK(g.name(ps[0].t) == "m");
    CHECK(g.name(ps[0].f) == "n4");
    CHECK_FALSE(ps[0].comparable);
    Ditree tree(g);
    CHECK(tree.delta(tree.root(), ps[0].t) == 1);
    CHECK(tree.delta(tree.root(), ps[0].f) == 2);
    CHECK_FALSE(ps[0].symmetric);
    CHECK_FALSE(is_quasi_symmetric(g));
}

TEST_CASE("core: q4 is minimal, a duplicated branch is not") {
    auto q4 = oracle::load("q4.cq");
    auto r = core_ditree(q4);
    CHECK(r.was_minimal);
    CHECK(r.core.atom_strings() == q4.atom_strings());

    auto dup = parse("T(z). F(x). T(z2). R(y,z). R(y,x). R(y,z2).");
    auto d = core_ditree(dup);
    CHECK_FALSE(d.was_minimal);
    CHECK(d.core.size() == 3);
    CHECK(oracle::brute_hom(dup, d.core));
    CHECK(oracle::brute_hom(d.core, dup));
}

TEST_CASE("core: single node") {
    auto r = core_ditree(parse("F(x)."));
    CHECK(r.was_minimal);
    CHECK(r.core.size() == 1);
}

TEST_CASE("core: agrees with brute-force sub-CQ search on trees up to 7 nodes") {
    std::mt19937 rng(23);
    for (int i = 0; i < 150; ++i) {
        auto g = oracle::random_ditree(rng, 1 + i % 7, {"F", "T"}, 0.3);
        auto r = core_ditree(g);
        std::size_t expected = oracle::core_size(g);
        CHECK(r.core.size() == expected);
        CHECK(r.was_minimal == (expected == g.size()));
        CHECK(oracle::brute_hom(g, r.core));
        CHECK(oracle::brute_hom(r.core, g));
    }
}

TEST_CASE("core: non-ditree input is rejected") {
    try {
        core_ditree(parse("R(a,b). R(b,a)."));
        FAIL("expected not_ditree");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_ditree);
    }
}
