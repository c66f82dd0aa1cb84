#include <doctest.h>

#include "oracles.hpp"
#include "sirup/classify.hpp"
#include "sirup/datalog.hpp"
#include "sirup/reductions.hpp"

using namespace sirup;

namespace {

bool bfs(const GraphInstance& g) {
    return oracle::reachable(static_cast<int>(g.vertices.size()), g.edges, g.directed, g.s, g.t);
}

// Reduction outputs use only the query's binary predicates and A/T/F.
void check_well_formed(const LabelledGraph& q, const LabelledGraph& d) {
    for (const auto& p : d.unary_predicates()) CHECK((p == kA || p == kT || p == kF));
    auto qb = q.binary_predicates();
    for (const auto& p : d.binary_predicates()) CHECK(qb.count(p) == 1);
}

SolitaryPair q3_pair() {
    auto w = nl_hardness(oracle::load("q3.cq"));
    REQUIRE(w);
    return w->pair;
}

} // namespace

TEST_CASE("graph instances: parse and validate") {
    auto g = parse_graph("s=a t=c a->b b->c");
    CHECK(g.directed);
    CHECK(g.vertices.size() == 3);
    CHECK(g.reachable());
    auto u = parse_graph("s=a t=c undirected c-b b-a");
    CHECK_FALSE(u.directed);
    CHECK(u.reachable());
    CHECK_FALSE(parse_graph("s=a t=c a->b c->b").reachable());
    CHECK_THROWS_AS(parse_graph("a->b"), Error);
}

TEST_CASE("graph instances: random generators agree with BFS") {
    std::mt19937 rng(4);
    for (int i = 0; i < 50; ++i) {
        auto d = random_dag(rng, 6, 8);
        CHECK(d.directed);
        CHECK(d.reachable() == bfs(d));
        auto u = random_undirected(rng, 6, 8);
        CHECK_FALSE(u.directed);
        CHECK(u.reachable() == bfs(u));
    }
}

TEST_CASE("dag reduction: single edge and disconnected") {
    auto q3 = oracle::load("q3.cq");
    auto pair = q3_pair();
    auto one = dag_reduction(q3, pair, parse_graph("s=s t=t s->t"));
    check_well_formed(q3, one);
    CHECK(oracle::certain(q3, one, oracle::brute_fn));
    auto two = dag_reduction(q3, pair, parse_graph("s=s t=t s->a b->t"));
    CHECK_FALSE(oracle::certain(q3, two, oracle::brute_fn));
    CHECK(certain_answer_delta(q3, two).answer == false);
}

TEST_CASE("dag reduction: q4 pair is not eligible") {
    auto q4 = oracle::load("q4.cq");
    auto ps = solitary_pairs(q4);
    REQUIRE(ps.size() == 1);
    CHECK_THROWS_AS(dag_reduction(q4, ps[0], parse_graph("s=s t=t s->t")), Error);
}

TEST_CASE("dag reduction agrees with reachability on random dags") {
    auto q3 = oracle::load("q3.cq");
    auto pair = q3_pair();
    std::mt19937 rng(17);
    int yes = 0;
    for (int i = 0; i < 20; ++i) {
        auto g = random_dag(rng, 5, 6);
        auto d = dag_reduction(q3, pair, g);
        check_well_formed(q3, d);
        bool answer = oracle::certain(q3, d);
        CHECK(answer == bfs(g));
        yes += answer;
    }
    CHECK(yes > 0);
    CHECK(yes < 20);
}

TEST_CASE("undirected reduction") {
    auto q4 = oracle::load("q4.cq");
    CHECK(oracle::certain(q4, undirected_reduction(q4, parse_graph("s=s t=t undirected s-t")), oracle::brute_fn));
    CHECK_FALSE(oracle::certain(q4, undirected_reduction(q4, parse_graph("s=s t=t undirected s-a b-t"))));
    std::mt19937 rng(29);
    int yes = 0;
    for (int i = 0; i < 20; ++i) {
        auto g = random_undirected(rng, 5, 5);
        auto d = undirected_reduction(q4, g);
        check_well_formed(q4, d);
        bool answer = oracle::certain(q4, d);
        CHECK(answer == bfs(g));
        yes += answer;
    }
    CHECK(yes > 0);
    CHECK(yes < 20);
}

TEST_CASE("blow-up reduction for q4") {
    auto q4 = oracle::load("q4.cq");
    auto v = decide_fo(q4, LambdaOptions{kDefaultMaxSpan, false});
    REQUIRE(v.witness);
    const auto& ps = *v.witness;
    CHECK(oracle::certain(q4, blowup_reduction(ps, q4, parse_graph("s=s t=t undirected s-t"))));
    CHECK_FALSE(oracle::certain(q4, blowup_reduction(ps, q4, parse_graph("s=s t=t undirected s-a b-t"))));
    CHECK(oracle::certain(q4, blowup_reduction(ps, q4, parse_graph("s=s t=s undirected"))));
}

TEST_CASE("blow-up reduction rejects structures satisfying an h-condition") {
    auto q5 = oracle::load("q5.cq");
    auto ps = enumerate_periodic_structures(TypeGraph(1)).structures.at(0);
    CHECK_THROWS_AS(blowup_reduction(ps, q5, parse_graph("s=s t=t undirected s-t")), Error);
}
