#include <doctest.h>

#include "oracles.hpp"
#include "sirup/cactus.hpp"
#include "sirup/datalog.hpp"

using namespace sirup;

namespace {

int solitary_f_count(const LabelledGraph& g) {
    int n = 0;
    for (std::size_t v = 0; v < g.size(); ++v)
        n += g.has_label(static_cast<int>(v), kF) && !g.has_label(static_cast<int>(v), kT);
    return n;
}

std::vector<int> solitary_ts(const LabelledGraph& g) {
    std::vector<int> out;
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.has_label(static_cast<int>(v), kT) && !g.has_label(static_cast<int>(v), kF))
            out.push_back(static_cast<int>(v));
    return out;
}

} // namespace

TEST_CASE("cactus: budding q2 at both Ts gives D2") {
    auto q2 = oracle::load("q2.cq");
    Cactus c = as_cactus(q2);
    c = bud(c, c.graph.node("a"));
    c = bud(c, c.graph.node("b"));
    CHECK(c.segments.size() == 3);
    CHECK(oracle::isomorphic(c.graph, oracle::load("d2.data")));
}

TEST_CASE("cactus: bud needs a solitary T") {
    auto q = parse("F(x). R(x,y). F(y). T(y).");
    Cactus c = as_cactus(q);
    CHECK_THROWS_AS(bud(c, c.graph.node("y")), Error);
    CHECK_THROWS_AS(bud(c, c.graph.node("x")), Error);
}

TEST_CASE("cactus: segment count grows by one per bud on q8") {
    auto q8 = oracle::load("q8.cq");
    std::mt19937 rng(8);
    for (int run = 0; run < 50; ++run) {
        Cactus c = as_cactus(q8);
        const int steps = 1 + run % 4;
        for (int i = 0; i < steps; ++i) {
            auto ts = solitary_ts(c.graph);
            REQUIRE_FALSE(ts.empty());
            std::uniform_int_distribution<int> pick(0, static_cast<int>(ts.size()) - 1);
            const std::size_t before = c.segments.size();
            bud_in_place(c, ts[pick(rng)]);
            CHECK(c.segments.size() == before + 1);
        }
        CHECK(solitary_f_count(c.graph) == 1);
        CHECK(c.graph.has_label(c.root_focus, kF));
        CHECK(shape(c.graph).is_dag);
    }
}

TEST_CASE("cactus: enumeration counts") {
    CHECK(cactuses_up_to(oracle::load("q4.cq"), 2).cactuses.size() == 3);
    CHECK(cactuses_up_to(oracle::load("q6.cq"), 1).cactuses.size() == 4);
    auto zero = cactuses_up_to(oracle::load("q6.cq"), 0);
    REQUIRE(zero.cactuses.size() == 1);
    CHECK(zero.cactuses[0].graph.atom_strings() == oracle::load("q6.cq").atom_strings());
}

TEST_CASE("cactus: skeleton shape counts match a direct recurrence") {
    // Shapes of depth <= d over k labels: s(0) = 1, s(d) = (1 + s(d-1))^k.
    for (int k = 1; k <= 2; ++k) {
        std::size_t s = 1;
        for (int d = 0; d <= 3; ++d) {
            if (d > 0) {
                std::size_t next = 1;
                for (int i = 0; i < k; ++i) next *= 1 + s;
                s = next;
            }
            bool truncated = false;
            CHECK(skeleton_shapes(k, d, 100000, truncated).size() == s);
            CHECK_FALSE(truncated);
        }
    }
}

TEST_CASE("cactus: structural invariants up to depth 2") {
    for (const char* name : {"q4.cq", "q5.cq", "q6.cq", "q8.cq"}) {
        auto q = oracle::load(name);
        const int k = static_cast<int>(shape(q).solitary_t.size());
        for (const auto& c : cactuses_up_to(q, 2).cactuses) {
            CHECK(solitary_f_count(c.graph) == 1);
            CHECK(c.graph.has_label(c.root_focus, kF));
            CHECK(shape(c.graph).is_dag);
            CHECK(c.graph.size() == q.size() + (c.segments.size() - 1) * (q.size() - 1));
            for (std::size_t s = 0; s < c.segments.size(); ++s) {
                const auto& seg = c.segments[s];
                CHECK(static_cast<int>(seg.children.size()) <= k);
                if (s == 0) CHECK(seg.parent == -1);
                else CHECK(c.segments[seg.parent].depth + 1 == seg.depth);
                // The segment is a homomorphic copy of q with F/T replaced by A.
                for (const auto& e : q.edges())
                    CHECK(c.graph.has_edge(seg.qmap[e.src], seg.qmap[e.dst], e.pred));
            }
        }
    }
}

TEST_CASE("defocus: no solitary F and idempotent") {
    for (const auto& c : cactuses_up_to(oracle::load("q5.cq"), 2).cactuses) {
        auto d = defocus_root(c);
        CHECK(solitary_f_count(d) == 0);
        CHECK(d.has_label(c.root_focus, kA));
        CHECK(defocus_root(d, c.root_focus).atom_strings() == d.atom_strings());
    }
}

TEST_CASE("defocus: Sigma derives P at the root focus of C°") {
    auto q5 = oracle::load("q5.cq");
    auto sigma = build_programs(q5).sigma;
    for (const auto& c : cactuses_up_to(q5, 2).cactuses) {
        auto d = defocus_root(c);
        auto cl = fixpoint(sigma, d);
        CHECK(cl.holds(kP, d.name(c.root_focus)));
    }
}

TEST_CASE("boundedness: q5 at depth 1, q8 at depth 2") {
    auto w5 = boundedness_witness(oracle::load("q5.cq"), 1, 4, false);
    CHECK(w5.witness);
    CHECK(w5.d == 1);
    auto w8 = boundedness_witness(oracle::load("q8.cq"), 2, 5, false);
    CHECK(w8.witness);
    CHECK(w8.d == 2);
    CHECK_THROWS_AS(boundedness_witness(oracle::load("q5.cq"), 2, 2, false), Error);
}

TEST_CASE("boundedness: rooted q6 has no witness up to 3") {
    // Span 2 has 458329 skeletons of depth 4 already, so probe 6 hits the cap.
    auto w = boundedness_witness(oracle::load("q6.cq"), 3, 6, true);
    CHECK_FALSE(w.witness);
    CHECK(w.d == 3);
    CHECK(w.truncated);
    auto exact = boundedness_witness(oracle::load("q6.cq"), 2, 3, true);
    CHECK_FALSE(exact.witness);
    CHECK_FALSE(exact.truncated);
}

TEST_CASE("rewriting: disjunct counts") {
    auto u5 = ucq_rewriting(oracle::load("q5.cq"), 1, RewriteTarget::delta);
    CHECK(u5.disjuncts.size() == 2);
    auto u8 = ucq_rewriting(oracle::load("q8.cq"), 2, RewriteTarget::delta);
    CHECK(u8.disjuncts.size() == 3);
    auto plain = parse("F(x). R(x,y). F(y). T(y).");
    auto u0 = ucq_rewriting(plain, 0, RewriteTarget::delta);
    REQUIRE(u0.disjuncts.size() == 1);
    CHECK(u0.disjuncts[0].body.atom_strings() == plain.atom_strings());
}

TEST_CASE("rewriting: sigma requires focusedness") {
    CHECK_THROWS_AS(ucq_rewriting(oracle::load("q6.cq"), 1, RewriteTarget::sigma), Error);
    auto u = ucq_rewriting(oracle::load("q5.cq"), 1, RewriteTarget::sigma);
    CHECK(u.disjuncts.size() == 3);
}

TEST_CASE("rewriting: q5 agrees with the certain-answer oracle") {
    auto q5 = oracle::load("q5.cq");
    auto u = ucq_rewriting(q5, 1, RewriteTarget::delta);
    auto deep = cactuses_up_to(q5, 3).cactuses;
    std::mt19937 rng(55);
    int yes = 0;
    for (int i = 0; i < 30; ++i) {
        auto d = oracle::perturbed(rng, deep[i % deep.size()].graph, 8);
        bool expected = oracle::certain(q5, d);
        CHECK(ucq_holds(u, d) == expected);
        yes += expected;
    }
    CHECK(yes > 0);
    CHECK(yes < 30);
}

TEST_CASE("focus: q5 focused, q6 not, FT-node image") {
    CHECK(check_focused(oracle::load("q5.cq"), 2).holds_up_to_depth);
    auto r = check_focused(oracle::load("q6.cq"), 2);
    CHECK_FALSE(r.holds_up_to_depth);
    REQUIRE(r.counterexample);
    const auto& ce = *r.counterexample;
    CHECK(verify_hom(ce.from.graph, ce.to.graph, ce.hom));
    int image = ce.hom.map[ce.from.root_focus];
    CHECK(ce.to.graph.has_label(image, kF));
    CHECK(ce.to.graph.has_label(image, kT));
}

TEST_CASE("focus: no solitary T holds vacuously") {
    CHECK(check_focused(parse("F(x). R(x,y). F(y). T(y)."), 3).holds_up_to_depth);
    CHECK_THROWS_AS(check_focused(oracle::load("q5.cq"), 0), Error);
}
