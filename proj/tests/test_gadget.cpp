#include <doctest.h>

#include <regex>

#include "oracles.hpp"
#include "sirup/cactus.hpp"
#include "sirup/gadget.hpp"

using namespace sirup;

namespace {

std::string bit_string(const std::vector<int>& bits) {
    std::string s;
    for (int b : bits) s += b ? '1' : '0';
    return s;
}

std::vector<int> bits_of(const std::string& s) {
    std::vector<int> out;
    for (char c : s) out.push_back(c == '1');
    return out;
}

// Reverse of 001c is c100.
bool good_oracle(const std::string& s) { return !std::regex_search(s, std::regex("[01]100")); }

bool mustbranch_oracle(const std::string& s, int d) {
    std::string r(s.rbegin(), s.rend());
    if (std::regex_match(r, std::regex("001[01]"))) return true;
    if (std::regex_match(r, std::regex("001[01](111[01])*001"))) return true;
    if (std::regex_match(r, std::regex("001[01](111[01])*111"))) {
        const int l = (static_cast<int>(r.size()) - 7) / 4;
        return l < d - 1;
    }
    return false;
}

GadgetSpec spec(GatePtr g, int arity, FrameType frame, std::vector<InputTuple> inputs = {}) {
    Formula f;
    f.root = std::move(g);
    f.arity = arity;
    f.inputs = inputs.empty() ? std::vector<InputTuple>{{InputType::up, arity}} : std::move(inputs);
    return {f, frame};
}

int solitary(const LabelledGraph& g, const std::string& yes, const std::string& no) {
    int n = 0;
    for (std::size_t v = 0; v < g.size(); ++v)
        n += g.has_label(static_cast<int>(v), yes) && !g.has_label(static_cast<int>(v), no);
    return n;
}

GatePtr random_gate(std::mt19937& rng, int arity, int gates) {
    if (gates == 0) return var(std::uniform_int_distribution<int>(1, arity)(rng));
    if (gates == 1 || std::bernoulli_distribution(0.4)(rng)) return neg(random_gate(rng, arity, gates - 1));
    const int left = std::uniform_int_distribution<int>(0, gates - 1)(rng);
    return conj(random_gate(rng, arity, left), random_gate(rng, arity, gates - 1 - left));
}

} // namespace

TEST_CASE("gen_good: examples") {
    auto f = gen_good(1);
    CHECK(f.arity == 15);
    REQUIRE(f.inputs.size() == 1);
    CHECK(f.inputs[0].type == InputType::up);
    CHECK(f.eval(std::vector<int>(15, 1)));
    auto bits = std::vector<int>(15, 1);
    const std::string rev = "0100";
    for (int i = 0; i < 4; ++i) bits[5 + i] = rev[i] == '1';
    CHECK_FALSE(f.eval(bits));
}

TEST_CASE("gen_good agrees with a pattern scan") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> bias(0.5, 0.95);
    for (int d = 1; d <= 2; ++d) {
        auto f = gen_good(d);
        int yes = 0;
        for (int i = 0; i < 500; ++i) {
            std::bernoulli_distribution one(bias(rng));
            std::vector<int> bits(f.arity);
            for (auto& b : bits) b = one(rng);
            const bool want = good_oracle(bit_string(bits));
            CHECK(f.eval(bits) == want);
            yes += want;
        }
        CHECK(yes > 0);
        CHECK(yes < 500);
    }
}

TEST_CASE("gen_mustbranch: examples") {
    auto f = gen_mustbranch(4);
    CHECK(f.eval(bits_of("0100")));
    CHECK_FALSE(f.eval(bits_of("1111")));
    CHECK_THROWS_AS(gen_mustbranch(3), Error);
    CHECK_THROWS_AS(gen_mustbranch(16, 1), Error);
}

TEST_CASE("gen_mustbranch agrees with a regex on every input") {
    for (int d = 1; d <= 2; ++d)
        for (int k = 4; k <= 10; ++k) {
            auto f = gen_mustbranch(k, d);
            int yes = 0;
            for (int m = 0; m < (1 << k); ++m) {
                std::vector<int> bits(k);
                for (int i = 0; i < k; ++i) bits[i] = (m >> i) & 1;
                const bool want = mustbranch_oracle(bit_string(bits), d);
                CHECK_MESSAGE(f.eval(bits) == want, k, " ", bit_string(bits));
                yes += want;
            }
            if (k == 4 || k == 7 || (k == 11 && d > 1)) CHECK(yes > 0);
        }
}

TEST_CASE("formula parsing") {
    int arity = 0;
    auto g = parse_gate("or(y1, not(y3))", arity);
    CHECK(arity == 3);
    Formula f{g, 3, {{InputType::up, 3}}};
    CHECK(f.eval({0, 1, 0}));
    CHECK_FALSE(f.eval({0, 1, 1}));
    CHECK_THROWS_AS(parse_gate("and(y1)", arity), Error);
    CHECK_THROWS_AS(parse_gate("xor(y1,y2)", arity), Error);

    auto gs = parse_gadget_file("# two gadgets\ngadget AT\ninputs up:1 down:1\nformula and(y1,y2)\n"
                                "gadget AA\nformula not(y1)\n");
    REQUIRE(gs.size() == 2);
    CHECK(gs[0].frame == FrameType::AT);
    REQUIRE(gs[0].formula.inputs.size() == 2);
    CHECK(gs[0].formula.inputs[1].type == InputType::down);
    CHECK(gs[1].frame == FrameType::AA);
    REQUIRE(gs[1].formula.inputs.size() == 1);
    CHECK(gs[1].formula.inputs[0].length == 1);
    CHECK_THROWS_AS(parse_gadget_file("gadget AA\ninputs up:1\nformula and(y1,y2)\n"), Error);
    CHECK_THROWS_AS(parse_gadget_file("gadget XY\nformula not(y1)\n"), Error);
}

TEST_CASE("formula validation") {
    Formula leaf{var(1), 1, {{InputType::up, 1}}};
    CHECK_THROWS_AS(leaf.validate(), Error);
    Formula wrong{neg(var(2)), 1, {{InputType::up, 1}}};
    CHECK_THROWS_AS(wrong.validate(), Error);
    CHECK_THROWS_AS(build_query({}), Error);
}

TEST_CASE("build_query: a single NOT gadget has the required shape") {
    auto gq = build_query({spec(neg(var(1)), 1, FrameType::AA)});
    const auto& q = gq.q;
    CHECK(solitary(q, kF, kT) == 1);
    CHECK(solitary(q, kT, kF) == 2);
    auto s = shape(q);
    CHECK(s.is_dag);
    CHECK(q.has_label(gq.x, kF));
    CHECK(q.has_label(gq.t0, kT));
    CHECK(q.has_label(gq.t1, kT));
    CHECK_FALSE(q.out_edges(gq.x).empty());
    int twins = 0;
    for (std::size_t v = 0; v < q.size(); ++v)
        if (q.has_label(static_cast<int>(v), kF) && q.has_label(static_cast<int>(v), kT)) {
            ++twins;
            CHECK(q.out_edges(static_cast<int>(v)).empty());
        }
    CHECK(twins >= 1);
}

TEST_CASE("build_query: every assembled query keeps the structural focus criterion") {
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        const int arity = 1 + i % 3;
        std::vector<GadgetSpec> gs{spec(random_gate(rng, arity, 1 + i % 4), arity, FrameType::AA),
                                   spec(random_gate(rng, arity, 1 + i % 3), arity,
                                        i % 2 ? FrameType::AT : FrameType::TA)};
        auto gq = build_query(gs);
        CHECK(solitary(gq.q, kF, kT) == 1);
        CHECK(solitary(gq.q, kT, kF) == 2);
        CHECK_FALSE(gq.q.out_edges(gq.x).empty());
        for (std::size_t v = 0; v < gq.q.size(); ++v)
            if (gq.q.has_label(static_cast<int>(v), kF) && gq.q.has_label(static_cast<int>(v), kT))
                CHECK(gq.q.out_edges(static_cast<int>(v)).empty());
    }
}

int leaves(const Gate& g) {
    if (g.kind == Gate::Kind::var) return 1;
    return leaves(*g.a) + (g.kind == Gate::Kind::conj ? leaves(*g.b) : 0);
}

TEST_CASE("build_query: node count is linear in the gate count") {
    // A NOT gate costs 10 nodes plus 3 per branch through it, so stacking
    // NOT pairs on a formula with L leaves adds 2 * (10 + 3L) each time.
    std::mt19937 rng(21);
    for (int i = 0; i < 10; ++i) {
        const int arity = 1 + i % 3;
        auto g = random_gate(rng, arity, 1 + i % 5);
        const long L = leaves(*g);
        std::vector<long> sizes;
        for (int m = 0; m < 4; ++m) {
            sizes.push_back(static_cast<long>(build_query({spec(g, arity, FrameType::AA)}, GadgetOptions{32}).q.size()));
            g = neg(neg(g));
        }
        for (int m = 1; m < 4; ++m) CHECK(sizes[m] - sizes[m - 1] == 2 * (10 + 3 * L));
    }
}

TEST_CASE("build_query: gate cap") {
    auto f = gen_good(1);
    try {
        build_query({{f, FrameType::AA}}, GadgetOptions{2});
        FAIL("expected cap_exceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::cap_exceeded);
    }
}

TEST_CASE("triggered: NOT(y1) fires exactly on 0-segments") {
    auto gq = build_query({spec(neg(var(1)), 1, FrameType::AA)});
    int fired = 0, silent = 0;
    for (const auto& c : cactuses_up_to(gq.q, 2).cactuses)
        for (int s = 1; s < static_cast<int>(c.segments.size()); ++s) {
            if (c.is_leaf(s)) {
                CHECK_THROWS_AS(triggered(gq, c, s, 0), Error);
                continue;
            }
            const bool t = triggered(gq, c, s, 0);
            CHECK(gatherable_inputs(gq, c, s, 0) == std::vector<std::vector<int>>{{segment_bit(gq, c, s)}});
            CHECK(t == (segment_bit(gq, c, s) == 0));
            (t ? fired : silent)++;
        }
    CHECK(fired > 0);
    CHECK(silent > 0);
}

TEST_CASE("triggered: unknown gadget") {
    auto gq = build_query({spec(neg(var(1)), 1, FrameType::AA)});
    auto cs = cactuses_up_to(gq.q, 2).cactuses;
    for (const auto& c : cs)
        for (int s = 1; s < static_cast<int>(c.segments.size()); ++s)
            if (!c.is_leaf(s)) {
                CHECK_THROWS_AS(triggered(gq, c, s, 1), Error);
                return;
            }
    FAIL("no non-leaf segment");
}

TEST_CASE("triggering biconditional on small formulas") {
    const std::vector<std::vector<GadgetSpec>> suite{
        {spec(neg(var(1)), 1, FrameType::AA)},
        {spec(conj(var(1), neg(var(2))), 2, FrameType::AA, {{InputType::down, 1}, {InputType::up, 1}})},
        {spec(neg(var(1)), 1, FrameType::AA, {{InputType::down, 1}})},
        {spec(disj(var(1), var(2)), 2, FrameType::AA, {{InputType::up, 1}, {InputType::down, 1}})},
        {spec(neg(var(1)), 1, FrameType::AT)},
    };
    for (const auto& gs : suite) {
        auto gq = build_query(gs);
        auto rep = verify_triggering(gq, 2);
        CHECK_MESSAGE(rep.ok(), gs[0].formula.str());
        CHECK(rep.checks > 0);
        CHECK_MESSAGE(rep.triggered > 0, gs[0].formula.str());
    }
}

TEST_CASE("frame discipline: AT and TA gadgets fire only where admitted") {
    for (FrameType fr : {FrameType::AT, FrameType::TA}) {
        auto gq = build_query({spec(neg(var(1)), 1, fr)});
        int admitted = 0, refused = 0;
        for (const auto& c : cactuses_up_to(gq.q, 2).cactuses)
            for (int s = 1; s < static_cast<int>(c.segments.size()); ++s) {
                if (c.is_leaf(s)) continue;
                const bool ok = frame_admits(gq, c, s, 0);
                (ok ? admitted : refused)++;
                if (!ok) CHECK_FALSE(triggered(gq, c, s, 0));
            }
        CHECK(admitted > 0);
        CHECK(refused > 0);
    }
}

TEST_CASE("verify_triggering: mustbranch(4) and the depth cap") {
    auto gq = build_query({{gen_mustbranch(4), FrameType::AA}});
    CHECK(verify_triggering(gq, 2).ok());
    try {
        verify_triggering(gq, kMaxGadgetDepth + 1);
        FAIL("expected cap_exceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::cap_exceeded);
    }
}
