#include <algorithm>
#include <numeric>

#include "sirup/datalog.hpp"
#include "sirup/hom.hpp"
#include "sirup/lambda.hpp"

namespace sirup {

namespace {

bool has(unsigned m, int j) { return (m >> (j - 1)) & 1u; }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

std::vector<int> subtree_below(const LabelledGraph& g, int v) {
    std::vector<int> out{v};
    std::vector<char> seen(g.size(), 0);
    seen[v] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (int ei : g.out_edges(out[i])) {
            int w = g.edges()[ei].dst;
            if (!seen[w]) {
                seen[w] = 1;
                out.push_back(w);
            }
        }
    return out;
}

LabelledGraph segment_copy(const OneCq& q, bool f_focus, unsigned budded) {
    LabelledGraph g = q.q;
    if (!f_focus) {
        g.remove_label(q.x, kF);
        g.add_label(q.x, kA);
    }
    for (int j = 1; j <= q.span(); ++j)
        if (has(budded, j)) {
            g.remove_label(q.ys[j - 1], kT);
            g.add_label(q.ys[j - 1], kA);
        }
    return g;
}

} // namespace

LabelledGraph root_segment(const OneCq& q, unsigned budded) { return segment_copy(q, true, budded); }

LabelledGraph inner_segment(const OneCq& q, unsigned budded) { return segment_copy(q, false, budded); }

BlowUp blow_up(const OneCq& q, const TypeGraph& tg, const TypeSubgraph& h, const BlowUpOptions& opts) {
    const int n = static_cast<int>(q.q.size());
    const int inst = static_cast<int>(h.types.size());
    std::vector<std::vector<int>> used(inst, std::vector<int>(q.span() + 1, 0));
    for (const auto& e : h.edges) {
        const auto& t = tg.type(h.types[e.from]);
        if (!has(t.C, e.label))
            throw Error(ErrorKind::precondition, "blow_up: edge label " + std::to_string(e.label) +
                                                     " is not budded in " + tg.name(h.types[e.from]));
        if (used[e.from][e.label]++)
            throw Error(ErrorKind::precondition,
                        "blow_up: two edges labelled " + std::to_string(e.label) + " leave one node");
    }

    // Global ids: segment nodes first, then stub nodes.
    struct Stub {
        int inst, label;
        std::vector<int> nodes; // q nodes, nodes[0] = x
        int base;
    };
    std::vector<Stub> stubs;
    int next = inst * n;
    if (opts.stubs) {
        auto below = subtree_below(q.q, q.x);
        for (int a = 0; a < inst; ++a)
            for (int j = 1; j <= q.span(); ++j)
                if (has(tg.type(h.types[a]).C, j) && !used[a][j]) {
                    stubs.push_back({a, j, below, next});
                    next += static_cast<int>(below.size());
                }
    }
    struct UpStub {
        int inst;
        std::vector<int> nodes; // q nodes, nodes[0] = y_i
        int base;
    };
    std::vector<UpStub> ups;
    if (opts.up_stubs) {
        std::vector<char> has_parent(inst, 0);
        for (const auto& e : h.edges) has_parent[e.to] = 1;
        for (int a = 0; a < inst; ++a) {
            const auto& t = tg.type(h.types[a]);
            if (t.is_root() || has_parent[a]) continue;
            auto below = subtree_below(q.q, q.ys[t.i - 1]);
            ups.push_back({a, below, next});
            next += static_cast<int>(below.size());
        }
    }
    UnionFind uf(next);
    auto id = [&](int a, int z) { return a * n + z; };
    for (const auto& e : h.edges) uf.unite(id(e.from, q.ys[e.label - 1]), id(e.to, q.x));
    for (const auto& s : stubs) uf.unite(id(s.inst, q.ys[s.label - 1]), s.base);
    for (const auto& s : ups) uf.unite(id(s.inst, q.x), s.base);

    std::vector<std::string> names(next);
    for (int a = 0; a < inst; ++a)
        for (int z = 0; z < n; ++z) names[id(a, z)] = "b" + std::to_string(a) + "_" + q.q.name(z);
    for (const auto& s : stubs)
        for (std::size_t i = 0; i < s.nodes.size(); ++i)
            names[s.base + static_cast<int>(i)] =
                "b" + std::to_string(s.inst) + "y" + std::to_string(s.label) + "_" + q.q.name(s.nodes[i]);

    for (const auto& s : ups)
        for (std::size_t i = 0; i < s.nodes.size(); ++i)
            names[s.base + static_cast<int>(i)] = "b" + std::to_string(s.inst) + "u_" + q.q.name(s.nodes[i]);

    BlowUp out;
    std::vector<int> gid(next, -1);
    auto node_of = [&](int g) {
        int r = uf.find(g);
        if (gid[r] < 0) gid[r] = out.graph.add_node(names[r]);
        return gid[r];
    };
    out.qmap.assign(inst, std::vector<int>(n, -1));
    out.focus.assign(inst, -1);
    for (int a = 0; a < inst; ++a) {
        const auto& t = tg.type(h.types[a]);
        LabelledGraph seg = segment_copy(q, t.is_root(), t.C);
        for (int z = 0; z < n; ++z) {
            int v = node_of(id(a, z));
            out.qmap[a][z] = v;
            for (const auto& l : seg.labels(z)) out.graph.add_label(v, l);
        }
        for (const auto& e : seg.edges()) out.graph.add_edge(out.qmap[a][e.src], out.qmap[a][e.dst], e.pred);
        out.focus[a] = out.qmap[a][q.x];
    }
    for (const auto& s : stubs) {
        std::vector<int> local(n, -1);
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            int z = s.nodes[i];
            int v = node_of(s.base + static_cast<int>(i));
            local[z] = v;
            for (const auto& l : q.q.labels(z))
                if (!(z == q.x && l == kF)) out.graph.add_label(v, l);
            if (z == q.x) out.graph.add_label(v, kA);
        }
        for (const auto& e : q.q.edges())
            if (local[e.src] >= 0 && local[e.dst] >= 0) out.graph.add_edge(local[e.src], local[e.dst], e.pred);
    }
    for (const auto& s : ups) {
        const unsigned parent_c = tg.type(h.types[s.inst]).P;
        LabelledGraph seg = segment_copy(q, true, parent_c);
        std::vector<int> local(n, -1);
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            int z = s.nodes[i];
            int v = node_of(s.base + static_cast<int>(i));
            local[z] = v;
            if (i == 0) continue;
            for (const auto& l : seg.labels(z)) out.graph.add_label(v, l);
        }
        for (const auto& e : q.q.edges())
            if (local[e.src] >= 0 && local[e.dst] >= 0) out.graph.add_edge(local[e.src], local[e.dst], e.pred);
    }
    return out;
}

HConditions check_h_conditions(const PeriodicStructure& ps, const OneCq& q, const TypeGraph& tg) {
    HConditions hc;
    const unsigned all = 1u << q.span();
    auto some_root_segment_into = [&](const LabelledGraph& target) {
        for (unsigned s = 0; s < all; ++s)
            if (has_hom(root_segment(q, s), target)) return true;
        return false;
    };

    auto pi = build_programs(q.q).pi;
    hc.h1 = fixpoint(pi, blow_up(q, tg, acyclic_version(ps.h)).graph).goal;

    hc.h2 = some_root_segment_into(blow_up(q, tg, ps.h.induced(ps.P)).graph);

    for (int v : ps.R) {
        auto it = ps.Hv.find(v);
        if (it == ps.Hv.end()) continue;
        if (some_root_segment_into(blow_up(q, tg, it->second).graph)) {
            hc.h3 = true;
            break;
        }
    }

    hc.h4 = has_hom(inner_segment(q, 0), blow_up(q, tg, ps.h).graph);
    return hc;
}

bool h1_by_cactus_search(const PeriodicStructure& ps, const OneCq& q, const TypeGraph& tg, std::size_t cap) {
    auto acyc = acyclic_version(ps.h);
    auto target = blow_up(q, tg, acyc).graph;
    auto cs = cactuses_up_to(std::make_shared<const OneCq>(q), static_cast<int>(acyc.types.size()), cap);
    for (const auto& c : cs.cactuses)
        if (has_hom(c.graph, target)) return true;
    return false;
}

} // namespace sirup
