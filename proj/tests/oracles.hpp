#pragma once

// Test-side reference implementations built from LabelledGraph accessors and
// plain enumeration. `library_hom` is the one exception; it is itself checked
// against brute_hom in test_hom.cpp.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sirup/graph.hpp"
#include "sirup/datalog.hpp"
#include "sirup/hom.hpp"

namespace oracle {

using sirup::LabelledGraph;

inline std::string fixture(const std::string& name) { return std::string(SIRUP_FIXTURES) + "/" + name; }
inline LabelledGraph load(const std::string& name) { return sirup::parse_file(fixture(name)); }

// Every total map source -> target, checked atom by atom.
inline bool brute_hom(const LabelledGraph& s, const LabelledGraph& t, const std::map<int, int>& anchor = {}) {
    const int n = static_cast<int>(s.size());
    const int m = static_cast<int>(t.size());
    if (n == 0) return true;
    if (m == 0) return false;
    std::vector<int> h(n, 0);
    auto ok = [&] {
        for (const auto& [a, b] : anchor)
            if (h[a] != b) return false;
        for (int v = 0; v < n; ++v)
            for (const auto& l : s.labels(v))
                if (!t.has_label(h[v], l)) return false;
        for (const auto& e : s.edges())
            if (!t.has_edge(h[e.src], h[e.dst], e.pred)) return false;
        return true;
    };
    while (true) {
        if (ok()) return true;
        int i = 0;
        while (i < n && ++h[i] == m) h[i++] = 0;
        if (i == n) return false;
    }
}

// Size of the smallest node subset whose induced subgraph receives g.
inline std::size_t core_size(const LabelledGraph& g) {
    const int n = static_cast<int>(g.size());
    std::size_t best = g.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> keep;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) keep.push_back(v);
        if (keep.size() >= best) continue;
        if (brute_hom(g, g.induced(keep))) best = keep.size();
    }
    return best;
}

using HomFn = std::function<bool(const LabelledGraph&, const LabelledGraph&)>;

inline bool brute_fn(const LabelledGraph& s, const LabelledGraph& t) { return brute_hom(s, t); }

inline bool library_hom(const LabelledGraph& s, const LabelledGraph& t) { return sirup::backtrack_hom(s, t).found(); }

// Certain answer of (Delta_q, G): every T/F completion of the A-nodes
// receives q. With `disjoint`, completions whose nodes carry both F and T
// are skipped.
inline bool certain(const LabelledGraph& q, const LabelledGraph& d, const HomFn& hom = library_hom,
                    bool disjoint = false) {
    std::vector<int> as = d.nodes_with_label(sirup::kA);
    const std::size_t n = as.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        LabelledGraph model = d;
        for (std::size_t i = 0; i < n; ++i) model.add_label(as[i], (mask >> i) & 1 ? sirup::kT : sirup::kF);
        if (disjoint) {
            bool clash = false;
            for (std::size_t v = 0; v < model.size(); ++v)
                if (model.has_label(static_cast<int>(v), sirup::kF) && model.has_label(static_cast<int>(v), sirup::kT))
                    clash = true;
            if (clash) continue;
        }
        if (!hom(q, model)) return false;
    }
    return true;
}

inline bool reachable(int n, const std::vector<std::pair<int, int>>& edges, bool directed, int s, int t) {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        if (!directed) adj[v].push_back(u);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> todo;
    todo.push(s);
    seen[s] = 1;
    while (!todo.empty()) {
        int u = todo.front();
        todo.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                todo.push(v);
            }
    }
    return seen[t];
}

// Random labelled digraph over preds R, S and labels drawn from `labels`.
inline LabelledGraph random_graph(std::mt19937& rng, int nodes, int edges, const std::vector<std::string>& labels,
                                  double label_p = 0.3, const std::string& prefix = "v") {
    LabelledGraph g;
    for (int i = 0; i < nodes; ++i) g.add_node(prefix + std::to_string(i));
    std::uniform_int_distribution<int> node(0, nodes - 1);
    std::bernoulli_distribution coin(label_p);
    std::bernoulli_distribution pred(0.5);
    for (int i = 0; i < nodes; ++i)
        for (const auto& l : labels)
            if (coin(rng)) g.add_label(i, l);
    for (int i = 0; i < edges; ++i) g.add_edge(node(rng), node(rng), pred(rng) ? "R" : "S");
    return g;
}

// Random ditree: node i > 0 hangs below a uniformly chosen earlier node.
inline LabelledGraph random_ditree(std::mt19937& rng, int nodes, const std::vector<std::string>& labels,
                                   double label_p = 0.3, const std::string& prefix = "n") {
    LabelledGraph g;
    for (int i = 0; i < nodes; ++i) g.add_node(prefix + std::to_string(i));
    std::bernoulli_distribution coin(label_p);
    std::bernoulli_distribution pred(0.5);
    for (int i = 0; i < nodes; ++i)
        for (const auto& l : labels)
            if (coin(rng)) g.add_label(i, l);
    for (int i = 1; i < nodes; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        g.add_edge(parent(rng), i, pred(rng) ? "R" : "S");
    }
    return g;
}

// Random 1-CQ ditree: exactly one solitary F and between 1 and `max_t`
// solitary Ts, the rest unlabelled or FT-twins.
inline LabelledGraph random_one_cq(std::mt19937& rng, int nodes, int max_t) {
    for (;;) {
        LabelledGraph g = random_ditree(rng, nodes, {}, 0.0);
        std::vector<int> order(nodes);
        for (int i = 0; i < nodes; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::uniform_int_distribution<int> nt(1, std::min(max_t, nodes - 1));
        int k = nt(rng);
        g.add_label(order[0], sirup::kF);
        for (int i = 1; i <= k; ++i) g.add_label(order[i], sirup::kT);
        std::bernoulli_distribution twin(0.2);
        for (int i = k + 1; i < nodes; ++i)
            if (twin(rng)) {
                g.add_label(order[i], sirup::kF);
                g.add_label(order[i], sirup::kT);
            }
        if (sirup::shape(g).is_1cq) return g;
    }
}

// Bijection search; fine up to 8 or 9 nodes.
inline bool isomorphic(const LabelledGraph& a, const LabelledGraph& b) {
    if (a.size() != b.size() || a.edges().size() != b.edges().size() || a.atom_count() != b.atom_count())
        return false;
    std::vector<int> perm(a.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
        bool ok = true;
        for (std::size_t v = 0; v < a.size() && ok; ++v)
            if (a.labels(static_cast<int>(v)) != b.labels(perm[v])) ok = false;
        for (const auto& e : a.edges())
            if (ok && !b.has_edge(perm[e.src], perm[e.dst], e.pred)) ok = false;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// Data drawn around a cactus: solitary labels turn into A with probability
// `a_p` (at most `max_a` of them), a few edges are dropped and a few random
// ones added.
inline LabelledGraph perturbed(std::mt19937& rng, const LabelledGraph& base, int max_a, double a_p = 0.3) {
    LabelledGraph g;
    for (std::size_t v = 0; v < base.size(); ++v) g.add_node("d" + std::to_string(v));
    std::bernoulli_distribution to_a(a_p), drop(0.06), twin(0.05);
    int as = 0;
    for (std::size_t v = 0; v < base.size(); ++v) {
        const int u = static_cast<int>(v);
        for (const auto& l : base.labels(u)) {
            const bool solitary = (l == sirup::kF && !base.has_label(u, sirup::kT)) ||
                                  (l == sirup::kT && !base.has_label(u, sirup::kF));
            if (solitary && as < max_a && to_a(rng)) {
                g.add_label(u, sirup::kA);
                ++as;
            } else {
                g.add_label(u, l);
            }
        }
        if (twin(rng)) {
            g.add_label(u, sirup::kF);
            g.add_label(u, sirup::kT);
        }
    }
    for (const auto& e : base.edges())
        if (!drop(rng)) g.add_edge(e.src, e.dst, e.pred);
    std::uniform_int_distribution<int> node(0, static_cast<int>(base.size()) - 1);
    for (int i = 0; i < 2; ++i) g.add_edge(node(rng), node(rng), "R");
    return g;
}

// Naive evaluation: every rule against every variable assignment until
// nothing changes.
struct NaiveClosure {
    std::map<std::string, std::set<int>> facts;
    bool goal = false;
};

inline NaiveClosure naive_fixpoint(const sirup::DatalogProgram& prog, const LabelledGraph& d) {
    NaiveClosure cl;
    const int n = static_cast<int>(d.size());
    auto holds = [&](const sirup::Atom& a, const std::map<std::string, int>& env) {
        if (a.args.size() == 2) return d.has_edge(env.at(a.args[0]), env.at(a.args[1]), a.pred);
        int v = env.at(a.args[0]);
        if (prog.idb.count(a.pred)) {
            auto it = cl.facts.find(a.pred);
            return it != cl.facts.end() && it->second.count(v) > 0;
        }
        return d.has_label(v, a.pred);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : prog.rules) {
            std::vector<std::string> vars;
            auto note = [&](const std::string& v) {
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            };
            for (const auto& a : r.body)
                for (const auto& v : a.args) note(v);
            for (const auto& v : r.head.args) note(v);
            if (n == 0 && !vars.empty()) continue;
            std::vector<int> val(vars.size(), 0);
            while (true) {
                std::map<std::string, int> env;
                for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = val[i];
                bool ok = true;
                for (const auto& a : r.body)
                    if (!holds(a, env)) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    if (r.head.args.empty()) {
                        if (!cl.goal) changed = true;
                        cl.goal = true;
                    } else if (cl.facts[r.head.pred].insert(env.at(r.head.args[0])).second) {
                        changed = true;
                    }
                }
                std::size_t i = 0;
                while (i < vars.size() && ++val[i] == n) val[i++] = 0;
                if (i == vars.size()) break;
            }
        }
    }
    return cl;
}

// Random monadic program over IDB {P, Q}, goal G, EDB {T, F, A, R, S}.
inline sirup::DatalogProgram random_program(std::mt19937& rng) {
    const std::vector<std::string> vars{"x", "y", "z"};
    const std::vector<std::string> unary{"T", "F", "A", "P", "Q"};
    const std::vector<std::string> binary{"R", "S"};
    std::uniform_int_distribution<int> pick_var(0, 2), pick_un(0, 4), pick_bin(0, 1), body_len(1, 3),
        rules(2, 5), kind(0, 2);
    sirup::DatalogProgram p;
    p.idb = {"P", "Q", "G"};
    p.goal = "G";
    const int nr = rules(rng);
    for (int i = 0; i < nr; ++i) {
        sirup::Rule r;
        const int head = i == nr - 1 ? 2 : kind(rng) % 2;
        r.head = head == 2 ? sirup::Atom{"G", {}} : sirup::Atom{head == 0 ? "P" : "Q", {"x"}};
        r.body.push_back({unary[pick_un(rng)], {"x"}});
        const int len = body_len(rng);
        for (int j = 0; j < len; ++j) {
            if (kind(rng) == 0) r.body.push_back({unary[pick_un(rng)], {vars[pick_var(rng)]}});
            else r.body.push_back({binary[pick_bin(rng)], {vars[pick_var(rng)], vars[pick_var(rng)]}});
        }
        p.rules.push_back(std::move(r));
    }
    return p;
}

} // namespace oracle
