#include "sirup/reductions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "sirup/datalog.hpp"

namespace sirup {

void GraphInstance::validate() const {
    const int n = static_cast<int>(vertices.size());
    if (s < 0 || s >= n || t < 0 || t >= n) throw Error(ErrorKind::precondition, "graph: s or t is not a vertex");
    for (auto [u, v] : edges)
        if (u < 0 || u >= n || v < 0 || v >= n) throw Error(ErrorKind::precondition, "graph: edge endpoint out of range");
    std::set<std::string> seen(vertices.begin(), vertices.end());
    if (seen.size() != vertices.size()) throw Error(ErrorKind::precondition, "graph: duplicate vertex name");
}

bool GraphInstance::reachable() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        if (!directed) adj[v].push_back(u);
    }
    std::vector<char> seen(vertices.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return seen[t];
}

std::string GraphInstance::str() const {
    std::string out = (directed ? "" : "undirected ") + std::string("s=") + vertices[s] + " t=" + vertices[t];
    for (auto [u, v] : edges) out += " " + vertices[u] + (directed ? "->" : "-") + vertices[v];
    return out;
}

GraphInstance parse_graph(const std::string& text) {
    GraphInstance g;
    std::map<std::string, int> index;
    auto vertex = [&](const std::string& name) {
        if (name.empty()) throw Error(ErrorKind::syntax, "graph: empty vertex name");
        auto [it, fresh] = index.emplace(name, static_cast<int>(g.vertices.size()));
        if (fresh) g.vertices.push_back(name);
        return it->second;
    };
    std::string s_name, t_name;
    std::istringstream lines(text);
    std::string line;
    bool any_directed = false, any_undirected = false;
    while (std::getline(lines, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) {
            if (tok == "undirected") {
                g.directed = false;
            } else if (tok.rfind("s=", 0) == 0) {
                s_name = tok.substr(2);
            } else if (tok.rfind("t=", 0) == 0) {
                t_name = tok.substr(2);
            } else if (auto arrow = tok.find("->"); arrow != std::string::npos) {
                g.edges.push_back({vertex(tok.substr(0, arrow)), vertex(tok.substr(arrow + 2))});
                any_directed = true;
            } else if (auto dash = tok.find('-'); dash != std::string::npos) {
                g.edges.push_back({vertex(tok.substr(0, dash)), vertex(tok.substr(dash + 1))});
                any_undirected = true;
            } else {
                vertex(tok);
            }
        }
    }
    if (s_name.empty() || t_name.empty()) throw Error(ErrorKind::syntax, "graph: missing s=<vertex> or t=<vertex>");
    if ((any_directed && !g.directed) || (any_undirected && g.directed))
        throw Error(ErrorKind::syntax, "graph: edge style does not match the graph kind");
    g.s = vertex(s_name);
    g.t = vertex(t_name);
    return g;
}

namespace {

GraphInstance random_graph(std::mt19937& rng, int max_vertices, int max_edges, bool directed) {
    GraphInstance g;
    g.directed = directed;
    const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, max_vertices - 1)));
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    const int m = static_cast<int>(rng() % static_cast<unsigned>(max_edges + 1));
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < m; ++i) {
        int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
        if (u == v) continue;
        if (directed && u > v) std::swap(u, v);
        if (!directed && u > v) std::swap(u, v);
        if (seen.insert({u, v}).second) g.edges.push_back({u, v});
    }
    g.s = static_cast<int>(rng() % n);
    do g.t = static_cast<int>(rng() % n);
    while (g.t == g.s);
    return g;
}

bool is_dag(const GraphInstance& g) {
    std::vector<int> indeg(g.vertices.size(), 0);
    std::vector<std::vector<int>> adj(g.vertices.size());
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        ++indeg[v];
    }
    std::vector<int> ready;
    for (int v = 0; v < static_cast<int>(indeg.size()); ++v)
        if (!indeg[v]) ready.push_back(v);
    std::size_t done = 0;
    while (!ready.empty()) {
        int u = ready.back();
        ready.pop_back();
        ++done;
        for (int v : adj[u])
            if (!--indeg[v]) ready.push_back(v);
    }
    return done == g.vertices.size();
}

LabelledGraph contact_copy(const LabelledGraph& q, int t, int f) {
    LabelledGraph c = q;
    c.remove_label(t, kT);
    c.add_label(t, kA);
    c.remove_label(f, kF);
    c.add_label(f, kA);
    return c;
}

void add_edge_copy(LabelledGraph& out, const LabelledGraph& copy, int t, int f, std::size_t index,
                   const std::string& u, const std::string& v) {
    std::vector<std::string> rename(copy.size());
    for (int z = 0; z < static_cast<int>(copy.size()); ++z) rename[z] = "e" + std::to_string(index) + "_" + copy.name(z);
    rename[t] = u;
    rename[f] = v;
    out.absorb(copy, rename);
}

void add_endpoints(LabelledGraph& out, const GraphInstance& g) {
    for (const auto& v : g.vertices) out.add_node(v);
    out.add_label(out.node(g.vertices[g.s]), kT);
    out.add_label(out.node(g.vertices[g.t]), kF);
}

} // namespace

GraphInstance random_dag(std::mt19937& rng, int max_vertices, int max_edges) {
    return random_graph(rng, max_vertices, max_edges, true);
}

GraphInstance random_undirected(std::mt19937& rng, int max_vertices, int max_edges) {
    return random_graph(rng, max_vertices, max_edges, false);
}

bool pair_eligible(const LabelledGraph& q, const SolitaryPair& p) {
    Ditree tree(q);
    if (p.comparable) {
        int lo = tree.precedes(p.t, p.f) ? p.f : p.t;
        int hi = lo == p.f ? p.t : p.f;
        for (int v = tree.parent(lo); v != hi; v = tree.parent(v))
            if (is_solitary_f(q, v) || is_solitary_t(q, v)) return false;
        return true;
    }
    if (p.symmetric || !shape(q).ft_twins.empty() || is_quasi_symmetric(q)) return false;
    for (const auto& o : solitary_pairs(q))
        if (o.distance < p.distance) return false;
    return true;
}

LabelledGraph dag_reduction(const LabelledGraph& q, const SolitaryPair& pair, const GraphInstance& g) {
    g.validate();
    if (!g.directed || !is_dag(g)) throw Error(ErrorKind::precondition, "dag_reduction: graph is not a dag");
    require_ditree(q, "dag_reduction");
    if (!is_solitary_t(q, pair.t) || !is_solitary_f(q, pair.f) || !pair_eligible(q, pair))
        throw Error(ErrorKind::precondition, "dag_reduction: solitary pair is not eligible");
    const LabelledGraph copy = contact_copy(q, pair.t, pair.f);
    LabelledGraph out;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        add_edge_copy(out, copy, pair.t, pair.f, i, g.vertices[g.edges[i].first], g.vertices[g.edges[i].second]);
    add_endpoints(out, g);
    return out;
}

LabelledGraph undirected_reduction(const LabelledGraph& q, const GraphInstance& g) {
    g.validate();
    if (g.directed) throw Error(ErrorKind::precondition, "undirected_reduction: graph is directed");
    require_ditree(q, "undirected_reduction");
    auto sh = shape(q);
    if (sh.solitary_f.size() != 1 || sh.solitary_t.size() != 1 || !is_quasi_symmetric(q))
        throw Error(ErrorKind::precondition,
                    "undirected_reduction: needs a quasi-symmetric query with one solitary F and one solitary T");
    const int t = sh.solitary_t.front(), f = sh.solitary_f.front();
    const LabelledGraph copy = contact_copy(q, t, f);
    LabelledGraph out;
    std::size_t index = 0;
    for (auto [u, v] : g.edges) {
        add_edge_copy(out, copy, t, f, index++, g.vertices[u], g.vertices[v]);
        add_edge_copy(out, copy, t, f, index++, g.vertices[v], g.vertices[u]);
    }
    add_endpoints(out, g);
    return out;
}

LabelledGraph blowup_reduction(const PeriodicStructure& ps, const LabelledGraph& q, const GraphInstance& g) {
    g.validate();
    if (g.directed) throw Error(ErrorKind::precondition, "blowup_reduction: graph is directed");
    const OneCq oq = make_one_cq(q);
    const TypeGraph tg(oq.span());
    if (ps.P.empty()) throw Error(ErrorKind::precondition, "blowup_reduction: P is empty");
    auto hc = check_h_conditions(ps, oq, tg);
    if (hc.h1 || hc.h2 || hc.h3 || hc.h4)
        throw Error(ErrorKind::precondition, "blowup_reduction: the structure satisfies one of h1-h4");

    const BlowUp bu = blow_up(oq, tg, ps.h);
    const int n = static_cast<int>(bu.graph.size());
    std::vector<char> in_p(n, 0), in_b(n, 0);
    for (int a : ps.P)
        for (int v : bu.qmap[a]) in_p[v] = 1;
    for (int a : ps.B)
        for (int v : bu.qmap[a]) in_b[v] = 1;

    LabelledGraph out;
    auto p_copy = [&](int vertex, int node) { return "P" + g.vertices[vertex] + "_" + bu.graph.name(node); };
    auto add_labels = [&](int dst, int src) {
        for (const auto& l : bu.graph.labels(src)) out.add_label(dst, l);
    };
    for (int vx = 0; vx < static_cast<int>(g.vertices.size()); ++vx)
        for (int z = 0; z < n; ++z)
            if (in_p[z]) add_labels(out.add_node(p_copy(vx, z)), z);
    for (const auto& e : bu.graph.edges()) {
        if (!(in_p[e.src] && in_p[e.dst])) continue;
        for (int vx = 0; vx < static_cast<int>(g.vertices.size()); ++vx)
            out.add_edge(out.node(p_copy(vx, e.src)), out.node(p_copy(vx, e.dst)), e.pred);
        for (auto [u, v] : g.edges) {
            out.add_edge(out.node(p_copy(u, e.src)), out.node(p_copy(v, e.dst)), e.pred);
            out.add_edge(out.node(p_copy(v, e.src)), out.node(p_copy(u, e.dst)), e.pred);
        }
    }

    auto b_name = [&](int z) { return in_p[z] ? p_copy(g.s, z) : "B_" + bu.graph.name(z); };
    for (int z = 0; z < n; ++z)
        if (in_b[z] && !in_p[z]) add_labels(out.add_node(b_name(z)), z);
    for (const auto& e : bu.graph.edges())
        if (in_b[e.src] && in_b[e.dst] && !(in_p[e.src] && in_p[e.dst]))
            out.add_edge(out.node(b_name(e.src)), out.node(b_name(e.dst)), e.pred);

    for (const auto& [r, hv] : ps.Hv) {
        const BlowUp hb = blow_up(oq, tg, hv);
        const std::string prefix = "H" + std::to_string(r) + "_";
        std::vector<std::string> rename(hb.graph.size());
        for (int z = 0; z < static_cast<int>(hb.graph.size()); ++z) rename[z] = prefix + hb.graph.name(z);
        for (int z = 0; z < static_cast<int>(oq.q.size()); ++z)
            rename[hb.qmap[hv.source][z]] = p_copy(g.t, bu.qmap[r][z]);
        out.absorb(hb.graph, rename);
    }
    return out;
}

} // namespace sirup
