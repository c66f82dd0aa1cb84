#include <algorithm>
#include <functional>
#include <queue>

#include "sirup/graph.hpp"
#include "sirup/hom.hpp"

namespace sirup {

bool is_solitary_f(const LabelledGraph& g, int v) {
    return g.has_label(v, kF) && !g.has_label(v, kT);
}

bool is_solitary_t(const LabelledGraph& g, int v) {
    return g.has_label(v, kT) && !g.has_label(v, kF);
}

namespace {

std::vector<int> by_name(const LabelledGraph& g, std::vector<int> v) {
    std::sort(v.begin(), v.end(), [&](int a, int b) { return g.name(a) < g.name(b); });
    return v;
}

bool dag_check(const LabelledGraph& g) {
    std::vector<int> indeg(g.size(), 0);
    for (const auto& e : g.edges()) ++indeg[e.dst];
    std::queue<int> q;
    for (int v = 0; v < static_cast<int>(g.size()); ++v)
        if (indeg[v] == 0) q.push(v);
    std::size_t seen = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        ++seen;
        for (int ei : g.out_edges(v))
            if (--indeg[g.edges()[ei].dst] == 0) q.push(g.edges()[ei].dst);
    }
    return seen == g.size();
}

std::optional<int> ditree_root(const LabelledGraph& g) {
    if (g.empty()) return std::nullopt;
    int root = -1;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        std::size_t d = g.in_edges(v).size();
        if (d > 1) return std::nullopt;
        if (d == 0) {
            if (root >= 0) return std::nullopt;
            root = v;
        }
    }
    if (root < 0) return std::nullopt;
    std::vector<char> seen(g.size(), 0);
    std::vector<int> stack{root};
    seen[root] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int ei : g.out_edges(v)) {
            int w = g.edges()[ei].dst;
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    if (count != g.size()) return std::nullopt;
    return root;
}

} // namespace

void require_ditree(const LabelledGraph& g, const char* op) {
    if (!ditree_root(g)) throw Error(ErrorKind::not_ditree, std::string(op) + ": input is not a ditree");
}

ShapeReport shape(const LabelledGraph& g) {
    ShapeReport r;
    r.is_dag = dag_check(g);
    auto root = ditree_root(g);
    r.is_ditree = root.has_value();
    r.root = root;
    if (r.is_ditree) {
        r.is_path = true;
        for (int v = 0; v < static_cast<int>(g.size()); ++v)
            if (g.out_edges(v).size() > 1) r.is_path = false;
    }
    std::vector<int> sf, st, tw;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        bool f = g.has_label(v, kF), t = g.has_label(v, kT);
        if (f && t) tw.push_back(v);
        else if (f) sf.push_back(v);
        else if (t) st.push_back(v);
    }
    r.solitary_f = by_name(g, sf);
    r.solitary_t = by_name(g, st);
    r.ft_twins = by_name(g, tw);
    r.is_1cq = r.solitary_f.size() == 1;
    if (r.is_ditree && r.is_1cq) {
        Ditree tree(g);
        int f = r.solitary_f.front();
        bool all_incomparable = true;
        for (int t : r.solitary_t)
            if (tree.comparable(t, f)) all_incomparable = false;
        if (all_incomparable) r.lambda_span = static_cast<int>(r.solitary_t.size());
    }
    return r;
}

Ditree::Ditree(const LabelledGraph& g) {
    auto root = ditree_root(g);
    if (!root) throw Error(ErrorKind::not_ditree, "input is not a ditree");
    root_ = *root;
    const std::size_t n = g.size();
    parent_.assign(n, -1);
    depth_.assign(n, 0);
    children_.assign(n, {});
    for (const auto& e : g.edges()) {
        parent_[e.dst] = e.src;
        children_[e.src].push_back(e.dst);
    }
    for (auto& c : children_)
        std::sort(c.begin(), c.end(), [&](int a, int b) { return g.name(a) < g.name(b); });
    for (int v : preorder())
        if (v != root_) depth_[v] = depth_[parent_[v]] + 1;
}

bool Ditree::precedes(int x, int y) const {
    if (depth_[x] >= depth_[y]) return false;
    while (depth_[y] > depth_[x]) y = parent_[y];
    return x == y;
}

int Ditree::inf(int x, int y) const {
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
        x = parent_[x];
        y = parent_[y];
    }
    return x;
}

int Ditree::distance(int x, int y) const {
    int m = inf(x, y);
    return depth_[x] + depth_[y] - 2 * depth_[m];
}

std::vector<int> Ditree::subtree(int v) const {
    std::vector<int> out;
    std::vector<int> stack{v};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (auto it = children_[x].rbegin(); it != children_[x].rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::vector<int> Ditree::preorder() const { return subtree(root_); }

namespace {

// Canonical string of the branch rooted at v in the tree pruned below t and
// f, with the F/T labels of t and f replaced by a marker.
std::string branch_code(const LabelledGraph& g, const Ditree& tree, int v, int t, int f,
                        const std::vector<std::string>& in_pred) {
    std::string out = "(" + in_pred[v] + "|";
    if (v == t || v == f) {
        out += "*";
        for (const auto& l : g.labels(v))
            if (l != kF && l != kT) out += l + ",";
        return out + ")";
    }
    for (const auto& l : g.labels(v)) out += l + ",";
    std::vector<std::string> kids;
    for (int c : tree.children(v)) kids.push_back(branch_code(g, tree, c, t, f, in_pred));
    std::sort(kids.begin(), kids.end());
    for (const auto& k : kids) out += k;
    return out + ")";
}

bool pair_symmetric(const LabelledGraph& g, const Ditree& tree, int t, int f) {
    int m = tree.inf(t, f);
    if (m == t || m == f) return false;
    int ct = t, cf = f;
    while (tree.parent(ct) != m) ct = tree.parent(ct);
    while (tree.parent(cf) != m) cf = tree.parent(cf);
    std::vector<std::string> in_pred(g.size());
    for (const auto& e : g.edges()) in_pred[e.dst] = e.pred;
    // The swap fixes everything outside the two branches, so it is an
    // isomorphism of the pruned tree iff the branches are isomorphic with t
    // corresponding to f.
    return branch_code(g, tree, ct, t, f, in_pred) == branch_code(g, tree, cf, t, f, in_pred);
}

} // namespace

std::vector<SolitaryPair> solitary_pairs(const LabelledGraph& g) {
    require_ditree(g, "solitary_pairs");
    Ditree tree(g);
    auto sh = shape(g);
    std::vector<SolitaryPair> out;
    for (int t : sh.solitary_t) {
        for (int f : sh.solitary_f) {
            SolitaryPair p;
            p.t = t;
            p.f = f;
            p.comparable = tree.comparable(t, f);
            p.distance = tree.distance(t, f);
            p.symmetric = !p.comparable && pair_symmetric(g, tree, t, f);
            out.push_back(p);
        }
    }
    return out;
}

bool is_quasi_symmetric(const LabelledGraph& g) {
    auto pairs = solitary_pairs(g);
    int best = -1;
    for (const auto& p : pairs) {
        if (p.comparable) return false;
        if (best < 0 || p.distance < best) best = p.distance;
    }
    for (const auto& p : pairs)
        if (p.distance == best && !p.symmetric) return false;
    return true;
}

namespace {

LabelledGraph image_of(const LabelledGraph& source, const LabelledGraph& target, const Hom& h) {
    LabelledGraph out;
    std::vector<int> seen(target.size(), -1);
    std::vector<int> order;
    for (int v = 0; v < static_cast<int>(source.size()); ++v)
        if (seen[h.map[v]] < 0) {
            seen[h.map[v]] = 0;
            order.push_back(h.map[v]);
        }
    std::sort(order.begin(), order.end());
    for (int w : order) seen[w] = out.add_node(target.name(w));
    for (int v = 0; v < static_cast<int>(source.size()); ++v)
        for (const auto& l : source.labels(v)) out.add_label(seen[h.map[v]], l);
    for (const auto& e : source.edges()) out.add_edge(seen[h.map[e.src]], seen[h.map[e.dst]], e.pred);
    return out;
}

} // namespace

CoreResult core_ditree(const LabelledGraph& g) {
    require_ditree(g, "core_ditree");
    CoreResult r;
    r.core = g;
    bool changed = true;
    while (changed && r.core.size() > 1) {
        changed = false;
        for (int v = 0; v < static_cast<int>(r.core.size()); ++v) {
            std::vector<int> keep;
            for (int w = 0; w < static_cast<int>(r.core.size()); ++w)
                if (w != v) keep.push_back(w);
            LabelledGraph smaller = r.core.induced(keep);
            auto h = find_hom(r.core, smaller);
            if (!h) continue;
            r.core = image_of(r.core, smaller, *h);
            r.was_minimal = false;
            changed = true;
            break;
        }
    }
    return r;
}

} // namespace sirup
