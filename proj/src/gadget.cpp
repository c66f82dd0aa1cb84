#include <algorithm>
#include <functional>
#include <map>

#include "sirup/gadget.hpp"

namespace sirup {

namespace {

const std::string kR = "R";
const std::string kS = "S";

// Gates numbered in preorder; leaf occurrences of y_i numbered j = 1..k_i
// left to right.
struct Layout {
    struct Input {
        int gate = -1; // child gate, or -1 for a leaf
        int var = 0;
        int occ = 0;
    };
    struct GateInfo {
        Gate::Kind kind;
        std::vector<Input> inputs;
    };
    struct Branch {
        int var = 0;
        int occ = 0;
        std::vector<int> gates; // leaf to root
    };
    std::vector<GateInfo> gates;
    std::vector<Branch> branches;
    std::vector<int> occurrences; // k_i, index i-1

    explicit Layout(const Formula& f) : occurrences(f.arity, 0) {
        std::vector<int> path;
        visit(*f.root, path);
    }

private:
    int visit(const Gate& g, std::vector<int>& path) {
        int id = static_cast<int>(gates.size());
        gates.push_back({g.kind, {}});
        path.push_back(id);
        std::vector<const Gate*> kids{g.a.get()};
        if (g.kind == Gate::Kind::conj) kids.push_back(g.b.get());
        for (const Gate* k : kids) {
            Input in;
            if (k->kind == Gate::Kind::var) {
                in.var = k->var;
                in.occ = ++occurrences[k->var - 1];
                branches.push_back({in.var, in.occ, {path.rbegin(), path.rend()}});
            } else {
                in.gate = visit(*k, path);
            }
            gates[id].inputs.push_back(in);
        }
        path.pop_back();
        return id;
    }
};

class Builder {
public:
    LabelledGraph g;

    int node(const std::string& name) { return g.add_fresh_node(name); }

    // F and T stay unary; any other label is an edge to a fresh node.
    void label(int v, const std::string& l) {
        if (l == kF || l == kT) {
            g.add_label(v, l);
            return;
        }
        int f = g.add_fresh_node(g.name(v) + "_" + l);
        g.add_edge(v, f, l);
    }

    void edge(int a, int b, const std::string& pred = kR) { g.add_edge(a, b, pred); }
};

struct GadgetLabels {
    std::string u, e, d, r;
    std::string b(int i) const { return "B" + id + "_" + std::to_string(i); }
    std::string bij(int i, int j) const { return b(i) + "_" + std::to_string(j); }
    std::string id;

    explicit GadgetLabels(int g) : id(std::to_string(g)) {
        u = "U" + id;
        e = "E" + id;
        d = "D" + id;
        r = "R" + id;
    }
};

std::string str(int i) { return std::to_string(i); }

// Main block rooted at `root`; returns rho.
int main_block(Builder& b, const std::string& p, int root, const Formula& f, const Layout& lay,
               const GadgetLabels& lb) {
    const int n = f.arity;
    int bF = b.node(p + "bF");
    for (int i = 1; i <= n; ++i) b.label(bF, lb.b(i));
    for (int i = 1; i <= n; ++i) {
        int bT = b.node(p + "bT" + str(i));
        b.label(bT, lb.b(i));
        b.edge(root, bT);
        b.edge(bT, bF);
    }
    int rho = b.node(p + "rho");
    int n4 = b.node(p + "n4");
    b.edge(bF, rho);
    b.edge(bF, n4);
    b.edge(n4, rho);
    std::map<std::pair<int, int>, int> lower;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= lay.occurrences[i - 1]; ++j) {
            int d = b.node(p + "d" + str(i) + "_" + str(j));
            int e = b.node(p + "e" + str(i) + "_" + str(j));
            b.label(d, lb.bij(i, j));
            b.label(e, lb.bij(i, j));
            b.edge(bF, d);
            b.edge(d, e);
            lower[{i, j}] = e;
        }

    std::function<void(int, int)> gate = [&](int id, int o) {
        const auto& info = lay.gates[id];
        const std::string gp = p + "G" + str(id) + "_";
        std::vector<int> in;
        for (std::size_t m = 0; m < info.inputs.size(); ++m) {
            const auto& x = info.inputs[m];
            if (x.gate < 0) {
                in.push_back(lower.at({x.var, x.occ}));
            } else {
                int v = b.node(gp + "i" + str(static_cast<int>(m) + 1));
                gate(x.gate, v);
                in.push_back(v);
            }
        }
        const bool is_root = id == 0;
        if (info.kind == Gate::Kind::neg) {
            int n2 = b.node(gp + "n2"), n3 = b.node(gp + "n3"), n4g = b.node(gp + "n4"), n5 = b.node(gp + "n5");
            b.edge(in[0], n2);
            b.edge(n2, n3, kS);
            b.edge(n3, n5);
            b.edge(n5, o);
            b.edge(in[0], n4g, kS);
            b.edge(n4g, o);
            if (is_root) b.label(n5, lb.d);
            return;
        }
        const int i1 = in[0], i2 = in[1];
        int bb = b.node(gp + "b"), dn = b.node(gp + "dn");
        int c1 = b.node(gp + "c1"), c2 = b.node(gp + "c2"), c3 = b.node(gp + "c3");
        int a01 = b.node(gp + "a01"), a02 = b.node(gp + "a02"), a22 = b.node(gp + "a22"), a23 = b.node(gp + "a23");
        b.edge(i1, bb, kS);
        b.edge(i2, bb, kS);
        b.edge(i2, a01);
        b.edge(i1, a02);
        b.edge(i1, c1, kS);
        b.edge(i1, a22);
        b.edge(i2, a23);
        b.edge(i2, c2, kS);
        b.edge(a01, c1, kS);
        b.edge(a02, c2, kS);
        b.edge(c1, o);
        b.edge(c2, o);
        b.edge(bb, dn);
        b.edge(dn, o);
        b.edge(a22, c3, kS);
        b.edge(a23, c3, kS);
        b.edge(c3, o);
        for (auto [v, tag] : {std::pair{bb, "b"}, std::pair{c1, "c1"}, std::pair{c2, "c2"}, std::pair{c3, "c3"}}) {
            int e = b.node(gp + "e" + tag);
            b.edge(v, e);
            b.label(e, lb.e);
        }
        if (is_root) b.label(dn, lb.d);
    };
    gate(0, b.node(p + "out"));
    return rho;
}

// Input block; returns {pi, iota}.
std::pair<int, int> input_block(Builder& b, const std::string& p, const Formula& f, const Layout& lay,
                                const GadgetLabels& lb) {
    int pi = b.node(p + "pi");
    int iota = b.node(p + "iota");
    b.edge(pi, iota, lb.r);

    std::vector<int> gamma(f.arity + 1, -1);
    int offset = 0;
    for (std::size_t t = 0; t < f.inputs.size(); ++t) {
        const auto& tup = f.inputs[t];
        const int n = tup.length;
        int w = -1;
        if (tup.type == InputType::down) {
            w = b.node(p + "w" + str(static_cast<int>(t) + 1));
            b.label(w, "W");
        }
        for (int i = 1; i <= n; ++i) {
            const int v = offset + i;
            // Edge labels in traversal order: from eta for (up), from gamma for (down).
            std::vector<std::string> run;
            const int before = tup.type == InputType::up ? n - i : i - 1;
            const int after = tup.type == InputType::up ? i - 1 : n - i;
            for (int u = 0; u < before; ++u) run.insert(run.end(), {kR, kR, kR, kR});
            run.insert(run.end(), {kR, kR, kS, kR});
            for (int u = 0; u < after; ++u) run.insert(run.end(), {kR, kR, kR, kR});
            std::vector<int> path;
            for (std::size_t k = 0; k <= run.size(); ++k) path.push_back(b.node(p + "y" + str(v) + "_" + str(static_cast<int>(k))));
            for (std::size_t k = 0; k < run.size(); ++k) b.edge(path[k], path[k + 1], run[k]);
            const int eta = tup.type == InputType::up ? path.front() : path.back();
            gamma[v] = tup.type == InputType::up ? path.back() : path.front();
            if (w >= 0) b.edge(eta, w);
        }
        offset += n;
    }

    std::map<int, int> e_node;
    for (int i = 1; i <= f.arity; ++i) {
        int c = b.node(p + "c" + str(i));
        int bi = b.node(p + "B" + str(i));
        int r = b.node(p + "r" + str(i));
        b.label(bi, lb.b(i));
        b.edge(gamma[i], c);
        b.edge(c, bi);
        b.edge(bi, r);
        b.edge(r, pi);
        for (int j = 1; j <= lay.occurrences[i - 1]; ++j) {
            const std::string bp = p + "b" + str(i) + "_" + str(j) + "_";
            int m = b.node(bp + "m");
            int bij = b.node(bp + "p0");
            b.label(bij, lb.bij(i, j));
            b.edge(bi, m);
            b.edge(m, bij);
            const Layout::Branch* br = nullptr;
            for (const auto& x : lay.branches)
                if (x.var == i && x.occ == j) br = &x;
            int prev = bij;
            for (std::size_t l = 0; l < br->gates.size(); ++l) {
                const std::string lp = bp + str(static_cast<int>(l) + 1);
                int a = b.node(lp + "a"), s = b.node(lp + "s"), nxt = b.node(p + "b" + str(i) + "_" + str(j) + "_p" + str(static_cast<int>(l) + 1));
                b.edge(prev, a);
                b.edge(a, s, kS);
                b.edge(s, nxt);
                const int gid = br->gates[l];
                if (lay.gates[gid].kind == Gate::Kind::conj) {
                    auto it = e_node.find(gid);
                    if (it == e_node.end()) {
                        int e = b.node(p + "E" + str(gid));
                        b.label(e, lb.e);
                        it = e_node.emplace(gid, e).first;
                    }
                    b.edge(s, it->second);
                }
                prev = nxt;
            }
            b.label(prev, lb.d);
        }
    }
    return {pi, iota};
}

int t_label(const Cactus& c, int t_node) {
    const auto& ys = c.query->ys;
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (ys[i] == t_node) return static_cast<int>(i) + 1;
    throw Error(ErrorKind::precondition, "cactus does not belong to the gadget query");
}

void check_segment(const GadgetQuery& gq, const Cactus& c, int seg, int gadget) {
    if (gadget < 0 || gadget >= static_cast<int>(gq.gadgets.size()))
        throw Error(ErrorKind::precondition, "unknown gadget id " + std::to_string(gadget));
    if (seg < 0 || seg >= static_cast<int>(c.segments.size()))
        throw Error(ErrorKind::precondition, "unknown segment " + std::to_string(seg));
    if (c.is_leaf(seg)) throw Error(ErrorKind::precondition, "segment " + std::to_string(seg) + " is a leaf");
    if (!c.query || c.query->q.size() != gq.q.size())
        throw Error(ErrorKind::precondition, "cactus does not belong to the gadget query");
}

bool triggered_with(const LabelledGraph& qm, const GadgetQuery& gq, const Cactus& c, int seg, int gadget,
                    const HomOptions& opts) {
    const auto& s = c.segments[seg];
    AnchorConstraint anchor{{gq.x, s.qmap[gq.x]}, {gq.nodes[gadget].iota, s.qmap[gq.alpha]}};
    auto r = hom_exists(qm, c.graph, anchor, opts);
    if (r.exceeded())
        throw Error(ErrorKind::cap_exceeded, "triggered: homomorphism budget exceeded (" +
                                                 std::to_string(opts.budget) + " extensions)");
    return r.found();
}

} // namespace

GadgetQuery build_query(const std::vector<GadgetSpec>& gadgets, const GadgetOptions& opts) {
    if (gadgets.empty()) throw Error(ErrorKind::precondition, "build_query: at least one gadget is required");
    for (std::size_t k = 0; k < gadgets.size(); ++k) {
        gadgets[k].formula.validate();
        if (gadgets[k].formula.gates() > opts.max_gates)
            throw Error(ErrorKind::cap_exceeded, "build_query: gadget " + std::to_string(k + 1) + " has " +
                                                     std::to_string(gadgets[k].formula.gates()) +
                                                     " gates (cap " + std::to_string(opts.max_gates) + ")");
    }
    GadgetQuery gq;
    gq.gadgets = gadgets;
    Builder b;
    const int x = b.node("x"), xi = b.node("xi"), al = b.node("alpha");
    const int u0 = b.node("u0"), t0 = b.node("t0"), u1 = b.node("u1"), t1 = b.node("t1");
    const int w = b.node("w"), xip = b.node("xip");
    b.label(x, kF);
    b.label(t0, kT);
    b.label(t1, kT);
    b.label(w, "W");
    b.edge(x, xi);
    b.edge(xi, al);
    b.edge(al, u0);
    b.edge(u0, t0);
    b.edge(u0, t0, kS);
    b.edge(al, u1);
    b.edge(al, u1, kS);
    b.edge(u1, t1);
    b.edge(x, w);
    b.edge(xi, w);
    b.edge(xip, w);
    b.edge(x, xip);
    gq.x = x;
    gq.alpha = al;
    gq.t0 = t0;
    gq.t1 = t1;

    const int m = static_cast<int>(gadgets.size());
    std::vector<int> u_iota(m);
    for (int k = 0; k < m; ++k) {
        const auto& spec = gadgets[k];
        const GadgetLabels lb(k + 1);
        const Layout lay(spec.formula);
        const std::string p = "g" + lb.id + "_";
        GadgetNodes nd;
        nd.tau = b.node(p + "tau");
        b.edge(xip, nd.tau);
        int g6 = b.node(p + "g6");
        nd.twin = b.node(p + "g7");
        b.label(nd.twin, kF);
        b.label(nd.twin, kT);
        switch (spec.frame) {
        case FrameType::AT: {
            int g4 = b.node(p + "g4");
            b.edge(nd.tau, g4);
            b.edge(nd.tau, g4, kS);
            b.edge(g4, t1);
            b.edge(nd.tau, g6);
            b.edge(g6, nd.twin);
            b.edge(g6, nd.twin, kS);
            break;
        }
        case FrameType::TA: {
            int g4 = b.node(p + "g4");
            b.edge(nd.tau, g4);
            b.edge(g4, t0);
            b.edge(g4, t0, kS);
            b.edge(nd.tau, g6);
            b.edge(nd.tau, g6, kS);
            b.edge(g6, nd.twin);
            break;
        }
        case FrameType::AA:
            b.edge(nd.tau, g6);
            b.edge(nd.tau, g6, kS);
            b.edge(g6, nd.twin);
            b.edge(g6, nd.twin, kS);
            break;
        }
        int ua = b.node(p + "ua");
        b.label(ua, lb.u);
        b.edge(al, ua);
        b.edge(nd.tau, ua);
        u_iota[k] = b.node(p + "ui");
        b.label(u_iota[k], lb.u);
        b.edge(al, u_iota[k]);

        nd.rho = main_block(b, p + "m_", xi, spec.formula, lay, lb);
        b.edge(nd.rho, al, lb.r);
        nd.rho_prime = main_block(b, p + "mp_", xip, spec.formula, lay, lb);
        auto [pi, iota] = input_block(b, p + "i_", spec.formula, lay, lb);
        nd.pi = pi;
        nd.iota = iota;
        b.edge(iota, u_iota[k]);
        gq.nodes.push_back(nd);
    }
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            b.edge(gq.nodes[j].rho_prime, gq.nodes[i].tau, "R" + std::to_string(j + 1));
            if (i != j) b.edge(gq.nodes[i].tau, u_iota[j]);
        }
    gq.q = std::move(b.g);
    return gq;
}

LabelledGraph q_minus_tt(const GadgetQuery& gq) {
    LabelledGraph out = gq.q;
    out.remove_label(gq.x, kF);
    out.add_label(gq.x, kA);
    return out;
}

int segment_bit(const GadgetQuery& gq, const Cactus& c, int seg) {
    const auto& s = c.segments.at(seg);
    if (s.parent < 0) throw Error(ErrorKind::precondition, "segment_bit: the root segment has no incoming edge");
    return c.query->ys.at(s.label - 1) == gq.t0 ? 0 : 1;
}

bool frame_admits(const GadgetQuery& gq, const Cactus& c, int seg, int gadget) {
    check_segment(gq, c, seg, gadget);
    const bool a0 = c.child(seg, t_label(c, gq.t0)) >= 0;
    const bool a1 = c.child(seg, t_label(c, gq.t1)) >= 0;
    switch (gq.gadgets[gadget].frame) {
    case FrameType::AT: return a0 && !a1;
    case FrameType::TA: return a1 && !a0;
    case FrameType::AA: return true;
    }
    return false;
}

std::vector<std::vector<int>> gatherable_inputs(const GadgetQuery& gq, const Cactus& c, int seg, int gadget) {
    check_segment(gq, c, seg, gadget);
    std::vector<int> up;
    for (int s = seg; c.segments[s].parent >= 0; s = c.segments[s].parent) up.push_back(segment_bit(gq, c, s));

    std::function<void(int, int, std::vector<int>&, std::vector<std::vector<int>>&)> down =
        [&](int s, int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
            if (static_cast<int>(cur.size()) == n) {
                out.push_back(cur);
                return;
            }
            for (int ch : c.segments[s].children) {
                cur.push_back(segment_bit(gq, c, ch));
                down(ch, n, cur, out);
                cur.pop_back();
            }
        };

    std::vector<std::vector<int>> acc{{}};
    for (const auto& tup : gq.gadgets[gadget].formula.inputs) {
        std::vector<std::vector<int>> options;
        if (tup.type == InputType::up) {
            if (static_cast<int>(up.size()) >= tup.length) options.push_back({up.begin(), up.begin() + tup.length});
        } else {
            std::vector<int> cur;
            down(seg, tup.length, cur, options);
        }
        std::vector<std::vector<int>> next;
        for (const auto& a : acc)
            for (const auto& o : options) {
                auto v = a;
                v.insert(v.end(), o.begin(), o.end());
                next.push_back(std::move(v));
            }
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return acc;
}

bool triggered(const GadgetQuery& gq, const Cactus& c, int seg, int gadget, const HomOptions& opts) {
    check_segment(gq, c, seg, gadget);
    return triggered_with(q_minus_tt(gq), gq, c, seg, gadget, opts);
}

TriggerReport verify_triggering(const GadgetQuery& gq, int depth, const HomOptions& opts) {
    if (depth > kMaxGadgetDepth)
        throw Error(ErrorKind::cap_exceeded, "verify_triggering: depth " + std::to_string(depth) + " exceeds the cap " +
                                                 std::to_string(kMaxGadgetDepth));
    auto oq = std::make_shared<const OneCq>(make_one_cq(gq.q));
    const LabelledGraph qm = q_minus_tt(gq);
    TriggerReport rep;
    auto cs = cactuses_up_to(oq, depth);
    for (const auto& c : cs.cactuses) {
        ++rep.cactuses;
        for (int s = 1; s < static_cast<int>(c.segments.size()); ++s) {
            if (c.is_leaf(s)) continue;
            const int m = static_cast<int>(gq.gadgets.size());
            std::vector<bool> sat(m, false);
            for (int g = 0; g < m; ++g)
                for (const auto& bits : gatherable_inputs(gq, c, s, g))
                    if (gq.gadgets[g].formula.eval(bits)) {
                        sat[g] = true;
                        break;
                    }
            bool carrier = false;
            for (int j = 0; j < m; ++j) {
                if (!sat[j] || !frame_admits(gq, c, s, j)) continue;
                bool others = gq.gadgets[j].frame == FrameType::AA;
                if (!others) {
                    others = true;
                    for (const auto& o : gq.gadgets)
                        if (o.frame != gq.gadgets[j].frame) others = false;
                }
                if (others) carrier = true;
            }
            for (int g = 0; g < static_cast<int>(gq.gadgets.size()); ++g) {
                const bool expected = sat[g] && carrier;
                const bool got = triggered_with(qm, gq, c, s, g, opts);
                ++rep.checks;
                if (got) ++rep.triggered;
                if (got != expected) rep.violations.push_back({c.skeleton_code(), s, g, got, expected});
            }
        }
    }
    return rep;
}

} // namespace sirup
