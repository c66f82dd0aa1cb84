#include "sirup/cactus.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace sirup {

int OneCq::label_of(int qnode) const {
    for (std::size_t j = 0; j < ys.size(); ++j)
        if (ys[j] == qnode) return static_cast<int>(j) + 1;
    return 0;
}

OneCq make_one_cq(const LabelledGraph& q) {
    auto sh = shape(q);
    if (!sh.is_1cq)
        throw Error(ErrorKind::not_1cq, "query has " + std::to_string(sh.solitary_f.size()) +
                                            " solitary F-nodes, expected exactly one");
    OneCq o;
    o.q = q;
    o.x = sh.solitary_f.front();
    o.ys = sh.solitary_t;
    return o;
}

int Cactus::depth() const {
    int d = 0;
    for (const auto& s : segments) d = std::max(d, s.depth);
    return d;
}

int Cactus::child(int seg, int label) const {
    for (int c : segments[seg].children)
        if (segments[c].label == label) return c;
    return -1;
}

namespace {

std::string code_of(const Cactus& c, int seg) {
    std::vector<int> kids = c.segments[seg].children;
    std::sort(kids.begin(), kids.end(),
              [&](int a, int b) { return c.segments[a].label < c.segments[b].label; });
    std::string out = "(";
    for (int k : kids) out += std::to_string(c.segments[k].label) + code_of(c, k);
    return out + ")";
}

} // namespace

std::string Cactus::skeleton_code() const { return code_of(*this, 0); }

Cactus as_cactus(std::shared_ptr<const OneCq> q) {
    Cactus c;
    c.graph = q->q;
    c.root_focus = q->x;
    Segment root;
    root.focus = q->x;
    root.qmap.resize(q->q.size());
    for (int v = 0; v < static_cast<int>(q->q.size()); ++v) root.qmap[v] = v;
    c.segments.push_back(std::move(root));
    c.query = std::move(q);
    return c;
}

Cactus as_cactus(const LabelledGraph& q) {
    return as_cactus(std::make_shared<const OneCq>(make_one_cq(q)));
}

void bud_in_place(Cactus& c, int target) {
    const OneCq& q = *c.query;
    if (target < 0 || target >= static_cast<int>(c.graph.size()) || !is_solitary_t(c.graph, target))
        throw Error(ErrorKind::precondition, "bud: target is not a solitary T-node");
    int owner = -1, label = 0;
    for (int s = 0; s < static_cast<int>(c.segments.size()) && owner < 0; ++s)
        for (std::size_t j = 0; j < q.ys.size(); ++j)
            if (c.segments[s].qmap[q.ys[j]] == target && c.child(s, static_cast<int>(j) + 1) < 0) {
                owner = s;
                label = static_cast<int>(j) + 1;
                break;
            }
    if (owner < 0) throw Error(ErrorKind::precondition, "bud: target is not a solitary T of a segment");
    int idx = static_cast<int>(c.segments.size());
    Segment seg;
    seg.parent = owner;
    seg.label = label;
    seg.depth = c.segments[owner].depth + 1;
    seg.focus = target;
    seg.qmap.assign(q.q.size(), -1);
    const std::string prefix = std::to_string(idx) + "_";
    for (int z = 0; z < static_cast<int>(q.q.size()); ++z) {
        if (z == q.x) {
            seg.qmap[z] = target;
            continue;
        }
        seg.qmap[z] = c.graph.add_fresh_node(prefix + q.q.name(z));
        for (const auto& l : q.q.labels(z)) c.graph.add_label(seg.qmap[z], l);
    }
    c.graph.remove_label(target, kT);
    c.graph.add_label(target, kA);
    for (const auto& l : q.q.labels(q.x))
        if (l != kF) c.graph.add_label(target, l);
    for (const auto& e : q.q.edges()) c.graph.add_edge(seg.qmap[e.src], seg.qmap[e.dst], e.pred);
    c.segments[owner].children.push_back(idx);
    c.segments.push_back(std::move(seg));
}

Cactus bud(const Cactus& c, int target) {
    Cactus out = c;
    bud_in_place(out, target);
    return out;
}

int SkeletonShape::depth() const {
    int d = 0;
    for (const auto& s : subs) d = std::max(d, s.depth() + 1);
    return d;
}

std::string SkeletonShape::code() const {
    std::string out = "(";
    for (std::size_t i = 0; i < labels.size(); ++i) out += std::to_string(labels[i]) + subs[i].code();
    return out + ")";
}

Cactus realize(std::shared_ptr<const OneCq> q, const SkeletonShape& shape) {
    Cactus c = as_cactus(q);
    std::deque<std::pair<const SkeletonShape*, int>> todo{{&shape, 0}};
    while (!todo.empty()) {
        auto [sh, seg] = todo.front();
        todo.pop_front();
        for (std::size_t i = 0; i < sh->labels.size(); ++i) {
            int target = c.segments[seg].qmap[c.query->ys[sh->labels[i] - 1]];
            bud_in_place(c, target);
            todo.emplace_back(&sh->subs[i], static_cast<int>(c.segments.size()) - 1);
        }
    }
    return c;
}

std::vector<SkeletonShape> skeleton_shapes(int k, int d, std::size_t cap, bool& truncated) {
    truncated = false;
    std::vector<SkeletonShape> out;
    if (cap == 0) {
        truncated = true;
        return out;
    }
    out.push_back(SkeletonShape{});
    std::size_t prev_end = 0; // shapes of depth <= e-2 are out[0, prev_end)
    for (int e = 1; e <= d && k > 0; ++e) {
        const std::size_t pool = out.size(); // shapes of depth <= e-1
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<int> labels;
            for (int j = 0; j < k; ++j)
                if (mask & (1u << j)) labels.push_back(j + 1);
            std::vector<std::size_t> pick(labels.size(), 0);
            while (true) {
                bool deep = false;
                for (auto p : pick) deep |= p >= prev_end;
                if (deep) {
                    if (out.size() >= cap) {
                        truncated = true;
                        return out;
                    }
                    SkeletonShape s;
                    s.labels = labels;
                    for (auto p : pick) s.subs.push_back(out[p]);
                    out.push_back(std::move(s));
                }
                std::size_t i = pick.size();
                while (i > 0) {
                    --i;
                    if (++pick[i] < pool) break;
                    pick[i] = 0;
                    if (i == 0) {
                        i = pick.size() + 1;
                        break;
                    }
                }
                if (i == pick.size() + 1) break;
            }
        }
        prev_end = pool;
    }
    return out;
}

CactusSet cactuses_up_to(std::shared_ptr<const OneCq> q, int d, std::size_t cap) {
    CactusSet cs;
    auto shapes = skeleton_shapes(q->span(), d, cap, cs.truncated);
    cs.cactuses.reserve(shapes.size());
    for (const auto& s : shapes) cs.cactuses.push_back(realize(q, s));
    return cs;
}

CactusSet cactuses_up_to(const LabelledGraph& q, int d, std::size_t cap) {
    return cactuses_up_to(std::make_shared<const OneCq>(make_one_cq(q)), d, cap);
}

LabelledGraph defocus_root(const LabelledGraph& g, int root_focus) {
    LabelledGraph out = g;
    if (out.remove_label(root_focus, kF)) out.add_label(root_focus, kA);
    return out;
}

LabelledGraph defocus_root(const Cactus& c) { return defocus_root(c.graph, c.root_focus); }

BoundednessResult boundedness_witness(const LabelledGraph& q, int d_max, int probe_depth, bool rooted,
                                      std::size_t cap) {
    if (probe_depth <= d_max)
        throw Error(ErrorKind::precondition, "boundedness_witness: probe depth must exceed d_max");
    auto oq = std::make_shared<const OneCq>(make_one_cq(q));
    auto probes = cactuses_up_to(oq, probe_depth, cap);
    BoundednessResult r;
    r.truncated = probes.truncated;
    for (int d = 0; d <= d_max; ++d) {
        std::vector<const Cactus*> small;
        for (const auto& c : probes.cactuses)
            if (c.depth() <= d) small.push_back(&c);
        bool all = true;
        for (const auto& c : probes.cactuses) {
            if (c.depth() <= d) continue;
            bool covered = false;
            for (const Cactus* s : small) {
                AnchorConstraint a;
                if (rooted) a[s->root_focus] = c.root_focus;
                if (has_hom(s->graph, c.graph, a)) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                all = false;
                break;
            }
        }
        if (all) {
            r.witness = true;
            r.d = d;
            return r;
        }
    }
    r.d = d_max;
    return r;
}

Ucq ucq_rewriting(const LabelledGraph& q, int d, RewriteTarget target, std::size_t cap, int focus_depth) {
    auto oq = std::make_shared<const OneCq>(make_one_cq(q));
    if (target == RewriteTarget::sigma) {
        auto rep = check_focused(q, focus_depth, cap);
        if (rep.counterexample)
            throw Error(ErrorKind::precondition,
                        "sigma rewriting requested but the query has a focusedness counterexample");
    }
    auto cs = cactuses_up_to(oq, d, cap);
    Ucq u;
    u.target = target;
    u.truncated = cs.truncated;
    if (target == RewriteTarget::sigma) {
        UcqDisjunct t;
        t.answer_var = "r";
        t.body.add_label(t.body.add_node("r"), kT);
        u.disjuncts.push_back(std::move(t));
    }
    for (const auto& c : cs.cactuses) {
        UcqDisjunct dj;
        if (target == RewriteTarget::sigma) {
            dj.body = defocus_root(c);
            dj.answer_var = c.graph.name(c.root_focus);
        } else {
            dj.body = c.graph;
        }
        u.disjuncts.push_back(std::move(dj));
    }
    return u;
}

bool ucq_holds(const Ucq& u, const LabelledGraph& data) {
    for (const auto& d : u.disjuncts)
        if (d.answer_var.empty() && has_hom(d.body, data)) return true;
    return false;
}

bool ucq_holds_at(const Ucq& u, const LabelledGraph& data, int answer) {
    for (const auto& d : u.disjuncts) {
        if (d.answer_var.empty()) continue;
        AnchorConstraint a{{d.body.node(d.answer_var), answer}};
        if (has_hom(d.body, data, a)) return true;
    }
    return false;
}

} // namespace sirup
