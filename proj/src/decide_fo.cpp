#include <algorithm>
#include <map>

#include "sirup/hom.hpp"
#include "sirup/lambda.hpp"

namespace sirup {

namespace {

const std::string kCut = "#cut";

bool has(unsigned m, int j) { return (m >> (j - 1)) & 1u; }

std::vector<int> labels_of(unsigned m, int k) {
    std::vector<int> out;
    for (int j = 1; j <= k; ++j)
        if (has(m, j)) out.push_back(j);
    return out;
}

// Calls f on every element of the cartesian product; stops when f returns false.
template <typename F>
bool for_each_choice(const std::vector<std::vector<int>>& opts, F&& f) {
    for (const auto& o : opts)
        if (o.empty()) return true;
    std::vector<std::size_t> pick(opts.size(), 0);
    std::vector<int> cur(opts.size());
    while (true) {
        for (std::size_t i = 0; i < opts.size(); ++i) cur[i] = opts[i][pick[i]];
        if (!f(cur)) return false;
        std::size_t i = opts.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++pick[i] < opts[i].size()) {
                done = false;
                break;
            }
            pick[i] = 0;
        }
        if (done) return true;
    }
}

LabelledGraph with_cut_ys(LabelledGraph g, const OneCq& q, unsigned budded) {
    for (int j = 1; j <= q.span(); ++j)
        if (has(budded, j)) g.add_label(q.ys[j - 1], kCut);
    return g;
}

class Fpt {
public:
    Fpt(const OneCq& q, const TypeGraph& tg) : q_(q), tg_(tg), k_(q.span()) {
        for (int e = 0; e < static_cast<int>(tg.edges().size()); ++e) {
            const auto& te = tg.edges()[e];
            edge_index_[{te.from, te.to}] = e;
        }
        for (unsigned s = 0; s < (1u << k_); ++s) {
            root_patterns_.push_back(with_cut_ys(root_segment(q, s), q, s));
            inner_patterns_.push_back(with_cut_ys(inner_segment(q, s), q, s));
        }
    }

    FptTrace run() {
        colour();
        cuts();
        final_check();
        return std::move(trace_);
    }

    // Failing extension per edge at the final depth (empty if cuttable).
    const std::map<int, std::vector<int>>& failing_extensions() const { return failing_ext_; }
    const std::vector<int>& attractor_rank() const { return rank_; }

private:
    int edge(int from, int to) const { return edge_index_.at({from, to}); }

    bool coloured(int t) const { return trace_.blue[t]; }

    void colour() {
        const int n = static_cast<int>(tg_.size());
        trace_.black.assign(n, false);
        for (int t = 0; t < n; ++t) {
            TypeSubgraph one;
            one.types = {t};
            one.source = 0;
            auto window = blow_up(q_, tg_, one, {true, true}).graph;
            for (unsigned s = 0; s < (1u << k_) && !trace_.black[t]; ++s)
                if (has_hom(root_segment(q_, s), window)) trace_.black[t] = true;
        }
        // Player one wins by reaching a non-black leaf type in finitely many moves.
        rank_.assign(n, -1);
        bool changed = true;
        int round = 0;
        while (changed) {
            changed = false;
            std::vector<int> entering;
            for (int t = 0; t < n; ++t) {
                if (rank_[t] >= 0 || trace_.black[t]) continue;
                bool win = true;
                for (int j : labels_of(tg_.type(t).C, k_)) {
                    bool some = false;
                    for (int w : tg_.successors(t, j))
                        if (rank_[w] >= 0) some = true;
                    if (!some) win = false;
                }
                if (win) entering.push_back(t);
            }
            for (int t : entering) {
                rank_[t] = round;
                changed = true;
            }
            ++round;
        }
        trace_.blue.assign(n, false);
        for (int t = 0; t < n; ++t) trace_.blue[t] = rank_[t] < 0;
    }

    // u.y_j is usable when every non-coloured j-successor edge is cuttable.
    bool slot_cut(int u, int j, const std::vector<bool>& cut) const {
        for (int x : tg_.successors(u, j))
            if (!coloured(x) && !cut[edge(u, x)]) return false;
        return true;
    }

    void cuts() {
        const auto& edges = tg_.edges();
        trace_.cut.assign(1, std::vector<bool>(edges.size(), false));
        std::vector<BlowUp> parts;
        for (const auto& te : edges) {
            TypeSubgraph w;
            w.types = {te.from, te.to};
            w.edges = {{0, 1, te.label}};
            w.source = 0;
            parts.push_back(blow_up(q_, tg_, w, {true, true}));
        }
        while (true) {
            const auto& prev = trace_.cut.back();
            std::vector<bool> next(edges.size(), false);
            std::map<int, std::vector<int>> failing;
            for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
                const auto& te = edges[e];
                const int u = te.from, v = te.to;
                const auto& bu = parts[e];
                std::vector<int> vlabels = labels_of(tg_.type(v).C, k_);
                std::vector<std::vector<int>> opts;
                for (int l : vlabels) {
                    std::vector<int> ok;
                    for (int w : tg_.successors(v, l))
                        if (!coloured(w)) ok.push_back(w);
                    opts.push_back(ok);
                }
                LabelledGraph base = bu.graph;
                const int anchor = bu.focus[1];
                if (prev[e]) base.add_label(anchor, kCut);
                for (int j : labels_of(tg_.type(u).C, k_))
                    if (j != te.label && slot_cut(u, j, prev)) base.add_label(bu.qmap[0][q_.ys[j - 1]], kCut);
                std::vector<int> failed;
                bool all = for_each_choice(opts, [&](const std::vector<int>& ext) {
                    LabelledGraph win = base;
                    for (std::size_t i = 0; i < vlabels.size(); ++i)
                        if (prev[edge(v, ext[i])]) win.add_label(bu.qmap[1][q_.ys[vlabels[i] - 1]], kCut);
                    for (const auto& pat : inner_patterns_)
                        if (has_hom(pat, win, {{q_.x, anchor}})) return true;
                    failed = ext;
                    return false;
                });
                next[e] = all;
                if (!all) failing[e] = failed;
            }
            failing_ext_ = std::move(failing);
            if (next == prev) break;
            trace_.cut.push_back(std::move(next));
        }
        trace_.cut_depth = static_cast<int>(trace_.cut.size()) - 1;
    }

    void final_check() {
        const auto& cut = trace_.cut.back();
        for (int r : tg_.roots()) {
            std::vector<int> rl = labels_of(tg_.type(r).C, k_);
            std::vector<std::vector<int>> opts;
            for (int l : rl) opts.push_back(tg_.successors(r, l));
            for_each_choice(opts, [&](const std::vector<int>& kids) {
                TypeSubgraph w;
                w.types = {r};
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    w.types.push_back(kids[i]);
                    w.edges.push_back({0, static_cast<int>(i) + 1, rl[i]});
                }
                w.source = 0;
                auto bu = blow_up(q_, tg_, w, {true, true});
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    if (cut[edge(r, kids[i])]) bu.graph.add_label(bu.focus[i + 1], kCut);
                    for (int m : labels_of(tg_.type(kids[i]).C, k_))
                        if (slot_cut(kids[i], m, cut)) bu.graph.add_label(bu.qmap[i + 1][q_.ys[m - 1]], kCut);
                }
                bool ok = false;
                for (const auto& pat : root_patterns_)
                    if (has_hom(pat, bu.graph)) {
                        ok = true;
                        break;
                    }
                if (!ok) trace_.failing_roots.push_back({r, kids});
                return true;
            });
        }
    }

    const OneCq& q_;
    const TypeGraph& tg_;
    int k_;
    std::map<std::pair<int, int>, int> edge_index_;
    std::vector<LabelledGraph> root_patterns_;
    std::vector<LabelledGraph> inner_patterns_;
    FptTrace trace_;
    std::map<int, std::vector<int>> failing_ext_;
    std::vector<int> rank_;
};

// Follows non-cuttable edges from a failing root neighbourhood.
std::optional<PeriodicStructure> construct_witness(const OneCq& q, const TypeGraph& tg, const FptTrace& tr,
                                                   const std::map<int, std::vector<int>>& failing_ext,
                                                   const std::vector<int>& rank) {
    if (tr.failing_roots.empty()) return std::nullopt;
    const int k = q.span();
    std::map<std::pair<int, int>, int> edge_index;
    for (int e = 0; e < static_cast<int>(tg.edges().size()); ++e)
        edge_index[{tg.edges()[e].from, tg.edges()[e].to}] = e;

    std::map<int, std::vector<int>> chosen;
    std::vector<std::pair<int, int>> queue;
    auto [r, kids] = tr.failing_roots.front();
    chosen[r] = kids;
    for (int kid : kids) queue.push_back({r, kid});
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        auto [u, v] = queue[qi];
        if (chosen.count(v)) continue;
        std::vector<int> vl = labels_of(tg.type(v).C, k);
        std::vector<int> ext;
        auto it = failing_ext.find(edge_index.at({u, v}));
        if (it != failing_ext.end()) {
            ext = it->second;
        } else {
            for (int l : vl) {
                int pick = tg.index({tg.type(v).C, l, 0});
                if (tr.blue[pick])
                    for (int w : tg.successors(v, l))
                        if (!tr.blue[w]) {
                            pick = w;
                            break;
                        }
                ext.push_back(pick);
            }
        }
        chosen[v] = ext;
        for (int w : ext) queue.push_back({v, w});
    }

    PeriodicStructure ps;
    std::map<int, int> inst;
    auto instance = [&](TypeSubgraph& h, std::map<int, int>& m, int t) {
        auto f = m.find(t);
        if (f != m.end()) return f->second;
        int a = static_cast<int>(h.types.size());
        h.types.push_back(t);
        m[t] = a;
        return a;
    };
    instance(ps.h, inst, r);
    ps.h.source = 0;
    std::vector<int> order{r};
    for (std::size_t i = 0; i < order.size(); ++i) {
        int t = order[i];
        auto vl = labels_of(tg.type(t).C, k);
        const auto& ch = chosen.at(t);
        for (std::size_t j = 0; j < vl.size(); ++j) {
            bool fresh = !inst.count(ch[j]);
            int b = instance(ps.h, inst, ch[j]);
            ps.h.edges.push_back({inst.at(t), b, vl[j]});
            if (fresh) order.push_back(ch[j]);
        }
    }
    split_periodic(ps.h, ps.B, ps.P);
    if (ps.P.empty()) return std::nullopt;
    auto cyc = on_cycle(ps.h);
    std::vector<int> R;
    for (int a : ps.P)
        if (cyc[a]) R.push_back(a);
    ps.R = shrink_feedback_set(ps.h, ps.P, R);
    for (int v : ps.R) {
        int t = ps.h.types[v];
        if (rank[t] < 0) return std::nullopt;
        TypeSubgraph hv;
        std::map<int, int> hi;
        instance(hv, hi, t);
        hv.source = 0;
        std::vector<int> todo{t};
        for (std::size_t i = 0; i < todo.size(); ++i) {
            int x = todo[i];
            for (int l : labels_of(tg.type(x).C, k)) {
                int pick = -1;
                for (int w : tg.successors(x, l))
                    if (rank[w] >= 0 && rank[w] < rank[x]) {
                        pick = w;
                        break;
                    }
                if (pick < 0) return std::nullopt;
                bool fresh = !hi.count(pick);
                int b = instance(hv, hi, pick);
                hv.edges.push_back({hi.at(x), b, l});
                if (fresh) todo.push_back(pick);
            }
        }
        ps.Hv[v] = hv;
    }
    return ps;
}

} // namespace

FptTrace fpt_trace(const OneCq& q, const TypeGraph& tg) { return Fpt(q, tg).run(); }

LambdaVerdict decide_fo(const LabelledGraph& query, const LambdaOptions& opts) {
    auto sh = shape(query);
    if (!sh.lambda_span) throw Error(ErrorKind::precondition, "decide_fo: query is not a Lambda-CQ");
    OneCq q = make_one_cq(query);
    TypeGraph tg(q.span(), opts.max_span);
    Fpt fpt(q, tg);
    LambdaVerdict v;
    v.trace = fpt.run();
    v.fo = v.trace.failing_roots.empty();
    if (v.fo) {
        if (opts.empirical_bound) {
            int d_max = opts.bound_d_max >= 0 ? opts.bound_d_max : (q.span() <= 1 ? 3 : 2);
            int probe = opts.bound_probe >= 0 ? opts.bound_probe : d_max + (q.span() <= 1 ? 2 : 1);
            try {
                auto w = boundedness_witness(query, d_max, probe, false, opts.cap);
                v.empirical_truncated = w.truncated;
                if (w.witness) v.empirical_bound = w.d;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::cap_exceeded) throw;
                v.empirical_truncated = true;
            }
        }
        return v;
    }
    auto built = construct_witness(q, tg, v.trace, fpt.failing_extensions(), fpt.attractor_rank());
    if (built) {
        auto h = check_h_conditions(*built, q, tg);
        if (!h.any_h123() && !h.h4) {
            v.witness = built;
            v.witness_h = h;
            v.witness_origin = "constructed";
            return v;
        }
    }
    auto all = enumerate_periodic_structures(tg, opts.structure_cap);
    for (const auto& ps : all.structures) {
        auto h = check_h_conditions(ps, q, tg);
        if (h.any_h123()) continue;
        if (!v.witness || (v.witness_h.h4 && !h.h4)) {
            v.witness = ps;
            v.witness_h = h;
            v.witness_origin = "enumerated";
        }
        if (!h.h4) break;
    }
    return v;
}

} // namespace sirup
