#include "sirup/hom.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace sirup {

namespace {

class Bits {
public:
    Bits() = default;
    Bits(std::size_t n, bool full) : n_(n), w_((n + 63) / 64, full ? ~0ULL : 0ULL) { trim(); }

    void set(std::size_t i) { w_[i / 64] |= 1ULL << (i % 64); }
    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1ULL; }
    bool none() const {
        for (auto x : w_) if (x) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    // Returns true if anything was removed.
    bool and_with(const Bits& o) {
        bool changed = false;
        for (std::size_t i = 0; i < w_.size(); ++i) {
            auto nw = w_[i] & o.w_[i];
            changed |= nw != w_[i];
            w_[i] = nw;
        }
        return changed;
    }
    void clear() { std::fill(w_.begin(), w_.end(), 0ULL); }
    int first() const { return next(0); }
    int next(std::size_t from) const {
        if (from >= n_) return -1;
        std::size_t wi = from / 64;
        auto x = w_[wi] & (~0ULL << (from % 64));
        while (true) {
            if (x) return static_cast<int>(wi * 64 + std::countr_zero(x));
            if (++wi >= w_.size()) return -1;
            x = w_[wi];
        }
    }
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < w_.size(); ++wi) {
            auto x = w_[wi];
            while (x) {
                f(static_cast<int>(wi * 64 + std::countr_zero(x)));
                x &= x - 1;
            }
        }
    }

private:
    void trim() {
        if (n_ % 64 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
    }
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Target adjacency restricted to the predicates the source uses.
struct TargetIndex {
    std::size_t m = 0;
    std::unordered_map<std::string, int> pred_id;
    std::vector<std::vector<std::vector<int>>> out; // pred -> node -> succs
    std::vector<std::vector<std::vector<int>>> in;  // pred -> node -> preds

    TargetIndex(const LabelledGraph& source, const LabelledGraph& target) : m(target.size()) {
        for (const auto& e : source.edges())
            if (!pred_id.count(e.pred)) {
                pred_id.emplace(e.pred, static_cast<int>(pred_id.size()));
            }
        out.assign(pred_id.size(), std::vector<std::vector<int>>(m));
        in.assign(pred_id.size(), std::vector<std::vector<int>>(m));
        for (const auto& e : target.edges()) {
            auto it = pred_id.find(e.pred);
            if (it == pred_id.end()) continue;
            out[it->second][e.src].push_back(e.dst);
            in[it->second][e.dst].push_back(e.src);
        }
    }

    // Nodes with a p-successor in `set` (forward=false) or a p-predecessor in
    // `set` (forward=true).
    Bits support(int p, const Bits& set, bool forward) const {
        Bits r(m, false);
        const auto& adj = forward ? out[p] : in[p];
        set.for_each([&](int w) {
            for (int x : adj[w]) r.set(x);
        });
        return r;
    }
};

// Label and anchor filtering shared by both engines. Returns false if some
// domain is empty.
bool initial_domains(const LabelledGraph& s, const LabelledGraph& t, const AnchorConstraint& anchor,
                     std::vector<Bits>& dom) {
    const std::size_t m = t.size();
    std::unordered_map<std::string, Bits> by_label;
    dom.assign(s.size(), Bits(m, true));
    for (int v = 0; v < static_cast<int>(s.size()); ++v) {
        for (const auto& l : s.labels(v)) {
            auto it = by_label.find(l);
            if (it == by_label.end()) {
                Bits b(m, false);
                for (int w = 0; w < static_cast<int>(m); ++w)
                    if (t.has_label(w, l)) b.set(w);
                it = by_label.emplace(l, std::move(b)).first;
            }
            dom[v].and_with(it->second);
        }
    }
    for (auto [v, w] : anchor) {
        if (v < 0 || v >= static_cast<int>(s.size()) || w < 0 || w >= static_cast<int>(m))
            throw Error(ErrorKind::precondition, "anchor refers to a missing node");
        bool ok = dom[v].test(w);
        dom[v].clear();
        if (ok) dom[v].set(w);
    }
    for (const auto& e : s.edges()) {
        if (e.src != e.dst) continue;
        Bits loop(m, false);
        for (const auto& te : t.edges())
            if (te.src == te.dst && te.pred == e.pred) loop.set(te.src);
        dom[e.src].and_with(loop);
    }
    for (const auto& d : dom)
        if (d.none()) return false;
    return true;
}

bool source_is_ditree(const LabelledGraph& s) {
    if (s.empty()) return false;
    return shape(s).is_ditree;
}

class Backtracker {
public:
    Backtracker(const LabelledGraph& s, const LabelledGraph& t, const HomOptions& opts)
        : s_(s), idx_(s, t), budget_(opts.budget) {
        const int n = static_cast<int>(s.size());
        arcs_.resize(n);
        for (const auto& e : s.edges()) {
            if (e.src == e.dst) continue;
            int p = idx_.pred_id.at(e.pred);
            arcs_[e.src].push_back({e.dst, p, true});
            arcs_[e.dst].push_back({e.src, p, false});
        }
        order_.resize(n);
        for (int v = 0; v < n; ++v) order_[v] = v;
        std::vector<int> degree(n, 0);
        for (const auto& e : s.edges()) {
            ++degree[e.src];
            ++degree[e.dst];
        }
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            if (degree[a] != degree[b]) return degree[a] > degree[b];
            return s.name(a) < s.name(b);
        });
        stamp_.assign(n, -1);
    }

    HomResult run(std::vector<Bits> dom) {
        dom_ = std::move(dom);
        HomResult r;
        std::deque<int> q;
        for (int v = 0; v < static_cast<int>(dom_.size()); ++v) q.push_back(v);
        if (!propagate(q)) {
            r.status = HomStatus::none;
            return r;
        }
        int outcome = search(0);
        r.extensions = extensions_;
        if (outcome == 1) {
            r.status = HomStatus::found;
            Hom h;
            h.map.resize(dom_.size());
            for (int v = 0; v < static_cast<int>(dom_.size()); ++v) h.map[v] = dom_[v].first();
            r.hom = std::move(h);
        } else if (outcome == 2) {
            r.status = HomStatus::budget_exceeded;
        } else {
            r.status = HomStatus::none;
        }
        return r;
    }

private:
    struct Arc {
        int other;
        int pred;
        bool forward; // edge goes this -> other
    };
    struct TrailEntry {
        int var;
        int old_stamp;
        Bits old;
    };

    void save(int v) {
        if (stamp_[v] == level_) return;
        trail_.push_back({v, stamp_[v], dom_[v]});
        stamp_[v] = level_;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto& e = trail_.back();
            dom_[e.var] = std::move(e.old);
            stamp_[e.var] = e.old_stamp;
            trail_.pop_back();
        }
    }

    bool propagate(std::deque<int>& q) {
        std::vector<char> queued(dom_.size(), 0);
        for (int v : q) queued[v] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            queued[x] = 0;
            for (const auto& a : arcs_[x]) {
                Bits sup = idx_.support(a.pred, dom_[x], a.forward);
                Bits next = dom_[a.other];
                if (!next.and_with(sup)) continue;
                save(a.other);
                dom_[a.other] = std::move(next);
                if (dom_[a.other].none()) return false;
                if (!queued[a.other]) {
                    queued[a.other] = 1;
                    q.push_back(a.other);
                }
            }
        }
        return true;
    }

    // 1 found, 0 exhausted, 2 budget exceeded.
    int search(std::size_t depth) {
        if (depth == order_.size()) return 1;
        int v = order_[depth];
        Bits values = dom_[v];
        for (int w = values.first(); w >= 0; w = values.next(static_cast<std::size_t>(w) + 1)) {
            if (++extensions_ > budget_) return 2;
            std::size_t mark = trail_.size();
            level_ = ++level_counter_;
            save(v);
            Bits single(idx_.m, false);
            single.set(w);
            dom_[v] = std::move(single);
            std::deque<int> q{v};
            if (propagate(q)) {
                int r = search(depth + 1);
                if (r != 0) return r;
            }
            undo(mark);
        }
        return 0;
    }

    const LabelledGraph& s_;
    TargetIndex idx_;
    std::uint64_t budget_;
    std::uint64_t extensions_ = 0;
    std::vector<std::vector<Arc>> arcs_;
    std::vector<int> order_;
    std::vector<Bits> dom_;
    std::vector<TrailEntry> trail_;
    std::vector<int> stamp_;
    int level_ = 0;
    int level_counter_ = 0;
};

HomResult ditree_dp(const LabelledGraph& s, const LabelledGraph& t, const AnchorConstraint& anchor) {
    HomResult r;
    std::vector<Bits> cand;
    if (!initial_domains(s, t, anchor, cand)) return r;
    TargetIndex idx(s, t);
    Ditree tree(s);
    auto pre = tree.preorder();
    // Incoming edge predicate of each non-root node.
    std::vector<int> in_pred(s.size(), -1);
    for (const auto& e : s.edges()) in_pred[e.dst] = idx.pred_id.at(e.pred);
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        int v = *it;
        if (cand[v].none()) return r;
        if (v == tree.root()) continue;
        int parent = tree.parent(v);
        cand[parent].and_with(idx.support(in_pred[v], cand[v], false));
    }
    if (cand[tree.root()].none()) return r;
    Hom h;
    h.map.assign(s.size(), -1);
    for (int v : pre) {
        if (v == tree.root()) {
            h.map[v] = cand[v].first();
            continue;
        }
        int pw = h.map[tree.parent(v)];
        int chosen = -1;
        for (int w : idx.out[in_pred[v]][pw])
            if (cand[v].test(w) && (chosen < 0 || w < chosen)) chosen = w;
        if (chosen < 0) throw Error(ErrorKind::internal, "ditree_hom: inconsistent candidate sets");
        h.map[v] = chosen;
    }
    r.status = HomStatus::found;
    r.hom = std::move(h);
    return r;
}

} // namespace

HomResult ditree_hom(const LabelledGraph& source, const LabelledGraph& target,
                     const AnchorConstraint& anchor) {
    if (!source_is_ditree(source))
        throw Error(ErrorKind::not_ditree, "ditree_hom: source is not a ditree");
    return ditree_dp(source, target, anchor);
}

HomResult backtrack_hom(const LabelledGraph& source, const LabelledGraph& target,
                        const AnchorConstraint& anchor, const HomOptions& opts) {
    HomResult r;
    if (source.empty()) {
        r.status = HomStatus::found;
        r.hom = Hom{};
        return r;
    }
    std::vector<Bits> dom;
    if (!initial_domains(source, target, anchor, dom)) return r;
    Backtracker bt(source, target, opts);
    return bt.run(std::move(dom));
}

HomResult hom_exists(const LabelledGraph& source, const LabelledGraph& target,
                     const AnchorConstraint& anchor, const HomOptions& opts) {
    if (source_is_ditree(source)) return ditree_dp(source, target, anchor);
    return backtrack_hom(source, target, anchor, opts);
}

std::optional<Hom> find_hom(const LabelledGraph& source, const LabelledGraph& target,
                            const AnchorConstraint& anchor, const HomOptions& opts) {
    auto r = hom_exists(source, target, anchor, opts);
    if (r.exceeded())
        throw Error(ErrorKind::cap_exceeded, "homomorphism search budget exceeded (" +
                                                 std::to_string(opts.budget) + " extensions)");
    return r.hom;
}

bool has_hom(const LabelledGraph& source, const LabelledGraph& target,
             const AnchorConstraint& anchor, const HomOptions& opts) {
    return find_hom(source, target, anchor, opts).has_value();
}

bool verify_hom(const LabelledGraph& source, const LabelledGraph& target, const Hom& h,
                const AnchorConstraint& anchor) {
    if (h.map.size() != source.size()) return false;
    for (int v = 0; v < static_cast<int>(source.size()); ++v) {
        int w = h.map[v];
        if (w < 0 || w >= static_cast<int>(target.size())) return false;
        for (const auto& l : source.labels(v))
            if (!target.has_label(w, l)) return false;
    }
    for (const auto& e : source.edges())
        if (!target.has_edge(h.map[e.src], h.map[e.dst], e.pred)) return false;
    for (auto [v, w] : anchor)
        if (h.map[v] != w) return false;
    return true;
}

Hom compose(const Hom& first, const Hom& second) {
    Hom h;
    h.map.reserve(first.map.size());
    for (int w : first.map) h.map.push_back(second.map[w]);
    return h;
}

std::string format_hom(const LabelledGraph& source, const LabelledGraph& target, const Hom& h) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (int v = 0; v < static_cast<int>(source.size()); ++v)
        rows.emplace_back(source.name(v), target.name(h.map[v]));
    std::sort(rows.begin(), rows.end());
    std::string out;
    for (const auto& [a, b] : rows) out += a + "=" + b + "\n";
    return out;
}

Hom parse_hom(const LabelledGraph& source, const LabelledGraph& target, const std::string& text) {
    Hom h;
    h.map.assign(source.size(), -1);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::syntax, "line " + std::to_string(lineno) + ": expected src=tgt");
        h.map[source.node(line.substr(0, eq))] = target.node(line.substr(eq + 1));
    }
    return h;
}

AnchorConstraint anchor_by_name(const LabelledGraph& source, const LabelledGraph& target,
                                const std::map<std::string, std::string>& pairs) {
    AnchorConstraint a;
    for (const auto& [x, y] : pairs) a[source.node(x)] = target.node(y);
    return a;
}

} // namespace sirup
