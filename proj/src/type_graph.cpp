#include <algorithm>
#include <functional>
#include <set>

#include "sirup/lambda.hpp"

namespace sirup {

namespace {

std::string mask_str(unsigned m, int k) {
    std::string out = "{";
    bool first = true;
    for (int j = 1; j <= k; ++j)
        if (m & (1u << (j - 1))) {
            out += (first ? "" : ",") + std::to_string(j);
            first = false;
        }
    return out + "}";
}

bool has(unsigned m, int j) { return (m >> (j - 1)) & 1u; }

} // namespace

std::string SegmentType::str(int k) const {
    return "(" + mask_str(P, k) + "," + std::to_string(i) + "," + mask_str(C, k) + ")";
}

TypeGraph::TypeGraph(int k, int max_span) : k_(k) {
    if (k < 0) throw Error(ErrorKind::precondition, "type graph: negative span");
    if (k > max_span)
        throw Error(ErrorKind::cap_exceeded,
                    "type graph: span " + std::to_string(k) + " exceeds the limit " + std::to_string(max_span));
    const unsigned all = (1u << k);
    for (unsigned c = 0; c < all; ++c) nodes_.push_back({0, 0, c});
    for (unsigned p = 1; p < all; ++p)
        for (int i = 1; i <= k; ++i)
            if (has(p, i))
                for (unsigned c = 0; c < all; ++c) nodes_.push_back({p, i, c});
    for (int t = 0; t < static_cast<int>(nodes_.size()); ++t) index_[nodes_[t]] = t;
    for (int t = 0; t < static_cast<int>(nodes_.size()); ++t)
        for (int j = 1; j <= k; ++j)
            if (has(nodes_[t].C, j))
                for (unsigned c = 0; c < all; ++c) edges_.push_back({t, index_.at({nodes_[t].C, j, c}), j});
}

int TypeGraph::index(const SegmentType& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? -1 : it->second;
}

std::vector<int> TypeGraph::successors(int t, int label) const {
    std::vector<int> out;
    if (!has(nodes_[t].C, label)) return out;
    for (unsigned c = 0; c < (1u << k_); ++c) out.push_back(index_.at({nodes_[t].C, label, c}));
    return out;
}

std::vector<int> TypeGraph::roots() const {
    std::vector<int> out;
    for (int t = 0; t < static_cast<int>(nodes_.size()); ++t)
        if (nodes_[t].is_root()) out.push_back(t);
    return out;
}

TypeGraph type_graph(const LabelledGraph& q, int max_span) {
    auto sh = shape(q);
    if (!sh.lambda_span) throw Error(ErrorKind::precondition, "type graph: query is not a Lambda-CQ");
    return TypeGraph(*sh.lambda_span, max_span);
}

int TypeSubgraph::instance_of(int type) const {
    for (int a = 0; a < static_cast<int>(types.size()); ++a)
        if (types[a] == type) return a;
    return -1;
}

std::vector<int> TypeSubgraph::successors(int inst) const {
    std::vector<int> out;
    for (const auto& e : edges)
        if (e.from == inst) out.push_back(e.to);
    return out;
}

std::vector<int> TypeSubgraph::predecessors(int inst) const {
    std::vector<int> out;
    for (const auto& e : edges)
        if (e.to == inst) out.push_back(e.from);
    return out;
}

TypeSubgraph TypeSubgraph::induced(const std::vector<int>& keep) const {
    TypeSubgraph out;
    std::vector<int> map(types.size(), -1);
    for (int a : keep) {
        map[a] = static_cast<int>(out.types.size());
        out.types.push_back(types[a]);
    }
    for (const auto& e : edges)
        if (map[e.from] >= 0 && map[e.to] >= 0) out.edges.push_back({map[e.from], map[e.to], e.label});
    out.source = source >= 0 ? map[source] : -1;
    return out;
}

bool all_realisable(const TypeGraph& tg, const TypeSubgraph& h) {
    for (int a = 0; a < static_cast<int>(h.types.size()); ++a) {
        const auto& t = tg.type(h.types[a]);
        std::vector<int> count(tg.span() + 1, 0);
        for (const auto& e : h.edges)
            if (e.from == a) {
                if (!has(t.C, e.label)) return false;
                ++count[e.label];
            }
        for (int j = 1; j <= tg.span(); ++j)
            if (has(t.C, j) && count[j] != 1) return false;
    }
    return true;
}

bool is_realisable(const TypeGraph& tg, const TypeSubgraph& h) {
    int sources = 0, src = -1;
    for (int a = 0; a < static_cast<int>(h.types.size()); ++a)
        if (h.predecessors(a).empty()) {
            ++sources;
            src = a;
        }
    return sources == 1 && tg.type(h.types[src]).is_root() && all_realisable(tg, h);
}

TypeSubgraph acyclic_version(const TypeSubgraph& h) {
    std::set<int> closing; // edge indices
    std::vector<char> on_path(h.types.size(), 0);
    std::function<void(int)> walk = [&](int a) {
        on_path[a] = 1;
        for (int ei = 0; ei < static_cast<int>(h.edges.size()); ++ei) {
            const auto& e = h.edges[ei];
            if (e.from != a) continue;
            if (on_path[e.to]) closing.insert(ei);
            else walk(e.to);
        }
        on_path[a] = 0;
    };
    if (h.source >= 0) walk(h.source);
    TypeSubgraph out = h;
    for (int ei : closing) {
        int fresh = static_cast<int>(out.types.size());
        out.types.push_back(h.types[h.edges[ei].to]);
        out.edges[ei].to = fresh;
    }
    return out;
}

std::vector<char> on_cycle(const TypeSubgraph& h) {
    const int n = static_cast<int>(h.types.size());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (const auto& e : h.edges) reach[e.from][e.to] = 1;
    for (int m = 0; m < n; ++m)
        for (int a = 0; a < n; ++a)
            if (reach[a][m])
                for (int b = 0; b < n; ++b)
                    if (reach[m][b]) reach[a][b] = 1;
    std::vector<char> out(n, 0);
    for (int a = 0; a < n; ++a) out[a] = reach[a][a];
    return out;
}

namespace {

bool acyclic_without(const TypeSubgraph& h, const std::vector<char>& removed) {
    TypeSubgraph g;
    std::vector<int> keep;
    for (int a = 0; a < static_cast<int>(h.types.size()); ++a)
        if (!removed[a]) keep.push_back(a);
    g = h.induced(keep);
    auto c = on_cycle(g);
    return std::none_of(c.begin(), c.end(), [](char x) { return x; });
}

} // namespace

void split_periodic(const TypeSubgraph& h, std::vector<int>& B, std::vector<int>& P) {
    auto cyc = on_cycle(h);
    std::vector<char> periodic(h.types.size(), 0);
    std::vector<int> stack;
    for (int a = 0; a < static_cast<int>(h.types.size()); ++a)
        if (cyc[a]) {
            periodic[a] = 1;
            stack.push_back(a);
        }
    while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int b : h.successors(a))
            if (!periodic[b]) {
                periodic[b] = 1;
                stack.push_back(b);
            }
    }
    B.clear();
    P.clear();
    for (int a = 0; a < static_cast<int>(h.types.size()); ++a) (periodic[a] ? P : B).push_back(a);
}

std::string PeriodicStructure::describe(const TypeGraph& tg) const {
    auto list = [&](const std::vector<int>& xs) {
        std::string out = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + tg.name(h.types[xs[i]]);
        return out + "]";
    };
    std::string out = "B=" + list(B) + " P=" + list(P) + " R=" + list(R);
    for (const auto& [v, hv] : Hv) {
        out += " H_" + tg.name(h.types[v]) + "={";
        for (std::size_t i = 0; i < hv.edges.size(); ++i) {
            const auto& e = hv.edges[i];
            out += (i ? " " : "") + tg.name(hv.types[e.from]) + "-" + std::to_string(e.label) + "->" +
                   tg.name(hv.types[e.to]);
        }
        out += "}";
    }
    return out;
}

namespace {

// Enumerates successor choices (one per budded label) for every type
// reachable from `start`; `emit` receives the type -> children map.
// Returns false once the cap is hit.
bool enumerate_choices(const TypeGraph& tg, int start, bool acyclic_only, std::size_t cap, std::size_t& emitted,
                       const std::function<void(const std::map<int, std::vector<int>>&)>& emit) {
    std::map<int, std::vector<int>> chosen;
    std::vector<int> order{start};
    std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
        while (pos < order.size() && chosen.count(order[pos])) ++pos;
        if (pos == order.size()) {
            if (emitted >= cap) return false;
            ++emitted;
            emit(chosen);
            return true;
        }
        int t = order[pos];
        std::vector<int> labels;
        for (int j = 1; j <= tg.span(); ++j)
            if (has(tg.type(t).C, j)) labels.push_back(j);
        std::vector<std::vector<int>> opts;
        for (int j : labels) opts.push_back(tg.successors(t, j));
        std::vector<std::size_t> pick(labels.size(), 0);
        while (true) {
            std::vector<int> kids;
            for (std::size_t i = 0; i < labels.size(); ++i) kids.push_back(opts[i][pick[i]]);
            bool ok = true;
            if (acyclic_only) {
                // A kid that reaches t through chosen edges closes a cycle.
                for (int kid : kids) {
                    std::vector<int> stack{kid};
                    std::set<int> seen;
                    while (!stack.empty() && ok) {
                        int x = stack.back();
                        stack.pop_back();
                        if (x == t) ok = false;
                        if (!seen.insert(x).second) continue;
                        auto it = chosen.find(x);
                        if (it != chosen.end())
                            for (int y : it->second) stack.push_back(y);
                    }
                }
            }
            if (ok) {
                chosen[t] = kids;
                std::size_t added = 0;
                for (int kid : kids)
                    if (std::find(order.begin(), order.end(), kid) == order.end()) {
                        order.push_back(kid);
                        ++added;
                    }
                bool go = rec(pos + 1);
                order.resize(order.size() - added);
                chosen.erase(t);
                if (!go) return false;
            }
            std::size_t i = pick.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (++pick[i] < opts[i].size()) {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if (done) break;
        }
        return true;
    };
    return rec(0);
}

TypeSubgraph from_choices(const TypeGraph& tg, int start, const std::map<int, std::vector<int>>& chosen) {
    TypeSubgraph h;
    std::map<int, int> inst;
    std::vector<int> queue{start};
    inst[start] = 0;
    h.types.push_back(start);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int t = queue[qi];
        auto it = chosen.find(t);
        if (it == chosen.end()) continue;
        std::vector<int> labels;
        for (int j = 1; j <= tg.span(); ++j)
            if (has(tg.type(t).C, j)) labels.push_back(j);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            int kid = it->second[i];
            if (!inst.count(kid)) {
                inst[kid] = static_cast<int>(h.types.size());
                h.types.push_back(kid);
                queue.push_back(kid);
            }
            h.edges.push_back({inst[t], inst[kid], labels[i]});
        }
    }
    h.source = 0;
    return h;
}

} // namespace

std::vector<TypeSubgraph> acyclic_continuations(const TypeGraph& tg, int t, std::size_t cap, bool& truncated) {
    std::vector<TypeSubgraph> out;
    std::size_t emitted = 0;
    truncated = !enumerate_choices(tg, t, true, cap, emitted, [&](const std::map<int, std::vector<int>>& c) {
        out.push_back(from_choices(tg, t, c));
    });
    return out;
}

StructureSet enumerate_periodic_structures(const TypeGraph& tg, std::size_t cap) {
    StructureSet out;
    std::size_t emitted = 0;
    std::map<int, std::vector<TypeSubgraph>> cont_cache;
    for (int r : tg.roots()) {
        bool ok = enumerate_choices(tg, r, false, cap, emitted, [&](const std::map<int, std::vector<int>>& c) {
            PeriodicStructure ps;
            ps.h = from_choices(tg, r, c);
            split_periodic(ps.h, ps.B, ps.P);
            if (ps.P.empty()) {
                ++out.degenerate;
                return;
            }
            auto cyc = on_cycle(ps.h);
            for (int a : ps.P)
                if (cyc[a]) ps.R.push_back(a);
            std::vector<const std::vector<TypeSubgraph>*> conts;
            for (int v : ps.R) {
                int t = ps.h.types[v];
                if (!cont_cache.count(t)) {
                    bool tr = false;
                    cont_cache[t] = acyclic_continuations(tg, t, cap, tr);
                    out.truncated |= tr;
                }
                conts.push_back(&cont_cache[t]);
            }
            std::vector<std::size_t> pick(ps.R.size(), 0);
            for (const auto* c : conts)
                if (c->empty()) return;
            while (true) {
                if (out.structures.size() >= cap) {
                    out.truncated = true;
                    return;
                }
                PeriodicStructure s = ps;
                for (std::size_t i = 0; i < ps.R.size(); ++i) s.Hv[ps.R[i]] = (*conts[i])[pick[i]];
                out.structures.push_back(std::move(s));
                std::size_t i = pick.size();
                bool done = true;
                while (i > 0) {
                    --i;
                    if (++pick[i] < conts[i]->size()) {
                        done = false;
                        break;
                    }
                    pick[i] = 0;
                }
                if (done) break;
            }
        });
        if (!ok) out.truncated = true;
    }
    return out;
}

ExhaustiveVerdict exhaustive_fo(const OneCq& q, const TypeGraph& tg, std::size_t cap) {
    ExhaustiveVerdict v;
    auto set = enumerate_periodic_structures(tg, cap);
    v.truncated = set.truncated;
    for (const auto& ps : set.structures) {
        ++v.structures_checked;
        auto h = check_h_conditions(ps, q, tg);
        if (!h.any_h123()) {
            v.fo = false;
            v.violating = ps;
            return v;
        }
    }
    return v;
}

std::vector<int> shrink_feedback_set(const TypeSubgraph& h, const std::vector<int>& P, std::vector<int> R) {
    std::vector<char> removed(h.types.size(), 1);
    for (int a : P) removed[a] = 0;
    for (int a : R) removed[a] = 1;
    for (std::size_t i = 0; i < R.size();) {
        removed[R[i]] = 0;
        if (acyclic_without(h, removed)) {
            R.erase(R.begin() + static_cast<long>(i));
        } else {
            removed[R[i]] = 1;
            ++i;
        }
    }
    return R;
}

} // namespace sirup
