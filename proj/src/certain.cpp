#include <algorithm>

#include "sirup/datalog.hpp"
#include "sirup/hom.hpp"

namespace sirup {

CertainResult certain_answer_choices(const LabelledGraph& q, const LabelledGraph& d,
                                     std::vector<int> choices, const CertainOptions& opts) {
    std::sort(choices.begin(), choices.end(), [&](int a, int b) { return d.name(a) < d.name(b); });
    choices.erase(std::unique(choices.begin(), choices.end()), choices.end());
    const int n = static_cast<int>(choices.size());
    if (n > opts.max_a_nodes)
        throw Error(ErrorKind::cap_exceeded, "certain_answer: " + std::to_string(n) +
                                                 " choice nodes exceed the bound " +
                                                 std::to_string(opts.max_a_nodes));
    CertainResult r;
    LabelledGraph model = d;
    if (opts.disjointness)
        for (int v = 0; v < static_cast<int>(d.size()); ++v)
            if (d.has_label(v, kF) && d.has_label(v, kT)) {
                r.answer = true;
                r.vacuous = true;
                return r;
            }
    // Gray code: bit i set means choice i is T. Start with every choice F.
    std::vector<bool> bit(n, false);
    std::vector<bool> added_f(n, false), added_t(n, false);
    auto set_choice = [&](int i, bool t) {
        int v = choices[i];
        if (added_f[i]) model.remove_label(v, kF);
        if (added_t[i]) model.remove_label(v, kT);
        added_f[i] = added_t[i] = false;
        if (t) added_t[i] = model.add_label(v, kT);
        else added_f[i] = model.add_label(v, kF);
        bit[i] = t;
    };
    for (int i = 0; i < n; ++i) set_choice(i, false);
    bool any_consistent = false;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t step = 0; step < total; ++step) {
        if (step > 0) {
            int flip = __builtin_ctzll(step);
            set_choice(flip, !bit[flip]);
        }
        if (opts.disjointness) {
            bool clash = false;
            for (int v : choices)
                if (model.has_label(v, kF) && model.has_label(v, kT)) clash = true;
            if (clash) continue;
        }
        any_consistent = true;
        ++r.models_checked;
        if (!has_hom(q, model)) {
            std::map<std::string, bool> cm;
            for (int i = 0; i < n; ++i) cm[d.name(choices[i])] = bit[i];
            r.countermodel = std::move(cm);
            r.answer = false;
            return r;
        }
    }
    r.answer = true;
    r.vacuous = !any_consistent;
    return r;
}

CertainResult certain_answer_delta(const LabelledGraph& q, const LabelledGraph& d, const CertainOptions& opts) {
    return certain_answer_choices(q, d, d.nodes_with_label(kA), opts);
}

SchemaOrgTransform::SchemaOrgTransform(const LabelledGraph& q, std::string rel) : q_(q), rel_(std::move(rel)) {}

LabelledGraph SchemaOrgTransform::forward(const LabelledGraph& d) const {
    LabelledGraph out;
    for (int v = 0; v < static_cast<int>(d.size()); ++v) {
        int w = out.add_node(d.name(v));
        for (const auto& l : d.labels(v))
            if (l != kA) out.add_label(w, l);
    }
    for (const auto& e : d.edges()) out.add_edge(e.src, e.dst, e.pred);
    for (int b : d.nodes_with_label(kA)) {
        std::string name = "c_" + d.name(b);
        while (out.contains(name)) name += "_";
        out.add_edge(out.add_fresh_node(name), b, rel_);
    }
    return out;
}

LabelledGraph SchemaOrgTransform::backward(const LabelledGraph& d) const {
    std::vector<char> src(d.size(), 0);
    LabelledGraph tmp;
    for (int v = 0; v < static_cast<int>(d.size()); ++v) {
        int w = tmp.add_node(d.name(v));
        for (const auto& l : d.labels(v)) tmp.add_label(w, l);
    }
    for (const auto& e : d.edges()) {
        if (e.pred == rel_) {
            tmp.add_label(e.dst, kA);
            src[e.src] = 1;
        } else {
            tmp.add_edge(e.src, e.dst, e.pred);
        }
    }
    std::vector<int> keep;
    for (int v = 0; v < static_cast<int>(tmp.size()); ++v)
        if (!src[v] || !tmp.labels(v).empty() || !tmp.out_edges(v).empty() || !tmp.in_edges(v).empty())
            keep.push_back(v);
    return tmp.induced(keep);
}

CertainResult SchemaOrgTransform::certain_answer(const LabelledGraph& d, const CertainOptions& opts) const {
    std::vector<int> choices;
    for (const auto& e : d.edges())
        if (e.pred == rel_) choices.push_back(e.dst);
    return certain_answer_choices(q_, d, choices, opts);
}

SchemaOrgTransform to_schema_org(const LabelledGraph& q, const std::string& rel) {
    if (q.binary_predicates().count(rel) || q.unary_predicates().count(rel))
        throw Error(ErrorKind::name_clash, "to_schema_org: predicate " + rel + " already occurs in the query");
    return SchemaOrgTransform(q, rel);
}

} // namespace sirup
