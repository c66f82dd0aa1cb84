#include "sirup/classify.hpp"

#include <algorithm>

#include "sirup/cactus.hpp"
#include "sirup/hom.hpp"

namespace sirup {

namespace {

int upper_rank(const std::string& c) {
    static const std::vector<std::string> order{kFO, "L", "NL", "P", "coNP"};
    auto it = std::find(order.begin(), order.end(), c);
    return static_cast<int>(it - order.begin());
}

int lower_rank(const std::string& c) { return c == kNLHard ? 2 : c == kLHard ? 1 : 0; }

std::string pair_str(const LabelledGraph& g, const SolitaryPair& p) {
    return "(" + g.name(p.t) + ", " + g.name(p.f) + ")";
}

bool pair_less(const LabelledGraph& g, const SolitaryPair& a, const SolitaryPair& b) {
    return std::make_pair(g.name(a.t), g.name(a.f)) < std::make_pair(g.name(b.t), g.name(b.f));
}

ClassWitness pair_witness(const LabelledGraph& g, const SolitaryPair& p, const std::string& rule) {
    ClassWitness w{"solitary-pair", {}};
    w.fields["t"] = g.name(p.t);
    w.fields["f"] = g.name(p.f);
    w.fields["rule"] = rule;
    w.fields["distance"] = std::to_string(p.distance);
    return w;
}

// A directed path over one binary predicate whose last node is the solitary
// F-node and whose other nodes are solitary T-nodes without further labels.
bool is_t_chain_path(const LabelledGraph& q, const ShapeReport& sh) {
    if (!sh.is_path || q.binary_predicates().size() != 1 || sh.solitary_f.size() != 1) return false;
    if (sh.solitary_t.size() + 1 != q.size()) return false;
    const int f = sh.solitary_f.front();
    if (!q.out_edges(f).empty() || q.labels(f).size() != 1) return false;
    for (int t : sh.solitary_t)
        if (q.labels(t).size() != 1) return false;
    return true;
}

void require_minimal_ditree(const LabelledGraph& q, const char* who) {
    require_ditree(q, who);
    if (!core_ditree(q).was_minimal)
        throw Error(ErrorKind::precondition, std::string(who) + ": query is not minimal, core it first");
}

} // namespace

void Classification::add_upper(const std::string& cls, const std::string& tag, int witness) {
    provenance.push_back({tag, "upper:" + cls, witness});
    if (upper_bounds.empty() || upper_rank(cls) < upper_rank(*upper_bounds.begin())) upper_bounds = {cls};
}

void Classification::add_lower(const std::string& cls, const std::string& tag, int witness) {
    provenance.push_back({tag, "lower:" + cls, witness});
    if (lower_bounds.empty() || lower_rank(cls) > lower_rank(*lower_bounds.begin())) lower_bounds = {cls};
}

void Classification::set_exact(const std::string& cls, const std::string& tag, int witness) {
    provenance.push_back({tag, "exact:" + cls, witness});
    exact = cls;
    if (cls == kFO) {
        lower_bounds.clear();
        upper_bounds = {kFO};
    } else if (cls == kLComplete) {
        lower_bounds = {kLHard};
        upper_bounds = {"L"};
    } else {
        lower_bounds = {kNLHard};
        upper_bounds = {"NL"};
    }
}

int Classification::add_witness(ClassWitness w) {
    witnesses.push_back(std::move(w));
    return static_cast<int>(witnesses.size()) - 1;
}

bool Classification::consistent() const {
    if (exact) {
        if (*exact == kFO && !(lower_bounds.empty() && upper_bounds == std::set<std::string>{kFO})) return false;
        if (*exact == kLComplete &&
            !(lower_bounds == std::set<std::string>{kLHard} && upper_bounds == std::set<std::string>{"L"}))
            return false;
        if (*exact == kNLComplete &&
            !(lower_bounds == std::set<std::string>{kNLHard} && upper_bounds == std::set<std::string>{"NL"}))
            return false;
    }
    for (const auto& l : lower_bounds)
        for (const auto& u : upper_bounds) {
            if (l == kLHard && upper_rank(u) < upper_rank("L")) return false;
            if (l == kNLHard && upper_rank(u) < upper_rank("NL")) return false;
        }
    auto cited = [&](const std::string& claim) {
        for (const auto& p : provenance)
            if (p.claim == claim || (exact && p.claim == "exact:" + *exact)) return true;
        return false;
    };
    for (const auto& l : lower_bounds)
        if (!cited("lower:" + l)) return false;
    for (const auto& u : upper_bounds)
        if (!cited("upper:" + u)) return false;
    for (const auto& p : provenance)
        if (p.witness >= static_cast<int>(witnesses.size())) return false;
    return true;
}

Classification precheck(const LabelledGraph& q) {
    Classification c;
    auto sh = shape(q);
    const auto nf = sh.solitary_f.size();
    if (nf == 0) {
        c.set_exact(kFO, "precheck: no solitary F-node");
        return c;
    }
    if (nf >= 2) {
        c.add_upper("coNP", "precheck: two or more solitary F-nodes");
        return c;
    }
    c.add_upper("P", "precheck: one solitary F-node, datalog program");
    if (sh.solitary_t.size() == 1) {
        c.add_upper("NL", "precheck: one solitary F-node and one solitary T-node, linear program");
        if (sh.is_ditree && is_quasi_symmetric(q)) c.add_upper("L", "precheck: quasi-symmetric ditree");
    } else if (is_t_chain_path(q, sh)) {
        c.add_upper("NL", "precheck: one-predicate path of solitary T-nodes into the F-node, walk reachability");
    }
    return c;
}

std::optional<NlWitness> nl_hardness(const LabelledGraph& q) {
    require_minimal_ditree(q, "nl_hardness");
    auto sh = shape(q);
    if (sh.solitary_f.empty() || sh.solitary_t.empty())
        throw Error(ErrorKind::precondition, "nl_hardness: needs a solitary F-node and a solitary T-node");
    Ditree tree(q);
    auto pairs = solitary_pairs(q);

    std::optional<SolitaryPair> best;
    for (const auto& p : pairs) {
        if (!p.comparable) continue;
        int lo = tree.precedes(p.t, p.f) ? p.f : p.t;
        int hi = lo == p.f ? p.t : p.f;
        bool clear = true;
        for (int v = tree.parent(lo); v != hi; v = tree.parent(v))
            if (is_solitary_f(q, v) || is_solitary_t(q, v)) clear = false;
        if (clear && (!best || pair_less(q, p, *best))) best = p;
    }
    if (best)
        return NlWitness{*best, "comparable",
                         "solitary pair " + pair_str(q, *best) + " lies on one branch with no solitary node between"};

    if (!sh.ft_twins.empty() || is_quasi_symmetric(q)) return std::nullopt;
    int dist = -1;
    for (const auto& p : pairs)
        if (dist < 0 || p.distance < dist) dist = p.distance;
    for (const auto& p : pairs)
        if (p.distance == dist && !p.symmetric && (!best || pair_less(q, p, *best))) best = p;
    if (!best) return std::nullopt;
    return NlWitness{*best, "twin-free",
                     "twin-free and not quasi-symmetric; " + pair_str(q, *best) +
                         " is a closest pair without a swapping symmetry"};
}

ContactStructure contact_structure(const LabelledGraph& q, int t, int f) {
    ContactStructure cs;
    const int n = static_cast<int>(q.size());
    std::vector<std::vector<int>> at(3, std::vector<int>(n, -1));
    for (int a = 0; a < 3; ++a) {
        for (int v = 0; v < n; ++v) {
            if (a > 0 && v == t) {
                at[a][v] = at[a - 1][f];
                continue;
            }
            at[a][v] = cs.h.add_node("c" + std::to_string(a) + "_" + q.name(v));
            if (v == t || v == f) continue;
            for (const auto& l : q.labels(v)) cs.h.add_label(at[a][v], l);
        }
        for (const auto& e : q.edges()) cs.h.add_edge(at[a][e.src], at[a][e.dst], e.pred);
    }
    cs.contacts = {at[0][t], at[0][f], at[1][f], at[2][f]};
    cs.i_ff = cs.h;
    cs.i_tt = cs.h;
    for (int c : cs.contacts) {
        cs.i_ff.add_label(c, kF);
        cs.i_tt.add_label(c, kT);
    }
    return cs;
}

Classification trichotomy_1F1T(const LabelledGraph& q) {
    require_minimal_ditree(q, "trichotomy");
    auto sh = shape(q);
    if (sh.solitary_f.size() != 1 || sh.solitary_t.size() != 1)
        throw Error(ErrorKind::precondition, "trichotomy: needs exactly one solitary F-node and one solitary T-node");
    Classification c;
    const auto p = solitary_pairs(q).front();
    if (p.comparable) {
        int w = c.add_witness(pair_witness(q, p, "comparable"));
        c.set_exact(kNLComplete, "trichotomy: comparable solitary pair", w);
        return c;
    }
    if (is_quasi_symmetric(q)) {
        int w = c.add_witness(pair_witness(q, p, "symmetric"));
        c.set_exact(kLComplete, "trichotomy: quasi-symmetric", w);
        return c;
    }
    auto cs = contact_structure(q, p.t, p.f);
    const std::pair<const char*, const LabelledGraph*> models[] = {{"I_FF", &cs.i_ff}, {"I_TT", &cs.i_tt}};
    for (const auto& [name, model] : models) {
        auto h = find_hom(q, *model);
        if (h) {
            ClassWitness w{"contact-hom", {}};
            w.fields["model"] = name;
            w.fields["t"] = q.name(p.t);
            w.fields["f"] = q.name(p.f);
            w.fields["hom"] = format_hom(q, *model, *h);
            c.set_exact(kFO, "trichotomy: query maps into a total contact model", c.add_witness(std::move(w)));
            return c;
        }
    }
    ClassWitness w = pair_witness(q, p, "no-contact-hom");
    c.set_exact(kNLComplete, "trichotomy: no homomorphism into I_FF or I_TT", c.add_witness(std::move(w)));
    return c;
}

ClassifyResult classify(const LabelledGraph& q, const ClassifyOptions& opts) {
    ClassifyResult r;
    r.shape = shape(q);
    r.query = q;
    if (!r.shape.is_ditree) {
        r.cls = precheck(q);
        if (!r.cls.exact) r.cls.provenance.push_back({kNoCriterion, "exact:none", -1});
        return r;
    }
    auto core = core_ditree(q);
    if (!core.was_minimal) {
        r.cls.warnings.push_back("query is not minimal; classified its core (" + std::to_string(q.size()) + " -> " +
                                 std::to_string(core.core.size()) + " nodes)");
        r.query = core.core;
        r.shape = shape(r.query);
    }
    const LabelledGraph& g = r.query;
    {
        auto warnings = std::move(r.cls.warnings);
        r.cls = precheck(g);
        r.cls.warnings = std::move(warnings);
    }
    auto& c = r.cls;
    const auto nf = r.shape.solitary_f.size();
    const auto nt = r.shape.solitary_t.size();

    if (nf == 1 && nt == 0) c.set_exact(kFO, "no solitary T-node: the program is not recursive");

    if (!c.exact && nf == 1) {
        r.nl = nl_hardness(g);
        if (r.nl) c.add_lower(kNLHard, "NL-hardness: " + r.nl->rule + " pair",
                              c.add_witness(pair_witness(g, r.nl->pair, r.nl->rule)));
        if (nt == 1) {
            auto tri = trichotomy_1F1T(g);
            int base = static_cast<int>(c.witnesses.size());
            for (auto& w : tri.witnesses) c.witnesses.push_back(std::move(w));
            for (auto p : tri.provenance) {
                if (p.witness >= 0) p.witness += base;
                c.provenance.push_back(std::move(p));
            }
            c.exact = tri.exact;
            c.lower_bounds = tri.lower_bounds;
            c.upper_bounds = tri.upper_bounds;
        }
        if (r.shape.lambda_span && (nt >= 2 || *c.exact == kFO || *c.exact == kLComplete)) {
            LambdaOptions lo = opts.lambda;
            lo.empirical_bound = false;
            r.lambda = decide_fo(g, lo);
            if (nt >= 2 && !r.nl) {
                if (r.lambda->fo) {
                    c.set_exact(kFO, "lambda: no cuttable-free periodic structure");
                } else {
                    ClassWitness w{"periodic-structure", {}};
                    TypeGraph tg(static_cast<int>(nt), opts.lambda.max_span);
                    if (r.lambda->witness) w.fields["structure"] = r.lambda->witness->describe(tg);
                    w.fields["origin"] = r.lambda->witness_origin;
                    const auto& h = r.lambda->witness_h;
                    w.fields["h"] = std::string{char('0' + h.h1), char('0' + h.h2), char('0' + h.h3), char('0' + h.h4)};
                    c.add_lower(kLHard, "lambda: periodic structure violating h1-h3", c.add_witness(std::move(w)));
                }
            } else if (c.exact && r.lambda->fo != (*c.exact == kFO)) {
                c.warnings.push_back("lambda decision disagrees with the trichotomy verdict");
            }
        }
        const bool nl_exact = r.nl && c.upper_bounds.count("NL");
        if (!c.exact && !nl_exact && !(r.lambda && nt >= 2)) c.provenance.push_back({kNoCriterion, "exact:none", -1});
    } else if (!c.exact) {
        c.provenance.push_back({kNoCriterion, "exact:none", -1});
    }

    if (!c.exact && c.lower_bounds.count(kNLHard) && c.upper_bounds.count("NL"))
        c.set_exact(kNLComplete, "NL-hardness meets the NL upper bound");

    if (c.exact && *c.exact == kFO && opts.cross_check && nf == 1 && nt >= 1) {
        const int probe = nt == 1 ? 4 : 3;
        try {
            r.fo_check = boundedness_witness(g, 2, probe, false, opts.lambda.cap);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::cap_exceeded) throw;
            r.fo_check = BoundednessResult{false, 2, true, true};
        }
        if (!r.fo_check->witness && !r.fo_check->truncated)
            c.warnings.push_back("no bounded-depth witness found up to depth 2");
    }
    return r;
}

} // namespace sirup
