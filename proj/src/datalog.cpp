#include "sirup/datalog.hpp"

#include <algorithm>

#include "sirup/cactus.hpp"
#include "sirup/hom.hpp"

namespace sirup {

std::string Atom::str() const {
    std::string out = pred;
    if (args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
    return out + ")";
}

std::string Rule::str() const {
    std::string out = head.str() + " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) out += (i ? ", " : "") + body[i].str();
    return out + ".";
}

std::string DatalogProgram::str() const {
    std::string out;
    for (const auto& r : rules) out += r.str() + "\n";
    return out;
}

bool Closure::holds(const std::string& pred, const std::string& node) const {
    auto it = facts.find(pred);
    return it != facts.end() && it->second.count(node) > 0;
}

Programs build_programs(const LabelledGraph& q) {
    OneCq o = make_one_cq(q);
    std::vector<Atom> qminus;
    for (int v = 0; v < static_cast<int>(q.size()); ++v)
        for (const auto& l : q.labels(v)) {
            if (v == o.x && l == kF) continue;
            if (l == kT && std::find(o.ys.begin(), o.ys.end(), v) != o.ys.end()) continue;
            qminus.push_back({l, {q.name(v)}});
        }
    for (const auto& e : q.edges()) qminus.push_back({e.pred, {q.name(e.src), q.name(e.dst)}});
    std::vector<Atom> ps;
    for (int y : o.ys) ps.push_back({kP, {q.name(y)}});
    const std::string x = q.name(o.x);

    Rule r4{{kGoal, {}}, {{kF, {x}}}};
    r4.body.insert(r4.body.end(), qminus.begin(), qminus.end());
    r4.body.insert(r4.body.end(), ps.begin(), ps.end());
    Rule r5{{kP, {x}}, {{kT, {x}}}};
    Rule r6{{kP, {x}}, {{kA, {x}}}};
    r6.body.insert(r6.body.end(), qminus.begin(), qminus.end());
    r6.body.insert(r6.body.end(), ps.begin(), ps.end());

    Programs p;
    p.pi.rules = {r4, r5, r6};
    p.pi.idb = {kGoal, kP};
    p.pi.goal = kGoal;
    p.sigma.rules = {r5, r6};
    p.sigma.idb = {kP};
    p.sigma.goal = kP;
    return p;
}

namespace {

std::string idb_label(const std::string& p) { return "#idb:" + p; }
std::string delta_label(const std::string& p) { return "#delta:" + p; }

struct Pattern {
    LabelledGraph body;
    int head_var = -1; // -1 for nullary heads
};

// Body as a graph over its variables; IDB atom number `delta_at` (counting
// IDB atoms only) is matched against the delta label instead.
Pattern compile(const Rule& r, const std::set<std::string>& idb, int delta_at) {
    Pattern p;
    int idb_seen = 0;
    for (const auto& a : r.body) {
        if (a.args.size() == 1) {
            int v = p.body.add_node(a.args[0]);
            if (idb.count(a.pred)) {
                p.body.add_label(v, idb_seen == delta_at ? delta_label(a.pred) : idb_label(a.pred));
                ++idb_seen;
            } else {
                p.body.add_label(v, a.pred);
            }
        } else if (a.args.size() == 2) {
            p.body.add_edge(p.body.add_node(a.args[0]), p.body.add_node(a.args[1]), a.pred);
        } else {
            throw Error(ErrorKind::arity, "fixpoint: nullary body atom " + a.pred);
        }
    }
    if (r.head.args.size() == 1) p.head_var = p.body.add_node(r.head.args[0]);
    else if (!r.head.args.empty()) throw Error(ErrorKind::arity, "fixpoint: IDB heads must be monadic");
    return p;
}

int idb_atoms(const Rule& r, const std::set<std::string>& idb) {
    int n = 0;
    for (const auto& a : r.body)
        if (idb.count(a.pred)) ++n;
    return n;
}

} // namespace

Closure fixpoint(const DatalogProgram& prog, const LabelledGraph& data) {
    LabelledGraph work = data;
    Closure cl;
    std::map<std::string, std::set<int>> derived;
    bool goal = false;

    struct Fact {
        std::string pred;
        int node;
    };
    auto fire = [&](const Rule& r, const Pattern& p, std::vector<Fact>& out) {
        const std::string& h = r.head.pred;
        if (p.head_var < 0) {
            if (!goal && has_hom(p.body, work)) {
                goal = true;
                out.push_back({h, -1});
            }
            return;
        }
        auto& have = derived[h];
        for (int a = 0; a < static_cast<int>(work.size()); ++a) {
            if (have.count(a)) continue;
            bool pending = false;
            for (const auto& f : out)
                if (f.pred == h && f.node == a) pending = true;
            if (pending) continue;
            if (has_hom(p.body, work, {{p.head_var, a}})) out.push_back({h, a});
        }
    };
    auto apply = [&](const std::vector<Fact>& fresh) {
        for (const auto& f : fresh) {
            if (f.node < 0) continue;
            derived[f.pred].insert(f.node);
            work.add_label(f.node, idb_label(f.pred));
            work.add_label(f.node, delta_label(f.pred));
        }
    };
    auto clear_delta = [&](const std::vector<Fact>& old) {
        for (const auto& f : old)
            if (f.node >= 0) work.remove_label(f.node, delta_label(f.pred));
    };

    std::vector<Fact> fresh;
    for (const auto& r : prog.rules) fire(r, compile(r, prog.idb, -1), fresh);
    apply(fresh);
    cl.rounds = 1;
    while (!fresh.empty()) {
        std::vector<Fact> next;
        for (const auto& r : prog.rules) {
            int n = idb_atoms(r, prog.idb);
            for (int i = 0; i < n; ++i) fire(r, compile(r, prog.idb, i), next);
        }
        clear_delta(fresh);
        apply(next);
        fresh = std::move(next);
        ++cl.rounds;
    }
    for (const auto& [p, nodes] : derived)
        for (int v : nodes) cl.facts[p].insert(data.name(v));
    cl.goal = goal;
    return cl;
}

} // namespace sirup
