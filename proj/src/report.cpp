#include <cstdio>

#include "sirup/report.hpp"

namespace sirup {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void Report::add_input(const std::string& role, const std::string& path, const std::string& content) {
    inputs[role] = {{"path", path}, {"fnv1a", fnv1a_hex(content)}, {"bytes", content.size()}};
}

bool Report::any_cap_hit() const {
    for (const auto& [k, v] : caps_hit.items())
        if (v.is_boolean() && v.get<bool>()) return true;
    return false;
}

Json Report::to_json(bool with_timing) const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["verdict"] = verdict;
    j["witnesses"] = witnesses;
    j["caps_hit"] = caps_hit;
    if (with_timing) j["timing"] = {{"seconds", seconds}};
    return j;
}

Json names_json(const LabelledGraph& g, const std::vector<int>& nodes) {
    Json a = Json::array();
    for (int v : nodes) a.push_back(g.name(v));
    return a;
}

Json graph_summary(const LabelledGraph& g) {
    Json j;
    j["nodes"] = g.size();
    j["atoms"] = g.atom_count();
    j["unary_predicates"] = g.unary_predicates();
    j["binary_predicates"] = g.binary_predicates();
    return j;
}

Json shape_json(const LabelledGraph& g, const ShapeReport& s) {
    Json j;
    j["is_dag"] = s.is_dag;
    j["is_ditree"] = s.is_ditree;
    j["is_path"] = s.is_path;
    j["root"] = s.root ? Json(g.name(*s.root)) : Json(nullptr);
    j["solitary_f"] = names_json(g, s.solitary_f);
    j["solitary_t"] = names_json(g, s.solitary_t);
    j["ft_twins"] = names_json(g, s.ft_twins);
    j["is_1cq"] = s.is_1cq;
    j["lambda_span"] = s.lambda_span ? Json(*s.lambda_span) : Json(nullptr);
    return j;
}

Json classification_json(const Classification& c) {
    Json j;
    j["exact"] = c.exact ? Json(*c.exact) : Json(nullptr);
    j["lower_bounds"] = c.lower_bounds;
    j["upper_bounds"] = c.upper_bounds;
    Json prov = Json::array();
    for (const auto& p : c.provenance) {
        Json e{{"tag", p.tag}, {"claim", p.claim}};
        e["witness"] = p.witness >= 0 ? Json(p.witness) : Json(nullptr);
        prov.push_back(std::move(e));
    }
    j["provenance"] = std::move(prov);
    Json ws = Json::array();
    for (const auto& w : c.witnesses) {
        Json fields = Json::object();
        for (const auto& [k, v] : w.fields) fields[k] = v;
        ws.push_back({{"kind", w.kind}, {"fields", std::move(fields)}});
    }
    j["witnesses"] = std::move(ws);
    j["warnings"] = c.warnings;
    return j;
}

Json certain_json(const CertainResult& r) {
    Json j;
    j["answer"] = r.answer;
    j["vacuous"] = r.vacuous;
    j["models_checked"] = r.models_checked;
    if (r.countermodel) {
        Json m = Json::object();
        for (const auto& [node, t] : *r.countermodel) m[node] = t ? "T" : "F";
        j["countermodel"] = std::move(m);
    } else {
        j["countermodel"] = nullptr;
    }
    return j;
}

Json lambda_json(const LambdaVerdict& v, const TypeGraph& tg) {
    Json j;
    j["verdict"] = v.fo ? "FO" : "L_hard";
    j["span"] = tg.span();
    j["type_graph"] = {{"nodes", tg.size()}, {"edges", tg.edges().size()}};
    j["empirical_bound"] = v.empirical_bound ? Json(*v.empirical_bound) : Json(nullptr);
    j["empirical_truncated"] = v.empirical_truncated;
    j["cut_depth"] = v.trace.cut_depth;
    int black = 0, blue = 0;
    for (bool b : v.trace.black) black += b;
    for (bool b : v.trace.blue) blue += b;
    j["black_types"] = black;
    j["blue_types"] = blue;
    if (v.witness) {
        j["witness"] = {{"structure", v.witness->describe(tg)},
                        {"origin", v.witness_origin},
                        {"h1", v.witness_h.h1},
                        {"h2", v.witness_h.h2},
                        {"h3", v.witness_h.h3},
                        {"h4", v.witness_h.h4}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json trigger_json(const TriggerReport& r) {
    Json j;
    j["cactuses"] = r.cactuses;
    j["checks"] = r.checks;
    j["triggered"] = r.triggered;
    j["ok"] = r.ok();
    Json vs = Json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"skeleton", v.skeleton},
                      {"segment", v.segment},
                      {"gadget", v.gadget},
                      {"triggered", v.triggered},
                      {"expected", v.expected}});
    j["violations"] = std::move(vs);
    return j;
}

} // namespace sirup
