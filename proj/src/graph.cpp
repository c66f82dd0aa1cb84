#include "sirup/graph.hpp"

#include <algorithm>

namespace sirup {

const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::arity: return "arity";
    case ErrorKind::not_ditree: return "not_ditree";
    case ErrorKind::not_1cq: return "not_1cq";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::name_clash: return "name_clash";
    case ErrorKind::io: return "io";
    case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

int LabelledGraph::add_node(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    labels_.emplace_back();
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

int LabelledGraph::add_fresh_node(const std::string& name) {
    if (index_.count(name)) throw Error(ErrorKind::name_clash, "node name already in use: " + name);
    return add_node(name);
}

int LabelledGraph::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

int LabelledGraph::node(std::string_view name) const {
    int v = find(name);
    if (v < 0) throw Error(ErrorKind::precondition, "unknown node: " + std::string(name));
    return v;
}

bool LabelledGraph::add_label(int v, const std::string& label) {
    return labels_[v].insert(label).second;
}

bool LabelledGraph::remove_label(int v, const std::string& label) {
    return labels_[v].erase(label) > 0;
}

bool LabelledGraph::has_label(int v, std::string_view label) const {
    return labels_[v].find(label) != labels_[v].end();
}

bool LabelledGraph::add_edge(int src, int dst, const std::string& pred) {
    Edge e{src, dst, pred};
    if (!edge_set_.insert(e).second) return false;
    int id = static_cast<int>(edges_.size());
    edges_.push_back(std::move(e));
    out_[src].push_back(id);
    in_[dst].push_back(id);
    return true;
}

bool LabelledGraph::has_edge(int src, int dst, std::string_view pred) const {
    return edge_set_.count(Edge{src, dst, std::string(pred)}) > 0;
}

std::set<std::string> LabelledGraph::unary_predicates() const {
    std::set<std::string> out;
    for (const auto& ls : labels_) out.insert(ls.begin(), ls.end());
    return out;
}

std::set<std::string> LabelledGraph::binary_predicates() const {
    std::set<std::string> out;
    for (const auto& e : edges_) out.insert(e.pred);
    return out;
}

std::size_t LabelledGraph::atom_count() const {
    std::size_t n = edges_.size();
    for (const auto& ls : labels_) n += ls.size();
    return n;
}

std::vector<int> LabelledGraph::nodes_with_label(std::string_view label) const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(size()); ++v)
        if (has_label(v, label)) out.push_back(v);
    return out;
}

LabelledGraph LabelledGraph::induced(const std::vector<int>& keep) const {
    LabelledGraph g;
    std::vector<int> map(size(), -1);
    for (int v : keep) {
        map[v] = g.add_node(names_[v]);
        for (const auto& l : labels_[v]) g.add_label(map[v], l);
    }
    for (const auto& e : edges_)
        if (map[e.src] >= 0 && map[e.dst] >= 0) g.add_edge(map[e.src], map[e.dst], e.pred);
    return g;
}

std::vector<int> LabelledGraph::absorb(const LabelledGraph& other,
                                       const std::vector<std::string>& rename) {
    std::vector<int> map(other.size());
    for (int v = 0; v < static_cast<int>(other.size()); ++v) {
        map[v] = add_node(rename[v]);
        for (const auto& l : other.labels(v)) add_label(map[v], l);
    }
    for (const auto& e : other.edges()) add_edge(map[e.src], map[e.dst], e.pred);
    return map;
}

std::vector<std::string> LabelledGraph::atom_strings() const {
    std::vector<std::string> out;
    for (int v = 0; v < static_cast<int>(size()); ++v)
        for (const auto& l : labels_[v]) out.push_back(l + "(" + names_[v] + ")");
    for (const auto& e : edges_)
        out.push_back(e.pred + "(" + names_[e.src] + "," + names_[e.dst] + ")");
    std::sort(out.begin(), out.end());
    return out;
}

bool operator==(const LabelledGraph& a, const LabelledGraph& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::string> na = a.names(), nb = b.names();
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    return na == nb && a.atom_strings() == b.atom_strings();
}

} // namespace sirup
