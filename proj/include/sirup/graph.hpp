#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sirup/error.hpp"

namespace sirup {

// Reserved unary predicate names.
inline const std::string kF = "F";
inline const std::string kT = "T";
inline const std::string kA = "A";

struct Edge {
    int src = -1;
    int dst = -1;
    std::string pred;

    auto operator<=>(const Edge&) const = default;
};

// Finite digraph with unary label sets and named binary edges. Used for CQs,
// data instances, cactuses and blow-ups alike.
class LabelledGraph {
public:
    // Returns the index of `name`, creating the node if needed.
    int add_node(const std::string& name);
    // Always creates a node; throws name_clash if the name exists.
    int add_fresh_node(const std::string& name);
    int find(std::string_view name) const;
    int node(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) >= 0; }

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    const std::string& name(int v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }

    bool add_label(int v, const std::string& label);
    bool remove_label(int v, const std::string& label);
    bool has_label(int v, std::string_view label) const;
    const std::set<std::string, std::less<>>& labels(int v) const { return labels_[v]; }

    bool add_edge(int src, int dst, const std::string& pred);
    bool has_edge(int src, int dst, std::string_view pred) const;
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& out_edges(int v) const { return out_[v]; }
    const std::vector<int>& in_edges(int v) const { return in_[v]; }

    std::set<std::string> unary_predicates() const;
    std::set<std::string> binary_predicates() const;
    std::size_t atom_count() const;
    std::vector<int> nodes_with_label(std::string_view label) const;

    // Subgraph induced by `keep` (node order follows `keep`).
    LabelledGraph induced(const std::vector<int>& keep) const;
    // Copies every node and atom of `other`, mapping node names through
    // `rename`. Nodes whose renamed name already exists are merged.
    std::vector<int> absorb(const LabelledGraph& other,
                            const std::vector<std::string>& rename);

    // Canonical sorted atom list; equal iff the graphs are identical.
    std::vector<std::string> atom_strings() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::set<std::string, std::less<>>> labels_;
    std::vector<Edge> edges_;
    std::set<Edge> edge_set_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

bool operator==(const LabelledGraph& a, const LabelledGraph& b);

// Atom-list text format: `pred(x).` / `pred(x,y).`, `#` comments.
LabelledGraph parse(std::string_view text);
LabelledGraph parse_file(const std::string& path);
std::string serialize(const LabelledGraph& g);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// ---------------------------------------------------------------- structure

struct ShapeReport {
    bool is_dag = false;
    bool is_ditree = false;
    bool is_path = false;
    std::optional<int> root;
    std::vector<int> solitary_f;
    std::vector<int> solitary_t;
    std::vector<int> ft_twins;
    bool is_1cq = false;
    std::optional<int> lambda_span;
};

ShapeReport shape(const LabelledGraph& g);

bool is_solitary_f(const LabelledGraph& g, int v);
bool is_solitary_t(const LabelledGraph& g, int v);

// Ancestor structure of a ditree.
class Ditree {
public:
    explicit Ditree(const LabelledGraph& g);
    int root() const { return root_; }
    int parent(int v) const { return parent_[v]; }
    int depth(int v) const { return depth_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    // x strictly precedes y (x is a proper ancestor of y).
    bool precedes(int x, int y) const;
    bool comparable(int x, int y) const { return x == y || precedes(x, y) || precedes(y, x); }
    int inf(int x, int y) const;
    // Edge count of the directed path x -> y; requires x ancestor-or-equal of y.
    int delta(int x, int y) const { return depth_[y] - depth_[x]; }
    // Undirected tree distance.
    int distance(int x, int y) const;
    std::vector<int> subtree(int v) const;
    // Pre-order node list.
    std::vector<int> preorder() const;

private:
    int root_ = -1;
    std::vector<int> parent_;
    std::vector<int> depth_;
    std::vector<std::vector<int>> children_;
};

struct SolitaryPair {
    int t = -1;
    int f = -1;
    bool comparable = false;
    int distance = 0;
    bool symmetric = false;
};

std::vector<SolitaryPair> solitary_pairs(const LabelledGraph& g);
bool is_quasi_symmetric(const LabelledGraph& g);

struct CoreResult {
    LabelledGraph core;
    bool was_minimal = true;
};

CoreResult core_ditree(const LabelledGraph& g);

// Throws not_ditree unless g is a ditree.
void require_ditree(const LabelledGraph& g, const char* op);

} // namespace sirup
