#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sirup/graph.hpp"
#include "sirup/lambda.hpp"

namespace sirup {

struct GraphInstance {
    std::vector<std::string> vertices;
    std::vector<std::pair<int, int>> edges;
    bool directed = true;
    int s = 0;
    int t = 0;

    void validate() const; // throws precondition
    bool reachable() const;
    std::string str() const;
};

// Parses "s=<v> t=<v> [undirected]" followed by "u->v" or "u-v" tokens;
// vertices are created on first use.
GraphInstance parse_graph(const std::string& text);

GraphInstance random_dag(std::mt19937& rng, int max_vertices, int max_edges);
GraphInstance random_undirected(std::mt19937& rng, int max_vertices, int max_edges);

// Eligibility of a solitary pair for the dag reduction: comparable with no
// solitary node between, or of minimal distance, incomparable and not
// symmetric in a twin-free query that is not quasi-symmetric.
bool pair_eligible(const LabelledGraph& q, const SolitaryPair& p);

// One copy q^e per edge (u, v) named e<i>_<node>, with t^e renamed to u and
// f^e to v, both A; then T(s) and F(t).
LabelledGraph dag_reduction(const LabelledGraph& q, const SolitaryPair& pair, const GraphInstance& g);

// Both orientations of every edge, glued as in dag_reduction.
LabelledGraph undirected_reduction(const LabelledGraph& q, const GraphInstance& g);

// A copy P<v>_ of the closure of P per vertex, every P edge repeated between
// the copies of adjacent vertices in both directions, the closure of B
// attached at s and every continuation H_v attached at t.
LabelledGraph blowup_reduction(const PeriodicStructure& ps, const LabelledGraph& q, const GraphInstance& g);

} // namespace sirup
