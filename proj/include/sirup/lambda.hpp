#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sirup/cactus.hpp"
#include "sirup/graph.hpp"

namespace sirup {

// Neighbourhood type (P, i, C) of a segment. Label sets are bitmasks over
// 1..k (bit j-1 stands for label j).
struct SegmentType {
    unsigned P = 0;
    int i = 0;
    unsigned C = 0;

    bool is_root() const { return i == 0; }
    bool is_leaf() const { return C == 0; }
    std::string str(int k) const;
    auto operator<=>(const SegmentType&) const = default;
};

struct TypeEdge {
    int from = -1;
    int to = -1;
    int label = 0;
    auto operator<=>(const TypeEdge&) const = default;
};

inline constexpr int kDefaultMaxSpan = 6;

class TypeGraph {
public:
    // All types for span k with edges (t, t', j) iff j in C(t), P(t') = C(t)
    // and i(t') = j.
    explicit TypeGraph(int k, int max_span = kDefaultMaxSpan);

    int span() const { return k_; }
    std::size_t size() const { return nodes_.size(); }
    const SegmentType& type(int t) const { return nodes_[t]; }
    const std::vector<SegmentType>& nodes() const { return nodes_; }
    const std::vector<TypeEdge>& edges() const { return edges_; }
    int index(const SegmentType& t) const;
    std::vector<int> successors(int t, int label) const;
    std::vector<int> roots() const;
    std::string name(int t) const { return nodes_[t].str(k_); }

private:
    int k_;
    std::vector<SegmentType> nodes_;
    std::vector<TypeEdge> edges_;
    std::map<SegmentType, int> index_;
};

TypeGraph type_graph(const LabelledGraph& q, int max_span = kDefaultMaxSpan);

// A subgraph of the type graph whose nodes are instances of types; plain
// subgraphs use one instance per type, acyclic versions add fresh copies.
struct TypeSubgraph {
    std::vector<int> types;      // instance -> type index
    std::vector<TypeEdge> edges; // between instances
    int source = -1;

    int instance_of(int type) const; // -1 if absent
    std::vector<int> successors(int inst) const;
    std::vector<int> predecessors(int inst) const;
    // Induced by the given instances (renumbered in the given order).
    TypeSubgraph induced(const std::vector<int>& keep) const;
};

// Every instance has exactly one j-successor for each j in its C.
bool all_realisable(const TypeGraph& tg, const TypeSubgraph& h);
bool is_realisable(const TypeGraph& tg, const TypeSubgraph& h);

// Redirects each edge that closes a cycle on some simple root path to a
// fresh copy of its target.
TypeSubgraph acyclic_version(const TypeSubgraph& h);

struct PeriodicStructure {
    TypeSubgraph h;                 // B and P together
    std::vector<int> B;             // instances of h
    std::vector<int> P;             // instances of h
    std::vector<int> R;             // instances of h, hitting every cycle in P
    std::map<int, TypeSubgraph> Hv; // R instance -> acyclic continuation

    std::string describe(const TypeGraph& tg) const;
};

// Instances lying on a directed cycle.
std::vector<char> on_cycle(const TypeSubgraph& h);
// Drops members of R (inside P) while R still hits every cycle of P.
std::vector<int> shrink_feedback_set(const TypeSubgraph& h, const std::vector<int>& P, std::vector<int> R);

// Splits a realisable h into B (bounded source distance) and P.
void split_periodic(const TypeSubgraph& h, std::vector<int>& B, std::vector<int>& P);

// ------------------------------------------------------------ closures

struct BlowUp {
    LabelledGraph graph;
    std::vector<std::vector<int>> qmap; // instance -> q node -> graph node
    std::vector<int> focus;             // instance -> graph node
};

struct BlowUpOptions {
    // Attach an A-focused copy of the subtree of x below every budded y
    // that has no outgoing edge in the subgraph.
    bool stubs = false;
    // Attach, at the focus of every non-root instance without a parent in
    // the subgraph, the part of a parent segment below y_i.
    bool up_stubs = false;
};

// One central segment per instance, glued as budding would glue them. A
// budded y without an edge stays a dangling A-node. Throws precondition on
// an edge whose label is not budded or on two edges with one label.
BlowUp blow_up(const OneCq& q, const TypeGraph& tg, const TypeSubgraph& h, const BlowUpOptions& opts = {});

// Central segment of a root type with the ys in `budded` relabelled A.
LabelledGraph root_segment(const OneCq& q, unsigned budded);
// Segment with A focus and the ys in `budded` relabelled A.
LabelledGraph inner_segment(const OneCq& q, unsigned budded);

struct HConditions {
    bool h1 = false;
    bool h2 = false;
    bool h3 = false;
    bool h4 = false;

    bool any_h123() const { return h1 || h2 || h3; }
};

HConditions check_h_conditions(const PeriodicStructure& ps, const OneCq& q, const TypeGraph& tg);

// h1 by searching cactuses of depth below the closure's segment count.
bool h1_by_cactus_search(const PeriodicStructure& ps, const OneCq& q, const TypeGraph& tg,
                         std::size_t cap = kDefaultCactusCap);

// --------------------------------------------------------- enumeration

struct StructureSet {
    std::vector<PeriodicStructure> structures;
    std::size_t degenerate = 0; // realisable subgraphs with empty P
    bool truncated = false;
};

// All realisable subgraphs; for those with P non-empty, R is the set of P
// instances on a cycle and every combination of acyclic continuations is
// listed.
StructureSet enumerate_periodic_structures(const TypeGraph& tg, std::size_t cap = 100'000);

// Acyclic realisable subgraphs of the type graph with source `t`.
std::vector<TypeSubgraph> acyclic_continuations(const TypeGraph& tg, int t, std::size_t cap, bool& truncated);

struct ExhaustiveVerdict {
    bool fo = true;
    std::optional<PeriodicStructure> violating;
    std::size_t structures_checked = 0;
    bool truncated = false;
};

// Reference criterion by brute force: FO iff every structure with P
// non-empty satisfies h1, h2 or h3.
ExhaustiveVerdict exhaustive_fo(const OneCq& q, const TypeGraph& tg, std::size_t cap = 100'000);

// ------------------------------------------------------------ decision

struct FptTrace {
    std::vector<bool> black;                 // per type
    std::vector<bool> blue;                  // per type
    std::vector<std::vector<bool>> cut;      // cut[d][edge index], d = 0 .. cut_depth
    int cut_depth = 0;
    std::vector<std::pair<int, std::vector<int>>> failing_roots; // root type, child choice
};

struct LambdaOptions {
    int max_span = kDefaultMaxSpan;
    bool empirical_bound = true;
    int bound_d_max = -1;     // -1: 3 for span 1, 2 otherwise
    int bound_probe = -1;     // -1: d_max + 2 for span 1, d_max + 1 otherwise
    std::size_t cap = kDefaultCactusCap;
    std::size_t structure_cap = 100'000;
};

struct LambdaVerdict {
    bool fo = false;
    std::optional<int> empirical_bound;
    bool empirical_truncated = false;
    std::optional<PeriodicStructure> witness;
    HConditions witness_h;
    std::string witness_origin; // "constructed" or "enumerated"
    FptTrace trace;
};

// Colouring, cut depths and final neighbourhood check over the type graph.
FptTrace fpt_trace(const OneCq& q, const TypeGraph& tg);

LambdaVerdict decide_fo(const LabelledGraph& q, const LambdaOptions& opts = {});

} // namespace sirup
