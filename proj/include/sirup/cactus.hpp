#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sirup/graph.hpp"
#include "sirup/hom.hpp"

namespace sirup {

// A 1-CQ together with its solitary F-node x and solitary T-nodes y_1..y_k
// (sorted by name; bud labels are 1-based positions in this list).
struct OneCq {
    LabelledGraph q;
    int x = -1;
    std::vector<int> ys;

    int span() const { return static_cast<int>(ys.size()); }
    // 1-based bud label of a q-node, 0 if it is not a solitary T.
    int label_of(int qnode) const;
};

// Throws not_1cq unless q has exactly one solitary F.
OneCq make_one_cq(const LabelledGraph& q);

struct Segment {
    int parent = -1;
    int label = 0; // bud label on the edge from the parent; 0 for the root
    int depth = 0;
    int focus = -1;
    std::vector<int> children;
    std::vector<int> qmap; // q-node -> cactus node
    std::vector<int> nodes() const { return qmap; }
};

struct Cactus {
    std::shared_ptr<const OneCq> query;
    LabelledGraph graph;
    int root_focus = -1;
    std::vector<Segment> segments; // segments[0] is the root segment

    int depth() const;
    // Child segment of `seg` reached by bud label `label`, or -1.
    int child(int seg, int label) const;
    // Canonical skeleton code, e.g. "(1(2)2)" .
    std::string skeleton_code() const;
    bool is_leaf(int seg) const { return segments[seg].children.empty(); }
};

Cactus as_cactus(std::shared_ptr<const OneCq> q);
Cactus as_cactus(const LabelledGraph& q);

// Attaches a fresh copy of q^- at the solitary T-node `target` (a node index
// of c.graph). Fresh nodes are named <segmentIndex>_<originalName>.
Cactus bud(const Cactus& c, int target);
void bud_in_place(Cactus& c, int target);

// Skeleton shape: children by bud label (labels strictly increasing).
struct SkeletonShape {
    std::vector<int> labels;
    std::vector<SkeletonShape> subs;
    int depth() const;
    std::string code() const;
};

Cactus realize(std::shared_ptr<const OneCq> q, const SkeletonShape& shape);

inline constexpr std::size_t kDefaultCactusCap = 10'000;

struct CactusSet {
    std::vector<Cactus> cactuses;
    bool truncated = false;
};

// All skeleton shapes of depth <= d for span k, breadth-first by depth then
// label-sorted; at most `cap` shapes.
std::vector<SkeletonShape> skeleton_shapes(int k, int d, std::size_t cap, bool& truncated);

CactusSet cactuses_up_to(std::shared_ptr<const OneCq> q, int d, std::size_t cap = kDefaultCactusCap);
CactusSet cactuses_up_to(const LabelledGraph& q, int d, std::size_t cap = kDefaultCactusCap);

// C°: the root focus gets A instead of F.
LabelledGraph defocus_root(const Cactus& c);
LabelledGraph defocus_root(const LabelledGraph& g, int root_focus);

struct BoundednessResult {
    bool witness = false; // Witness{d} if true, NoWitnessUpTo{d} otherwise
    int d = 0;
    bool truncated = false;
    bool empirical = true;
};

// Least d <= d_max such that every cactus of depth <= probe_depth receives a
// homomorphism from a cactus of depth <= d (root to root when `rooted`).
BoundednessResult boundedness_witness(const LabelledGraph& q, int d_max, int probe_depth, bool rooted,
                                      std::size_t cap = kDefaultCactusCap);

enum class RewriteTarget { delta, sigma };

struct UcqDisjunct {
    LabelledGraph body;
    std::string answer_var; // empty for Boolean disjuncts
};

struct Ucq {
    RewriteTarget target = RewriteTarget::delta;
    std::vector<UcqDisjunct> disjuncts;
    bool truncated = false;
};

Ucq ucq_rewriting(const LabelledGraph& q, int d, RewriteTarget target,
                  std::size_t cap = kDefaultCactusCap, int focus_depth = 2);

// Boolean UCQ: some disjunct maps into data. Sigma UCQs: the answer
// variable maps to `answer` (index into data).
bool ucq_holds(const Ucq& u, const LabelledGraph& data);
bool ucq_holds_at(const Ucq& u, const LabelledGraph& data, int answer);

struct FocusCounterexample {
    Cactus from;
    Cactus to;
    Hom hom;
};

struct FocusReport {
    bool holds_up_to_depth = true;
    bool truncated = false;
    std::optional<FocusCounterexample> counterexample;
};

FocusReport check_focused(const LabelledGraph& q, int depth, std::size_t cap = kDefaultCactusCap);

} // namespace sirup
