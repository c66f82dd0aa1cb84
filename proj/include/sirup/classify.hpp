#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sirup/graph.hpp"
#include "sirup/lambda.hpp"

namespace sirup {

inline const std::string kFO = "FO";
inline const std::string kLComplete = "L-complete";
inline const std::string kNLComplete = "NL-complete";
inline const std::string kLHard = "L-hard";
inline const std::string kNLHard = "NL-hard";
inline const std::string kNoCriterion = "no implemented criterion";

// A machine-checkable certificate; `fields` holds node names and counts.
struct ClassWitness {
    std::string kind;
    std::map<std::string, std::string> fields;
};

// `claim` is "exact:<class>", "lower:<class>" or "upper:<class>".
struct ProvenanceEntry {
    std::string tag;
    std::string claim;
    int witness = -1; // index into Classification::witnesses
};

struct Classification {
    std::optional<std::string> exact;
    std::set<std::string> lower_bounds;
    std::set<std::string> upper_bounds;
    std::vector<ProvenanceEntry> provenance;
    std::vector<ClassWitness> witnesses;
    std::vector<std::string> warnings;

    void add_upper(const std::string& cls, const std::string& tag, int witness = -1);
    void add_lower(const std::string& cls, const std::string& tag, int witness = -1);
    void set_exact(const std::string& cls, const std::string& tag, int witness = -1);
    int add_witness(ClassWitness w);
    // Exact class agrees with the bound sets and every bound is cited.
    bool consistent() const;
};

Classification precheck(const LabelledGraph& q);

struct NlWitness {
    SolitaryPair pair;
    std::string rule; // "comparable" or "twin-free"
    std::string rationale;
};

// Throws precondition if q is not a minimal ditree or lacks a solitary F or T.
std::optional<NlWitness> nl_hardness(const LabelledGraph& q);

// The copies q^{a-1}, q^a, q^{a+1} glued at t^a = f^{a-1} and f^a = t^{a+1};
// the four contact nodes are all F in I_FF and all T in I_TT.
struct ContactStructure {
    LabelledGraph h;
    std::vector<int> contacts;
    LabelledGraph i_ff;
    LabelledGraph i_tt;
};

ContactStructure contact_structure(const LabelledGraph& q, int t, int f);

Classification trichotomy_1F1T(const LabelledGraph& q);

struct ClassifyOptions {
    LambdaOptions lambda;
    bool cross_check = true; // bounded search after an FO verdict
};

struct ClassifyResult {
    Classification cls;
    ShapeReport shape;
    LabelledGraph query; // after coring
    std::optional<NlWitness> nl;
    std::optional<LambdaVerdict> lambda;
    std::optional<BoundednessResult> fo_check;
};

ClassifyResult classify(const LabelledGraph& q, const ClassifyOptions& opts = {});

} // namespace sirup
