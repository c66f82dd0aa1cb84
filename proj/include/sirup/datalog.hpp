#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sirup/graph.hpp"

namespace sirup {

// Unary, binary or nullary atom over variable names.
struct Atom {
    std::string pred;
    std::vector<std::string> args;

    std::string str() const;
};

struct Rule {
    Atom head;
    std::vector<Atom> body;

    std::string str() const;
};

// Monadic program: every IDB predicate has arity <= 1.
struct DatalogProgram {
    std::vector<Rule> rules;
    std::set<std::string> idb;
    std::string goal;

    std::string str() const;
};

struct Programs {
    DatalogProgram pi;    // rules (4), (5), (6); goal G
    DatalogProgram sigma; // rules (5), (6); goal P
};

inline const std::string kGoal = "G";
inline const std::string kP = "P";

Programs build_programs(const LabelledGraph& q);

struct Closure {
    std::map<std::string, std::set<std::string>> facts; // unary IDB -> node names
    bool goal = false;
    int rounds = 0;

    bool holds(const std::string& pred, const std::string& node) const;
};

// Semi-naive least fixpoint. Goal is the nullary atom if the goal predicate
// is nullary; for a unary goal `goal` stays false and callers read `facts`.
Closure fixpoint(const DatalogProgram& prog, const LabelledGraph& data);

// ------------------------------------------------------ certain answers

inline constexpr int kDefaultMaxANodes = 22;

struct CertainOptions {
    bool disjointness = false; // Delta+ : models with an FT node are discarded
    int max_a_nodes = kDefaultMaxANodes;
};

struct CertainResult {
    bool answer = false;
    bool vacuous = false; // every model inconsistent
    // A model (choice node -> true for T) that q does not map into.
    std::optional<std::map<std::string, bool>> countermodel;
    std::uint64_t models_checked = 0;
};

// (Delta_q, G) over d: every T/F completion of the A-nodes admits q -> model.
CertainResult certain_answer_delta(const LabelledGraph& q, const LabelledGraph& d,
                                   const CertainOptions& opts = {});

// Same, with explicitly given choice nodes (indices into d).
CertainResult certain_answer_choices(const LabelledGraph& q, const LabelledGraph& d,
                                     std::vector<int> choices, const CertainOptions& opts = {});

// Rule (11) variant: the nodes with an incoming `rel` edge are the choices.
class SchemaOrgTransform {
public:
    SchemaOrgTransform(const LabelledGraph& q, std::string rel);
    const std::string& rel() const { return rel_; }
    // A(b) becomes rel(c,b) for a fresh c; A labels are dropped.
    LabelledGraph forward(const LabelledGraph& d) const;
    // rel(a,b) becomes A(b); rel edges and their now isolated sources vanish.
    LabelledGraph backward(const LabelledGraph& d) const;
    CertainResult certain_answer(const LabelledGraph& d, const CertainOptions& opts = {}) const;

private:
    LabelledGraph q_;
    std::string rel_;
};

inline const std::string kDefaultSchemaRel = "SR";

// Throws name_clash if `rel` occurs in q.
SchemaOrgTransform to_schema_org(const LabelledGraph& q, const std::string& rel = kDefaultSchemaRel);

} // namespace sirup
