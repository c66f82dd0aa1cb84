#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sirup/cactus.hpp"
#include "sirup/graph.hpp"
#include "sirup/hom.hpp"

namespace sirup {

// Gate tree over AND (2 inputs), NOT (1 input) and leaf variables y_1..y_n.
struct Gate;
using GatePtr = std::shared_ptr<const Gate>;

struct Gate {
    enum class Kind { var, neg, conj };
    Kind kind = Kind::var;
    int var = 0; // 1-based, leaves only
    GatePtr a;
    GatePtr b;
};

GatePtr var(int i);
GatePtr neg(GatePtr a);
GatePtr conj(GatePtr a, GatePtr b);
// Desugared to NOT(AND(NOT a, NOT b)).
GatePtr disj(GatePtr a, GatePtr b);

enum class InputType { up, down };

struct InputTuple {
    InputType type = InputType::up;
    int length = 1;
};

struct Formula {
    GatePtr root;
    int arity = 0;
    std::vector<InputTuple> inputs; // lengths sum to arity

    // Throws precondition on a leaf root, out-of-range variables or
    // input lengths that do not add up to the arity.
    void validate() const;
    bool eval(const std::vector<int>& bits) const; // bits[i-1] is y_i
    int gates() const;                             // non-leaf gates
    std::string str() const;
};

// 4d+11 variables, one (up) tuple; true iff the input has no factor c100.
Formula gen_good(int d);
// k variables, one (up) tuple; true iff the input is the reverse of
// 001c (111c)^l w with w empty and l = 0, w = 001, or w = 111 and l < d-1.
Formula gen_mustbranch(int k, int d = 1);

// `y3`, `not(e)`, `and(e,e)`, `or(e,e)`, `good(d)`, `mustbranch(k[,d])`.
GatePtr parse_gate(const std::string& text, int& arity_out);

enum class FrameType { AT, TA, AA };
const char* to_string(FrameType f);
FrameType parse_frame(const std::string& s);

struct GadgetSpec {
    Formula formula;
    FrameType frame = FrameType::AA;
};

// Gadget file: blocks of `gadget <AT|TA|AA>`, `inputs up:3 down:1` and
// `formula <expr>` lines; `#` comments. Missing inputs default to one (up)
// tuple covering every variable.
std::vector<GadgetSpec> parse_gadget_file(const std::string& text);

struct GadgetNodes {
    int pi = -1;
    int iota = -1;
    int rho = -1;
    int rho_prime = -1;
    int tau = -1;
    int twin = -1;
};

struct GadgetQuery {
    LabelledGraph q;
    std::vector<GadgetSpec> gadgets;
    std::vector<GadgetNodes> nodes; // per gadget
    int x = -1;
    int alpha = -1;
    int t0 = -1;
    int t1 = -1;
};

struct GadgetOptions {
    int max_gates = 8; // per formula
};

// Node-label shorthand (any label other than F and T) becomes an edge of
// that name to a fresh node.
GadgetQuery build_query(const std::vector<GadgetSpec>& gadgets, const GadgetOptions& opts = {});

// q with the F-label of x replaced by A.
LabelledGraph q_minus_tt(const GadgetQuery& gq);

// Bit carried by the skeleton edge into `seg`: 0 when budded at t0, 1 at t1.
int segment_bit(const GadgetQuery& gq, const Cactus& c, int seg);

// Homomorphism q^-_TT -> c with x at the focus of seg and iota_g at its
// alpha-node. Throws precondition on leaf segments or unknown gadgets.
bool triggered(const GadgetQuery& gq, const Cactus& c, int seg, int gadget, const HomOptions& opts = {});

// Every input assembled from the uppath and downpaths of seg per the input
// types; empty when some tuple cannot be gathered.
std::vector<std::vector<int>> gatherable_inputs(const GadgetQuery& gq, const Cactus& c, int seg, int gadget);

// Non-leaf seg of form q^-_Z admits a gadget of type AA or Z.
bool frame_admits(const GadgetQuery& gq, const Cactus& c, int seg, int gadget);

struct TriggerViolation {
    std::string skeleton;
    int segment = -1;
    int gadget = -1;
    bool triggered = false;
    bool expected = false;
};

struct TriggerReport {
    int cactuses = 0;
    int checks = 0;
    int triggered = 0;
    std::vector<TriggerViolation> violations;
    bool ok() const { return violations.empty(); }
};

inline constexpr int kMaxGadgetDepth = 3;

// Triggering check on every cactus of depth <= depth and every non-root,
// non-leaf segment: triggered iff the frame admits the segment and some
// gatherable input satisfies the formula.
TriggerReport verify_triggering(const GadgetQuery& gq, int depth, const HomOptions& opts = {});

} // namespace sirup
