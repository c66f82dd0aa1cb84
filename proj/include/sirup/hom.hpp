#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sirup/graph.hpp"

namespace sirup {

// Source node index -> target node index.
struct Hom {
    std::vector<int> map;
};

// Partial map source node -> required target node (indices).
using AnchorConstraint = std::map<int, int>;

enum class HomStatus { found, none, budget_exceeded };

struct HomResult {
    HomStatus status = HomStatus::none;
    std::optional<Hom> hom;
    std::uint64_t extensions = 0;

    bool found() const { return status == HomStatus::found; }
    bool exceeded() const { return status == HomStatus::budget_exceeded; }
};

inline constexpr std::uint64_t kDefaultHomBudget = 1'000'000;

struct HomOptions {
    std::uint64_t budget = kDefaultHomBudget;
};

// Dispatches to ditree_hom when the source is a ditree, else backtracking.
HomResult hom_exists(const LabelledGraph& source, const LabelledGraph& target,
                     const AnchorConstraint& anchor = {}, const HomOptions& opts = {});

// Bottom-up candidate sets; throws not_ditree on non-ditree sources.
HomResult ditree_hom(const LabelledGraph& source, const LabelledGraph& target,
                     const AnchorConstraint& anchor = {});

// Backtracking search with forward checking; variables ordered by
// descending degree, ties by node name.
HomResult backtrack_hom(const LabelledGraph& source, const LabelledGraph& target,
                        const AnchorConstraint& anchor = {}, const HomOptions& opts = {});

// Throws cap_exceeded when the budget runs out; otherwise a plain answer.
std::optional<Hom> find_hom(const LabelledGraph& source, const LabelledGraph& target,
                            const AnchorConstraint& anchor = {}, const HomOptions& opts = {});
bool has_hom(const LabelledGraph& source, const LabelledGraph& target,
             const AnchorConstraint& anchor = {}, const HomOptions& opts = {});

bool verify_hom(const LabelledGraph& source, const LabelledGraph& target, const Hom& h,
                const AnchorConstraint& anchor = {});

Hom compose(const Hom& first, const Hom& second);

// `src=tgt` lines sorted by source name.
std::string format_hom(const LabelledGraph& source, const LabelledGraph& target, const Hom& h);
Hom parse_hom(const LabelledGraph& source, const LabelledGraph& target, const std::string& text);

AnchorConstraint anchor_by_name(const LabelledGraph& source, const LabelledGraph& target,
                                const std::map<std::string, std::string>& pairs);

} // namespace sirup
