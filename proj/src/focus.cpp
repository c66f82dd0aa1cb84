#include "sirup/cactus.hpp"

namespace sirup {

FocusReport check_focused(const LabelledGraph& q, int depth, std::size_t cap) {
    if (depth < 1) throw Error(ErrorKind::precondition, "check_focused: depth must be at least 1");
    auto oq = std::make_shared<const OneCq>(make_one_cq(q));
    auto cs = cactuses_up_to(oq, depth, cap);
    FocusReport rep;
    rep.truncated = cs.truncated;
    for (const auto& from : cs.cactuses) {
        const auto& rlabels = from.graph.labels(from.root_focus);
        for (const auto& to : cs.cactuses) {
            for (int w = 0; w < static_cast<int>(to.graph.size()); ++w) {
                if (w == to.root_focus) continue;
                bool fits = true;
                for (const auto& l : rlabels)
                    if (!to.graph.has_label(w, l)) fits = false;
                if (!fits) continue;
                auto h = find_hom(from.graph, to.graph, {{from.root_focus, w}});
                if (h) {
                    rep.holds_up_to_depth = false;
                    rep.counterexample = FocusCounterexample{from, to, *h};
                    return rep;
                }
            }
        }
    }
    return rep;
}

} // namespace sirup
