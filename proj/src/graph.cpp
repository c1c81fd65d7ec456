#include "rcd/graph.hpp"

#include <algorithm>

namespace rcd {

std::size_t BoolMatrix::count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::string validate_graph(const CausalGraph& g) {
    const std::size_t n = g.num_variables();
    if (g.confounded.size() != n) return "parent and confounder matrices differ in size";
    for (std::size_t i = 0; i < n; ++i) {
        if (g.parents(i, i)) return "self-loop in parents at " + std::to_string(i);
        if (g.confounded(i, i)) return "self-confounding at " + std::to_string(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (g.confounded(i, j) != g.confounded(j, i)) return "confounder matrix not symmetric";
            if (g.confounded(i, j) && (g.parents(i, j) || g.parents(j, i))) {
                return "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") is both directed and bi-directed";
            }
        }
    }
    for (const auto& [i, j] : g.unresolved) {
        if (i >= j || j >= n) return "malformed unresolved pair";
        if (g.parents(i, j) || g.parents(j, i) || g.confounded(i, j)) return "unresolved pair carries a mark";
    }
    return {};
}

}  // namespace rcd
