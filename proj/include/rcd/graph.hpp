#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rcd {

using VarSet = std::set<std::size_t>;

/// Per-variable sets of identified ancestors. sets[i] never contains i.
struct AncestorSets {
    std::vector<VarSet> sets;

    AncestorSets() = default;
    explicit AncestorSets(std::size_t num_variables) : sets(num_variables) {}

    std::size_t size() const { return sets.size(); }
    const VarSet& operator[](std::size_t i) const { return sets[i]; }
    VarSet& operator[](std::size_t i) { return sets[i]; }
    bool contains(std::size_t i, std::size_t j) const { return sets[i].contains(j); }
    bool operator==(const AncestorSets&) const = default;
};

/// Square boolean matrix stored row-major.
class BoolMatrix {
public:
    BoolMatrix() = default;
    explicit BoolMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

    std::size_t size() const { return n_; }
    bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v = true) { cells_[i * n_ + j] = v ? 1 : 0; }
    std::size_t count() const;
    bool operator==(const BoolMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<unsigned char> cells_;
};

using VarPair = std::pair<std::size_t, std::size_t>;

/// parents(i, j): x_j is a direct cause of x_i.
/// confounded(i, j): x_i and x_j share a latent confounder (symmetric).
/// unresolved: pairs (i < j) found mutually ancestral; they carry no other mark.
struct CausalGraph {
    BoolMatrix parents;
    BoolMatrix confounded;
    std::set<VarPair> unresolved;

    CausalGraph() = default;
    explicit CausalGraph(std::size_t n) : parents(n), confounded(n) {}

    std::size_t num_variables() const { return parents.size(); }
    std::size_t num_directed() const { return parents.count(); }
    std::size_t num_bidirected() const { return confounded.count() / 2; }
    bool operator==(const CausalGraph&) const = default;
};

/// Checks zero diagonals, symmetry of `confounded`, exclusivity between
/// directed and bi-directed marks, and that unresolved pairs are unmarked.
/// Returns an empty string when valid, otherwise a description.
std::string validate_graph(const CausalGraph& g);

}  // namespace rcd
