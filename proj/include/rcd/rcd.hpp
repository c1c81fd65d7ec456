#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rcd/dataset.hpp"
#include "rcd/graph.hpp"

namespace rcd {

struct RcdConfig {
    double alpha_corr = 0.01;      // correlation is declared when p < alpha_corr
    double alpha_indep = 0.01;     // independence is declared when HSIC p > alpha_indep
    double alpha_shapiro = 0.01;   // non-Gaussianity is declared when p < alpha_shapiro
    int max_explanatory = 2;
    bool sweep_enabled = false;
    int sweep_k_max = 25;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
};

/// Outcome of testing whether x_i is the unique endogenous member of U.
struct SinkEvidence {
    bool is_sink = false;
    /// Correlation p-values between y_i and each other member, in U order.
    std::vector<double> corr_pvalues;
    /// HSIC p-values between the regression residual of y_i and each other member.
    std::vector<double> indep_pvalues;
    /// Non-empty when the check was abandoned on degenerate residuals.
    std::string skip_reason;
};

/// Residualizes every member of `subset` on the common ancestors of the
/// subset and tests whether `candidate` is a sink: correlated with every
/// other member, and its residual on the others independent of each of them.
/// The regression is multilinear HSIC regression started from least squares.
/// Caller guarantees candidate is in subset and shares no member with its
/// own ancestor set.
SinkEvidence check_sink_candidate(const Dataset& data, const std::vector<std::size_t>& subset,
                                  std::size_t candidate, const AncestorSets& ancestors,
                                  const RcdConfig& config);

/// One accepted update of the ancestor search.
struct AncestorEvent {
    int level = 0;
    std::vector<std::size_t> subset;
    std::size_t sink = 0;
};

/// Repeated ancestor search over subsets of size 2..max_explanatory+1.
/// Subsets are visited in lexicographic order; the level drops back to 1
/// after any pass that changed the ancestor sets. Accepted updates are
/// appended to `trace` when supplied.
AncestorSets extract_ancestors(const Dataset& data, const RcdConfig& config,
                               std::vector<AncestorEvent>* trace = nullptr);

struct ParentResult {
    BoolMatrix parents;
    /// Mutually ancestral pairs (i < j), excluded from the parent test.
    std::set<VarPair> unresolved;
};

/// Keeps x_j in M_i as a parent when the residual of x_i on M_i \ {x_j} is
/// correlated with the residual of x_j on M_i n M_j.
ParentResult find_parents(const Dataset& data, const AncestorSets& ancestors, const RcdConfig& config);

/// Marks a pair as confounded when neither is an ancestor of the other and
/// their residuals on their own parents remain correlated.
BoolMatrix find_confounders(const Dataset& data, const AncestorSets& ancestors, const BoolMatrix& parents,
                            const RcdConfig& config);

/// Throws InvalidArgument for fewer than 2 variables, fewer than 30 samples
/// or a constant column.
CausalGraph run_rcd(const Dataset& data, const RcdConfig& config);

struct SweepResult {
    CausalGraph graph;
    int chosen_k = 1;
    /// Bi-directed pair count for k = 1..sweep_k_max.
    std::vector<std::size_t> bidirected_counts;
};

/// Index (0-based) of the smallest count; the earliest wins ties.
std::size_t select_min_count(const std::vector<std::size_t>& counts);

/// Runs discovery with alpha_indep = 0.1^k for k = 1..sweep_k_max and keeps
/// the graph with the fewest bi-directed pairs.
SweepResult alpha_sweep(const Dataset& data, const RcdConfig& config);

}  // namespace rcd
