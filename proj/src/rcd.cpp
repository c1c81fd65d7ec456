#include "rcd/rcd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "rcd/errors.hpp"
#include "rcd/parallel.hpp"
#include "rcd/regression.hpp"
#include "rcd/stat_tests.hpp"

namespace rcd {
namespace {

// Shapiro-Wilk is only defined up to this many samples; larger residual
// vectors are gated on their leading rows.
constexpr Eigen::Index kShapiroMaxSamples = 5000;

using Index = std::vector<std::size_t>;

Eigen::MatrixXd gather(const Dataset& data, const Index& cols) {
    Eigen::MatrixXd out(data.num_samples(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = data.values.col(static_cast<Eigen::Index>(cols[k]));
    }
    return out;
}

Index to_index(const VarSet& s) { return {s.begin(), s.end()}; }

Index intersect(const VarSet& a, const VarSet& b) {
    Index out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// OLS residual of column `target` on `regressors`; nullopt on exact fit.
std::optional<Eigen::VectorXd> residual_on(const Dataset& data, std::size_t target, const Index& regressors) {
    const RegressionFit fit =
        ols_residuals(data.values.col(static_cast<Eigen::Index>(target)), gather(data, regressors));
    if (fit.exact_fit) return std::nullopt;
    return fit.residuals;
}

struct SubsetResiduals {
    Eigen::MatrixXd y;  // one column per subset member
    std::string failure;
};

SubsetResiduals residualize(const Dataset& data, const Index& subset, const Index& common) {
    SubsetResiduals out;
    out.y.resize(data.num_samples(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k) {
        auto r = residual_on(data, subset[k], common);
        if (!r) {
            out.failure = "residual of variable " + std::to_string(subset[k]) + " on common ancestors is zero";
            return out;
        }
        out.y.col(static_cast<Eigen::Index>(k)) = *r;
    }
    return out;
}

bool non_gaussian_gate(const Eigen::MatrixXd& y, double alpha) {
    const Eigen::Index rows = std::min(y.rows(), kShapiroMaxSamples);
    for (Eigen::Index k = 0; k < y.cols(); ++k) {
        const Eigen::VectorXd col = y.col(k).head(rows);
        try {
            if (!(shapiro_wilk_pvalue(as_samples(col)).p_value < alpha)) return false;
        } catch (const DegenerateInput&) {
            return false;
        }
    }
    return true;
}

SinkEvidence sink_from_residuals(const Eigen::MatrixXd& y, std::size_t pos, const RcdConfig& config) {
    SinkEvidence ev;
    const auto p = static_cast<Eigen::Index>(pos);
    const Eigen::VectorXd target = y.col(p);
    std::vector<Eigen::Index> others;
    for (Eigen::Index k = 0; k < y.cols(); ++k) {
        if (k != p) others.push_back(k);
    }
    try {
        for (Eigen::Index k : others) {
            const Eigen::VectorXd other = y.col(k);
            const double pv = pearson_corr_pvalue(as_samples(target), as_samples(other)).p_value;
            ev.corr_pvalues.push_back(pv);
            if (!(pv < config.alpha_corr)) return ev;
        }

        Eigen::MatrixXd regressors(y.rows(), static_cast<Eigen::Index>(others.size()));
        for (std::size_t k = 0; k < others.size(); ++k) {
            regressors.col(static_cast<Eigen::Index>(k)) = y.col(others[k]);
        }
        const RegressionFit fit = mlhsicr_residuals(target, regressors);
        if (fit.exact_fit) {
            ev.skip_reason = "exact linear fit of candidate on the other members";
            return ev;
        }
        const Eigen::MatrixXd resid_gram = gaussian_gram(as_samples(fit.residuals),
                                                         median_bandwidth(as_samples(fit.residuals)));
        for (Eigen::Index k = 0; k < regressors.cols(); ++k) {
            const Eigen::VectorXd col = regressors.col(k);
            const double pv =
                hsic_gamma_test(gaussian_gram(as_samples(col), median_bandwidth(as_samples(col))), resid_gram)
                    .p_value;
            ev.indep_pvalues.push_back(pv);
            if (!(pv > config.alpha_indep)) return ev;
        }
    } catch (const DegenerateInput& e) {
        ev.skip_reason = e.what();
        return ev;
    }
    ev.is_sink = true;
    return ev;
}

bool disjoint(const VarSet& m, const Index& subset) {
    return std::none_of(subset.begin(), subset.end(), [&](std::size_t v) { return m.contains(v); });
}

Index common_ancestors(const AncestorSets& ancestors, const Index& subset) {
    VarSet common = ancestors[subset.front()];
    for (std::size_t k = 1; k < subset.size() && !common.empty(); ++k) {
        VarSet next;
        std::set_intersection(common.begin(), common.end(), ancestors[subset[k]].begin(),
                              ancestors[subset[k]].end(), std::inserter(next, next.end()));
        common = std::move(next);
    }
    return to_index(common);
}

// Advances `idx` to the next size-k combination of [0, n) in lexicographic order.
bool next_combination(Index& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (idx[pos] < n - k + pos) {
            ++idx[pos];
            for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
            return true;
        }
    }
    return false;
}

Dataset centered_copy(const Dataset& data) {
    if (data.centered) return data;
    Dataset out = data;
    center_columns(out);
    return out;
}

}  // namespace

void RcdConfig::validate() const {
    auto open_unit = [](double a) { return a > 0.0 && a < 1.0; };
    if (!open_unit(alpha_corr) || !open_unit(alpha_indep) || !open_unit(alpha_shapiro)) {
        throw InvalidArgument("RcdConfig: alpha levels must lie in (0, 1)");
    }
    if (max_explanatory < 1) throw InvalidArgument("RcdConfig: max_explanatory must be >= 1");
    if (sweep_k_max < 1) throw InvalidArgument("RcdConfig: sweep_k_max must be >= 1");
}

SinkEvidence check_sink_candidate(const Dataset& data, const std::vector<std::size_t>& subset,
                                  std::size_t candidate, const AncestorSets& ancestors,
                                  const RcdConfig& config) {
    const auto it = std::find(subset.begin(), subset.end(), candidate);
    if (it == subset.end()) throw InvalidArgument("check_sink_candidate: candidate not in subset");
    if (subset.size() < 2) throw InvalidArgument("check_sink_candidate: subset needs at least 2 members");
    const SubsetResiduals res = residualize(data, subset, common_ancestors(ancestors, subset));
    if (!res.failure.empty()) {
        SinkEvidence ev;
        ev.skip_reason = res.failure;
        return ev;
    }
    return sink_from_residuals(res.y, static_cast<std::size_t>(it - subset.begin()), config);
}

AncestorSets extract_ancestors(const Dataset& data, const RcdConfig& config, std::vector<AncestorEvent>* trace) {
    config.validate();
    const auto d = static_cast<std::size_t>(data.num_variables());
    AncestorSets ancestors(d);

    // Every test outcome for a subset depends only on the subset and its
    // common-ancestor set, so outcomes are memoized across passes.
    struct Entry {
        SubsetResiduals residuals;
        bool gate = false;
        std::vector<std::optional<bool>> sink;
    };
    std::map<std::pair<Index, Index>, Entry> memo;

    int level = 1;
    while (level <= config.max_explanatory) {
        bool changed = false;
        const std::size_t size = static_cast<std::size_t>(level) + 1;
        if (size <= d) {
            Index subset(size);
            for (std::size_t k = 0; k < size; ++k) subset[k] = k;
            do {
                Index common = common_ancestors(ancestors, subset);
                auto [slot, fresh] = memo.try_emplace({subset, common});
                Entry& entry = slot->second;
                if (fresh) {
                    entry.residuals = residualize(data, subset, common);
                    entry.gate = entry.residuals.failure.empty() &&
                                 non_gaussian_gate(entry.residuals.y, config.alpha_shapiro);
                    entry.sink.assign(size, std::nullopt);
                }
                if (!entry.gate) continue;

                Index sinks;
                for (std::size_t pos = 0; pos < size; ++pos) {
                    if (!disjoint(ancestors[subset[pos]], subset)) continue;
                    if (!entry.sink[pos]) {
                        entry.sink[pos] = sink_from_residuals(entry.residuals.y, pos, config).is_sink;
                    }
                    if (*entry.sink[pos]) sinks.push_back(subset[pos]);
                }
                if (sinks.size() == 1) {
                    const std::size_t sink = sinks.front();
                    for (std::size_t v : subset) {
                        if (v != sink) ancestors[sink].insert(v);
                    }
                    changed = true;
                    if (trace) trace->push_back({level, subset, sink});
                }
            } while (next_combination(subset, d));
        }
        level = changed ? 1 : level + 1;
    }
    return ancestors;
}

ParentResult find_parents(const Dataset& data, const AncestorSets& ancestors, const RcdConfig& config) {
    const std::size_t d = ancestors.size();
    ParentResult out{BoolMatrix(d), {}};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j : ancestors[i]) {
            if (ancestors.contains(j, i)) {
                out.unresolved.insert({std::min(i, j), std::max(i, j)});
                continue;
            }
            VarSet others = ancestors[i];
            others.erase(j);
            const auto z = residual_on(data, i, to_index(others));
            const auto w = residual_on(data, j, intersect(ancestors[i], ancestors[j]));
            if (!z || !w) continue;
            try {
                if (pearson_corr_pvalue(as_samples(*z), as_samples(*w)).p_value < config.alpha_corr) {
                    out.parents.set(i, j);
                }
            } catch (const DegenerateInput&) {
            }
        }
    }
    return out;
}

BoolMatrix find_confounders(const Dataset& data, const AncestorSets& ancestors, const BoolMatrix& parents,
                            const RcdConfig& config) {
    const std::size_t d = ancestors.size();
    std::vector<std::optional<Eigen::VectorXd>> resid(d);
    for (std::size_t i = 0; i < d; ++i) {
        Index pa;
        for (std::size_t j = 0; j < d; ++j) {
            if (parents(i, j)) pa.push_back(j);
        }
        resid[i] = residual_on(data, i, pa);
    }
    BoolMatrix confounded(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (ancestors.contains(i, j) || ancestors.contains(j, i)) continue;
            if (!resid[i] || !resid[j]) continue;
            try {
                if (pearson_corr_pvalue(as_samples(*resid[i]), as_samples(*resid[j])).p_value <
                    config.alpha_corr) {
                    confounded.set(i, j);
                    confounded.set(j, i);
                }
            } catch (const DegenerateInput&) {
            }
        }
    }
    return confounded;
}

CausalGraph run_rcd(const Dataset& input, const RcdConfig& config) {
    config.validate();
    if (input.num_variables() < 2) throw InvalidArgument("run_rcd: at least 2 variables required");
    if (input.num_samples() < 30) throw InvalidArgument("run_rcd: at least 30 samples required");
    const Dataset data = centered_copy(input);
    for (Eigen::Index c = 0; c < data.num_variables(); ++c) {
        if (data.values.col(c).cwiseAbs().maxCoeff() == 0.0) {
            const std::string name = c < static_cast<Eigen::Index>(data.names.size())
                                         ? data.names[static_cast<std::size_t>(c)]
                                         : std::to_string(c + 1);
            throw InvalidArgument("run_rcd: variable '" + name + "' is constant");
        }
    }

    const AncestorSets ancestors = extract_ancestors(data, config);
    ParentResult pr = find_parents(data, ancestors, config);
    CausalGraph g(ancestors.size());
    g.confounded = find_confounders(data, ancestors, pr.parents, config);
    g.parents = std::move(pr.parents);
    g.unresolved = std::move(pr.unresolved);
    return g;
}

std::size_t select_min_count(const std::vector<std::size_t>& counts) {
    if (counts.empty()) throw InvalidArgument("select_min_count: empty input");
    return static_cast<std::size_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());
}

SweepResult alpha_sweep(const Dataset& input, const RcdConfig& config) {
    config.validate();
    const Dataset data = centered_copy(input);
    const auto kmax = static_cast<std::size_t>(config.sweep_k_max);
    std::vector<CausalGraph> graphs(kmax);
    parallel_for(kmax, [&](std::size_t idx) {
        RcdConfig cfg = config;
        cfg.alpha_indep = std::pow(0.1, static_cast<double>(idx + 1));
        graphs[idx] = run_rcd(data, cfg);
    });
    SweepResult out;
    for (const auto& g : graphs) out.bidirected_counts.push_back(g.num_bidirected());
    const std::size_t best = select_min_count(out.bidirected_counts);
    out.chosen_k = static_cast<int>(best + 1);
    out.graph = std::move(graphs[best]);
    return out;
}

}  // namespace rcd
