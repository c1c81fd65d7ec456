#include "rcd/dataset.hpp"

#include <cmath>
#include <set>
#include <string>

#include "rcd/errors.hpp"

namespace rcd {

std::vector<std::string> default_names(Eigen::Index count) {
    std::vector<std::string> names;
    for (Eigen::Index k = 0; k < count; ++k) names.push_back("x" + std::to_string(k + 1));
    return names;
}

void center_columns(Dataset& data) {
    data.values.rowwise() -= data.values.colwise().mean();
    data.centered = true;
}

Dataset make_dataset(Eigen::MatrixXd values, std::vector<std::string> names) {
    if (names.empty()) names = default_names(values.cols());
    if (static_cast<Eigen::Index>(names.size()) != values.cols()) {
        throw InvalidArgument("make_dataset: name count does not match column count");
    }
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
        throw InvalidArgument("make_dataset: duplicate variable names");
    }
    if (!values.allFinite()) throw InvalidArgument("make_dataset: non-finite values");
    Dataset d{std::move(names), std::move(values), false};
    center_columns(d);
    return d;
}

}  // namespace rcd
