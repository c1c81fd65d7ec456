#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rcd {

/// Column-named sample matrix; rows are observations.
struct Dataset {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
    bool centered = false;

    Eigen::Index num_samples() const { return values.rows(); }
    Eigen::Index num_variables() const { return values.cols(); }
};

/// Builds a dataset with names x1..xd, validates finiteness and subtracts
/// column means.
Dataset make_dataset(Eigen::MatrixXd values, std::vector<std::string> names = {});

/// Subtracts column means in place and marks the dataset centered.
void center_columns(Dataset& data);

std::vector<std::string> default_names(Eigen::Index count);

}  // namespace rcd
