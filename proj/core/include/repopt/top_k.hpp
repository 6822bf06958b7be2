#pragma once

#include <vector>

#include <Eigen/Core>

namespace repopt {

/// Sum of the k largest entries of `values`. Requires 0 <= k <= values.size().
double top_k_sum(const Eigen::VectorXd& values, int k);

/// Indices of the k largest entries, ties broken by lowest index. The result
/// is sorted ascending.
std::vector<int> top_k_indices(const Eigen::VectorXd& values, int k);

}  // namespace repopt
