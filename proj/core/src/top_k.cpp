#include "repopt/top_k.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace repopt {

std::vector<int> top_k_indices(const Eigen::VectorXd& values, int k) {
  const int n = static_cast<int>(values.size());
  if (k < 0 || k > n) throw std::invalid_argument("top_k: k out of range");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Stable w.r.t. the original index order, so equal values resolve to the
  // lowest index.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

double top_k_sum(const Eigen::VectorXd& values, int k) {
  double sum = 0.0;
  for (int i : top_k_indices(values, k)) sum += values[i];
  return sum;
}

}  // namespace repopt
