#include "repopt/trimmed_lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repopt/top_k.hpp"

namespace repopt {

void TrimmedLassoInstance::validate() const {
  if (A.rows() != b.size()) throw std::invalid_argument("trimmed lasso: A and b dimensions differ");
  if (k < 1 || k > n()) throw std::invalid_argument("trimmed lasso: k must be in [1, n]");
  if (!(lambda > 0.0)) throw std::invalid_argument("trimmed lasso: lambda must be positive");
}

double TrimmedLassoInstance::value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd abs_x = x.cwiseAbs();
  return 0.5 * (A * x - b).squaredNorm() + lambda * (abs_x.sum() - top_k_sum(abs_x, k));
}

double TrimmedLassoInstance::f1_value(const Eigen::VectorXd& x) const {
  return 0.5 * (A * x - b).squaredNorm() + lambda * x.lpNorm<1>();
}

double TrimmedLassoInstance::f2_value(const Eigen::VectorXd& x) const {
  return lambda * top_k_sum(x.cwiseAbs(), k);
}

Eigen::VectorXd TrimmedLassoInstance::f2_subgradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n());
  for (int i : top_k_indices(x.cwiseAbs(), k)) {
    if (x[i] > 0.0)
      g[i] = lambda;
    else if (x[i] < 0.0)
      g[i] = -lambda;
  }
  return g;
}

TrimmedLassoInstance generate_trimmed_lasso(int m, int n, int k, double lambda, double noise_std,
                                            Rng& rng) {
  if (m < 1 || n < 1 || k < 1 || k > n)
    throw std::invalid_argument("generate_trimmed_lasso: bad dimensions");

  // Entries N(0, 1/m) put the columns at unit norm in expectation, so the
  // penalty weight lambda is on the same scale as the data misfit.  With raw
  // unit-variance entries the l1 term is negligible at this m and the
  // trimming penalty never shapes the landscape.
  TrimmedLassoInstance inst;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  inst.A.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) inst.A(i, j) = scale * rng.normal();

  // Support of size k drawn by a partial Fisher-Yates shuffle.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.uniform_index(n - i);
    std::swap(perm[i], perm[j]);
  }
  inst.planted_support.assign(perm.begin(), perm.begin() + k);
  std::sort(inst.planted_support.begin(), inst.planted_support.end());

  Eigen::VectorXd x_star = Eigen::VectorXd::Zero(n);
  for (int i : inst.planted_support) x_star[i] = rng.uniform01() < 0.5 ? 1.0 : -1.0;

  inst.b = inst.A * x_star;
  for (int i = 0; i < m; ++i) inst.b[i] += noise_std * rng.normal();

  inst.lambda = lambda;
  inst.k = k;
  inst.noise_std = noise_std;
  inst.validate();
  return inst;
}

}  // namespace repopt
