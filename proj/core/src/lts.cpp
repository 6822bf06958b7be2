#include "repopt/lts.hpp"

#include <algorithm>
#include <stdexcept>

#include "repopt/top_k.hpp"

namespace repopt {

void LtsInstance::validate() const {
  if (A.rows() != b.size()) throw std::invalid_argument("lts: A and b dimensions differ");
  if (q < 1 || q > m()) throw std::invalid_argument("lts: q must be in [1, m]");
}

double LtsInstance::value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd r = A * x - b;
  return 0.5 * r.squaredNorm() - 0.5 * top_k_sum(r.cwiseProduct(r), q);
}

double LtsInstance::f1_value(const Eigen::VectorXd& x) const {
  return 0.5 * (A * x - b).squaredNorm();
}

double LtsInstance::f2_value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd r = A * x - b;
  return 0.5 * top_k_sum(r.cwiseProduct(r), q);
}

Eigen::VectorXd LtsInstance::f2_subgradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd r = A * x - b;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m());
  for (int i : top_k_indices(r.cwiseProduct(r), q)) w[i] = r[i];
  return A.transpose() * w;
}

LtsInstance generate_lts(int m, int n, int q, double sigma_clean, double outlier_std, Rng& rng) {
  if (m < 1 || n < 1 || q < 1 || q > m) throw std::invalid_argument("generate_lts: bad dimensions");

  LtsInstance inst;
  inst.A.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) inst.A(i, j) = rng.normal();

  Eigen::VectorXd x_star(n);
  for (int j = 0; j < n; ++j) x_star[j] = rng.normal();

  inst.b = inst.A * x_star;
  for (int i = 0; i < m; ++i) inst.b[i] += sigma_clean * rng.normal();

  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int i = 0; i < q; ++i) {
    const int j = i + rng.uniform_index(m - i);
    std::swap(perm[i], perm[j]);
  }
  inst.outlier_rows.assign(perm.begin(), perm.begin() + q);
  std::sort(inst.outlier_rows.begin(), inst.outlier_rows.end());
  for (int i : inst.outlier_rows) inst.b[i] = inst.A.row(i) * x_star + outlier_std * rng.normal();

  inst.q = q;
  inst.sigma_clean = sigma_clean;
  inst.outlier_std = outlier_std;
  inst.validate();
  return inst;
}

}  // namespace repopt
