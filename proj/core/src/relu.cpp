#include "repopt/relu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace repopt {

namespace {

inline double relu(double u) { return u > 0.0 ? u : 0.0; }

}  // namespace

void ReluInstance::validate() const {
  if (A.rows() != b.size()) throw std::invalid_argument("relu: A and b dimensions differ");
  if (A.rows() < 1 || A.cols() < 1) throw std::invalid_argument("relu: empty instance");
}

double ReluInstance::value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd u = A * x;
  double h = 0.0;
  for (int i = 0; i < m(); ++i) {
    const double e = relu(u[i]) - b[i];
    h += 0.5 * e * e;
  }
  return h;
}

double ReluInstance::f1_value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd u = A * x;
  double f = 0.5 * b.squaredNorm();
  for (int i = 0; i < m(); ++i) {
    const double p = relu(u[i]);
    f += 0.5 * p * p + relu(-b[i]) * p;
  }
  return f;
}

double ReluInstance::f2_value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd u = A * x;
  double g = 0.0;
  for (int i = 0; i < m(); ++i) g += relu(b[i]) * relu(u[i]);
  return g;
}

Eigen::VectorXd ReluInstance::f2_subgradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd u = A * x;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m());
  for (int i = 0; i < m(); ++i)
    if (u[i] > 0.0) w[i] = relu(b[i]);
  return A.transpose() * w;
}

ReluInstance generate_relu(int m, int n, double q_param, double rho_b, Rng& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate_relu: bad dimensions");
  if (q_param < 0.0 || q_param > 1.0)
    throw std::invalid_argument("generate_relu: q_param must lie in [0, 1]");

  ReluInstance inst;
  inst.A.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) inst.A(i, j) = rng.normal();

  Eigen::VectorXd x_star(n);
  for (int j = 0; j < n; ++j) x_star[j] = rng.normal();

  const Eigen::VectorXd u = inst.A * x_star;
  inst.b.resize(m);
  for (int i = 0; i < m; ++i) inst.b[i] = relu(u[i]) + 0.1 * rng.normal();

  const int n_flip = static_cast<int>(std::ceil(q_param * m));
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int i = 0; i < n_flip; ++i) {
    const int j = i + rng.uniform_index(m - i);
    std::swap(perm[i], perm[j]);
  }
  inst.flipped_rows.assign(perm.begin(), perm.begin() + n_flip);
  std::sort(inst.flipped_rows.begin(), inst.flipped_rows.end());
  for (int i : inst.flipped_rows) inst.b[i] = -std::abs(inst.b[i]);

  inst.b *= rho_b;
  inst.q_param = q_param;
  inst.rho_b = rho_b;
  inst.validate();
  return inst;
}

}  // namespace repopt
