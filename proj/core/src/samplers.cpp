#include "repopt/samplers.hpp"

#include <stdexcept>

namespace repopt {

namespace {
constexpr double kDegenerateNorm = 1e-12;
}

Eigen::VectorXd sample_sphere(Rng& rng, int n) {
  if (n < 1) throw std::invalid_argument("sample_sphere: n must be >= 1");
  Eigen::VectorXd g(n);
  while (true) {
    for (int i = 0; i < n; ++i) g[i] = rng.normal();
    const double norm = g.norm();
    if (norm >= kDegenerateNorm) return g / norm;
  }
}

Eigen::VectorXd sample_gauss_axis(Rng& rng, int n, double mu) {
  if (n < 1) throw std::invalid_argument("sample_gauss_axis: n must be >= 1");
  if (mu < 1.0) throw std::invalid_argument("sample_gauss_axis: mu must be >= 1");
  Eigen::VectorXd g(n);
  while (true) {
    const int axis = rng.uniform_index(n);
    for (int i = 0; i < n; ++i) g[i] = rng.normal();
    g[axis] *= mu;
    const double norm = g.norm();
    if (norm >= kDegenerateNorm) return g / norm;
  }
}

double sample_step(Rng& rng, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sample_step: r must be positive");
  return r * rng.uniform01();
}

}  // namespace repopt
