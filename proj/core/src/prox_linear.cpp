#include "repopt/prox_linear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "repopt/certify.hpp"
#include "repopt/inner_solvers.hpp"

namespace repopt {

void ProxLinearConfig::validate() const {
  if (!(rho_prox > 0.0)) throw std::invalid_argument("prox_linear: rho_prox must be positive");
  if (inner_max_iter < 1)
    throw std::invalid_argument("prox_linear: inner_max_iter must be positive");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("prox_linear: inner_tol must be positive");
}

ReluProxLinearOracle::ReluProxLinearOracle(const ReluInstance& inst, ProxLinearConfig cfg)
    : inst_(inst), cfg_(cfg) {
  cfg_.validate();
  const double sigma = spectral_norm_estimate(inst_.A);
  step_ = 1.0 / (sigma * sigma * (1.0 + 1e-6) + cfg_.rho_prox);
}

double ReluProxLinearOracle::model_value(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y) const {
  return inst_.value(y) + 0.5 * cfg_.rho_prox * (y - x).squaredNorm();
}

OracleProposal ReluProxLinearOracle::propose(const Eigen::VectorXd& x) const {
  OracleProposal out;

  const int m = inst_.m();
  const int n = inst_.n();

  // Best iterate found so far; starts at y = x, whose model value is h(x)
  // because the prox term vanishes there.
  Eigen::VectorXd y = x;
  Eigen::VectorXd u = inst_.A * x;
  double value = model_value(x, x);

  // Phase 1: proximal-gradient descent on the model
  //   m(y) = c(Ay) + (rho/2)||y - x||^2
  // with the fixed step 1/(L_hat + rho), starting from y = x and keeping the
  // best model-value iterate seen.  At a relu kink the right derivative is
  // used (slope factor 1 at u_i = 0), so the all-kinks start u = 0 still
  // produces a nonzero gradient and the sweep can leave it.  The iterates are
  // deliberately not safeguarded: a fixed step crossing a hinge kink (row
  // with b_i < 0) can overshoot into ascent, and the best-of-sweep selection
  // is what turns the non-monotone trajectory into a usable proposal.
  {
    Eigen::VectorXd yc = y;
    Eigen::VectorXd uc = u;
    Eigen::VectorXd w(m);
    for (int it = 0; it < cfg_.inner_max_iter; ++it) {
      for (int i = 0; i < m; ++i) {
        const double r = uc[i] > 0.0 ? uc[i] : 0.0;
        w[i] = uc[i] >= 0.0 ? r - inst_.b[i] : 0.0;
      }
      Eigen::VectorXd grad = inst_.A.transpose() * w;
      grad.noalias() += cfg_.rho_prox * (yc - x);
      if (grad.norm() <= cfg_.inner_tol) break;
      yc.noalias() -= step_ * grad;
      uc.noalias() = inst_.A * yc;
      double v = 0.5 * cfg_.rho_prox * (yc - x).squaredNorm();
      for (int i = 0; i < m; ++i) {
        const double e = (uc[i] > 0.0 ? uc[i] : 0.0) - inst_.b[i];
        v += 0.5 * e * e;
      }
      if (v < value) {
        value = v;
        y = yc;
        u = uc;
      }
    }
  }

  // Backtrack along p from the current y until the true model value strictly
  // decreases.  The trial is evaluated as a sum of per-row differences,
  // 0.5*(r' - r)*((r' - b) + (r - b)) with r = relu(u), never as a difference
  // of accumulated totals: with |model| in the thousands, a totals
  // comparison cannot resolve changes below ~1e-13 and the final approach to
  // stationarity (true decreases of order gap^2 / curvature) would freeze
  // several orders of magnitude before the certification threshold.
  //
  // Each difference still carries the rounding of (r' - r) — two near-equal
  // reals — so alongside delta the loop accumulates the sum of term
  // magnitudes and derives a noise bound; a decrease is only believed when it
  // clears that bound.  A model-backed caller (the pinned Newton jump, whose
  // target provably does not increase the model) may accept the full step
  // even when |delta| is lost in the noise: the value is then left unchanged
  // rather than polluted with the unresolved residue.  Without this, the
  // final approach freezes: the last jump onto the stratum optimum improves
  // the model by ~gap^2/curvature, below measurement resolution, and a
  // strict delta < 0 test rejects it in a coin flip, stranding the iterate a
  // sub-band distance from the parked configuration it needs to certify.
  // Returns false when no tried step is accepted.
  Eigen::VectorXd u_dir(m);
  const auto line_search = [&](const Eigen::VectorXd& p, bool model_backed) -> bool {
    u_dir.noalias() = inst_.A * p;
    const double prox_cross = p.dot(y - x);
    const double p_sq = p.squaredNorm();
    constexpr double kUlp = 2.220446049250313e-16;
    double s = 1.0;
    for (int halving = 0; halving < 52; ++halving) {
      const double prox_part = cfg_.rho_prox * (s * prox_cross + 0.5 * s * s * p_sq);
      double delta = prox_part;
      double magnitude = std::abs(prox_part);
      for (int i = 0; i < m; ++i) {
        const double r_old = u[i] > 0.0 ? u[i] : 0.0;
        const double ui = u[i] + s * u_dir[i];
        const double r_new = ui > 0.0 ? ui : 0.0;
        const double term = 0.5 * (r_new - r_old) * ((r_new - inst_.b[i]) + (r_old - inst_.b[i]));
        delta += term;
        // The subtraction r_new - r_old rounds at ulp(u_i); its partner
        // factor scales that into the term's absolute error.
        magnitude += std::abs(0.5 * (std::abs(u[i]) + std::abs(ui)) *
                              ((r_new - inst_.b[i]) + (r_old - inst_.b[i])));
      }
      const double noise = 8.0 * kUlp * magnitude;
      if (std::isfinite(delta) && delta < -noise) {
        y += s * p;
        u += s * u_dir;
        value += delta;
        return true;
      }
      if (model_backed && halving == 0 && std::isfinite(delta) && delta <= noise) {
        y += s * p;
        u += s * u_dir;
        return true;
      }
      s *= 0.5;
    }
    return false;
  };

  // One exact steepest-descent step from y.  At y the model's one-sided
  // directional derivative is g'v plus, for each kink row with b_i < 0, the
  // hinge max(0, -b_i * a_i'v): rising to the right of the kink, flat to its
  // left.  Minimizing that over the unit ball is, by minimax duality,
  // equivalent to the box-constrained least squares
  // min over mu in [0,1]^K of ||g + sum_i mu_i * (-b_i) * a_i||, whose
  // optimal direction is minus the residual; a nonzero residual is a true
  // descent direction and a vanishing one certifies y as a
  // directional-stationary point of the model for this kink assignment.
  // Kink rows with b_i > 0 sit atop a dip and have a concave one-sided
  // derivative, so each on/off assignment of those rows (enter the dip or
  // stay flat — both majorize the concave form) is enumerated like the
  // certifier's vertex sweep, and the first assignment whose direction the
  // line search accepts wins.
  const auto steepest_step = [&]() -> bool {
    // The kink band deliberately matches the d-stationarity certifier's
    // (1e-6, scaled by the residual magnitudes): with identical row
    // classification the per-assignment least-squares residuals here equal
    // the certifier's vertex residuals, so a fixed point of this step (all
    // residuals <= 1e-8) is a point the certifier accepts with margin.  A
    // narrower band would let the iterates freeze hovering just beside a
    // kink — classified smooth here, flagged as an uncertified kink there.
    const double snap = 1e-6 * std::max(1.0, u.cwiseAbs().maxCoeff());
    Eigen::VectorXd g = cfg_.rho_prox * (y - x);
    std::vector<int> hinge_rows;
    std::vector<int> dip_rows;
    for (int i = 0; i < m; ++i) {
      if (u[i] > snap) {
        g.noalias() += (u[i] - inst_.b[i]) * inst_.A.row(i).transpose();
      } else if (u[i] >= -snap) {
        if (inst_.b[i] < 0.0) hinge_rows.push_back(i);
        else if (inst_.b[i] > 0.0) dip_rows.push_back(i);
      }
    }
    Eigen::MatrixXd W(n, static_cast<int>(hinge_rows.size()));
    for (int j = 0; j < W.cols(); ++j) {
      const int i = hinge_rows[static_cast<std::size_t>(j)];
      W.col(j) = -inst_.b[i] * inst_.A.row(i).transpose();
    }
    // Enumeration width matches the certifier's vertex cap so no dip
    // assignment it will test goes unexplored here.
    constexpr int kMaxDipBits = 16;
    const int nd = std::min(static_cast<int>(dip_rows.size()), kMaxDipBits);
    for (std::uint64_t mask = 0; mask < (1ULL << nd); ++mask) {
      Eigen::VectorXd g_v = g;
      for (int j = 0; j < nd; ++j)
        if (mask & (1ULL << j))
          g_v.noalias() -= inst_.b[dip_rows[static_cast<std::size_t>(j)]] *
                           inst_.A.row(dip_rows[static_cast<std::size_t>(j)]).transpose();
      const BoxLsqResult lsq = box_constrained_lsq(W, -g_v);
      if (lsq.residual <= 1e-8) continue;
      const Eigen::VectorXd dir = -(g_v + W * lsq.mu) / lsq.residual;
      // Start the backtracking above both plausible acceptance scales: the
      // ideal smooth step for slope -residual and curvature 1/step_, and a
      // band-crossing step — a dip entry promises its payoff only past the
      // kink, and a start inside the flat band would backtrack to nothing.
      const double trial = std::max(4.0 * lsq.residual * step_, 1e-2);
      if (line_search(trial * dir, false)) return true;
    }
    return false;
  };

  // Pinned-stratum Newton step: fix the certifier-band pattern (band hinge
  // rows pinned to their kink with equality constraints a_i'y = 0, band dip
  // rows released into the piece to their right, off-band rows kept on their
  // current side) and line-search toward the minimizer of the resulting
  // equality-constrained strongly convex quadratic.  This is the only move
  // that can park a row *exactly* on its kink: first-order steps approach a
  // kink-supported stationary point asymptotically and freeze hovering a
  // sub-band distance beside it, where the certifier's vertex model (which
  // idealizes band rows as exactly at their kinks) does not describe the
  // local function and flags a gap no descent step can realize.
  std::vector<char> sigma(static_cast<std::size_t>(m));
  std::vector<int> pins;
  const auto pattern_step = [&]() -> bool {
    const double snap = 1e-6 * std::max(1.0, u.cwiseAbs().maxCoeff());
    pins.clear();
    std::vector<int> hinge_rows;
    for (int i = 0; i < m; ++i) {
      char& s_i = sigma[static_cast<std::size_t>(i)];
      if (u[i] > snap) {
        s_i = 1;
      } else if (u[i] < -snap || inst_.b[i] <= 0.0) {
        s_i = 0;
        if (u[i] >= -snap && inst_.b[i] < 0.0) hinge_rows.push_back(i);
      } else {
        s_i = 1;  // released into the dip to the right of the kink
      }
    }
    // Assign each band hinge row its piece from the steepest-descent dual: in
    // min over mu in [0,1] of ||g + sum mu_i*(-b_i)*a_i||, an interior mu_i
    // means the best direction holds row i on its kink (pin a_i'y = 0), mu_i
    // at the upper bound means descent pays the rising slope and pushes the
    // row positive (release with sigma = 1), and mu_i at zero means the row
    // moves into its flat side (sigma = 0, unpinned).  A point can be the
    // exact optimum of the all-pinned stratum and still not be stationary —
    // the profitable move pushes a saturated row into the rising piece, which
    // equality pins cannot express.
    if (!hinge_rows.empty()) {
      Eigen::VectorXd g = cfg_.rho_prox * (y - x);
      for (int i = 0; i < m; ++i)
        if (u[i] > snap) g.noalias() += (u[i] - inst_.b[i]) * inst_.A.row(i).transpose();
      Eigen::MatrixXd W(n, static_cast<int>(hinge_rows.size()));
      for (int j = 0; j < W.cols(); ++j) {
        const int i = hinge_rows[static_cast<std::size_t>(j)];
        W.col(j) = -inst_.b[i] * inst_.A.row(i).transpose();
      }
      const BoxLsqResult lsq = box_constrained_lsq(W, -g);
      for (int j = 0; j < static_cast<int>(hinge_rows.size()); ++j) {
        const int i = hinge_rows[static_cast<std::size_t>(j)];
        const double mu_j = lsq.mu[j];
        if (mu_j >= 1.0 - 1e-6) sigma[static_cast<std::size_t>(i)] = 1;
        else if (mu_j > 1e-6) pins.push_back(i);
      }
    }
    // At an all-kinks point (such as the zero vector) the pinned stratum
    // collapses toward a single point; skip the pins rather than solve a
    // vacuous subproblem.
    if (static_cast<int>(pins.size()) > n / 2) pins.clear();

    Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = cfg_.rho_prox * x;
    for (int i = 0; i < m; ++i) {
      if (!sigma[static_cast<std::size_t>(i)]) continue;
      const auto row = inst_.A.row(i);
      quad.selfadjointView<Eigen::Lower>().rankUpdate(row.transpose(), 1.0);
      rhs.noalias() += inst_.b[i] * row.transpose();
    }
    for (int j = 0; j < n; ++j) quad(j, j) += cfg_.rho_prox;

    // The pinned solve treats each band hinge row as the equality a_i'y = 0,
    // but the hinge piece it stands in for is the inequality a_i'y <= 0: when
    // the stratum minimizer holds a row strictly inside the flat side, the
    // equality overconstrains and the "target" is beatable by the current
    // iterate, which the line search would duly reject.  Standard active-set
    // treatment: release every pin whose multiplier says the constraint
    // blocks descent into the flat side (lambda < 0) and re-solve.
    Eigen::VectorXd target(n);
    for (int round = 0; round < 16; ++round) {
      if (pins.empty()) {
        target = Eigen::LLT<Eigen::MatrixXd>(quad.selfadjointView<Eigen::Lower>()).solve(rhs);
        break;
      }
      const int np = static_cast<int>(pins.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + np, n + np);
      kkt.topLeftCorner(n, n) = quad.selfadjointView<Eigen::Lower>();
      for (int j = 0; j < np; ++j) {
        kkt.block(n + j, 0, 1, n) = inst_.A.row(pins[static_cast<std::size_t>(j)]);
        kkt.block(0, n + j, n, 1) =
            inst_.A.row(pins[static_cast<std::size_t>(j)]).transpose();
      }
      Eigen::VectorXd kkt_rhs = Eigen::VectorXd::Zero(n + np);
      kkt_rhs.head(n) = rhs;
      const Eigen::VectorXd sol = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(kkt).solve(kkt_rhs);
      target = sol.head(n);
      std::vector<int> kept;
      for (int j = 0; j < np; ++j)
        if (sol[n + j] >= 0.0) kept.push_back(pins[static_cast<std::size_t>(j)]);
      if (static_cast<int>(kept.size()) == np) break;
      pins = std::move(kept);
    }
    if (!target.allFinite()) return false;
    const Eigen::VectorXd p = target - y;
    if (p.norm() <= cfg_.inner_tol) return false;
    return line_search(p, true);
  };

  // Phase 2, only when phase 1 found no improving iterate: a fixed step can
  // cycle across hinge kinks with every sweep iterate above the start value,
  // and returning z = x from such a point would freeze the outer loop at a
  // visibly non-stationary point.  One exact steepest-descent step keeps the
  // proposal strictly improving whenever a single descent direction exists,
  // at first-order per-call strength; the pinned Newton step is a last
  // resort for the kink-parking endgame no single direction can finish, so
  // the z = x failure mode is reserved for points the stationarity
  // diagnostics accept.
  if (y == x) {
    const double before = value;
    const bool moved = steepest_step();
    // A successful steepest step can still be a dead end: near a
    // kink-supported stationary point the best single direction only creeps
    // tangentially (improvements at rounding scale), while the real
    // remaining descent lies through the parked configuration.  Treat a
    // negligible improvement like a failure and try to park.
    if (!moved || before - value <= 1e-12 * (1.0 + std::abs(before))) pattern_step();
  }

  // Contract: m(z) <= m(x) = h(x).  Checked as the per-row difference with
  // freshly computed products (the tracked u drifts by a few ulp over the
  // inner loop), never as a comparison of two accumulated totals whose
  // ~1e-12 rounding would swallow the tiny true improvements of the parking
  // endgame.  The difference itself still carries per-row subtraction noise,
  // so the verdict is one-sided at the same noise bound the line search
  // uses: every accepted step either cleared that bound or was a
  // model-backed neutral jump, so an apparent increase within the bound is a
  // measurement artifact, not a real ascent.
  if (y == x) {
    out.z = x;
  } else {
    const Eigen::VectorXd u_y = inst_.A * y;
    const Eigen::VectorXd u_x = inst_.A * x;
    constexpr double kUlp = 2.220446049250313e-16;
    const double prox_part = 0.5 * cfg_.rho_prox * (y - x).squaredNorm();
    double diff = prox_part;
    double magnitude = prox_part;
    for (int i = 0; i < m; ++i) {
      const double r_x = u_x[i] > 0.0 ? u_x[i] : 0.0;
      const double r_y = u_y[i] > 0.0 ? u_y[i] : 0.0;
      diff += 0.5 * (r_y - r_x) * ((r_y - inst_.b[i]) + (r_x - inst_.b[i]));
      magnitude += std::abs(0.5 * (std::abs(u_x[i]) + std::abs(u_y[i])) *
                            ((r_y - inst_.b[i]) + (r_x - inst_.b[i])));
    }
    out.z = diff <= 8.0 * kUlp * magnitude ? std::move(y) : x;
  }
  return out;
}

OracleProposal prox_linear_propose(const ReluInstance& inst, const Eigen::VectorXd& x,
                                   const ProxLinearConfig& cfg) {
  return ReluProxLinearOracle(inst, cfg).propose(x);
}

}  // namespace repopt
