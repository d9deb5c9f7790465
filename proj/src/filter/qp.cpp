#include "clfrl/filter/qp.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clfrl::filter {
namespace {

struct Candidate {
  Vector u;
  double eps = 0.0;
  double lambda = 0.0;
  double objective = 0.0;
  double kkt = 0.0;
  ActiveSet active;
  Vector mu_low, mu_high;
  double mu_eps = 0.0;
};

double objective_value(const QPInstance& qp, const Vector& u, double eps) {
  return (u - qp.u_rl).squaredNorm() + qp.beta * (u - qp.u_prev).squaredNorm() +
         qp.k_eps * eps;
}

// Max violation of the KKT system at (u, eps, lambda, mu). Stationarity on fixed
// coordinates is zero by construction of mu; complementarity uses the min form
// so that a huge multiplier on an exactly-active constraint does not amplify
// rounding in the constraint gap.
double kkt_residual(const QPInstance& qp, Candidate& c) {
  const double denom = 2.0 * (1.0 + qp.beta);
  const Eigen::Index m = qp.u_rl.size();
  c.mu_low = Vector::Zero(m);
  c.mu_high = Vector::Zero(m);
  double res = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double uhat = (qp.u_rl[i] + qp.beta * qp.u_prev[i]) / (1.0 + qp.beta);
    const double stat = denom * (c.u[i] - uhat) + c.lambda * qp.a[i];
    switch (c.active.box[i]) {
      case -1:
        c.mu_low[i] = stat;  // -mu_low enters stationarity
        res = std::max(res, -std::min(0.0, c.mu_low[i]));
        res = std::max(res, std::min(c.mu_low[i], std::abs(c.u[i] - qp.u_low[i])));
        break;
      case +1:
        c.mu_high[i] = -stat;
        res = std::max(res, -std::min(0.0, c.mu_high[i]));
        res = std::max(res, std::min(c.mu_high[i], std::abs(qp.u_high[i] - c.u[i])));
        break;
      default:
        res = std::max(res, std::abs(stat));
    }
    res = std::max(res, std::max(qp.u_low[i] - c.u[i], c.u[i] - qp.u_high[i]));
  }
  // eps stationarity: k_eps - lambda - mu_eps = 0.
  c.mu_eps = qp.k_eps - c.lambda;
  res = std::max(res, -std::min(0.0, c.mu_eps));
  res = std::max(res, -std::min(0.0, c.lambda));
  res = std::max(res, -c.eps);
  const double gap = qp.b_rhs + c.eps - qp.a.dot(c.u);
  res = std::max(res, -gap);                              // primal feasibility
  res = std::max(res, std::min(c.lambda, std::abs(gap))); // complementarity
  res = std::max(res, std::min(c.mu_eps, c.eps));
  return res;
}

}  // namespace

void QPInstance::validate() const {
  const Eigen::Index m = u_rl.size();
  if (m == 0) throw std::invalid_argument("QPInstance: empty input");
  if (m > 8)
    throw std::invalid_argument("QPInstance: active-set enumeration is for small input spaces");
  if (u_prev.size() != m || a.size() != m || u_low.size() != m || u_high.size() != m)
    throw std::invalid_argument("QPInstance: inconsistent dimensions");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("QPInstance: beta must be finite and >= 0");
  if (!(k_eps > 0.0)) throw std::invalid_argument("QPInstance: k_eps must be positive");
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(u_low[i] < u_high[i]))
      throw std::invalid_argument("QPInstance: box must have positive width");
}

QPSolution solve_qp(const QPInstance& qp) {
  qp.validate();
  const Eigen::Index m = qp.u_rl.size();
  const double denom = 2.0 * (1.0 + qp.beta);
  Vector uhat(m);
  for (Eigen::Index i = 0; i < m; ++i)
    uhat[i] = (qp.u_rl[i] + qp.beta * qp.u_prev[i]) / (1.0 + qp.beta);

  const double scale =
      std::max({1.0, qp.a.cwiseAbs().maxCoeff() * qp.u_high.cwiseAbs().maxCoeff(),
                qp.a.cwiseAbs().maxCoeff() * qp.u_low.cwiseAbs().maxCoeff(),
                std::abs(qp.b_rhs)});
  const double bound_tol = 1e-11 * std::max(1.0, qp.u_high.cwiseAbs().maxCoeff() +
                                                     qp.u_low.cwiseAbs().maxCoeff());
  const double cons_tol = 1e-10 * scale;

  enum Mode { kInactive, kActive, kSlack };
  Candidate best;
  bool have_best = false;

  std::vector<std::int8_t> box(m, -1);
  const auto total = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(m)) + 0.5);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    for (Eigen::Index i = 0; i < m; ++i) {
      box[i] = static_cast<std::int8_t>(rem % 3) - 1;
      rem /= 3;
    }
    for (int mode = kInactive; mode <= kSlack; ++mode) {
      Candidate c;
      c.active.box = box;
      c.u.resize(m);
      double lambda = 0.0;

      if (mode == kActive) {
        double sum_free = 0.0, fixed_term = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
          if (box[i] == 0)
            sum_free += qp.a[i] * qp.a[i];
          else
            fixed_term += qp.a[i] * (box[i] < 0 ? qp.u_low[i] : qp.u_high[i]);
        }
        double free_term = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
          if (box[i] == 0) free_term += qp.a[i] * uhat[i];
        if (sum_free < 1e-300) continue;  // constraint not controllable from free coords
        lambda = denom * (free_term + fixed_term - qp.b_rhs) / sum_free;
      } else if (mode == kSlack) {
        lambda = qp.k_eps;
      }

      bool ok = true;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (box[i] == -1) {
          c.u[i] = qp.u_low[i];
        } else if (box[i] == +1) {
          c.u[i] = qp.u_high[i];
        } else {
          c.u[i] = uhat[i] - lambda * qp.a[i] / denom;
          if (c.u[i] < qp.u_low[i] - bound_tol || c.u[i] > qp.u_high[i] + bound_tol) {
            ok = false;
            break;
          }
          c.u[i] = std::min(std::max(c.u[i], qp.u_low[i]), qp.u_high[i]);
        }
      }
      if (!ok) continue;

      const double au = qp.a.dot(c.u);
      if (mode == kInactive) {
        if (au > qp.b_rhs + cons_tol) continue;
        c.eps = 0.0;
      } else if (mode == kActive) {
        c.eps = 0.0;
      } else {
        c.eps = au - qp.b_rhs;
        if (c.eps < -cons_tol) continue;
        c.eps = std::max(0.0, c.eps);
      }

      c.lambda = lambda;
      c.active.clf = (mode != kInactive);
      c.active.slack = (mode == kSlack) && c.eps > 0.0;
      c.objective = objective_value(qp, c.u, c.eps);
      c.kkt = kkt_residual(qp, c);

      if (!have_best || c.objective < best.objective - 1e-12 * (1.0 + std::abs(best.objective)) ||
          (std::abs(c.objective - best.objective) <=
               1e-12 * (1.0 + std::abs(best.objective)) &&
           c.kkt < best.kkt)) {
        best = c;
        have_best = true;
      }
    }
  }

  if (!have_best) throw std::runtime_error("solve_qp: no feasible candidate (internal error)");

  QPSolution sol;
  sol.u = best.u;
  sol.eps = best.eps;
  sol.objective = best.objective;
  sol.active_set = best.active;
  sol.lambda = best.lambda;
  sol.mu_low = best.mu_low;
  sol.mu_high = best.mu_high;
  sol.mu_eps = best.mu_eps;
  sol.kkt_residual = best.kkt;
  return sol;
}

}  // namespace clfrl::filter
