#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "clfrl/filter/qp.h"
#include "support/grid_qp_oracle.h"

using namespace clfrl;
using namespace clfrl::filter;
using clfrl::test_support::grid_qp_oracle;
using clfrl::test_support::make_random_qp;

namespace {

QPInstance scalar_instance(double u_rl, double beta, double u_prev, double a, double b_rhs,
                           double lo = -10.0, double hi = 10.0) {
  QPInstance qp;
  qp.u_rl = Vector::Constant(1, u_rl);
  qp.u_prev = Vector::Constant(1, u_prev);
  qp.beta = beta;
  qp.a = Vector::Constant(1, a);
  qp.b_rhs = b_rhs;
  qp.u_low = Vector::Constant(1, lo);
  qp.u_high = Vector::Constant(1, hi);
  return qp;
}

}  // namespace

TEST_CASE("passthrough when the decrease constraint is slack") {
  const QPInstance qp = scalar_instance(0.5, 0.0, 0.0, 1.0, 10.0, -1.0, 1.0);
  const QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == 0.5);
  REQUIRE(sol.eps == 0.0);
  REQUIRE_FALSE(sol.active_set.clf);
  REQUIRE_FALSE(sol.active_set.slack);
  REQUIRE(sol.kkt_residual < 1e-9);
}

TEST_CASE("scalar active constraint projects onto the hyperplane") {
  // u_rl = 0 with constraint u <= -1: KKT gives u = -1 with multiplier 2.
  const QPInstance qp = scalar_instance(0.0, 0.0, 0.0, 1.0, -1.0);
  const QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(sol.eps == 0.0);
  REQUIRE(sol.active_set.clf);
  REQUIRE(sol.lambda == Catch::Approx(2.0));
  REQUIRE(sol.kkt_residual < 1e-9);
}

TEST_CASE("smoothing term pulls the solution toward the previous input") {
  const QPInstance qp = scalar_instance(0.0, 1.0, 2.0, 1.0, 100.0);
  const QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(sol.eps == 0.0);
}

TEST_CASE("hand-built decrease constraint from the planar benchmark") {
  // a = 6, b_rhs = -8.1 is the instance the filter assembles at x = (0, 1)
  // with the diag(0.5, 1) certificate and eta = 0.1.
  const QPInstance qp = scalar_instance(0.0, 0.0, 0.0, 6.0, -8.1, -2.0, 2.0);
  const QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == Catch::Approx(-1.35).margin(1e-12));
  REQUIRE(sol.eps == 0.0);
  REQUIRE(sol.active_set.clf);
  REQUIRE_FALSE(sol.active_set.slack);
  REQUIRE(sol.kkt_residual < 1e-9);
}

TEST_CASE("box saturation binds with a positive multiplier") {
  const QPInstance qp = scalar_instance(3.0, 0.0, 0.0, 1.0, 100.0, -1.0, 1.0);
  const QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == 1.0);
  REQUIRE(sol.active_set.box[0] == 1);
  REQUIRE(sol.mu_high[0] == Catch::Approx(4.0));
  REQUIRE(sol.kkt_residual < 1e-9);
}

TEST_CASE("slack activates only when the box cannot satisfy the constraint") {
  // Constraint u <= -2 with box [-1, 1]: best achievable margin is 1 short.
  const QPInstance qp = scalar_instance(0.0, 0.0, 0.0, 1.0, -2.0, -1.0, 1.0);
  const QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(sol.eps == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(sol.active_set.slack);
  REQUIRE(sol.active_set.box[0] == -1);
  REQUIRE(sol.lambda == Catch::Approx(1e8));
  REQUIRE(sol.objective == Catch::Approx(1e8 + 1.0).epsilon(1e-12));
  REQUIRE(sol.kkt_residual < 1e-6);
}

TEST_CASE("zero constraint row reduces to slack bookkeeping") {
  QPInstance qp = scalar_instance(0.4, 0.0, 0.0, 0.0, 1.0);
  QPSolution sol = solve_qp(qp);
  REQUIRE(sol.u[0] == 0.4);
  REQUIRE(sol.eps == 0.0);

  qp.b_rhs = -1.0;  // 0 - eps <= -1 forces eps = 1 while u stays free
  sol = solve_qp(qp);
  REQUIRE(sol.u[0] == Catch::Approx(0.4).margin(1e-12));
  REQUIRE(sol.eps == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(sol.active_set.slack);
}

TEST_CASE("instance validation rejects malformed programs") {
  QPInstance qp = scalar_instance(0.0, 0.0, 0.0, 1.0, 0.0);
  REQUIRE_NOTHROW(qp.validate());

  QPInstance bad = qp;
  bad.beta = -0.1;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = qp;
  bad.k_eps = 0.0;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = qp;
  bad.u_low[0] = 20.0;  // inverted box
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = qp;
  bad.a = Vector::Zero(2);  // dimension mismatch
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("random instances match the grid oracle and satisfy the KKT system") {
  Rng rng(2024);
  const int trials = 120;
  for (int t = 0; t < trials; ++t) {
    const int m = (t % 3 == 0) ? 3 : 1;
    const bool force_slack = (t % 5 == 0);
    const QPInstance qp = make_random_qp(rng, m, force_slack);
    const QPSolution sol = solve_qp(qp);

    // Primal feasibility.
    for (int i = 0; i < m; ++i) {
      REQUIRE(sol.u[i] >= qp.u_low[i] - 1e-9);
      REQUIRE(sol.u[i] <= qp.u_high[i] + 1e-9);
    }
    REQUIRE(sol.eps >= 0.0);
    const double scale =
        std::max({1.0, std::abs(qp.b_rhs), qp.a.cwiseAbs().maxCoeff() * 10.0});
    REQUIRE(qp.a.dot(sol.u) - sol.eps <= qp.b_rhs + 1e-7 * scale);

    REQUIRE(sol.kkt_residual < 1e-6);
    if (force_slack) REQUIRE(sol.eps > 0.0);

    const auto oracle = grid_qp_oracle(qp);
    const double tol = 1e-5 * std::max(1.0, std::abs(oracle.objective));
    REQUIRE(sol.objective <= oracle.objective + tol);
    REQUIRE(sol.objective >= oracle.objective - tol);
  }
}
