#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "clfrl/sim/disturbance.h"
#include "clfrl/sim/integrator.h"
#include "clfrl/sim/rollout.h"

using namespace clfrl;
using namespace clfrl::sim;

namespace {

ControlAffineModel scalar_decay() {
  ControlAffineModel m;
  m.state_dim = 1;
  m.input_dim = 1;
  m.drift = [](const Vector& x) { return Vector::Constant(1, -x[0]); };
  m.input_gain = [](const Vector&) { return Matrix::Zero(1, 1); };
  m.input_low = Vector::Constant(1, -1.0);
  m.input_high = Vector::Constant(1, 1.0);
  return m;
}

ControlAffineModel scalar_integrator() {
  ControlAffineModel m = scalar_decay();
  m.drift = [](const Vector&) { return Vector::Zero(1); };
  m.input_gain = [](const Vector&) { return Matrix::Identity(1, 1); };
  return m;
}

StepHooks identity_hooks() {
  StepHooks h;
  h.error_map = [](const Vector& x) { return x; };
  h.step_cost = [](const Vector& x, const Vector&) { return x.squaredNorm(); };
  return h;
}

double end_state_error(double dt) {
  const ControlAffineModel m = scalar_decay();
  Vector x = Vector::Constant(1, 1.0);
  const Vector u = Vector::Zero(1);
  const int steps = static_cast<int>(std::lround(1.0 / dt));
  for (int i = 0; i < steps; ++i) x = rk4_step(m, x, u, dt);
  return std::abs(x[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("rk4 matches the exponential-decay closed form") {
  // xdot = -x, x(0) = 1 has x(1) = exp(-1).
  REQUIRE(end_state_error(0.01) < 1e-9);
}

TEST_CASE("rk4 halving the step shrinks the error at fourth order") {
  const double e1 = end_state_error(0.05);
  const double e2 = end_state_error(0.025);
  REQUIRE(e1 / e2 >= 15.0);
}

TEST_CASE("rk4 reports the offending component on non-finite values") {
  ControlAffineModel m = scalar_decay();
  m.drift = [](const Vector&) { return Vector::Constant(1, std::nan("")); };
  REQUIRE_THROWS_WITH(rk4_step(m, Vector::Zero(1), Vector::Zero(1), 0.01),
                      Catch::Matchers::ContainsSubstring("drift"));

  ControlAffineModel m2 = scalar_decay();
  m2.input_gain = [](const Vector&) {
    return Matrix::Constant(1, 1, std::numeric_limits<double>::infinity());
  };
  REQUIRE_THROWS_WITH(rk4_step(m2, Vector::Zero(1), Vector::Zero(1), 0.01),
                      Catch::Matchers::ContainsSubstring("input_gain"));

  ControlAffineModel m3 = scalar_decay();
  m3.disturbance = [](const Vector&) { return Vector::Constant(1, std::nan("")); };
  REQUIRE_THROWS_WITH(rk4_step(m3, Vector::Zero(1), Vector::Zero(1), 0.01),
                      Catch::Matchers::ContainsSubstring("disturbance"));
}

TEST_CASE("rollout has floor(horizon/dt)+1 samples and accumulates rectangle cost") {
  const ControlAffineModel m = scalar_decay();
  const Controller c = [](const ExtendedState&) {
    return ControlDecision{Vector::Zero(1), {}};
  };
  const Trajectory traj = rollout(m, c, identity_hooks(), Vector::Constant(1, 1.0), 1.0, 0.1);
  REQUIRE(traj.samples.size() == 11);
  REQUIRE(traj.samples.front().running_cost == 0.0);
  // First rectangle: r(x0) * dt = 1 * 0.1.
  REQUIRE(traj.samples[1].running_cost == Catch::Approx(0.1));
  REQUIRE(traj.total_cost() > 0.0);
  REQUIRE(traj.samples.back().t == Catch::Approx(1.0));
}

TEST_CASE("rollout clamps inputs to the model bounds") {
  const ControlAffineModel m = scalar_integrator();
  const Controller wild = [](const ExtendedState& xe) {
    return ControlDecision{Vector::Constant(1, 100.0 * std::sin(40.0 * xe.t) - 3.0), {}};
  };
  const Trajectory traj = rollout(m, wild, identity_hooks(), Vector::Zero(1), 1.0, 0.01);
  for (const auto& s : traj.samples) {
    REQUIRE(s.u[0] >= -1.0);
    REQUIRE(s.u[0] <= 1.0);
  }
}

TEST_CASE("rollout attaches the step index to controller failures") {
  const ControlAffineModel m = scalar_decay();
  const Controller failing = [](const ExtendedState& xe) -> ControlDecision {
    if (xe.t > 0.49) throw std::runtime_error("boom");
    return {Vector::Zero(1), {}};
  };
  REQUIRE_THROWS_WITH(rollout(m, failing, identity_hooks(), Vector::Constant(1, 1.0), 1.0, 0.1),
                      Catch::Matchers::ContainsSubstring("step 5"));
}

TEST_CASE("zero-valued disturbances leave rollouts bit-identical") {
  const ControlAffineModel nominal = scalar_decay();
  const Controller c = [](const ExtendedState& xe) {
    return ControlDecision{Vector::Constant(1, 0.3 * std::sin(xe.t)), {}};
  };
  const Vector x0 = Vector::Constant(1, 0.7);
  const Trajectory base = rollout(nominal, c, identity_hooks(), x0, 1.0, 0.01);

  DisturbanceSpec zero_add{DisturbanceSpec::Kind::AdditiveConstant, Vector::Zero(1), 0.0, {}};
  DisturbanceSpec zero_scale{DisturbanceSpec::Kind::DriftScaling, {}, 0.0, {}};
  DisturbanceSpec zero_bias{DisturbanceSpec::Kind::InputBias, {}, 0.0, Vector::Zero(1)};
  for (const auto& spec : {zero_add, zero_scale, zero_bias}) {
    const Trajectory t = rollout(with_disturbance(nominal, spec), c, identity_hooks(), x0, 1.0, 0.01);
    REQUIRE(t.samples.size() == base.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
      REQUIRE(t.samples[i].x[0] == base.samples[i].x[0]);
      REQUIRE(t.samples[i].running_cost == base.samples[i].running_cost);
    }
  }
}

TEST_CASE("disturbance kinds realize their stated effect") {
  const ControlAffineModel nominal = scalar_decay();
  const Vector x = Vector::Constant(1, 2.0);
  const Vector u = Vector::Zero(1);

  DisturbanceSpec add{DisturbanceSpec::Kind::AdditiveConstant, Vector::Constant(1, 0.5), 0.0, {}};
  REQUIRE(eval_derivative(with_disturbance(nominal, add), x, u)[0] == Catch::Approx(-2.0 + 0.5));

  DisturbanceSpec scale{DisturbanceSpec::Kind::DriftScaling, {}, 0.25, {}};
  REQUIRE(eval_derivative(with_disturbance(nominal, scale), x, u)[0] == Catch::Approx(-2.5));

  const ControlAffineModel plant = scalar_integrator();
  DisturbanceSpec bias{DisturbanceSpec::Kind::InputBias, {}, 0.0, Vector::Constant(1, 0.1)};
  REQUIRE(eval_derivative(with_disturbance(plant, bias), x, Vector::Constant(1, 0.2))[0] ==
          Catch::Approx(0.3));
}

TEST_CASE("disturbance dimension mismatches are rejected") {
  const ControlAffineModel nominal = scalar_decay();
  DisturbanceSpec bad_add{DisturbanceSpec::Kind::AdditiveConstant, Vector::Zero(2), 0.0, {}};
  REQUIRE_THROWS_AS(with_disturbance(nominal, bad_add), std::invalid_argument);
  DisturbanceSpec bad_bias{DisturbanceSpec::Kind::InputBias, {}, 0.0, Vector::Zero(3)};
  REQUIRE_THROWS_AS(with_disturbance(nominal, bad_bias), std::invalid_argument);
}

TEST_CASE("trajectory csv carries the documented header and 9 significant digits") {
  const ControlAffineModel m = scalar_decay();
  const Controller c = [](const ExtendedState&) {
    return ControlDecision{Vector::Constant(1, 1.0 / 3.0), {}};
  };
  const Trajectory traj = rollout(m, c, identity_hooks(), Vector::Constant(1, 1.0), 0.3, 0.1);
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  REQUIRE(header == "t,x0,e0,u0,cost,V,eta,k_eta,eps");
  std::string row;
  std::getline(is, row);
  REQUIRE(row.substr(0, 2) == "0,");
  REQUIRE(row.find("0.333333333") != std::string::npos);
}
