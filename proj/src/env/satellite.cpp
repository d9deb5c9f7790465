#include "clfrl/env/satellite.h"

#include <cmath>

#include "clfrl/env/nct.h"

namespace clfrl::env {
namespace {

using Vec3 = Eigen::Vector3d;

Vec3 body_rate_to_vector_quat_rate(const Vec3& qv, double q3, const Vec3& w) {
  return 0.5 * (q3 * w + qv.cross(w));
}

}  // namespace

SatelliteEnv::SatelliteEnv(Matrix inertia) {
  if (inertia.size() == 0) {
    inertia_ = Vec3(1.0, 0.8, 1.2).asDiagonal();
  } else {
    if (inertia.rows() != 3 || inertia.cols() != 3)
      throw std::invalid_argument("SatelliteEnv: inertia must be 3x3");
    if (!inertia.isApprox(inertia.transpose(), 1e-12))
      throw std::invalid_argument("SatelliteEnv: inertia must be symmetric");
    Eigen::LLT<Matrix> llt(inertia);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("SatelliteEnv: inertia must be positive definite");
    inertia_ = std::move(inertia);
  }
  inertia_inv_ = inertia_.inverse();

  const Matrix J = inertia_;
  const Matrix Jinv = inertia_inv_;

  model_.state_dim = 7;
  model_.input_dim = 3;
  model_.drift = [J, Jinv](const Vector& x) {
    const Vec3 qv = x.segment<3>(0);
    const double q3 = x[3];
    // The kinematics below are linear in q, so any nonzero norm integrates
    // consistently (intermediate integrator stages drift slightly off the unit
    // sphere). Only a grossly denormalized quaternion signals caller misuse.
    const double norm = std::sqrt(qv.squaredNorm() + q3 * q3);
    if (norm < 0.5 || norm > 2.0)
      throw std::invalid_argument("satellite dynamics: degenerate quaternion norm " +
                                  std::to_string(norm));
    const Vec3 w = x.segment<3>(4);
    Vector f(7);
    f.segment<3>(0) = body_rate_to_vector_quat_rate(qv, q3, w);
    f[3] = -0.5 * qv.dot(w);
    f.segment<3>(4) = Jinv * (-w.cross(Vec3(J * w)));
    return f;
  };
  model_.input_gain = [Jinv](const Vector&) {
    Matrix g = Matrix::Zero(7, 3);
    g.bottomRows<3>() = Jinv;
    return g;
  };
  model_.input_low = Vector::Constant(3, -0.5);
  model_.input_high = Vector::Constant(3, 0.5);

  // Same plant reduced to error coordinates (q0, q1, q2, w); the scalar part is
  // reconstructed on the target branch q3 >= 0, valid inside the safe ball.
  error_model_.state_dim = 6;
  error_model_.input_dim = 3;
  error_model_.drift = [J, Jinv](const Vector& e) {
    const Vec3 qv = e.segment<3>(0);
    const double q3 = std::sqrt(std::max(0.0, 1.0 - qv.squaredNorm()));
    const Vec3 w = e.segment<3>(3);
    Vector f(6);
    f.segment<3>(0) = body_rate_to_vector_quat_rate(qv, q3, w);
    f.segment<3>(3) = Jinv * (-w.cross(Vec3(J * w)));
    return f;
  };
  error_model_.input_gain = [Jinv](const Vector&) {
    Matrix g = Matrix::Zero(6, 3);
    g.bottomRows<3>() = Jinv;
    return g;
  };
  error_model_.input_low = model_.input_low;
  error_model_.input_high = model_.input_high;
}

Vector SatelliteEnv::error_state(const Vector& x) const {
  Vector e(6);
  e.segment<3>(0) = x.segment<3>(0);
  e.segment<3>(3) = x.segment<3>(4);
  return e;
}

double SatelliteEnv::step_cost(const Vector& x, const Vector&) const {
  return x.segment<3>(0).squaredNorm() + x.segment<3>(4).squaredNorm();
}

void SatelliteEnv::project_state(Vector& x) const {
  const double norm = x.segment<4>(0).norm();
  if (!(norm > 0.0)) throw std::runtime_error("satellite: quaternion collapsed to zero");
  x.segment<4>(0) /= norm;
}

Vector SatelliteEnv::sample_initial_state(Rng& rng) const {
  // Uniform axis, rotation angle uniform in [0, 30] degrees.
  Vec3 axis;
  do {
    axis = Vec3(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  } while (axis.squaredNorm() < 1e-6 || axis.squaredNorm() > 1.0);
  axis.normalize();
  const double angle = rng.uniform(0.0, M_PI / 6.0);

  Vector x(7);
  x.segment<3>(0) = std::sin(0.5 * angle) * axis;
  x[3] = std::cos(0.5 * angle);
  x.segment<3>(4) =
      rng.uniform_vector(Vector::Constant(3, -0.1), Vector::Constant(3, 0.1));
  return x;
}

double SatelliteEnv::kinetic_energy(const Vector& x) const {
  const Vec3 w = x.segment<3>(4);
  return 0.5 * w.dot(Vec3(inertia_ * w));
}

std::unique_ptr<Environment> make_environment(const std::string& name) {
  if (name == "nct") return std::make_unique<NctEnv>();
  if (name == "satellite") return std::make_unique<SatelliteEnv>();
  throw std::invalid_argument("make_environment: unknown environment '" + name + "'");
}

}  // namespace clfrl::env
