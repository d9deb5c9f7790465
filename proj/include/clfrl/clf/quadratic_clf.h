#ifndef CLFRL_CLF_QUADRATIC_CLF_H
#define CLFRL_CLF_QUADRATIC_CLF_H

#include <string>

#include "clfrl/clf/riccati.h"

namespace clfrl::clf {

// Quadratic control Lyapunov function V(e) = e^T P e with the nominal decay
// requirement Vdot <= -eta0 V. P is symmetric positive definite; Q and R record
// the weights that produced it (identity placeholders for a hand-set P).
struct QuadraticCLF {
  Matrix P;
  double eta0 = 0.0;
  Matrix Q;
  Matrix R;

  int dim() const { return static_cast<int>(P.rows()); }
  double value(const Vector& e) const { return e.dot(P * e); }
  Vector gradient(const Vector& e) const { return 2.0 * P * e; }

  // Symmetry within 1e-10 and positive definiteness; throws on violation.
  void validate() const;

  static QuadraticCLF identity(int error_dim, int input_dim, double eta0);
};

// Linearizes the nominal error-coordinate model at the origin and solves the
// Riccati equation for the stabilizing P.
QuadraticCLF synthesize_clf(const sim::ControlAffineModel& error_model, const Matrix& Q,
                            const Matrix& R, double eta0);

// JSON object with fields P, Q, R (row-major arrays) and eta0.
std::string to_json(const QuadraticCLF& clf);
QuadraticCLF clf_from_json(const std::string& text);  // validates definiteness
void save_clf(const std::string& path, const QuadraticCLF& clf);
QuadraticCLF load_clf(const std::string& path);

}  // namespace clfrl::clf

#endif
