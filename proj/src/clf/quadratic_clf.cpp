#include "clfrl/clf/quadratic_clf.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace clfrl::clf {
namespace {

using nlohmann::json;

json matrix_to_row_major(const Matrix& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

Matrix square_from_row_major(const json& arr, const std::string& name) {
  if (!arr.is_array()) throw std::runtime_error("clf json: " + name + " must be an array");
  const auto len = arr.size();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
  if (n * n != static_cast<Eigen::Index>(len))
    throw std::runtime_error("clf json: " + name + " length is not a perfect square");
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = arr.at(r * n + c).get<double>();
  return m;
}

}  // namespace

void QuadraticCLF::validate() const {
  if (P.rows() != P.cols() || P.rows() == 0)
    throw std::invalid_argument("QuadraticCLF: P must be square and non-empty");
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, P.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("QuadraticCLF: P must be symmetric within 1e-10");
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("QuadraticCLF: P must be positive definite");
  if (!(eta0 > 0.0)) throw std::invalid_argument("QuadraticCLF: eta0 must be positive");
}

QuadraticCLF QuadraticCLF::identity(int error_dim, int input_dim, double eta0) {
  QuadraticCLF clf;
  clf.P = Matrix::Identity(error_dim, error_dim);
  clf.Q = Matrix::Identity(error_dim, error_dim);
  clf.R = Matrix::Identity(input_dim, input_dim);
  clf.eta0 = eta0;
  clf.validate();
  return clf;
}

QuadraticCLF synthesize_clf(const sim::ControlAffineModel& error_model, const Matrix& Q,
                            const Matrix& R, double eta0) {
  const Vector e_eq = Vector::Zero(error_model.state_dim);
  const Vector u_eq = Vector::Zero(error_model.input_dim);
  const LinearModel lin = linearize(error_model, e_eq, u_eq);
  const RiccatiResult res = solve_are(lin, Q, R);
  QuadraticCLF clf{res.P, eta0, Q, R};
  clf.validate();
  return clf;
}

std::string to_json(const QuadraticCLF& clf) {
  json j;
  j["P"] = matrix_to_row_major(clf.P);
  j["eta0"] = clf.eta0;
  j["Q"] = matrix_to_row_major(clf.Q);
  j["R"] = matrix_to_row_major(clf.R);
  return j.dump(2);
}

QuadraticCLF clf_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw std::runtime_error(std::string("clf json: parse error: ") + ex.what());
  }
  for (const char* key : {"P", "eta0", "Q", "R"})
    if (!j.contains(key)) throw std::runtime_error(std::string("clf json: missing field ") + key);
  QuadraticCLF clf;
  clf.P = square_from_row_major(j["P"], "P");
  clf.Q = square_from_row_major(j["Q"], "Q");
  clf.R = square_from_row_major(j["R"], "R");
  clf.eta0 = j["eta0"].get<double>();
  clf.validate();
  return clf;
}

void save_clf(const std::string& path, const QuadraticCLF& clf) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_clf: cannot open " + path);
  f << to_json(clf) << "\n";
}

QuadraticCLF load_clf(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_clf: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return clf_from_json(ss.str());
}

}  // namespace clfrl::clf
