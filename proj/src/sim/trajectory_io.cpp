#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "clfrl/sim/rollout.h"

namespace clfrl::sim {
namespace {

// 9 significant digits, shortest form.
void append_g9(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  line += buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  const auto& first = traj.samples.front();
  std::string line = "t";
  for (Eigen::Index i = 0; i < first.x.size(); ++i) line += ",x" + std::to_string(i);
  for (Eigen::Index i = 0; i < first.e.size(); ++i) line += ",e" + std::to_string(i);
  for (Eigen::Index i = 0; i < first.u.size(); ++i) line += ",u" + std::to_string(i);
  line += ",cost,V,eta,k_eta,eps\n";
  os << line;

  for (const auto& s : traj.samples) {
    line.clear();
    append_g9(line, s.t);
    for (Eigen::Index i = 0; i < s.x.size(); ++i) { line += ','; append_g9(line, s.x[i]); }
    for (Eigen::Index i = 0; i < s.e.size(); ++i) { line += ','; append_g9(line, s.e[i]); }
    for (Eigen::Index i = 0; i < s.u.size(); ++i) { line += ','; append_g9(line, s.u[i]); }
    line += ','; append_g9(line, s.running_cost);
    line += ','; append_g9(line, s.diag.V);
    line += ','; append_g9(line, s.diag.eta);
    line += ','; append_g9(line, s.diag.k_eta);
    line += ','; append_g9(line, s.diag.eps);
    line += '\n';
    os << line;
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  write_trajectory_csv(f, traj);
}

}  // namespace clfrl::sim
