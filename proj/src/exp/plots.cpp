#include "clfrl/exp/plots.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "clfrl/exp/run.h"

namespace clfrl::exp {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Sorted list of seed_*/curve.csv files directly under `run_dir`.
std::vector<fs::path> curve_files(const fs::path& run_dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(run_dir)) return files;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    if (!entry.is_directory()) continue;
    if (entry.path().filename().string().rfind("seed_", 0) != 0) continue;
    const fs::path curve = entry.path() / "curve.csv";
    if (fs::exists(curve)) files.push_back(curve);
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::vector<PlotRow> aggregate_curves(const std::vector<std::vector<sac::EpisodeRecord>>& curves) {
  if (curves.empty()) throw std::invalid_argument("aggregate_curves: no curves");
  const std::size_t episodes = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != episodes) {
      throw std::invalid_argument("aggregate_curves: curves disagree on episode count");
    }
  }
  std::vector<PlotRow> rows(episodes);
  const double n = static_cast<double>(curves.size());
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    const int episode = curves.front()[ep].episode;
    double sum = 0.0;
    for (const auto& c : curves) {
      if (c[ep].episode != episode) {
        throw std::invalid_argument("aggregate_curves: curves disagree on episode numbering");
      }
      sum += c[ep].cost;
    }
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& c : curves) var += (c[ep].cost - mean) * (c[ep].cost - mean);
    rows[ep] = PlotRow{episode, mean, std::sqrt(var / n)};
  }
  return rows;
}

std::string export_plot_data(const std::string& run_dir) {
  const auto files = curve_files(run_dir);
  if (files.empty()) {
    throw std::runtime_error("no seed_*/curve.csv artifacts under '" + run_dir + "'");
  }
  std::vector<std::vector<sac::EpisodeRecord>> curves;
  curves.reserve(files.size());
  for (const auto& f : files) curves.push_back(read_curve_csv(f.string()));
  const auto rows = aggregate_curves(curves);

  const fs::path out_path = fs::path(run_dir) / "plot_cost.csv";
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path.string() + "'");
  out << "episode,mean_cost,std_cost\n";
  for (const auto& row : rows) {
    out << row.episode << "," << fmt(row.mean_cost) << "," << fmt(row.std_cost) << "\n";
  }
  return out_path.string();
}

std::vector<std::string> export_plots(const std::string& path) {
  if (!fs::is_directory(path)) throw std::runtime_error("'" + path + "' is not a directory");
  std::vector<std::string> written;
  if (!curve_files(path).empty()) {
    written.push_back(export_plot_data(path));
    return written;
  }
  std::vector<fs::path> runs;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_directory() && !curve_files(entry.path()).empty()) runs.push_back(entry.path());
  }
  std::sort(runs.begin(), runs.end());
  for (const auto& run : runs) written.push_back(export_plot_data(run.string()));
  if (written.empty()) {
    throw std::runtime_error("no run artifacts (seed_*/curve.csv) found under '" + path + "'");
  }
  return written;
}

}  // namespace clfrl::exp
