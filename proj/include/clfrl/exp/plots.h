#ifndef CLFRL_EXP_PLOTS_H
#define CLFRL_EXP_PLOTS_H

#include <string>
#include <vector>

#include "clfrl/sac/train.h"

namespace clfrl::exp {

struct PlotRow {
  int episode = 0;
  double mean_cost = 0.0;
  double std_cost = 0.0;  // population std; zero for a single seed
};

// Episode-wise mean/std across seed curves. All curves must agree on length
// and episode numbering.
std::vector<PlotRow> aggregate_curves(const std::vector<std::vector<sac::EpisodeRecord>>& curves);

// Reads every seed_*/curve.csv under `run_dir`, aggregates across seeds and
// writes `plot_cost.csv` (header `episode,mean_cost,std_cost`) into the run
// directory. Returns the written path. Throws when no curves exist.
std::string export_plot_data(const std::string& run_dir);

// Walks `path`: a single run directory gets one plot_cost.csv; a directory of
// run directories gets one per run. Returns the written paths; throws when
// nothing under `path` holds curve artifacts.
std::vector<std::string> export_plots(const std::string& path);

}  // namespace clfrl::exp

#endif
