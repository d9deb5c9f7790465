// Benchmarks the OpenMP kernel backend against the serial reference, then a
// parallel multi-rollout sweep against a sequential one. Both halves also
// verify bitwise agreement, so the binary doubles as a parallelism smoke test
// (exit 1 on any mismatch).

#include <omp.h>

#include <cstdio>
#include <vector>

#include "clfrl/common/rng.h"
#include "clfrl/env/environment.h"
#include "clfrl/exp/run.h"
#include "clfrl/filter/safety_filter.h"
#include "clfrl/sac/kernels.h"
#include "clfrl/sim/rollout.h"

using namespace clfrl;
using sac::Backend;

namespace {

bool g_all_identical = true;

void note_identical(bool ok) { g_all_identical = g_all_identical && ok; }

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

void bench_kernels(Index in, Index out, Index batch, int repeats) {
  Rng rng(7);
  const Matrix W = random_matrix(rng, out, in);
  const Vector b = random_matrix(rng, out, 1);
  const Matrix X = random_matrix(rng, in, batch);
  const Matrix dY = random_matrix(rng, out, batch);

  Matrix Ys, Yp, dWs, dWp, dXs, dXp;
  Vector dbs, dbp;

  double t_serial = 0.0, t_omp = 0.0;
  for (int r = 0; r < repeats; ++r) {
    double t0 = omp_get_wtime();
    sac::linear_forward(Backend::Serial, W, b, X, Ys);
    sac::linear_backward(Backend::Serial, W, X, dY, dWs, dbs, &dXs);
    t_serial += omp_get_wtime() - t0;

    t0 = omp_get_wtime();
    sac::linear_forward(Backend::OpenMP, W, b, X, Yp);
    sac::linear_backward(Backend::OpenMP, W, X, dY, dWp, dbp, &dXp);
    t_omp += omp_get_wtime() - t0;
  }

  const bool same = (Ys == Yp) && (dWs == dWp) && (dbs == dbp) && (dXs == dXp);
  note_identical(same);
  std::printf("  linear %4lldx%-4lld batch %-5lld  serial %8.3f ms  omp %8.3f ms  x%.2f  %s\n",
              static_cast<long long>(in), static_cast<long long>(out),
              static_cast<long long>(batch), 1e3 * t_serial / repeats, 1e3 * t_omp / repeats,
              t_serial / t_omp, same ? "identical" : "MISMATCH");
}

// One filtered zero-policy rollout; returns the accumulated cost.
double filtered_rollout(const env::Environment& env, const clf::QuadraticCLF& clf,
                        std::uint64_t seed) {
  filter::SafetyFilter filter(clf, env.error_model(), filter::FilterConfig{}, env.dt());
  const Vector u0 = Vector::Zero(env.model().input_dim);
  const sim::Controller controller = [&](const sim::ExtendedState& xe) -> sim::ControlDecision {
    filter::FilterResult fr = filter.apply(xe.e, u0);
    return {std::move(fr.u), fr.diag};
  };
  Rng rng(seed);
  const Vector x0 = env.sample_initial_state(rng);
  return sim::rollout(env.model(), controller, env.hooks(), x0, env.horizon(), env.dt())
      .total_cost();
}

void bench_sweep(int runs) {
  const auto env = env::make_environment("nct");
  const clf::QuadraticCLF clf = exp::build_clf(*env, "lqr", 0.1);

  std::vector<double> serial_costs(runs), parallel_costs(runs);

  double t0 = omp_get_wtime();
  for (int i = 0; i < runs; ++i) serial_costs[i] = filtered_rollout(*env, clf, 100 + i);
  const double t_serial = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < runs; ++i) {
    // Each worker owns its environment instance; the certificate is shared
    // read-only.
    const auto worker_env = env::make_environment("nct");
    parallel_costs[i] = filtered_rollout(*worker_env, clf, 100 + i);
  }
  const double t_omp = omp_get_wtime() - t0;

  const bool same = serial_costs == parallel_costs;
  note_identical(same);
  std::printf("  %d filtered rollouts            serial %8.3f ms  omp %8.3f ms  x%.2f  %s\n", runs,
              1e3 * t_serial, 1e3 * t_omp, t_serial / t_omp, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  std::printf("network kernels (forward + backward per repeat):\n");
  bench_kernels(64, 64, 256, 50);
  bench_kernels(64, 64, 2048, 20);
  bench_kernels(128, 128, 1024, 20);

  std::printf("\nindependent-run sweep:\n");
  bench_sweep(16);

  std::printf("\n%s\n", g_all_identical ? "all parallel results bitwise-identical to serial"
                                        : "PARALLEL/SERIAL MISMATCH");
  return g_all_identical ? 0 : 1;
}
