#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "clfrl/common/rng.h"
#include "clfrl/sac/adam.h"
#include "clfrl/sac/agent.h"
#include "clfrl/sac/checkpoint.h"
#include "clfrl/sac/kernels.h"
#include "clfrl/sac/mlp.h"
#include "clfrl/sac/policy.h"
#include "clfrl/sac/replay.h"

using namespace clfrl;
using namespace clfrl::sac;

namespace {

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index i = 0; i < rows; ++i) m(i, c) = rng.normal();
  }
  return m;
}

// Normal draws in the same order agent updates use (column by column).
Matrix normal_block(Rng& rng, Index rows, Index cols) { return random_matrix(rng, rows, cols); }

// Central finite difference of `f` w.r.t. one coordinate of `params`.
template <typename F>
double fd_derivative(Vector& params, Index i, const F& f, double h = 1e-6) {
  const double saved = params[i];
  params[i] = saved + h;
  const double up = f();
  params[i] = saved - h;
  const double down = f();
  params[i] = saved;
  return (up - down) / (2.0 * h);
}

void require_close_rel(double analytic, double numeric, double tol = 1e-5) {
  REQUIRE(std::abs(analytic - numeric) <= tol * std::max(1.0, std::abs(numeric)));
}

double stable_log1m_tanh2(double z) {
  const double sp = std::max(-2.0 * z, 0.0) + std::log1p(std::exp(-std::abs(2.0 * z)));
  return 2.0 * (std::log(2.0) - z - sp);
}

// Reference log-prob of the squashed sample for a zero-parameter policy
// (mu = 0, sigma = 1) over a box [-s, s]: z = xi.
double reference_logp_zero_policy(double xi, double scale) {
  return -0.5 * xi * xi - 0.5 * std::log(2.0 * M_PI) - stable_log1m_tanh2(xi) - std::log(scale);
}

}  // namespace

TEST_CASE("linear kernels match dense algebra") {
  Rng rng(11);
  for (const auto& [out, in, n] : {std::array<Index, 3>{3, 2, 5}, {7, 13, 1}, {1, 4, 9}}) {
    const Matrix W = random_matrix(rng, out, in);
    const Vector b = rng.normal_vector(out);
    const Matrix X = random_matrix(rng, in, n);
    Matrix Y;
    linear_forward(Backend::Serial, W, b, X, Y);
    const Matrix ref = (W * X).colwise() + b;
    REQUIRE((Y - ref).cwiseAbs().maxCoeff() < 1e-13);

    const Matrix dY = random_matrix(rng, out, n);
    Matrix dW, dX;
    Vector db;
    linear_backward(Backend::Serial, W, X, dY, dW, db, &dX);
    REQUIRE((dW - dY * X.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((db - dY.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((dX - W.transpose() * dY).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("tanh kernels apply the elementwise map and its derivative") {
  Rng rng(12);
  Matrix Y = random_matrix(rng, 4, 6);
  const Matrix Z = Y;
  tanh_forward(Backend::Serial, Y);
  REQUIRE((Y - Z.array().tanh().matrix()).cwiseAbs().maxCoeff() < 1e-15);
  Matrix D = Matrix::Ones(4, 6);
  tanh_backward(Backend::Serial, Y, D);
  REQUIRE((D - (1.0 - Y.array().square()).matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("kernel shape mismatches are rejected") {
  Matrix W = Matrix::Zero(2, 3), X = Matrix::Zero(4, 5), Y, dW;
  Vector b = Vector::Zero(2), db;
  REQUIRE_THROWS_AS(linear_forward(Backend::Serial, W, b, X, Y), std::invalid_argument);
  Matrix D = Matrix::Zero(2, 2);
  const Matrix T = Matrix::Zero(3, 2);
  REQUIRE_THROWS_AS(tanh_backward(Backend::Serial, T, D), std::invalid_argument);
}

TEST_CASE("OpenMP kernel backend is bit-identical to the serial reference") {
  const int saved_threads = omp_get_max_threads();
  omp_set_num_threads(4);
  Rng rng(13);
  for (const auto& [out, in, n] : {std::array<Index, 3>{5, 3, 17}, {64, 64, 64}, {1, 9, 2}}) {
    const Matrix W = random_matrix(rng, out, in);
    const Vector b = rng.normal_vector(out);
    const Matrix X = random_matrix(rng, in, n);
    Matrix Ys, Yp;
    linear_forward(Backend::Serial, W, b, X, Ys);
    linear_forward(Backend::OpenMP, W, b, X, Yp);
    REQUIRE(Ys == Yp);

    Matrix Ts = Ys, Tp = Yp;
    tanh_forward(Backend::Serial, Ts);
    tanh_forward(Backend::OpenMP, Tp);
    REQUIRE(Ts == Tp);

    const Matrix dY = random_matrix(rng, out, n);
    Matrix Ds = dY, Dp = dY;
    tanh_backward(Backend::Serial, Ts, Ds);
    tanh_backward(Backend::OpenMP, Tp, Dp);
    REQUIRE(Ds == Dp);

    Matrix dWs, dWp, dXs, dXp;
    Vector dbs, dbp;
    linear_backward(Backend::Serial, W, X, dY, dWs, dbs, &dXs);
    linear_backward(Backend::OpenMP, W, X, dY, dWp, dbp, &dXp);
    REQUIRE(dWs == dWp);
    REQUIRE(dbs == dbp);
    REQUIRE(dXs == dXp);
  }
  omp_set_num_threads(saved_threads);
}

TEST_CASE("mlp forward composes linear and tanh layers") {
  Rng rng(14);
  Mlp net({3, 5, 2}, Backend::Serial);
  net.init(rng);
  const Matrix X = random_matrix(rng, 3, 4);
  const Matrix& Y = net.forward(X);

  // Rebuild the same map from the flat parameter vector.
  const Vector& p = net.params();
  const auto W0 = Eigen::Map<const Matrix>(p.data(), 5, 3);
  const auto b0 = Eigen::Map<const Vector>(p.data() + 15, 5);
  const auto W1 = Eigen::Map<const Matrix>(p.data() + 20, 2, 5);
  const auto b1 = Eigen::Map<const Vector>(p.data() + 30, 2);
  const Matrix H = (((W0 * X).colwise() + b0).array().tanh()).matrix();
  const Matrix ref = (W1 * H).colwise() + b1;
  REQUIRE((Y - ref).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(net.param_count() == 32);
}

TEST_CASE("mlp parameter and input gradients match finite differences") {
  Rng rng(15);
  Mlp net({2, 3, 2}, Backend::Serial);
  net.init(rng);
  Matrix X = random_matrix(rng, 2, 3);
  const Matrix G = random_matrix(rng, 2, 3);

  const auto loss = [&]() { return (net.forward(X).array() * G.array()).sum(); };
  net.forward(X);
  Vector grad;
  Matrix dX;
  net.backward(G, grad, &dX);

  for (Index i = 0; i < net.param_count(); ++i) {
    require_close_rel(grad[i], fd_derivative(net.params(), i, loss));
  }
  for (Index c = 0; c < X.cols(); ++c) {
    for (Index r = 0; r < X.rows(); ++r) {
      const double saved = X(r, c);
      X(r, c) = saved + 1e-6;
      const double up = loss();
      X(r, c) = saved - 1e-6;
      const double down = loss();
      X(r, c) = saved;
      require_close_rel(dX(r, c), (up - down) / 2e-6);
    }
  }
}

TEST_CASE("policy log-prob gradient matches finite differences with frozen noise") {
  Rng rng(16);
  GaussianPolicy pol(2, 1, {3}, Vector::Constant(1, -2.0), Vector::Constant(1, 2.0),
                     Backend::Serial);
  pol.net().init(rng);
  const Matrix Obs = random_matrix(rng, 2, 4);
  const Matrix Xi = random_matrix(rng, 1, 4);

  Matrix A;
  Vector logp;
  const auto loss = [&]() {
    pol.sample(Obs, Xi, A, logp);
    return logp.sum();
  };
  loss();
  Vector grad;
  pol.backward(Matrix::Zero(1, 4), Vector::Ones(4), grad);
  for (Index i = 0; i < pol.net().param_count(); ++i) {
    require_close_rel(grad[i], fd_derivative(pol.net().params(), i, loss));
  }
}

TEST_CASE("policy action-path gradient matches finite differences") {
  Rng rng(17);
  GaussianPolicy pol(2, 2, {4}, Vector::Constant(2, -1.0), Vector::Constant(2, 3.0),
                     Backend::Serial);
  pol.net().init(rng);
  const Matrix Obs = random_matrix(rng, 2, 3);
  const Matrix Xi = random_matrix(rng, 2, 3);
  const Matrix G = random_matrix(rng, 2, 3);

  Matrix A;
  Vector logp;
  const auto loss = [&]() {
    pol.sample(Obs, Xi, A, logp);
    return (A.array() * G.array()).sum();
  };
  loss();
  Vector grad;
  pol.backward(G, Vector::Zero(3), grad);
  for (Index i = 0; i < pol.net().param_count(); ++i) {
    require_close_rel(grad[i], fd_derivative(pol.net().params(), i, loss));
  }
}

TEST_CASE("policy combined gradient matches finite differences") {
  Rng rng(18);
  GaussianPolicy pol(3, 2, {4}, Vector::Constant(2, -0.5), Vector::Constant(2, 0.5),
                     Backend::Serial);
  pol.net().init(rng);
  const Matrix Obs = random_matrix(rng, 3, 5);
  const Matrix Xi = random_matrix(rng, 2, 5);
  const Matrix G = random_matrix(rng, 2, 5);
  const double w = 0.7;

  Matrix A;
  Vector logp;
  const auto loss = [&]() {
    pol.sample(Obs, Xi, A, logp);
    return w * logp.sum() + (A.array() * G.array()).sum();
  };
  loss();
  Vector grad;
  pol.backward(G, Vector::Constant(5, w), grad);
  for (Index i = 0; i < pol.net().param_count(); ++i) {
    require_close_rel(grad[i], fd_derivative(pol.net().params(), i, loss));
  }
}

TEST_CASE("log-std clamp blocks its gradient") {
  GaussianPolicy pol(1, 1, {2}, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0),
                     Backend::Serial);
  // All weights zero; push the raw log-std bias (the very last parameter)
  // above the clamp.
  Vector& p = pol.net().params();
  p.setZero();
  p[p.size() - 1] = 5.0;

  Matrix A;
  Vector logp;
  const Matrix Obs = Matrix::Constant(1, 1, 0.3);
  const Matrix Xi = Matrix::Constant(1, 1, 0.4);
  pol.sample(Obs, Xi, A, logp);
  // Clamped log-std = 2, so sigma = e^2.
  REQUIRE(A(0, 0) == Catch::Approx(std::tanh(std::exp(2.0) * 0.4)).margin(1e-12));
  Vector grad;
  pol.backward(Matrix::Ones(1, 1), Vector::Ones(1), grad);
  REQUIRE(grad[p.size() - 1] == 0.0);
  // The mean bias (second-to-last parameter block) still receives gradient.
  REQUIRE(grad.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sampled actions stay strictly inside the box") {
  Rng rng(19);
  GaussianPolicy pol(2, 2, {3}, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0),
                     Backend::Serial);
  pol.net().init(rng);
  pol.net().params() *= 200.0;  // saturate tanh hard
  const Matrix Obs = random_matrix(rng, 2, 50);
  const Matrix Xi = 5.0 * random_matrix(rng, 2, 50);
  Matrix A;
  Vector logp;
  pol.sample(Obs, Xi, A, logp);
  REQUIRE((A.array().abs() < 1.0).all());
  REQUIRE(logp.allFinite());
  Matrix Am;
  pol.mean_action(Obs, Am);
  REQUIRE((Am.array().abs() < 1.0).all());
}

TEST_CASE("policy sampling is a pure function of observation and noise") {
  Rng rng(20);
  GaussianPolicy pol(2, 1, {3}, Vector::Constant(1, -2.0), Vector::Constant(1, 2.0),
                     Backend::Serial);
  pol.net().init(rng);
  const Matrix Obs = random_matrix(rng, 2, 6);
  const Matrix Xi = random_matrix(rng, 1, 6);
  Matrix A1, A2;
  Vector l1, l2;
  pol.sample(Obs, Xi, A1, l1);
  pol.sample(Obs, Xi, A2, l2);
  REQUIRE(A1 == A2);
  REQUIRE(l1 == l2);
}

TEST_CASE("zero-parameter policy matches the closed-form squashed Gaussian") {
  GaussianPolicy pol(2, 1, {3}, Vector::Constant(1, -4.0), Vector::Constant(1, 4.0),
                     Backend::Serial);
  pol.net().params().setZero();
  const Matrix Obs = Matrix::Constant(2, 1, 1.7);
  for (double xi : {0.0, 0.3, -1.2, 8.0}) {
    const Matrix Xi = Matrix::Constant(1, 1, xi);
    Matrix A;
    Vector logp;
    pol.sample(Obs, Xi, A, logp);
    REQUIRE(A(0, 0) == Catch::Approx(4.0 * std::tanh(xi)).margin(1e-12));
    REQUIRE(logp[0] == Catch::Approx(reference_logp_zero_policy(xi, 4.0)).margin(1e-9));
  }
  // Deep in the tail the naive form log(1 - tanh^2) underflows to -inf; the
  // stable form keeps the exact asymptote 2 log 2 - 2 z.
  const double z = 30.0;
  REQUIRE(std::isinf(std::log(1.0 - std::tanh(z) * std::tanh(z))));
  REQUIRE(stable_log1m_tanh2(z) == Catch::Approx(2.0 * std::log(2.0) - 2.0 * z).margin(1e-9));
}

TEST_CASE("replay buffer overwrites oldest entries and samples stored columns") {
  ReplayBuffer buf(5, 2, 1);
  const auto tr = [](double tag) {
    return std::tuple{Vector::Constant(2, tag), Vector::Constant(1, -tag), tag,
                      Vector::Constant(2, tag + 0.5), 0.0};
  };
  for (int i = 0; i < 7; ++i) {
    const auto [o, a, r, n, d] = tr(static_cast<double>(i));
    buf.add(o, a, r, n, d);
  }
  REQUIRE(buf.size() == 5);

  // Content should equal a buffer holding tags 2..6, regardless of slot order.
  ReplayBuffer ref(5, 2, 1);
  for (int i : {4, 6, 2, 5, 3}) {
    const auto [o, a, r, n, d] = tr(static_cast<double>(i));
    ref.add(o, a, r, n, d);
  }
  REQUIRE(buf.checksum() == Catch::Approx(ref.checksum()).margin(1e-9));

  Rng rng(21);
  Matrix O, A, N;
  Vector R, D;
  buf.sample(rng, 64, O, A, R, N, D);
  REQUIRE(O.cols() == 64);
  for (Index c = 0; c < 64; ++c) {
    REQUIRE(R[c] >= 2.0);
    REQUIRE(R[c] <= 6.0);
    REQUIRE(O(0, c) == R[c]);  // obs tag equals reward tag by construction
  }

  ReplayBuffer empty(3, 2, 1);
  REQUIRE_THROWS_AS(empty.sample(rng, 1, O, A, R, N, D), std::logic_error);
  REQUIRE_THROWS_AS(buf.add(Vector::Zero(3), Vector::Zero(1), 0.0, Vector::Zero(2), 0.0),
                    std::invalid_argument);
}

TEST_CASE("adam follows the bias-corrected update and minimizes a quadratic") {
  Adam opt(1, 0.1);
  Vector x = Vector::Constant(1, 3.0);
  Vector g(1);

  // First step: m = 0.1 g, v = 0.001 g^2; with bias correction the step is
  // lr * g / (|g| + eps) ~ lr * sign(g).
  g[0] = 6.0;
  opt.step(x, g);
  REQUIRE(x[0] == Catch::Approx(3.0 - 0.1 * 6.0 / (6.0 + 1e-8)).margin(1e-12));

  x[0] = 3.0;
  Adam opt2(1, 0.05);
  for (int i = 0; i < 2000; ++i) {
    g[0] = x[0];  // gradient of x^2 / 2
    opt2.step(x, g);
  }
  REQUIRE(std::abs(x[0]) < 1e-3);
  REQUIRE_THROWS_AS(Adam(3, -1.0), std::invalid_argument);
}

TEST_CASE("critic regression loss matches the single-transition hand value") {
  SacConfig cfg;
  cfg.gamma = 0.0;
  cfg.hidden = {2};
  cfg.batch = 1;
  Rng rng(22);
  SacAgent agent(1, 1, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), cfg, rng);
  agent.critic1().params().setZero();
  agent.critic2().params().setZero();

  const Matrix Obs = Matrix::Constant(1, 1, 0.2);
  const Matrix Act = Matrix::Constant(1, 1, -0.3);
  const Vector Rew = Vector::Constant(1, 1.0);
  const Matrix Next = Matrix::Constant(1, 1, 0.1);
  const Vector Done = Vector::Zero(1);
  // Both critics predict 0 against a target of r = 1, so the mean of the two
  // MSE losses is exactly 1.
  const double loss = agent.critic_update(Obs, Act, Rew, Next, Done, rng);
  REQUIRE(loss == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("critic target uses min of target critics with entropy correction") {
  SacConfig cfg;
  cfg.gamma = 0.9;
  cfg.hidden = {2};
  Rng rng(23);
  SacAgent agent(1, 1, Vector::Constant(1, -2.0), Vector::Constant(1, 2.0), cfg, rng);
  agent.critic1().params().setZero();
  agent.critic2().params().setZero();
  agent.policy().net().params().setZero();  // mu = 0, sigma = 1
  agent.set_log_alpha(std::log(0.5));

  // Constant target critics: zero everything except the output bias.
  agent.target1().params().setZero();
  agent.target1().params()[agent.target1().param_count() - 1] = 2.0;
  agent.target2().params().setZero();
  agent.target2().params()[agent.target2().param_count() - 1] = 3.0;

  const Matrix Obs = Matrix::Constant(1, 1, 0.4);
  const Matrix Act = Matrix::Constant(1, 1, 0.1);
  const Vector Rew = Vector::Constant(1, 0.7);
  const Matrix Next = Matrix::Constant(1, 1, -0.6);
  const Vector Done = Vector::Zero(1);

  // Replicate the update's own noise draw to predict the next action exactly.
  Rng shadow(42);
  const double xi = shadow.normal();
  const double logp = reference_logp_zero_policy(xi, 2.0);
  const double y = 0.7 + 0.9 * (2.0 - 0.5 * logp);
  Rng driver(42);
  const double loss = agent.critic_update(Obs, Act, Rew, Next, Done, driver);
  REQUIRE(loss == Catch::Approx(y * y).margin(1e-9));

  // A terminal flag removes the bootstrap term entirely.
  agent.critic1().params().setZero();
  agent.critic2().params().setZero();
  Rng driver2(42);
  const double loss_done =
      agent.critic_update(Obs, Act, Rew, Next, Vector::Ones(1), driver2);
  REQUIRE(loss_done == Catch::Approx(0.7 * 0.7).margin(1e-12));
}

TEST_CASE("policy gradient steps pull the squashed mean toward a quadratic bowl target") {
  Rng rng(24);
  GaussianPolicy pol(1, 1, {8}, Vector::Constant(1, -2.0), Vector::Constant(1, 2.0),
                     Backend::Serial);
  pol.net().init(rng);
  Adam opt(pol.net().param_count(), 3e-3);
  const int batch = 8;
  const Matrix Obs = Matrix::Constant(1, batch, 0.5);
  const double u0 = 0.7;

  Matrix A, G;
  Vector logp, grad;
  for (int it = 0; it < 1000; ++it) {
    pol.sample(Obs, normal_block(rng, 1, batch), A, logp);
    // Minimize mean (a - u0)^2; no entropy term.
    G = (2.0 / batch) * (A.array() - u0).matrix();
    pol.backward(G, Vector::Zero(batch), grad);
    opt.step(pol.net().params(), grad);
  }
  Matrix Am;
  pol.mean_action(Obs.col(0), Am);
  REQUIRE(Am(0, 0) == Catch::Approx(u0).margin(0.1));
}

TEST_CASE("entropy-only updates widen a narrow policy") {
  // A squashed Gaussian with sigma ~ 1 already sits near the bounded-support
  // entropy ceiling of -log(2 * scale), so start tight to leave headroom.
  Rng rng(25);
  GaussianPolicy pol(1, 1, {4}, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0),
                     Backend::Serial);
  pol.net().init(rng);
  pol.net().params()[pol.net().param_count() - 1] -= 3.0;  // raw log-std bias
  Adam opt(pol.net().param_count(), 3e-3);
  const Matrix Obs = Matrix::Constant(1, 16, 0.2);

  Matrix A;
  Vector logp, grad;
  const auto mean_logp = [&]() {
    Rng probe(99);
    double acc = 0.0;
    const int reps = 64;
    for (int r = 0; r < reps; ++r) {
      pol.sample(Obs, normal_block(probe, 1, 16), A, logp);
      acc += logp.mean();
    }
    return acc / reps;
  };

  const double before = mean_logp();
  REQUIRE(before > 1.0);  // narrow: density well above the uniform ceiling
  for (int it = 0; it < 600; ++it) {
    pol.sample(Obs, normal_block(rng, 1, 16), A, logp);
    // Minimize mean(logp): pure entropy ascent.
    pol.backward(Matrix::Zero(1, 16), Vector::Constant(16, 1.0 / 16.0), grad);
    opt.step(pol.net().params(), grad);
  }
  REQUIRE(mean_logp() < before - 1.0);
}

TEST_CASE("temperature tracks the entropy target from both sides") {
  SacConfig cfg;
  cfg.hidden = {2};
  Rng rng(26);
  SacAgent agent(1, 1, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), cfg, rng);
  REQUIRE(agent.target_entropy() == -1.0);

  // Entropy far above target: alpha should shrink.
  agent.temperature_update(/*mean_logp=*/-3.0);
  REQUIRE(agent.log_alpha() < 0.0);

  SacAgent agent2(1, 1, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), cfg, rng);
  // Entropy below target: alpha should grow.
  agent2.temperature_update(/*mean_logp=*/5.0);
  REQUIRE(agent2.log_alpha() > 0.0);
}

TEST_CASE("soft target update blends parameters at rate tau") {
  SacConfig cfg;
  cfg.hidden = {2};
  cfg.tau = 0.25;
  Rng rng(27);
  SacAgent agent(1, 1, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), cfg, rng);
  const Vector online = agent.critic1().params();
  agent.target1().params().setZero();
  agent.target2().params().setZero();
  agent.soft_update_targets();
  REQUIRE((agent.target1().params() - 0.25 * online).cwiseAbs().maxCoeff() < 1e-15);
  agent.soft_update_targets();
  REQUIRE((agent.target1().params() - (0.75 * 0.25 + 0.25) * online).cwiseAbs().maxCoeff() <
          1e-15);

  SacConfig full = cfg;
  full.tau = 1.0;
  SacAgent a2(1, 1, Vector::Constant(1, -1.0), Vector::Constant(1, 1.0), full, rng);
  a2.target1().params().setZero();
  a2.soft_update_targets();
  REQUIRE(a2.target1().params() == a2.critic1().params());
}

TEST_CASE("full agent update is finite, deterministic, and backend-independent") {
  const auto run = [](Backend be, std::uint64_t seed) {
    SacConfig cfg;
    cfg.hidden = {8, 8};
    cfg.batch = 16;
    cfg.backend = be;
    Rng rng(seed);
    SacAgent agent(3, 2, Vector::Constant(2, -1.5), Vector::Constant(2, 1.5), cfg, rng);
    ReplayBuffer buf(64, 3, 2);
    for (int i = 0; i < 40; ++i) {
      const Vector o = rng.normal_vector(3);
      const Vector a = rng.uniform_vector(Vector::Constant(2, -1.5), Vector::Constant(2, 1.5));
      buf.add(o, a, rng.normal(), rng.normal_vector(3), 0.0);
    }
    UpdateStats st;
    for (int i = 0; i < 5; ++i) st = agent.update(buf, rng);
    return std::tuple{agent.policy().net().params(), agent.critic1().params(),
                      agent.target1().params(), agent.log_alpha(), st};
  };

  const auto [p1, c1, t1, a1, s1] = run(Backend::Serial, 5);
  const auto [p2, c2, t2, a2, s2] = run(Backend::Serial, 5);
  REQUIRE(p1 == p2);
  REQUIRE(c1 == c2);
  REQUIRE(t1 == t2);
  REQUIRE(a1 == a2);
  REQUIRE(std::isfinite(s1.critic_loss));
  REQUIRE(std::isfinite(s1.actor_loss));
  REQUIRE(s1.alpha > 0.0);
  REQUIRE((c1 - t1).cwiseAbs().maxCoeff() > 0.0);  // targets lag the online net

  const int saved_threads = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto [p3, c3, t3, a3, s3] = run(Backend::OpenMP, 5);
  omp_set_num_threads(saved_threads);
  REQUIRE(p1 == p3);
  REQUIRE(c1 == c3);
  REQUIRE(t1 == t3);
  REQUIRE(a1 == a3);
}

TEST_CASE("policy checkpoints round-trip exactly and reject malformed input") {
  Rng rng(28);
  GaussianPolicy pol(4, 2, {16, 16}, Vector::Constant(2, -0.5), Vector::Constant(2, 0.5),
                     Backend::Serial);
  pol.net().init(rng);

  const std::string text = policy_to_json(pol, "nct|seed=3|eta0=0.1");
  std::string fp;
  GaussianPolicy back = policy_from_json(text, Backend::Serial, &fp);
  REQUIRE(fp == "nct|seed=3|eta0=0.1");
  REQUIRE(back.net().params() == pol.net().params());
  REQUIRE(back.u_low() == pol.u_low());
  REQUIRE(back.u_high() == pol.u_high());

  // Same actions on a fresh observation.
  const Matrix Obs = random_matrix(rng, 4, 3);
  Matrix A1, A2;
  pol.mean_action(Obs, A1);
  back.mean_action(Obs, A2);
  REQUIRE(A1 == A2);

  REQUIRE_THROWS_AS(policy_from_json("{not json", Backend::Serial), std::runtime_error);
  REQUIRE_THROWS_AS(policy_from_json("{}", Backend::Serial), std::runtime_error);
  auto j = nlohmann::json::parse(text);
  j["layers"][0]["rows"] = 99;
  REQUIRE_THROWS_AS(policy_from_json(j.dump(), Backend::Serial), std::runtime_error);
  j = nlohmann::json::parse(text);
  j["format"] = "something-else";
  REQUIRE_THROWS_AS(policy_from_json(j.dump(), Backend::Serial), std::runtime_error);
}

TEST_CASE("sac config validation rejects out-of-range settings") {
  SacConfig cfg;
  cfg.gamma = 1.5;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SacConfig{};
  cfg.tau = 0.0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SacConfig{};
  cfg.batch = 0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SacConfig{};
  cfg.hidden = {};
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SacConfig{};
  REQUIRE_NOTHROW(cfg.validate());
}
