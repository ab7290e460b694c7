#include <doctest.h>

#include <cmath>
#include <random>

#include "reso/errors.hpp"
#include "reso/flatness.hpp"
#include "reso/kernels.hpp"
#include "reso/observer.hpp"
#include "reso/simulator.hpp"
#include "reso/tuning.hpp"
#include "truth_model.hpp"

using namespace reso;

TEST_CASE("GPIO degeneration leaves an integrator chain") {
  const auto m = build_abar({1, 1, 1, 1}, 0.0);
  CHECK(m.A_bar(6, 5) == 0.0);
  CHECK(m.A_bar(4, 5) == 1.0);
  CHECK(m.A_bar(5, 6) == 1.0);
  for (int j = 0; j < 7; ++j) CHECK(m.A_bar(6, j) == 0.0);
}

TEST_CASE("entry placement") {
  const auto m = build_abar({1, 2, 3, 4}, 2.0);
  const double row4[7] = {-1, -2, -3, -4, 1, 0, 0};
  for (int j = 0; j < 7; ++j) CHECK(m.A_bar(3, j) == row4[j]);
  CHECK(m.A_bar(6, 5) == -4.0);
  CHECK(m.A_bar(0, 1) == 1.0);
  CHECK(m.A_bar(1, 2) == 1.0);
  CHECK(m.A_bar(2, 3) == 1.0);
  CHECK(m.h(4) == 1.0);
  CHECK(m.c(0) == 1.0);
}

TEST_CASE("pair is observable") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int n = 0; n < 100; ++n) {
    const auto m = build_abar({u(rng), u(rng), u(rng), u(rng)}, n % 3 ? u(rng) : 0.0);
    Eigen::MatrixXd O = observability_matrix(m);
    CHECK(numeric_rank(O) == 7);
  }
}

TEST_CASE("derivative examples") {
  auto m = build_abar({1, 2, 3, 4}, 2.0, 10.0);
  m.l << 7, 21, 35, 35, 21, 7, 1;
  const Vec7 zero = Vec7::Zero();
  // b0_hat u = u0 cancels the coupling.
  CHECK(reso_derivative(m, zero, 0.3, 3.0, 0.0).norm() == 0.0);
  CHECK((reso_derivative(m, zero, 0.0, 0.0, 1.0) - m.l).norm() == 0.0);
}

TEST_CASE("derivative matches a dense evaluation") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const double wr = std::abs(g(rng)) * 20;
    auto gs = tune(1.0 + std::abs(g(rng)), 300.0 + 10 * std::abs(g(rng)), wr);
    const double b0 = 1e3 * (1 + std::abs(g(rng)));
    auto m = build_abar(gs.k, wr, b0);
    for (int i = 0; i < 7; ++i) m.l(i) = gs.l[i];
    Vec7 z;
    for (int i = 0; i < 7; ++i) z(i) = g(rng) * std::pow(10.0, i);
    const double u = g(rng), u0 = g(rng) * b0, e = g(rng);
    const Vec7 H_z = (m.A_bar - m.l * m.c) * z;
    Vec7 dense = H_z + m.l * e;
    dense(3) -= b0 * u - u0;
    const Vec7 got = reso_derivative(m, z, u, u0, e);
    const double scale = (m.A_bar.cwiseAbs() * z.cwiseAbs()).maxCoeff() +
                         m.l.cwiseAbs().maxCoeff() * (std::abs(z(0)) + std::abs(e)) +
                         std::abs(b0 * u) + std::abs(u0);
    CHECK((got - dense).cwiseAbs().maxCoeff() <= 1e-12 * scale);

    Observer obs(ObserverKind::Reso, gs.k, gs.l, wr, b0);
    double out[7];
    obs.derivative(z.data(), u, u0, e, out);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(out[i] - got(i)) <= 1e-12 * scale);
  }
}

TEST_CASE("GPIO path is bit-identical to RESO with omega_r_hat = 0") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto gs = tune(500.0, 10000.0, 0.0);
  for (const auto* kt : {&kern::table(kern::Isa::Scalar), &kern::best()}) {
    Observer a(ObserverKind::Gpio, gs.k, gs.l, 0.0, 4.3e12, *kt);
    Observer b(ObserverKind::Reso, gs.k, gs.l, 0.0, 4.3e12, *kt);
    for (int n = 0; n < 1000; ++n) {
      double z[7], da[7], db[7];
      for (double& v : z) v = g(rng) * 1e3;
      const double u = g(rng), u0 = g(rng) * 1e12, e = g(rng);
      a.derivative(z, u, u0, e, da);
      b.derivative(z, u, u0, e, db);
      for (int i = 0; i < 7; ++i) CHECK(da[i] == db[i]);
    }
  }
}

TEST_CASE("GPIO observer ignores omega_r_hat") {
  const auto gs = tune(1.0, 50.0, 0.0);
  Observer a(ObserverKind::Gpio, gs.k, gs.l, 7.0, 1.0);
  CHECK(a.matrices().omega_r_hat == 0.0);
  CHECK(a.matrices().A_bar(6, 5) == 0.0);
}

TEST_CASE("euler step") {
  const auto gs = tune(1.0, 50.0, 3.0);
  Observer a(ObserverKind::Reso, gs.k, gs.l, 3.0, 2.0);
  a.state = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  double d[7];
  const auto before = a.state;
  a.derivative(before.data(), 0.1, 0.4, 0.05, d);
  a.euler_step(1e-3, 0.1, 0.4, 0.05);
  for (int i = 0; i < 7; ++i) CHECK(a.state[i] == before[i] + 1e-3 * d[i]);
}

TEST_CASE("invalid observer inputs") {
  CHECK_THROWS_AS(build_abar({1, -1, 1, 1}, 0.0), InvalidParameter);
  CHECK_THROWS_AS(build_abar({1, 1, 1, 1}, -2.0), InvalidParameter);
  CHECK_THROWS_AS(build_abar({1, 1, 1, 1}, 0.0, 0.0), InvalidParameter);
}

TEST_CASE("matched harmonic disturbance is reconstructed exactly") {
  const auto reso = testing::run_truth(ObserverKind::Reso, 0.35, 140.0, kHarmonicOmega, 2.0, 1.5);
  const auto gpio = testing::run_truth(ObserverKind::Gpio, 0.35, 140.0, kHarmonicOmega, 2.0, 1.5);
  MESSAGE("RESO rel err " << reso.max_rel_err << ", GPIO F residual " << gpio.f_err_amp);
  CHECK(reso.max_rel_err < 1e-6);
  CHECK(gpio.max_rel_err > 1e-3);
  CHECK(gpio.f_err_amp > 1e3 * reso.f_err_amp);
}
