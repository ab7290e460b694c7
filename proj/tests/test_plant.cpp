#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "reso/errors.hpp"
#include "reso/flatness.hpp"
#include "reso/plant.hpp"

using namespace reso;

namespace {

PlantParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.5, 2.0);
  PlantParams p;
  p.L *= f(rng);
  p.C *= f(rng);
  p.R *= f(rng);
  p.E *= f(rng);
  p.L_a *= f(rng);
  p.R_a *= f(rng);
  p.k_e *= f(rng);
  p.k_m *= f(rng);
  p.J *= f(rng);
  p.b_m *= f(rng);
  return p;
}

}  // namespace

TEST_CASE("unit parameters give the textbook matrices") {
  auto p = PlantParams::unit();
  const auto ss = build_state_space(p);
  CHECK(ss.A(3, 0) == 0.0);
  CHECK(ss.A(3, 1) == 0.0);
  CHECK(ss.A(3, 2) == 1.0);
  CHECK(ss.A(3, 3) == -1.0);
  CHECK(ss.B_u(0) == 1.0);
  CHECK(ss.B_u(1) == 0.0);
  CHECK(ss.B_u(2) == 0.0);
  CHECK(ss.B_u(3) == 0.0);
  CHECK(ss.B_d(3) == -1.0);
  CHECK(ss.C_out(3) == 1.0);
}

TEST_CASE("default matrix entries") {
  PlantParams p;
  const auto ss = build_state_space(p);
  CHECK(ss.A(0, 1) == doctest::Approx(-1.0 / p.L).epsilon(1e-15));
  CHECK(ss.A(1, 1) == doctest::Approx(-1.0 / (p.C * p.R)).epsilon(1e-15));
  CHECK(ss.A(2, 3) == doctest::Approx(-p.k_e / p.L_a).epsilon(1e-15));
  CHECK(ss.B_u(0) == doctest::Approx(p.E / p.L).epsilon(1e-15));
  CHECK(ss.B_d(3) == doctest::Approx(-1.0 / p.J).epsilon(1e-15));
}

TEST_CASE("default plant is controllable") {
  PlantParams p;
  const auto ss = build_state_space(p);
  Eigen::Matrix4d Q;
  Q << ss.B_u, ss.A * ss.B_u, ss.A * ss.A * ss.B_u, ss.A * ss.A * ss.A * ss.B_u;
  for (int j = 0; j < 4; ++j) Q.col(j).normalize();
  CHECK(numeric_rank(Q) == 4);
  CHECK(analyze(ss, p).rank == 4);
}

TEST_CASE("derivative examples") {
  PlantParams p;
  const Vec4 zero = Vec4::Zero();
  CHECK(plant_derivative(p, zero, 0.0, 0.0).norm() == 0.0);
  const Vec4 du = plant_derivative(p, zero, 1.0, 0.0);
  CHECK(du(0) == doctest::Approx(p.E / p.L).epsilon(1e-15));
  CHECK(du(1) == 0.0);
  CHECK(du(2) == 0.0);
  CHECK(du(3) == 0.0);
  const Vec4 dt = plant_derivative(p, zero, 0.0, 1.0);
  CHECK(dt(0) == 0.0);
  CHECK(dt(1) == 0.0);
  CHECK(dt(2) == 0.0);
  CHECK(dt(3) == doctest::Approx(-1.0 / p.J).epsilon(1e-15));
}

TEST_CASE("component form matches matrix form") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const auto p = random_params(rng);
    const auto ss = build_state_space(p);
    const Vec4 x(10 * g(rng), 100 * g(rng), 10 * g(rng), 100 * g(rng));
    const double u = g(rng), tau = g(rng);
    const Vec4 a = plant_derivative(p, x, u, tau);
    const Vec4 b = plant_derivative(ss, x, u, tau);
    for (int i = 0; i < 4; ++i) {
      const double scale = std::abs(ss.A(i, 0) * x(0)) + std::abs(ss.A(i, 1) * x(1)) +
                           std::abs(ss.A(i, 2) * x(2)) + std::abs(ss.A(i, 3) * x(3)) +
                           std::abs(ss.B_u(i) * u) + std::abs(ss.B_d(i) * tau);
      CHECK(std::abs(a(i) - b(i)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("equilibrium is a fixed point") {
  PlantParams p;
  const auto ss = build_state_space(p);
  for (double tau : {0.0, 1.0, -0.5}) {
    const auto eq = equilibrium(ss, 150.0, tau);
    CHECK(eq.x(3) == doctest::Approx(150.0));
    const Vec4 d = plant_derivative(ss, eq.x, eq.u, tau);
    CHECK(d.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("inertia back-solve hits the requested gain") {
  PlantParams p;
  p.J = inertia_for_b0(p, 4.3015e12);
  CHECK(p.b0() == doctest::Approx(4.3015e12).epsilon(1e-14));
}

TEST_CASE("invalid parameters are rejected") {
  PlantParams p;
  p.C = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = PlantParams{};
  p.R_a = -1.0;
  CHECK_THROWS_AS(build_state_space(p), InvalidParameter);
  p = PlantParams{};
  p.E = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  CHECK_THROWS_AS(plant_derivative(PlantParams{}, Vec4::Constant(NAN), 0.0, 0.0),
                  InvalidParameter);
}
