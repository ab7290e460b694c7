#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "reso/errors.hpp"
#include "reso/sweep.hpp"

using namespace reso;

TEST_CASE("empty sweep") {
  CHECK(sweep(preset("e2a"), "controller.omega_o", {}).empty());
}

TEST_CASE("resonance mismatch grows the residual") {
  const Scenario base = preset("e3");
  std::vector<double> m = e3_mismatch_grid();
  std::sort(m.begin(), m.end());
  std::vector<double> values;
  for (double x : m) values.push_back(kHarmonicOmega * (1.0 + x));
  const auto pts = sweep(base, "controller.omega_r_hat", values);
  REQUIRE(pts.size() == values.size());
  double matched = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(pts[i].ok);
    CHECK(pts[i].value == values[i]);
    if (m[i] == 0.0) matched = pts[i].metrics.residual;
  }
  // Nondecreasing moving away from zero on either side.
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (m[i + 1] <= 0.0) CHECK(pts[i].metrics.residual >= pts[i + 1].metrics.residual);
    else CHECK(pts[i + 1].metrics.residual >= pts[i].metrics.residual);
  }
  CHECK(pts.front().metrics.residual >= 10.0 * matched);
  CHECK(pts.back().metrics.residual >= 10.0 * matched);
}

TEST_CASE("higher observer bandwidth recovers faster") {
  const auto pts = sweep(preset("e2a"), "controller.omega_o", {8000.0, 10000.0, 12000.0});
  REQUIRE(pts.size() == 3);
  for (const auto& p : pts) REQUIRE(p.ok);
  CHECK(pts[1].metrics.recovery_time <= pts[0].metrics.recovery_time);
  CHECK(pts[2].metrics.recovery_time <= pts[1].metrics.recovery_time);
  CHECK(pts[1].metrics.drop <= pts[0].metrics.drop);
  CHECK(pts[2].metrics.drop <= pts[1].metrics.drop);
}

TEST_CASE("a failing point does not stop the sweep") {
  Scenario base = preset("e2a");
  base.horizon = 2.5;
  const auto pts = sweep(base, "controller.omega_o", {100.0, 10000.0}, true);
  REQUIRE(pts.size() == 2);
  CHECK_FALSE(pts[0].ok);
  CHECK(pts[0].error.find("not positive") != std::string::npos);
  CHECK(pts[1].ok);
  CHECK(pts[1].trace.size() > 0);
  CHECK_THROWS_AS(sweep(base, "controller.nope", {1.0}), InvalidParameter);
  CHECK_THROWS_AS(sweep(base, "controller.omega_o", {NAN}), InvalidParameter);
}
