#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "reso/errors.hpp"
#include "reso/metrics.hpp"
#include "reso/simulator.hpp"

using namespace reso;

namespace {

const ControllerKind kAll[] = {ControllerKind::Pi, ControllerKind::AdrcGpio,
                               ControllerKind::AdrcReso, ControllerKind::AdrcOracle};

bool identical(const Trace& a, const Trace& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::memcmp(&a.rows[i], &b.rows[i], sizeof(TraceRow)) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("origin stays at rest") {
  for (auto kind : kAll) {
    for (auto mode : {SimMode::Continuous, SimMode::Zoh}) {
      Scenario s;
      s.controller.kind = kind;
      s.reference.steps = {{0.0, 0.0}};
      s.horizon = 0.05;
      s.mode = mode;
      const Trace tr = run(s);
      CAPTURE(controller_name(kind));
      bool zero = true;
      for (const auto& r : tr.rows) {
        for (double v : r.x) zero = zero && v == 0.0;
        zero = zero && r.u_sat == 0.0 && r.u_raw == 0.0 && r.e == 0.0;
      }
      CHECK(zero);
    }
  }
}

TEST_CASE("preset contents") {
  const auto e1 = preset("e1");
  REQUIRE(e1.reference.steps.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(e1.reference.steps[i].time == i);
    CHECK(e1.reference.steps[i].level == 100.0 * (i + 1));
  }
  CHECK(e1.horizon == 4.0);
  CHECK(e1.disturbance.components.empty());

  const auto e2a = preset("e2a");
  REQUIRE(e2a.disturbance.components.size() == 1);
  CHECK(e2a.disturbance.components[0].c0 == 1.0);
  CHECK(e2a.disturbance.components[0].onset == 1.0);

  const auto e2b = preset("e2b");
  REQUIRE(e2b.disturbance.components.size() == 1);
  const auto& c = e2b.disturbance.components[0];
  CHECK(c.a1 == 1.35);
  CHECK(c.a2 == 0.0);
  CHECK(c.omega_r == kHarmonicOmega);
  CHECK(c.onset == 1.0);
  CHECK(e2b.controller.omega_r_hat == kHarmonicOmega);
  CHECK(scenario_gains(with_controller(e2b, ControllerKind::AdrcGpio)).omega_r_hat == 0.0);
  CHECK(scenario_gains(e2b).omega_r_hat == kHarmonicOmega);
  CHECK(std::abs(kHarmonicOmega - 6.0 * M_PI) < 1e-15);

  const auto g = e3_mismatch_grid();
  for (double m : {0.0, 0.05, -0.05, 0.10, -0.10, 0.25, -0.25})
    CHECK(std::count(g.begin(), g.end(), m) == 1);
  CHECK(preset("e3").disturbance.components.size() == 1);
  CHECK_THROWS_AS(preset("e4"), InvalidParameter);
}

TEST_CASE("runs are deterministic") {
  Scenario s = preset("e2b");
  s.horizon = 1.3;
  CHECK(identical(run(s), run(s)));
  s.noise.std = 0.1;
  s.noise.seed = 11;
  const Trace a = run(s);
  CHECK(identical(a, run(s)));
  s.noise.seed = 12;
  CHECK_FALSE(identical(a, run(s)));
}

TEST_CASE("uniform grid and duty limits") {
  for (auto kind : kAll) {
    Scenario s = with_controller(preset("e2b"), kind);
    s.horizon = 1.5;
    s.record_every = 7;
    const Trace tr = run(s);
    CHECK(tr.dt == doctest::Approx(7e-5).epsilon(1e-15));
    bool uniform = true, bounded = true;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      uniform = uniform && tr.rows[i].t == static_cast<double>(7 * i) * s.h;
      bounded = bounded && tr.rows[i].u_sat >= 0.0 && tr.rows[i].u_sat <= 1.0;
    }
    CHECK(uniform);
    CHECK(bounded);
    CHECK(tr.rows.back().t <= s.horizon);
  }
}

TEST_CASE("channels") {
  const auto& ch = Trace::channels();
  CHECK(ch.size() == 20);
  CHECK(ch.front() == "t");
  CHECK(std::count(ch.begin(), ch.end(), "F_hat") == 1);
  CHECK(sizeof(TraceRow) == ch.size() * sizeof(double));
}

TEST_CASE("divergence is reported") {
  Scenario s = with_controller(preset("e1"), ControllerKind::AdrcGpio);
  s.h = 1e-3;  // far outside the RK4 stability region of the observer
  s.record_every = 1;
  try {
    run(s);
    FAIL("expected divergence");
  } catch (const DivergenceError& err) {
    CHECK(err.time > 0.0);
    CHECK(err.time < s.horizon);
    CHECK(std::string(err.what()).find("omega") != std::string::npos);
  }
}

TEST_CASE("invalid scenarios") {
  Scenario s;
  s.h = 0.0;
  CHECK_THROWS_AS(run(s), InvalidParameter);
  s = Scenario{};
  s.horizon = 1e-6;
  CHECK_THROWS_AS(run(s), InvalidParameter);
  s = Scenario{};
  s.mode = SimMode::Zoh;
  s.Ts = 2.5e-5;
  CHECK_THROWS_AS(run(s), InvalidParameter);
  s = Scenario{};
  s.record_every = 0;
  CHECK_THROWS_AS(run(s), InvalidParameter);
  s = Scenario{};
  s.kernel = "mmx";
  CHECK_THROWS_AS(run(s), InvalidParameter);
  s = Scenario{};
  s.noise.std = -1.0;
  CHECK_THROWS_AS(run(s), InvalidParameter);
  s = Scenario{};
  s.controller.omega_o = 100.0;  // observer gains go negative
  CHECK_THROWS_AS(run(s), TuningInfeasible);
}

TEST_CASE("step load: RESO recovers faster than PI and tracks F") {
  const Scenario base = preset("e2a");
  const auto pi = compute_metrics(run(with_controller(base, ControllerKind::Pi)),
                                  metrics_options(base));
  const auto reso = compute_metrics(run(with_controller(base, ControllerKind::AdrcReso)),
                                    metrics_options(base));
  MESSAGE("recovery PI " << pi.recovery_time << " s, RESO " << reso.recovery_time
                         << " s, drop PI " << pi.drop << ", RESO " << reso.drop
                         << ", F err " << reso.f_est_err);
  CHECK(pi.recovered);
  CHECK(reso.recovered);
  CHECK(reso.recovery_time < pi.recovery_time);
  CHECK(pi.recovery_time > 2.0 * reso.recovery_time);
  CHECK(reso.f_est_err < 0.01);
}

TEST_CASE("sampled control stays close to co-integration") {
  Scenario s = with_controller(preset("e2a"), ControllerKind::AdrcReso);
  s.horizon = 1.5;
  const Trace c = run(s);
  s.mode = SimMode::Zoh;
  const Trace z = run(s);
  REQUIRE(c.size() == z.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    worst = std::max(worst, std::abs(c.rows[i].x[3] - z.rows[i].x[3]));
  MESSAGE("max |omega_cont - omega_zoh| = " << worst);
  CHECK(worst < 0.01 * 100.0);
  CHECK(worst > 0.0);
}

TEST_CASE("onsets snap to the nearest grid point") {
  Scenario s = with_controller(preset("e2a"), ControllerKind::Pi);
  s.horizon = 1.01;
  s.record_every = 1;
  const Trace on = run(s);
  s.disturbance.components[0].onset = 1.0 + 0.4 * s.h;
  CHECK(identical(on, run(s)));
  s.disturbance.components[0].onset = 1.0 - 0.4 * s.h;
  CHECK(identical(on, run(s)));
  s.disturbance.components[0].onset = 1.0 + 0.6 * s.h;
  CHECK_FALSE(identical(on, run(s)));
  // The load appears in the first row at or after the onset.
  const auto it = std::find_if(on.rows.begin(), on.rows.end(),
                               [](const TraceRow& r) { return r.tau != 0.0; });
  REQUIRE(it != on.rows.end());
  CHECK(it->t == 100000 * s.h);
}
