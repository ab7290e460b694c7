#include "reso/errors.hpp"
#include "reso/simulator.hpp"

namespace reso {

namespace {

Scenario base(std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.controller.kind = ControllerKind::AdrcReso;
  s.controller.omega_c = 500.0;
  s.controller.omega_o = 10000.0;
  s.controller.omega_r_hat = kHarmonicOmega;
  s.controller.kp = 0.01;
  s.controller.ki = 0.25;
  s.horizon = 4.0;
  s.h = 1e-5;
  s.record_every = 10;
  s.reference.steps = {{0.0, 100.0}};
  return s;
}

}  // namespace

Scenario preset(std::string_view name) {
  if (name == "e1") {
    Scenario s = base("e1");
    s.reference.steps = {{0.0, 100.0}, {1.0, 200.0}, {2.0, 300.0}, {3.0, 400.0}};
    return s;
  }
  if (name == "e2a") {
    Scenario s = base("e2a");
    s.disturbance.components = {DisturbanceComponent::step(1.0, 1.0)};
    return s;
  }
  if (name == "e2b" || name == "e3") {
    Scenario s = base(std::string(name));
    s.disturbance.components = {DisturbanceComponent::sinusoid(1.35, 0.0, kHarmonicOmega, 1.0)};
    return s;
  }
  throw InvalidParameter("unknown preset '" + std::string(name) + "'");
}

std::vector<double> e3_mismatch_grid() { return {-0.25, -0.10, -0.05, 0.0, 0.05, 0.10, 0.25}; }

Scenario with_controller(Scenario s, ControllerKind kind) {
  s.controller.kind = kind;
  return s;
}

}  // namespace reso
