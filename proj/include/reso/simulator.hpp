#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "reso/controller.hpp"
#include "reso/disturbance.hpp"
#include "reso/plant.hpp"
#include "reso/reference.hpp"

namespace reso {

enum class SimMode { Continuous, Zoh };

struct NoiseSpec {
  double std = 0.0;  // rad/s, on measured omega only
  std::uint64_t seed = 1;
};

struct Scenario {
  std::string name = "custom";
  PlantParams plant;
  ControllerConfig controller;
  ReferenceSpec reference;
  DisturbanceSpec disturbance;
  double horizon = 4.0;
  double h = 1e-5;
  SimMode mode = SimMode::Continuous;
  double Ts = 2e-5;
  NoiseSpec noise;
  int record_every = 1;
  std::array<double, 4> x0{};
  std::string kernel = "auto";
  // Metric settings.
  double band = 0.02;
  double window = 1.0;

  // First disturbance onset, or 0 without disturbance.
  double metrics_onset() const;
  void validate() const;
};

struct TraceRow {
  double t;
  std::array<double, 4> x;
  std::array<double, 7> z_hat;
  double wd, e, u_raw, u_sat, tau, F_true, F_hat;
  double F_err;  // F_hat - F_true before rounding
};

struct Trace {
  std::string controller;
  double dt = 0.0;
  std::vector<TraceRow> rows;

  static const std::vector<std::string>& channels();
  std::size_t size() const { return rows.size(); }
};

// Fixed-step RK4 over plant, observer, PI integral and reference filter.
// Throws DivergenceError on a non-finite state.
Trace run(const Scenario& s);

// e1, e2a, e2b, e3. Throws InvalidParameter for other names.
Scenario preset(std::string_view name);

// Harmonic load frequency of E2b/E3.
constexpr double kHarmonicOmega = 18.849555921538759;  // 6 pi

// Relative omega_r_hat mismatches of E3.
std::vector<double> e3_mismatch_grid();

// Switches the controller kind. GPIO always runs with omega_r_hat = 0.
Scenario with_controller(Scenario s, ControllerKind kind);

// Observer and controller gains the run would use.
GainSet scenario_gains(const Scenario& s);
double scenario_b0_hat(const Scenario& s);

}  // namespace reso
