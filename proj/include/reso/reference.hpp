#pragma once

#include <vector>

namespace reso {

struct ReferenceStep {
  double time;
  double level;  // rad/s
};

// Piecewise-constant target r(t) shaped by H(s) = 1/(a2 s^2 + a1 s + 1).
struct ReferenceSpec {
  std::vector<ReferenceStep> steps;
  double a2 = 0.025;
  double a1 = 0.6;
  double wd0 = 0.0;      // filter output at t = 0
  double wd_dot0 = 0.0;  // its derivative at t = 0

  // r(t): level of the last step with time <= t, zero before the first step.
  double level(double t) const;
  double final_level() const;
  void validate() const;
};

struct ReferenceState {
  double wd, wd_dot, wd_ddot, wd3, wd4;
};

// Derivative chain from the filter states and the current target level.
ReferenceState filter_outputs(const ReferenceSpec& spec, double r, double wd, double wd_dot);

// Closed-form filter response at t (exact propagation between steps).
ReferenceState reference_state(const ReferenceSpec& spec, double t);

}  // namespace reso
