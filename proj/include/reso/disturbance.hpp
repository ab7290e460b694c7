#pragma once

#include <array>
#include <vector>

namespace reso {

enum class DisturbanceKind { Step, Polynomial, Sinusoid };

// Load torque component, zero before onset. With s = t - onset:
//   step        c0
//   polynomial  sum_j coeffs[j] s^j
//   sinusoid    a1 sin(omega_r s) + a2 cos(omega_r s)
struct DisturbanceComponent {
  DisturbanceKind kind = DisturbanceKind::Step;
  double onset = 0.0;
  double c0 = 0.0;
  std::vector<double> coeffs;
  double a1 = 0.0;
  double a2 = 0.0;
  double omega_r = 0.0;

  static DisturbanceComponent step(double c0, double onset);
  static DisturbanceComponent polynomial(std::vector<double> coeffs, double onset);
  static DisturbanceComponent sinusoid(double a1, double a2, double omega_r, double onset);

  // order-th derivative at t, component assumed active.
  double value(double t, int order) const;
};

struct DisturbanceSpec {
  std::vector<DisturbanceComponent> components;

  // Analytic order-th derivative, order in 0..3. At an onset instant the
  // one-sided post-onset value is returned.
  double evaluate(double t, int order) const;

  // tau and three derivatives. Components are switched on according to
  // gate_t rather than t, so a whole integrator step sees one configuration.
  std::array<double, 4> derivs(double t, double gate_t) const;
  std::array<double, 4> derivs(double t) const { return derivs(t, t); }

  // Earliest onset, or a negative value when there are no components.
  double first_onset() const;

  void validate() const;
};

}  // namespace reso
