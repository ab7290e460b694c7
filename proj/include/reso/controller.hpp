#pragma once

#include <array>
#include <optional>
#include <string>

#include "reso/tuning.hpp"

namespace reso {

enum class ControllerKind { Pi, AdrcGpio, AdrcReso, AdrcOracle };

const char* controller_name(ControllerKind k);
ControllerKind parse_controller(const std::string& name);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::AdrcReso;
  double kp = 0.01;
  double ki = 0.25;
  double omega_c = 500.0;
  double omega_o = 10000.0;
  double omega_r_hat = 0.0;
  std::optional<double> b0_hat;  // plant b0 when unset
  TableVariant table = TableVariant::Corrected;
  double u_min = 0.0;
  double u_max = 1.0;
  // ADRC law fed with the true disturbance instead of the observer estimate.
  bool perfect_estimate = false;

  void validate() const;
};

struct AdrcOutput {
  double u_raw;
  double u0;  // k0 e, handed to the observer
};

// u0 = k0 e, u = (u0 + F_hat) / b0_hat
AdrcOutput adrc_control(double e, double F_hat, double k0, double b0_hat);

// kp e + ki integral
double pi_control(double e, double integral, double kp, double ki);

// Integral frozen while the output is clipped and e pushes further out.
bool pi_integral_frozen(double u_raw, double e, double u_min, double u_max);

// (wd4 + sum k_i e^(i) - F_tilde_hat) / b0_hat using true error derivatives.
double conventional_adrc_oracle(const std::array<double, 4>& e_derivs, double wd4,
                                double F_tilde_hat, const std::array<double, 4>& k,
                                double b0_hat);

double saturate(double u, double lo, double hi);

}  // namespace reso
