#include "reso/controller.hpp"

#include <algorithm>
#include <cmath>

#include "reso/errors.hpp"

namespace reso {

const char* controller_name(ControllerKind k) {
  switch (k) {
    case ControllerKind::Pi: return "pi";
    case ControllerKind::AdrcGpio: return "adrc-gpio";
    case ControllerKind::AdrcReso: return "adrc-reso";
    case ControllerKind::AdrcOracle: return "adrc-oracle";
  }
  return "?";
}

ControllerKind parse_controller(const std::string& name) {
  if (name == "pi") return ControllerKind::Pi;
  if (name == "adrc-gpio") return ControllerKind::AdrcGpio;
  if (name == "adrc-reso") return ControllerKind::AdrcReso;
  if (name == "adrc-oracle") return ControllerKind::AdrcOracle;
  throw InvalidParameter("unknown controller '" + name + "'");
}

void ControllerConfig::validate() const {
  if (b0_hat && (!std::isfinite(*b0_hat) || *b0_hat == 0.0))
    throw InvalidParameter("controller.b0_hat must be finite and nonzero");
  if (!(u_min < u_max)) throw InvalidParameter("controller.u_min must be below u_max");
  if (kind == ControllerKind::Pi) {
    if (!std::isfinite(kp) || !std::isfinite(ki)) throw InvalidParameter("PI gains not finite");
    return;
  }
  if (!std::isfinite(omega_c) || omega_c <= 0.0) throw InvalidParameter("omega_c must be > 0");
  if (!std::isfinite(omega_o) || omega_o <= 0.0) throw InvalidParameter("omega_o must be > 0");
  if (!std::isfinite(omega_r_hat) || omega_r_hat < 0.0)
    throw InvalidParameter("omega_r_hat must be >= 0");
}

AdrcOutput adrc_control(double e, double F_hat, double k0, double b0_hat) {
  const double u0 = k0 * e;
  return {(u0 + F_hat) / b0_hat, u0};
}

double pi_control(double e, double integral, double kp, double ki) {
  return kp * e + ki * integral;
}

bool pi_integral_frozen(double u_raw, double e, double u_min, double u_max) {
  return (u_raw > u_max && e > 0.0) || (u_raw < u_min && e < 0.0);
}

double conventional_adrc_oracle(const std::array<double, 4>& e_derivs, double wd4,
                                double F_tilde_hat, const std::array<double, 4>& k,
                                double b0_hat) {
  double s = wd4;
  for (int i = 0; i < 4; ++i) s += k[i] * e_derivs[i];
  return (s - F_tilde_hat) / b0_hat;
}

double saturate(double u, double lo, double hi) { return std::clamp(u, lo, hi); }

}  // namespace reso
