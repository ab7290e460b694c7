#include "reso/plant.hpp"

#include <cmath>
#include <string>

#include "reso/errors.hpp"

namespace reso {

PlantParams PlantParams::unit() {
  PlantParams p;
  p.L = p.C = p.R = p.E = p.L_a = p.R_a = p.k_e = p.k_m = p.J = p.b_m = 1.0;
  return p;
}

void PlantParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"L", L},     {"C", C},     {"R", R},     {"E", E},   {"L_a", L_a},
      {"R_a", R_a}, {"k_e", k_e}, {"k_m", k_m}, {"J", J},   {"b_m", b_m}};
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v) || v <= 0.0)
      throw InvalidParameter(std::string("plant.") + name + " must be finite and > 0, got " +
                             std::to_string(v));
  }
  const double g = b0();
  if (!std::isfinite(g) || g == 0.0) throw InvalidParameter("plant b0 is not finite");
}

double PlantParams::b0() const { return E * k_m / (C * J * L * L_a); }

double inertia_for_b0(const PlantParams& p, double b0) {
  return p.E * p.k_m / (b0 * p.C * p.L * p.L_a);
}

StateSpace build_state_space(const PlantParams& p) {
  p.validate();
  StateSpace ss;
  ss.A << 0.0, -1.0 / p.L, 0.0, 0.0,
          1.0 / p.C, -1.0 / (p.C * p.R), -1.0 / p.C, 0.0,
          0.0, 1.0 / p.L_a, -p.R_a / p.L_a, -p.k_e / p.L_a,
          0.0, 0.0, p.k_m / p.J, -p.b_m / p.J;
  ss.B_u << p.E / p.L, 0.0, 0.0, 0.0;
  ss.B_d << 0.0, 0.0, 0.0, -1.0 / p.J;
  ss.C_out << 0.0, 0.0, 0.0, 1.0;
  return ss;
}

static void require_finite(const Vec4& x, double u, double tau) {
  if (!x.allFinite() || !std::isfinite(u) || !std::isfinite(tau))
    throw InvalidParameter("plant_derivative: non-finite input");
}

Vec4 plant_derivative(const PlantParams& p, const Vec4& x, double u, double tau) {
  require_finite(x, u, tau);
  const double i = x[0], v = x[1], ia = x[2], w = x[3];
  Vec4 d;
  d[0] = (-v + p.E * u) / p.L;
  d[1] = (i - v / p.R - ia) / p.C;
  d[2] = (v - p.R_a * ia - p.k_e * w) / p.L_a;
  d[3] = (p.k_m * ia - p.b_m * w - tau) / p.J;
  return d;
}

Vec4 plant_derivative(const StateSpace& ss, const Vec4& x, double u, double tau) {
  require_finite(x, u, tau);
  return ss.A * x + ss.B_u * u + ss.B_d * tau;
}

Equilibrium equilibrium(const StateSpace& ss, double omega, double tau) {
  Mat4 M;
  M.leftCols<3>() = ss.A.leftCols<3>();
  M.col(3) = ss.B_u;
  const Vec4 rhs = -ss.A.col(3) * omega - ss.B_d * tau;
  const Vec4 sol = M.fullPivLu().solve(rhs);
  Equilibrium eq;
  eq.x << sol[0], sol[1], sol[2], omega;
  eq.u = sol[3];
  return eq;
}

}  // namespace reso
