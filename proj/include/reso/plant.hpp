#pragma once

#include <Eigen/Dense>

namespace reso {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Row4 = Eigen::RowVector4d;

// Averaged buck converter feeding a separately excited DC motor.
struct PlantParams {
  double L = 5e-3;     // H
  double C = 100e-6;   // F
  double R = 50.0;     // ohm
  double E = 200.0;    // V
  double L_a = 10e-3;  // H
  double R_a = 2.0;    // ohm
  double k_e = 0.35;   // V s/rad
  double k_m = 0.35;   // N m/A
  double J = 3.2546786004882017e-3;  // kg m^2, gives b0 = 4.3015e12
  double b_m = 1e-4;   // N m s/rad

  // Every field equal to one.
  static PlantParams unit();

  // Throws InvalidParameter unless all fields are finite and > 0.
  void validate() const;

  // E k_m / (C J L L_a)
  double b0() const;
};

// J giving the requested flat input gain with the other fields fixed.
double inertia_for_b0(const PlantParams& p, double b0);

// State x = [i, v, i_a, omega].
struct StateSpace {
  Mat4 A;
  Vec4 B_u;
  Vec4 B_d;
  Row4 C_out;
};

StateSpace build_state_space(const PlantParams& p);

// Component form of the converter and motor equations.
Vec4 plant_derivative(const PlantParams& p, const Vec4& x, double u, double tau);

// Same thing through the matrices.
Vec4 plant_derivative(const StateSpace& ss, const Vec4& x, double u, double tau);

struct Equilibrium {
  Vec4 x;
  double u;
};

// Steady state holding omega under constant load tau.
Equilibrium equilibrium(const StateSpace& ss, double omega, double tau = 0.0);

}  // namespace reso
