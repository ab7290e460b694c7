#pragma once

#include <array>

#include "reso/plant.hpp"

namespace reso {

struct FlatnessAnalysis {
  Mat4 Q_C;      // [B_u | A B_u | A^2 B_u | A^3 B_u]
  int rank = 0;
  double b0 = 0.0;         // C A^3 B_u
  double b0_closed = 0.0;  // E k_m / (C J L L_a)
  Mat4 T;        // rows C, CA, CA^2, CA^3
  Mat4 T_inv;
};

// Throws SingularError when Q_C has rank < 4.
FlatnessAnalysis analyze(const StateSpace& ss, const PlantParams& p);

int numeric_rank(const Eigen::MatrixXd& m);

// tau, its first three time derivatives
using TauDerivs = std::array<double, 4>;

// omega, omega', omega'', omega''' from state and load derivatives.
std::array<double, 4> output_derivatives(const StateSpace& ss, const Vec4& x, const TauDerivs& tau);

// Lumped disturbance of the fourth-order input-output model:
// omega'''' = F_tilde + b0_hat u.
double total_disturbance(const StateSpace& ss, const Vec4& x, const TauDerivs& tau, double u,
                         double b0_hat);

}  // namespace reso
