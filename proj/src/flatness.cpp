#include "reso/flatness.hpp"

#include "reso/errors.hpp"

namespace reso {

int numeric_rank(const Eigen::MatrixXd& m) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  return static_cast<int>(qr.rank());
}

FlatnessAnalysis analyze(const StateSpace& ss, const PlantParams& p) {
  FlatnessAnalysis f;
  Vec4 col = ss.B_u;
  for (int j = 0; j < 4; ++j) {
    f.Q_C.col(j) = col;
    col = ss.A * col;
  }
  // Columns differ by many orders of magnitude; rank is taken on the
  // column-normalized matrix so the threshold is scale free.
  Mat4 scaled = f.Q_C;
  for (int j = 0; j < 4; ++j) {
    const double n = scaled.col(j).norm();
    if (n > 0.0) scaled.col(j) /= n;
  }
  f.rank = numeric_rank(scaled);
  if (f.rank < 4)
    throw SingularError("controllability matrix has rank " + std::to_string(f.rank));

  Row4 r = ss.C_out;
  for (int i = 0; i < 4; ++i) {
    f.T.row(i) = r;
    r = r * ss.A;
  }
  f.b0 = f.T.row(3).dot(ss.B_u);
  f.b0_closed = p.b0();
  f.T_inv = f.T.inverse();
  return f;
}

std::array<double, 4> output_derivatives(const StateSpace& ss, const Vec4& x, const TauDerivs& tau) {
  const Row4 C = ss.C_out;
  const Row4 CA = C * ss.A;
  const Row4 CA2 = CA * ss.A;
  const Row4 CA3 = CA2 * ss.A;
  const double CBd = C.dot(ss.B_d);
  const double CABd = CA.dot(ss.B_d);
  const double CA2Bd = CA2.dot(ss.B_d);
  std::array<double, 4> w;
  w[0] = C.dot(x);
  w[1] = CA.dot(x) + CBd * tau[0];
  w[2] = CA2.dot(x) + CABd * tau[0] + CBd * tau[1];
  w[3] = CA3.dot(x) + CA2Bd * tau[0] + CABd * tau[1] + CBd * tau[2];
  return w;
}

double total_disturbance(const StateSpace& ss, const Vec4& x, const TauDerivs& tau, double u,
                         double b0_hat) {
  const Row4 CA = ss.C_out * ss.A;
  const Row4 CA2 = CA * ss.A;
  const Row4 CA3 = CA2 * ss.A;
  const Row4 CA4 = CA3 * ss.A;
  const double b0 = CA3.dot(ss.B_u);
  return CA4.dot(x) + CA3.dot(ss.B_d) * tau[0] + CA2.dot(ss.B_d) * tau[1] +
         CA.dot(ss.B_d) * tau[2] + ss.C_out.dot(ss.B_d) * tau[3] + (b0 - b0_hat) * u;
}

}  // namespace reso
