#include "reso/observer.hpp"

#include <cmath>

#include "reso/errors.hpp"

namespace reso {

ObserverMatrices build_abar(const std::array<double, 4>& k, double omega_r_hat, double b0_hat) {
  for (double v : k)
    if (!std::isfinite(v) || v < 0.0) throw InvalidParameter("controller gains must be >= 0");
  if (!std::isfinite(omega_r_hat) || omega_r_hat < 0.0)
    throw InvalidParameter("omega_r_hat must be finite and >= 0");
  if (!std::isfinite(b0_hat) || b0_hat == 0.0) throw InvalidParameter("b0_hat must be nonzero");

  ObserverMatrices m;
  for (int i = 0; i < 3; ++i) m.A_bar(i, i + 1) = 1.0;
  for (int j = 0; j < 4; ++j) m.A_bar(3, j) = -k[j];
  m.A_bar(3, 4) = 1.0;
  m.A_bar(4, 5) = 1.0;
  m.A_bar(5, 6) = 1.0;
  m.A_bar(6, 5) = -omega_r_hat * omega_r_hat;
  m.b0_vec(3) = b0_hat;
  m.omega_r_hat = omega_r_hat;
  m.b0_hat = b0_hat;
  return m;
}

Mat7 observability_matrix(const ObserverMatrices& m) {
  Mat7 O;
  Row7 r = m.c;
  for (int i = 0; i < 7; ++i) {
    O.row(i) = r;
    r = r * m.A_bar;
  }
  return O;
}

Vec7 reso_derivative(const ObserverMatrices& m, const Vec7& z, double u, double u0,
                     double e_meas) {
  const double innov = e_meas - m.c.dot(z);
  Vec7 d = m.A_bar * z + m.l * innov;
  d(3) -= m.b0_hat * u - u0;
  return d;
}

Observer::Observer(ObserverKind kind, const std::array<double, 4>& k,
                   const std::array<double, 7>& l, double omega_r_hat, double b0_hat,
                   const kern::KernelTable& kt)
    : kind_(kind), k_(k), l_(l), kt_(&kt) {
  if (kind == ObserverKind::Gpio) omega_r_hat = 0.0;
  m_ = build_abar(k, omega_r_hat, b0_hat);
  for (int i = 0; i < 7; ++i) {
    if (!std::isfinite(l[i])) throw InvalidParameter("observer gain not finite");
    m_.l(i) = l[i];
  }
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 7; ++i) a_[j * 7 + i] = m_.A_bar(i, j);
}

void Observer::derivative(const double* z, double u, double u0, double e_meas,
                          double* out) const {
  const double coupling = m_.b0_hat * u - u0;
  const double innov = e_meas - z[0];
  if (kind_ == ObserverKind::Reso) {
    kt_->matvec(a_.data(), z, out, 7);
  } else {
    // Pure chains: only row 4 mixes states.
    double acc = 0.0;
    acc += -k_[0] * z[0];
    acc += -k_[1] * z[1];
    acc += -k_[2] * z[2];
    acc += -k_[3] * z[3];
    acc += z[4];
    out[0] = z[1];
    out[1] = z[2];
    out[2] = z[3];
    out[3] = acc;
    out[4] = z[5];
    out[5] = z[6];
    out[6] = 0.0;
  }
  out[3] -= coupling;
  for (int i = 0; i < 7; ++i) out[i] += l_[i] * innov;
}

void Observer::euler_step(double Ts, double u, double u0, double e_meas) {
  std::array<double, 7> d;
  derivative(state.data(), u, u0, e_meas, d.data());
  kt_->stage(state.data(), Ts, d.data(), state.data(), 7);
}

}  // namespace reso
