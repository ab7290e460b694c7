#pragma once

#include <array>

#include <Eigen/Dense>

#include "reso/kernels.hpp"

namespace reso {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Row7 = Eigen::Matrix<double, 1, 7>;

// Extended state z = [e, e', e'', e''', F, F', F''].
struct ObserverMatrices {
  Mat7 A_bar = Mat7::Zero();
  Vec7 b0_vec = Vec7::Zero();  // b0_hat in row 4
  Vec7 h = Vec7::Unit(4);
  Row7 c = Row7::Unit(0);
  Vec7 l = Vec7::Zero();
  double omega_r_hat = 0.0;
  double b0_hat = 1.0;
};

// Error chain closed by -k, disturbance chain with oscillator at omega_r_hat.
// omega_r_hat = 0 leaves a triple integrator (GPIO).
ObserverMatrices build_abar(const std::array<double, 4>& k, double omega_r_hat,
                            double b0_hat = 1.0);

// [c; c A; ...; c A^6]
Mat7 observability_matrix(const ObserverMatrices& m);

// z' = A_bar z - e4 (b0_hat u - u0) + l (e_meas - c z)
Vec7 reso_derivative(const ObserverMatrices& m, const Vec7& z, double u, double u0,
                     double e_meas);

enum class ObserverKind { Gpio, Reso };

class Observer {
 public:
  Observer(ObserverKind kind, const std::array<double, 4>& k, const std::array<double, 7>& l,
           double omega_r_hat, double b0_hat, const kern::KernelTable& kt = kern::best());

  // Derivative of a 7-long state at z into out.
  void derivative(const double* z, double u, double u0, double e_meas, double* out) const;

  // Explicit Euler update of the owned state, used in sampled mode.
  void euler_step(double Ts, double u, double u0, double e_meas);

  ObserverKind kind() const { return kind_; }
  const ObserverMatrices& matrices() const { return m_; }

  std::array<double, 7> state{};

 private:
  ObserverKind kind_;
  ObserverMatrices m_;
  alignas(32) std::array<double, 49> a_{};  // column-major A_bar
  std::array<double, 4> k_{};
  std::array<double, 7> l_{};
  const kern::KernelTable* kt_;
};

}  // namespace reso
