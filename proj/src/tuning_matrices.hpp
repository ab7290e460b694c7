#pragma once

#include <array>

#include <Eigen/Dense>

namespace reso::detail {

// H = A_bar - l c for the given gains, any scalar type.
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> error_matrix(const std::array<T, 4>& k,
                                                              const std::array<T, 7>& l,
                                                              const T& wr) {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> H(7, 7);
  H.setZero();
  for (int i = 0; i < 6; ++i) H(i, i + 1) = T(1);
  for (int j = 0; j < 4; ++j) H(3, j) = -k[j];
  H(6, 5) = -wr * wr;
  for (int i = 0; i < 7; ++i) H(i, 0) -= l[i];
  return H;
}

// eps Lambda^-1 H Lambda with Lambda = diag(wo^-6, ..., wo^-1, 1):
// entry (i, j) scales by wo^(j - i - 1).
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> scale_to_hq(
    const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& H, const T& wo) {
  std::array<T, 15> p;  // wo^(m - 7), m = 0..14
  p[7] = T(1);
  for (int m = 8; m < 15; ++m) p[m] = p[m - 1] * wo;
  for (int m = 6; m >= 0; --m) p[m] = p[m + 1] / wo;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> Hq(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) Hq(i, j) = H(i, j) * p[j - i - 1 + 7];
  return Hq;
}

}  // namespace reso::detail
