#pragma once

#include <array>
#include <complex>

namespace reso {

// Corrected: every coefficient of det(lambda I - H) matched to (lambda + wo)^7.
// Printed: drops k0 from l4 and k0 wr^2 from l6.
enum class TableVariant { Corrected, Printed };

const char* table_variant_name(TableVariant v);
TableVariant parse_table_variant(const char* name);

template <class T>
struct GainSetT {
  std::array<T, 4> k{};
  std::array<T, 7> l{};
  T omega_c{};
  T omega_o{};
  T omega_r_hat{};
  TableVariant variant = TableVariant::Corrected;
};

using GainSet = GainSetT<double>;

// binomial(7, i)
constexpr std::array<int, 8> kBeta7{1, 7, 21, 35, 35, 21, 7, 1};

template <class T>
std::array<T, 4> controller_gains_t(const T& wc) {
  return {wc * wc * wc * wc, 4 * wc * wc * wc, 6 * wc * wc, 4 * wc};
}

// Sequential evaluation, each l_i using the l_j already computed.
template <class T>
std::array<T, 7> observer_gains_t(const T& wo, const std::array<T, 4>& k, const T& wr,
                                  TableVariant variant) {
  const T w2 = wr * wr;
  const T& k0 = k[0];
  const T& k1 = k[1];
  const T& k2 = k[2];
  const T& k3 = k[3];
  const T o2 = wo * wo, o3 = o2 * wo, o4 = o3 * wo, o5 = o4 * wo, o6 = o5 * wo, o7 = o6 * wo;
  const T k0c = variant == TableVariant::Corrected ? k0 : T(0);
  std::array<T, 7> l;
  l[0] = 7 * wo - k3;
  l[1] = 21 * o2 - k2 - l[0] * k3 - w2;
  l[2] = 35 * o3 - k1 - l[0] * k2 - l[1] * k3 - w2 * (l[0] + k3);
  l[3] = 35 * o4 - k0c - l[0] * k1 - l[1] * k2 - l[2] * k3 - w2 * (l[0] * k3 + l[1] + k2);
  l[4] = 21 * o5 - w2 * (l[2] + k1 + l[0] * k2 + l[1] * k3);
  l[5] = 7 * o6 - w2 * (k0c + l[3] + l[0] * k1 + l[1] * k2 + l[2] * k3);
  l[6] = o7 - l[4] * w2;
  return l;
}

// k = [wc^4, 4 wc^3, 6 wc^2, 4 wc]. Throws InvalidParameter for wc <= 0.
std::array<double, 4> controller_gains(double omega_c);

// Gains are evaluated in 100-digit arithmetic and rounded once, since the
// sums cancel heavily when omega_r_hat is large against omega_o. Throws
// TuningInfeasible if require_positive and some l_i <= 0.
std::array<double, 7> observer_gains(double omega_o, const std::array<double, 4>& k,
                                     double omega_r_hat,
                                     TableVariant variant = TableVariant::Corrected,
                                     bool require_positive = true);

GainSet tune(double omega_c, double omega_o, double omega_r_hat,
             TableVariant variant = TableVariant::Corrected, bool require_positive = true);

// Coefficients of (lambda + wo)^7, leading 1 first.
std::array<double, 8> binomial_poly(double omega_o);

struct PoleReport {
  std::array<double, 8> coeffs{};    // det(lambda I - H), leading 1 first
  std::array<double, 8> expected{};  // (lambda + wo)^7
  double max_coeff_rel_dev = 0.0;
  // Same coefficients for the double-rounded gains actually stored.
  double max_coeff_rel_dev_rounded = 0.0;
  // Largest relative difference between the stored gains and exact tuning.
  double gain_rounding_dev = 0.0;
  // Eigenvalues of H / wo (the scaled matrix H_q), expected all -1.
  std::array<std::complex<double>, 7> eig_scaled{};
  double max_eig_rel_dev = 0.0;
  bool pass = false;
};

// Checks the placement of the tuning described by gains (bandwidths and
// table variant) in extended precision, plus consistency of the stored gains.
PoleReport verify_poles(const GainSet& gains);

// Signed coefficient error of the printed table for these bandwidths.
PoleReport verify_printed_table(double omega_c, double omega_o, double omega_r_hat);

}  // namespace reso
