#include "reso/tuning.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "hp.hpp"
#include "reso/errors.hpp"
#include "tuning_matrices.hpp"

namespace reso {

const char* table_variant_name(TableVariant v) {
  return v == TableVariant::Printed ? "printed" : "corrected";
}

TableVariant parse_table_variant(const char* name) {
  if (std::strcmp(name, "corrected") == 0) return TableVariant::Corrected;
  if (std::strcmp(name, "printed") == 0) return TableVariant::Printed;
  throw InvalidParameter(std::string("unknown gain table '") + name + "'");
}

std::array<double, 4> controller_gains(double omega_c) {
  if (!std::isfinite(omega_c) || omega_c <= 0.0)
    throw InvalidParameter("omega_c must be finite and > 0");
  return controller_gains_t<double>(omega_c);
}

namespace {

std::array<hp::real, 4> to_hp(const std::array<double, 4>& k) {
  return {hp::real(k[0]), hp::real(k[1]), hp::real(k[2]), hp::real(k[3])};
}

std::array<hp::real, 7> exact_observer_gains(double wo, const std::array<double, 4>& k,
                                             double wr, TableVariant v) {
  return observer_gains_t<hp::real>(hp::real(wo), to_hp(k), hp::real(wr), v);
}

}  // namespace

std::array<double, 7> observer_gains(double omega_o, const std::array<double, 4>& k,
                                     double omega_r_hat, TableVariant variant,
                                     bool require_positive) {
  if (!std::isfinite(omega_o) || omega_o <= 0.0)
    throw InvalidParameter("omega_o must be finite and > 0");
  if (!std::isfinite(omega_r_hat) || omega_r_hat < 0.0)
    throw InvalidParameter("omega_r_hat must be finite and >= 0");
  for (double v : k)
    if (!std::isfinite(v) || v < 0.0) throw InvalidParameter("controller gains must be >= 0");
  const auto lh = exact_observer_gains(omega_o, k, omega_r_hat, variant);
  std::array<double, 7> l;
  for (int i = 0; i < 7; ++i) l[i] = static_cast<double>(lh[i]);
  if (require_positive) {
    for (int i = 0; i < 7; ++i)
      if (!(l[i] > 0.0))
        throw TuningInfeasible("observer gain l" + std::to_string(i + 1) + " = " +
                               std::to_string(l[i]) + " is not positive (omega_o too small)");
  }
  return l;
}

GainSet tune(double omega_c, double omega_o, double omega_r_hat, TableVariant variant,
             bool require_positive) {
  GainSet g;
  g.k = controller_gains(omega_c);
  g.l = observer_gains(omega_o, g.k, omega_r_hat, variant, require_positive);
  g.omega_c = omega_c;
  g.omega_o = omega_o;
  g.omega_r_hat = omega_r_hat;
  g.variant = variant;
  return g;
}

std::array<double, 8> binomial_poly(double omega_o) {
  std::array<double, 8> c;
  double p = 1.0;
  for (int i = 0; i < 8; ++i) {
    c[i] = kBeta7[i] * p;
    p *= omega_o;
  }
  return c;
}

namespace {

// Relative deviation of det(lambda I - H) from (lambda + wo)^7, computed on
// the scaled matrix, whose coefficients are wo^-i times those of H.
double coeff_dev(const hp::Mat& Hq, const hp::real& wo, std::array<double, 8>* out) {
  const auto c = hp::charpoly(Hq);
  double worst = 0.0;
  hp::real p = 1;
  for (int i = 0; i < 8; ++i) {
    const hp::real s = c[i] * p;
    if (out) (*out)[i] = static_cast<double>(s);
    const hp::real want = kBeta7[i] * p;
    const double dev = static_cast<double>(abs(s - want) / want);
    if (dev > worst) worst = dev;
    p *= wo;
  }
  return worst;
}

}  // namespace

PoleReport verify_poles(const GainSet& g) {
  PoleReport r;
  r.expected = binomial_poly(g.omega_o);
  const hp::real wo(g.omega_o), wr(g.omega_r_hat);
  const auto kh = to_hp(g.k);
  const auto lh = exact_observer_gains(g.omega_o, g.k, g.omega_r_hat, g.variant);

  const hp::Mat Hq = detail::scale_to_hq<hp::real>(detail::error_matrix<hp::real>(kh, lh, wr), wo);
  r.max_coeff_rel_dev = coeff_dev(Hq, wo, &r.coeffs);

  std::array<hp::real, 7> lr;
  for (int i = 0; i < 7; ++i) {
    lr[i] = g.l[i];
    const double d = lh[i] == 0 ? std::abs(g.l[i])
                                : static_cast<double>(abs((lr[i] - lh[i]) / lh[i]));
    if (d > r.gain_rounding_dev) r.gain_rounding_dev = d;
  }
  const hp::Mat Hq_rounded =
      detail::scale_to_hq<hp::real>(detail::error_matrix<hp::real>(kh, lr, wr), wo);
  r.max_coeff_rel_dev_rounded = coeff_dev(Hq_rounded, wo, nullptr);

  const auto ev = hp::eigenvalues(Hq);
  r.max_eig_rel_dev = 0.0;
  for (int i = 0; i < 7; ++i) {
    r.eig_scaled[i] = ev[i];
    r.max_eig_rel_dev = std::max(r.max_eig_rel_dev, std::abs(ev[i] + 1.0));
  }
  r.pass = r.max_coeff_rel_dev <= 1e-9 && r.max_eig_rel_dev <= 1e-6 && r.gain_rounding_dev <= 1e-15;
  return r;
}

PoleReport verify_printed_table(double omega_c, double omega_o, double omega_r_hat) {
  return verify_poles(tune(omega_c, omega_o, omega_r_hat, TableVariant::Printed, false));
}

}  // namespace reso
