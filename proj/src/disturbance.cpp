#include "reso/disturbance.hpp"

#include <cmath>
#include <string>

#include "reso/errors.hpp"

namespace reso {

DisturbanceComponent DisturbanceComponent::step(double c0, double onset) {
  DisturbanceComponent c;
  c.kind = DisturbanceKind::Step;
  c.c0 = c0;
  c.onset = onset;
  return c;
}

DisturbanceComponent DisturbanceComponent::polynomial(std::vector<double> coeffs, double onset) {
  DisturbanceComponent c;
  c.kind = DisturbanceKind::Polynomial;
  c.coeffs = std::move(coeffs);
  c.onset = onset;
  return c;
}

DisturbanceComponent DisturbanceComponent::sinusoid(double a1, double a2, double omega_r,
                                                    double onset) {
  DisturbanceComponent c;
  c.kind = DisturbanceKind::Sinusoid;
  c.a1 = a1;
  c.a2 = a2;
  c.omega_r = omega_r;
  c.onset = onset;
  return c;
}

double DisturbanceComponent::value(double t, int order) const {
  const double s = t - onset;
  switch (kind) {
    case DisturbanceKind::Step:
      return order == 0 ? c0 : 0.0;
    case DisturbanceKind::Polynomial: {
      // Horner on the differentiated coefficients.
      double acc = 0.0;
      const int n = static_cast<int>(coeffs.size());
      for (int j = n - 1; j >= order; --j) {
        double f = 1.0;
        for (int m = 0; m < order; ++m) f *= static_cast<double>(j - m);
        acc = acc * s + f * coeffs[j];
      }
      return acc;
    }
    case DisturbanceKind::Sinusoid: {
      const double w = omega_r;
      const double sn = std::sin(w * s), cs = std::cos(w * s);
      switch (order) {
        case 0: return a1 * sn + a2 * cs;
        case 1: return w * (a1 * cs - a2 * sn);
        case 2: return -w * w * (a1 * sn + a2 * cs);
        default: return -w * w * w * (a1 * cs - a2 * sn);
      }
    }
  }
  return 0.0;
}

double DisturbanceSpec::evaluate(double t, int order) const {
  if (order < 0 || order > 3) throw InvalidParameter("disturbance order must be 0..3");
  double sum = 0.0;
  for (const auto& c : components)
    if (t >= c.onset) sum += c.value(t, order);
  return sum;
}

std::array<double, 4> DisturbanceSpec::derivs(double t, double gate_t) const {
  std::array<double, 4> d{0.0, 0.0, 0.0, 0.0};
  for (const auto& c : components) {
    if (gate_t < c.onset) continue;
    for (int k = 0; k < 4; ++k) d[k] += c.value(t, k);
  }
  return d;
}

double DisturbanceSpec::first_onset() const {
  double t = -1.0;
  for (const auto& c : components)
    if (t < 0.0 || c.onset < t) t = c.onset;
  return t;
}

void DisturbanceSpec::validate() const {
  for (const auto& c : components) {
    bool ok = std::isfinite(c.onset) && c.onset >= 0.0 && std::isfinite(c.c0) &&
              std::isfinite(c.a1) && std::isfinite(c.a2) && std::isfinite(c.omega_r) &&
              c.omega_r >= 0.0;
    for (double v : c.coeffs) ok = ok && std::isfinite(v);
    if (!ok) throw InvalidParameter("disturbance component has invalid parameters");
  }
}

}  // namespace reso
