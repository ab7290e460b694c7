#include "reso/reference.hpp"

#include <cmath>
#include <complex>

#include "reso/errors.hpp"

namespace reso {

double ReferenceSpec::level(double t) const {
  double r = 0.0;
  for (const auto& s : steps) {
    if (s.time <= t) r = s.level;
    else break;
  }
  return r;
}

double ReferenceSpec::final_level() const { return steps.empty() ? 0.0 : steps.back().level; }

void ReferenceSpec::validate() const {
  if (!(a2 > 0.0) || !(a1 > 0.0) || !std::isfinite(a2) || !std::isfinite(a1))
    throw InvalidParameter("reference filter needs a2 > 0 and a1 > 0");
  if (!std::isfinite(wd0) || !std::isfinite(wd_dot0) || wd0 < 0.0)
    throw InvalidParameter("reference filter initial state invalid");
  double prev = -1.0;
  for (const auto& s : steps) {
    if (!std::isfinite(s.time) || s.time < 0.0 || s.time <= prev)
      throw InvalidParameter("reference steps must have increasing times >= 0");
    if (!std::isfinite(s.level) || s.level < 0.0)
      throw InvalidParameter("reference levels must be finite and >= 0");
    prev = s.time;
  }
}

ReferenceState filter_outputs(const ReferenceSpec& spec, double r, double wd, double wd_dot) {
  ReferenceState s;
  s.wd = wd;
  s.wd_dot = wd_dot;
  s.wd_ddot = (r - spec.a1 * wd_dot - wd) / spec.a2;
  // r is flat between steps.
  s.wd3 = (-spec.a1 * s.wd_ddot - wd_dot) / spec.a2;
  s.wd4 = (-spec.a1 * s.wd3 - s.wd_ddot) / spec.a2;
  return s;
}

namespace {

// y(t) for y' = M y + b r with constant r, M the filter companion matrix.
void propagate(const ReferenceSpec& spec, double r, double dt, double& y0, double& y1) {
  using cd = std::complex<double>;
  const double m10 = -1.0 / spec.a2, m11 = -spec.a1 / spec.a2;
  const cd disc = std::sqrt(cd(m11 * m11 + 4.0 * m10, 0.0));
  const cd p1 = 0.5 * (m11 + disc), p2 = 0.5 * (m11 - disc);
  cd c0, c1;  // exp(M dt) = c0 I + c1 M
  if (std::abs(p1 - p2) < 1e-9 * std::abs(p1)) {
    const cd e = std::exp(p1 * dt);
    c0 = e * (1.0 - p1 * dt);
    c1 = e * dt;
  } else {
    const cd e1 = std::exp(p1 * dt), e2 = std::exp(p2 * dt);
    c0 = (p1 * e2 - p2 * e1) / (p1 - p2);
    c1 = (e1 - e2) / (p1 - p2);
  }
  const double d0 = y0 - r, d1 = y1;
  const double a = c0.real(), b = c1.real();
  y0 = r + a * d0 + b * d1;
  y1 = a * d1 + b * (m10 * d0 + m11 * d1);
}

}  // namespace

ReferenceState reference_state(const ReferenceSpec& spec, double t) {
  double y0 = spec.wd0, y1 = spec.wd_dot0;
  double tc = 0.0, r = spec.level(0.0);
  for (const auto& s : spec.steps) {
    if (s.time <= 0.0) continue;
    if (s.time > t) break;
    propagate(spec, r, s.time - tc, y0, y1);
    tc = s.time;
    r = s.level;
  }
  propagate(spec, r, t - tc, y0, y1);
  return filter_outputs(spec, r, y0, y1);
}

}  // namespace reso
