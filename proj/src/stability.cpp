#include "reso/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hp.hpp"
#include "reso/errors.hpp"
#include "reso/flatness.hpp"
#include "tuning_matrices.hpp"

namespace reso {

namespace {

double max_abs(const Mat7& m) { return m.cwiseAbs().maxCoeff(); }

std::string worst_entry(const Mat7& d) {
  Eigen::Index r = 0, c = 0;
  d.cwiseAbs().maxCoeff(&r, &c);
  std::ostringstream os;
  os << "(" << r + 1 << "," << c + 1 << ") off by " << d(r, c);
  return os.str();
}

}  // namespace

PerturbationDecomposition decompose(const GainSet& g, bool throw_on_violation) {
  PerturbationDecomposition d;
  const double wo = g.omega_o;
  const double wr = g.omega_r_hat;
  d.eps = 1.0 / wo;

  d.H = build_abar(g.k, wr).A_bar;
  for (int i = 0; i < 7; ++i) d.H(i, 0) -= g.l[i];

  d.Lambda.setZero();
  for (int i = 0; i < 7; ++i) d.Lambda(i, i) = std::pow(wo, i - 6);
  Mat7 Lambda_inv = Mat7::Zero();
  for (int i = 0; i < 7; ++i) Lambda_inv(i, i) = std::pow(wo, 6 - i);
  d.H_q = Lambda_inv * (d.eps * d.H) * d.Lambda;

  d.A_q.setZero();
  for (int i = 0; i < 7; ++i) d.A_q(i, 0) = -kBeta7[i + 1];
  for (int i = 0; i < 6; ++i) d.A_q(i, i + 1) = 1.0;

  // Column 1 carries eps^(i-1) rho_i, rho_i = H_i1 + beta_i wo^i, taken in
  // extended precision since beta_i wo^i and l_i nearly cancel.
  d.H_eps.setZero();
  {
    const hp::real w(wo), e = hp::real(1) / w;
    hp::real wp = w, ep = 1;
    for (int i = 0; i < 7; ++i) {
      hp::real rho = hp::real(kBeta7[i + 1]) * wp - hp::real(g.l[i]);
      if (i == 3) rho -= hp::real(g.k[0]);
      d.H_eps(i, 0) = static_cast<double>(ep * rho);
      wp *= w;
      ep *= e;
    }
  }
  d.H_eps(3, 1) = -d.eps * d.eps * g.k[1];
  d.H_eps(3, 2) = -d.eps * g.k[2];
  d.H_eps(3, 3) = -g.k[3];
  d.H_eps(6, 5) = -d.eps * wr * wr;

  const Mat7 Hq_dec = d.A_q + d.eps * d.H_eps;
  const double scale = std::max(1.0, max_abs(d.H_q));
  // Similarity checked after pulling eps H back into scaled coordinates.
  const Mat7 back = Lambda_inv * (d.eps * d.H - d.Lambda * Hq_dec * Lambda_inv) * d.Lambda;
  d.similarity_dev = max_abs(back) / max_abs(Hq_dec);
  const Mat7 diff = d.H_q - Hq_dec;
  d.decomposition_dev = max_abs(diff) / scale;

  const PoleReport pr = verify_poles(g);
  d.eig_Hq = pr.eig_scaled;
  d.eig_dev_Hq = pr.max_eig_rel_dev;
  // The spectrum above belongs to the exact tuning; the stored gains must be
  // that tuning up to rounding for it to describe H.
  d.gain_dev = pr.gain_rounding_dev;
  d.max_re_Hq = -INFINITY;
  for (const auto& z : d.eig_Hq) d.max_re_Hq = std::max(d.max_re_Hq, z.real());

  const auto eq = hp::eigenvalues(hp::from_double(d.A_q));
  d.max_re_Aq = -INFINITY;
  for (int i = 0; i < 7; ++i) {
    d.eig_Aq[i] = eq[i];
    d.eig_dev_Aq = std::max(d.eig_dev_Aq, std::abs(eq[i] + 1.0));
    d.max_re_Aq = std::max(d.max_re_Aq, eq[i].real());
  }

  Eigen::EigenSolver<Mat7> es(d.H_q, false);
  for (int i = 0; i < 7; ++i)
    d.eig_dev_Hq_double = std::max(d.eig_dev_Hq_double, std::abs(es.eigenvalues()(i) + 1.0));

  d.printed_discrepancies = {
      "A_q block of the expanded H: entry (3,4) printed 0, algebra gives 1",
      "residual block of the expanded H repeats the super-diagonal ones already in the A_q block",
      "Lambda printed with 8 diagonal entries; the 7x7 scaling is diag(wo^-6 .. wo^-1, 1)"};
  if (g.k[0] != 0.0)
    d.printed_discrepancies.push_back("H_eps (4,1) residual includes -k0, absent from r_4 of the printed table");

  std::ostringstream why;
  if (!(d.similarity_dev <= 1e-10)) why << "similarity dev " << d.similarity_dev << "; ";
  if (!(d.decomposition_dev <= 1e-12))
    why << "decomposition dev " << d.decomposition_dev << " at " << worst_entry(diff) << "; ";
  if (!(d.gain_dev <= 1e-12)) why << "stored gains differ from the tuning by " << d.gain_dev << "; ";
  if (!(d.eig_dev_Hq <= 1e-6)) why << "H_q eigenvalue dev " << d.eig_dev_Hq << "; ";
  if (!(d.eig_dev_Aq <= 1e-6)) why << "A_q eigenvalue dev " << d.eig_dev_Aq << "; ";
  if (!(d.max_re_Hq < 0.0 && d.max_re_Aq < 0.0)) why << "not Hurwitz; ";
  d.violation = why.str();
  d.pass = d.violation.empty();
  if (!d.pass && throw_on_violation) throw IdentityViolation(d.violation);
  return d;
}

ClosedLoopModes closed_loop_modes(const Scenario& s) {
  s.validate();
  const StateSpace ss = build_state_space(s.plant);
  const GainSet g = scenario_gains(s);
  const double b0h = scenario_b0_hat(s);
  const auto& c = s.controller;
  Eigen::MatrixXd M;
  const bool observer_loop =
      (c.kind == ControllerKind::AdrcGpio || c.kind == ControllerKind::AdrcReso) &&
      !c.perfect_estimate;
  if (c.kind == ControllerKind::Pi) {
    // states x, integral of e; e = -omega around the set point
    M = Eigen::MatrixXd::Zero(5, 5);
    M.topLeftCorner<4, 4>() = ss.A;
    M.block<4, 1>(0, 3) += ss.B_u * (-c.kp);
    M.block<4, 1>(0, 4) = ss.B_u * c.ki;
    M(4, 3) = -1.0;
  } else if (observer_loop) {
    const ObserverMatrices om = build_abar(g.k, g.omega_r_hat, b0h);
    M = Eigen::MatrixXd::Zero(11, 11);
    M.topLeftCorner<4, 4>() = ss.A;
    M.block<4, 1>(0, 3) += ss.B_u * (-g.k[0] / b0h);
    M.block<4, 1>(0, 8) = ss.B_u / b0h;
    Mat7 Z = om.A_bar;
    Z(3, 4) -= 1.0;  // b0_hat u - u0 equals z5 when unsaturated
    for (int i = 0; i < 7; ++i) {
      Z(i, 0) -= g.l[i];
      M(4 + i, 3) = -g.l[i];
    }
    M.bottomRightCorner<7, 7>() = Z;
  } else {
    // Oracle or perfect estimate: u = -(sum k_i C A^i + C A^4) x / b0
    Row4 r = ss.C_out, K = Row4::Zero();
    for (int i = 0; i < 4; ++i) {
      K += g.k[i] * r;
      r = r * ss.A;
    }
    K += r;
    M = ss.A - ss.B_u * K / s.plant.b0();
  }
  ClosedLoopModes out;
  out.eig = hp::eigenvalues(hp::from_double(M));
  out.max_real = -INFINITY;
  for (const auto& z : out.eig) {
    out.max_real = std::max(out.max_real, z.real());
    out.fastest_abs = std::max(out.fastest_abs, std::abs(z));
  }
  out.hurwitz = out.max_real < 0.0;
  return out;
}

}  // namespace reso
