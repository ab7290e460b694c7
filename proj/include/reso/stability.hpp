#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "reso/observer.hpp"
#include "reso/simulator.hpp"
#include "reso/tuning.hpp"

namespace reso {

// Fast-time form of the estimation error dynamics:
// eps H = Lambda H_q Lambda^-1, H_q = A_q + eps H_eps.
struct PerturbationDecomposition {
  Mat7 H;       // A_bar - l c
  Mat7 Lambda;  // diag(wo^-6, ..., wo^-1, 1)
  double eps = 0.0;
  Mat7 H_q;     // eps Lambda^-1 H Lambda
  Mat7 A_q;     // binomial companion, eigenvalues all -1
  Mat7 H_eps;   // residual built entry by entry from the gains

  double similarity_dev = 0.0;     // scaled coordinates, relative to max |H_q|
  double decomposition_dev = 0.0;  // |H_q - A_q - eps H_eps|, relative to max(1, max |H_q|)
  std::array<std::complex<double>, 7> eig_Hq{};  // extended precision
  std::array<std::complex<double>, 7> eig_Aq{};
  double eig_dev_Hq = 0.0;  // max |lambda + 1|
  double gain_dev = 0.0;    // stored gains against the exact tuning, relative
  double eig_dev_Aq = 0.0;
  double max_re_Hq = 0.0;
  double max_re_Aq = 0.0;
  // Same spectrum from a plain double eigensolve, for comparison only.
  double eig_dev_Hq_double = 0.0;
  // Places where the printed matrices differ from the algebra.
  std::vector<std::string> printed_discrepancies;
  bool pass = false;
  std::string violation;
};

// Throws IdentityViolation (with the worst entry) when throw_on_violation and
// a tolerance is exceeded: similarity 1e-10, decomposition 1e-12, eigenvalues 1e-6,
// stored gains 1e-12 from the exact tuning.
PerturbationDecomposition decompose(const GainSet& gains, bool throw_on_violation = true);

// Linearized closed loop (no saturation, constant reference, no load).
struct ClosedLoopModes {
  std::vector<std::complex<double>> eig;
  double max_real = 0.0;
  double fastest_abs = 0.0;
  bool hurwitz = false;
};

ClosedLoopModes closed_loop_modes(const Scenario& s);

}  // namespace reso
