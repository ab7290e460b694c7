#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reso/simulator.hpp"

namespace reso {

struct MetricsOptions {
  double onset = 0.0;   // disturbance onset, s
  double band = 0.02;   // recovery band as a fraction of the reference level
  double window = 1.0;  // final steady window, s
  std::optional<double> ref_level;  // |wd| at the last sample when unset
};

struct MetricsReport {
  double iae = 0.0;
  double ise = 0.0;
  double max_abs_e = 0.0;
  double recovery_time = 0.0;  // s after onset; meaningful only if recovered
  bool recovered = true;
  double residual = 0.0;  // half peak-to-peak of e over the final window
  double energy = 0.0;    // integral of u_sat^2
  double drop = 0.0;      // max |e| after onset
  double ss_abs_e = 0.0;  // max |e| over the final window
  double f_est_err = 0.0; // max |F_err| in the final window / max |F_true| after onset
};

// Channels are taken at the 9 significant digits a trace CSV stores.
// Throws InvalidParameter on an empty or non-uniform trace, WindowTooShort if
// less than one window remains after onset.
MetricsReport compute_metrics(const Trace& tr, const MetricsOptions& opt);

MetricsOptions metrics_options(const Scenario& s);

// Fixed-format summary, one line per labelled run.
std::string format_metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);

}  // namespace reso
