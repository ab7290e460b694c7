#pragma once

#include <string>
#include <vector>

#include "reso/metrics.hpp"
#include "reso/simulator.hpp"

namespace reso {

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;  // set when the run failed
  MetricsReport metrics;
  Trace trace;        // kept only when requested
};

// One run per value with key (dotted config path) set to it, results in input
// order. Runs execute concurrently; a failing run does not stop the others.
// Throws InvalidParameter for an unknown key or a non-finite value.
std::vector<SweepPoint> sweep(const Scenario& base, const std::string& key,
                              const std::vector<double>& values, bool keep_traces = false,
                              unsigned threads = 0);

}  // namespace reso
