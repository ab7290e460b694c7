#pragma once

#include <iosfwd>
#include <string>

#include "reso/simulator.hpp"

namespace reso {

// v rounded to the 9 significant digits a trace CSV stores.
double as_recorded(double v);

// Header naming every channel, then one row per sample, 9 significant digits.
void write_trace_csv(const Trace& tr, std::ostream& os);
void write_trace_csv(const Trace& tr, const std::string& path);

// Inverse of write_trace_csv. Throws InvalidParameter on malformed input.
Trace read_trace_csv(std::istream& is);
Trace read_trace_csv(const std::string& path);

}  // namespace reso
