#include "reso/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reso/errors.hpp"

namespace reso {

namespace {

constexpr std::size_t kCols = 20;

void pack(const TraceRow& r, double* v) {
  v[0] = r.t;
  for (int i = 0; i < 4; ++i) v[1 + i] = r.x[i];
  for (int i = 0; i < 7; ++i) v[5 + i] = r.z_hat[i];
  v[12] = r.wd;
  v[13] = r.e;
  v[14] = r.u_raw;
  v[15] = r.u_sat;
  v[16] = r.tau;
  v[17] = r.F_true;
  v[18] = r.F_hat;
  v[19] = r.F_err;
}

TraceRow unpack(const double* v) {
  TraceRow r;
  r.t = v[0];
  for (int i = 0; i < 4; ++i) r.x[i] = v[1 + i];
  for (int i = 0; i < 7; ++i) r.z_hat[i] = v[5 + i];
  r.wd = v[12];
  r.e = v[13];
  r.u_raw = v[14];
  r.u_sat = v[15];
  r.tau = v[16];
  r.F_true = v[17];
  r.F_hat = v[18];
  r.F_err = v[19];
  return r;
}

std::size_t format_value(double v, char* buf, std::size_t n) {
  const auto r = std::to_chars(buf, buf + n, v, std::chars_format::scientific, 8);
  return static_cast<std::size_t>(r.ptr - buf);
}

}  // namespace

double as_recorded(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  const std::size_t n = format_value(v, buf, sizeof buf);
  double out = 0.0;
  std::from_chars(buf, buf + n, out);
  return out;
}

void write_trace_csv(const Trace& tr, std::ostream& os) {
  const auto& names = Trace::channels();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  double v[kCols];
  char buf[32];
  std::string line;
  for (const auto& r : tr.rows) {
    pack(r, v);
    line.clear();
    for (std::size_t i = 0; i < kCols; ++i) {
      if (i) line += ',';
      line.append(buf, format_value(v[i], buf, sizeof buf));
    }
    line += '\n';
    os << line;
  }
}

void write_trace_csv(const Trace& tr, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InvalidParameter("cannot open " + path + " for writing");
  write_trace_csv(tr, os);
  if (!os) throw InvalidParameter("write to " + path + " failed");
}

Trace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidParameter("trace CSV is empty");
  std::string expect;
  const auto& names = Trace::channels();
  for (std::size_t i = 0; i < names.size(); ++i) expect += (i ? "," : "") + names[i];
  if (line != expect) throw InvalidParameter("trace CSV header mismatch");
  Trace tr;
  double v[kCols];
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (std::size_t i = 0; i < kCols; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p) throw InvalidParameter("bad number in trace CSV");
      p = end;
      if (i + 1 < kCols) {
        if (*p != ',') throw InvalidParameter("trace CSV row has too few columns");
        ++p;
      }
    }
    tr.rows.push_back(unpack(v));
  }
  if (tr.rows.size() >= 2) tr.dt = tr.rows[1].t - tr.rows[0].t;
  return tr;
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidParameter("cannot open " + path);
  return read_trace_csv(is);
}

}  // namespace reso
