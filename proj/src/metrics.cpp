#include "reso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "reso/errors.hpp"
#include "reso/trace_io.hpp"

namespace reso {

MetricsOptions metrics_options(const Scenario& s) {
  MetricsOptions o;
  o.onset = s.metrics_onset();
  o.band = s.band;
  o.window = s.window;
  return o;
}

MetricsReport compute_metrics(const Trace& tr, const MetricsOptions& opt) {
  const auto& rows = tr.rows;
  if (rows.size() < 2) throw InvalidParameter("metrics need at least two samples");
  // Channels are read at the precision a trace CSV keeps, so a written and
  // re-read trace yields the same report.
  std::vector<double> t(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) t[i] = as_recorded(rows[i].t);
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw InvalidParameter("trace time grid is not increasing");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * dt)
      throw InvalidParameter("trace time grid is not uniform");
  }
  const double t_end = t.back();
  if (t_end - opt.onset < opt.window - 0.5 * dt)
    throw WindowTooShort("less than " + std::to_string(opt.window) + " s of trace after onset");

  MetricsReport m;
  const double level =
      opt.ref_level ? std::abs(*opt.ref_level) : std::abs(as_recorded(rows.back().wd));
  const double band = opt.band * level;
  const double t_win = t_end - opt.window;
  double e_max = -INFINITY, e_min = INFINITY, f_scale = 0.0, f_err = 0.0;
  long last_out = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double e = as_recorded(r.e);
    const double ae = std::abs(e);
    if (i + 1 < rows.size()) {
      const double u = as_recorded(r.u_sat);
      m.iae += ae * dt;
      m.ise += e * e * dt;
      m.energy += u * u * dt;
    }
    m.max_abs_e = std::max(m.max_abs_e, ae);
    if (t[i] >= opt.onset - 0.5 * dt) {
      m.drop = std::max(m.drop, ae);
      f_scale = std::max(f_scale, std::abs(as_recorded(r.F_true)));
      if (ae > band) last_out = static_cast<long>(i);
    }
    if (t[i] >= t_win - 0.5 * dt) {
      e_max = std::max(e_max, e);
      e_min = std::min(e_min, e);
      m.ss_abs_e = std::max(m.ss_abs_e, ae);
      f_err = std::max(f_err, std::abs(as_recorded(r.F_err)));
    }
  }
  if (last_out < 0) {
    m.recovery_time = 0.0;
  } else if (static_cast<std::size_t>(last_out) + 1 == rows.size()) {
    m.recovered = false;
    m.recovery_time = t_end - opt.onset;
  } else {
    m.recovery_time = std::max(0.0, t[static_cast<std::size_t>(last_out) + 1] - opt.onset);
  }
  m.residual = 0.5 * (e_max - e_min);
  m.f_est_err = f_scale > 0.0 ? f_err / f_scale : f_err;
  return m;
}

std::string format_metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-22s %14s %14s %14s %14s %14s %14s %14s %14s\n", "run", "IAE",
                "ISE", "max_abs_e", "recovery_s", "residual", "energy", "drop", "ss_abs_e");
  out += buf;
  for (const auto& [name, m] : rows) {
    char rec[32];
    if (m.recovered) std::snprintf(rec, sizeof rec, "%.6e", m.recovery_time);
    else std::snprintf(rec, sizeof rec, "not-recovered");
    std::snprintf(buf, sizeof buf, "%-22s %14.6e %14.6e %14.6e %14s %14.6e %14.6e %14.6e %14.6e\n",
                  name.c_str(), m.iae, m.ise, m.max_abs_e, rec, m.residual, m.energy, m.drop,
                  m.ss_abs_e);
    out += buf;
  }
  return out;
}

}  // namespace reso
