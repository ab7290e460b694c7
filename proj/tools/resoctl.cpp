// resoctl: run, sweep, tune and analyze the motor speed controllers.
//
// Exit codes: 0 success, 1 bad input or I/O failure, 2 a run diverged,
// 3 an invariant was violated.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "reso/config.hpp"
#include "reso/errors.hpp"
#include "reso/metrics.hpp"
#include "reso/stability.hpp"
#include "reso/sweep.hpp"
#include "reso/trace_io.hpp"
#include "reso/tuning.hpp"

namespace fs = std::filesystem;
using namespace reso;

namespace {

enum Exit { kOk = 0, kBadInput = 1, kDiverged = 2, kViolation = 3 };

struct Source {
  std::string preset;
  std::string config;
  std::string out;
  std::vector<std::string> sets;
  std::string controller;
};

void add_source_options(CLI::App* cmd, Source& src) {
  cmd->add_option("--preset", src.preset, "Scenario preset")
      ->check(CLI::IsMember({"e1", "e2a", "e2b", "e3"}));
  cmd->add_option("--config", src.config, "Scenario config file (JSON with comments)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", src.out, "Output directory");
  cmd->add_option("--set", src.sets, "Override a config entry, key=value (repeatable)");
  cmd->add_option("--controller", src.controller, "Controller")
      ->check(CLI::IsMember({"pi", "adrc-gpio", "adrc-reso", "adrc-oracle"}));
}

bool has_scenario(const Source& src) { return !src.preset.empty() || !src.config.empty(); }

// Config file, then preset (which replaces a preset named in the file), then
// --set overrides, then --controller.
Scenario resolve(const Source& src, const std::string& fallback_preset) {
  Json cfg = src.config.empty() ? Json::object() : load_config_file(src.config);
  if (!src.preset.empty())
    cfg["preset"] = src.preset;
  else if (src.config.empty())
    cfg["preset"] = fallback_preset;
  Json j = scenario_to_json(scenario_from_config(cfg));
  for (const auto& a : src.sets) apply_assignment(j, a);
  Scenario s = scenario_from_json(j);
  if (!src.controller.empty()) s = with_controller(s, parse_controller(src.controller));
  s.validate();
  return s;
}

std::string format(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

fs::path out_dir(const Source& src) {
  fs::path dir = src.out.empty() ? fs::path(".") : fs::path(src.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

// Duty limits hold on every emitted sample.
std::optional<std::string> check_trace(const Scenario& s, const Trace& tr) {
  for (const auto& r : tr.rows)
    if (!(r.u_sat >= s.controller.u_min && r.u_sat <= s.controller.u_max))
      return format("duty %.9g outside [%g, %g] at t=%.9g", r.u_sat, s.controller.u_min,
                    s.controller.u_max, r.t);
  return std::nullopt;
}

int cmd_run(const Source& src) {
  const Scenario base = resolve(src, "e1");
  std::vector<ControllerKind> kinds;
  if (src.controller.empty())
    kinds = {ControllerKind::Pi, ControllerKind::AdrcGpio, ControllerKind::AdrcReso};
  else
    kinds = {base.controller.kind};

  const fs::path dir = out_dir(src);
  write_text(dir / (base.name + ".json"), scenario_to_json(base).dump(2) + "\n");

  int status = kOk;
  std::vector<std::pair<std::string, MetricsReport>> rows;
  std::string failures;
  for (auto kind : kinds) {
    const Scenario s = with_controller(base, kind);
    const std::string label = controller_name(kind);
    try {
      const Trace tr = run(s);
      const fs::path csv = dir / (s.name + "_" + label + ".csv");
      write_trace_csv(tr, csv.string());
      if (auto bad = check_trace(s, tr)) {
        failures += label + ": invariant violated: " + *bad + "\n";
        status = std::max(status, int(kViolation));
        continue;
      }
      rows.emplace_back(label, compute_metrics(tr, metrics_options(s)));
    } catch (const DivergenceError& e) {
      failures += label + ": diverged at t=" + format("%.9g", e.time) + ": " + e.last_state + "\n";
      status = std::max(status, int(kDiverged));
    }
  }
  std::string summary = "scenario " + base.name + "\n";
  if (!rows.empty()) summary += format_metrics_table(rows);
  summary += failures;
  write_text(dir / "summary.txt", summary);
  std::cout << summary;
  return status;
}

int cmd_sweep(const Source& src, std::string key, std::vector<double> values) {
  const Scenario base = resolve(src, "e3");
  std::vector<std::string> labels;
  if (key.empty()) {
    // Observer resonance mismatched against the harmonic load.
    if (base.disturbance.components.empty())
      throw InvalidParameter("sweep without --key needs a harmonic disturbance");
    if (!values.empty()) throw InvalidParameter("--values needs --key");
    key = "controller.omega_r_hat";
    const double wr = base.disturbance.components.front().omega_r;
    for (double m : e3_mismatch_grid()) {
      values.push_back(wr * (1.0 + m));
      labels.push_back(format("mismatch=%+.0f%%", 100.0 * m));
    }
  } else {
    for (double v : values) labels.push_back(key + "=" + format("%.9g", v));
  }

  const fs::path dir = out_dir(src);
  const auto points = sweep(base, key, values, true);

  int status = kOk;
  std::vector<std::pair<std::string, MetricsReport>> rows;
  std::string failures;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.ok) {
      failures += labels[i] + ": " + p.error + "\n";
      status = std::max(status, int(kDiverged));
      continue;
    }
    write_trace_csv(p.trace, (dir / format("%s_sweep_%02zu.csv", base.name.c_str(), i)).string());
    rows.emplace_back(labels[i], p.metrics);
  }
  std::string summary = "scenario " + base.name + " (" + controller_name(base.controller.kind) +
                        "), sweep " + key + "\n";
  if (!rows.empty()) summary += format_metrics_table(rows);
  summary += failures;
  write_text(dir / "sweep_summary.txt", summary);
  std::cout << summary;
  return status;
}

struct TuneArgs {
  double omega_c = 0.35;
  double omega_o = 140.0;
  double omega_r_hat = 6.0 * M_PI;
  std::string table = "corrected";
};

GainSet gains_for(const Source& src, const TuneArgs& t) {
  if (has_scenario(src)) return scenario_gains(resolve(src, "e2b"));
  return tune(t.omega_c, t.omega_o, t.omega_r_hat, parse_table_variant(t.table.c_str()), false);
}

std::string gain_table(const GainSet& g) {
  std::string s = format("omega_c %.9g  omega_o %.9g  omega_r_hat %.9g  table %s\n", g.omega_c,
                         g.omega_o, g.omega_r_hat, table_variant_name(g.variant));
  for (int i = 0; i < 4; ++i) s += format("k%d  %.9e\n", i, g.k[i]);
  for (int i = 0; i < 7; ++i) s += format("l%d  %.9e\n", i + 1, g.l[i]);
  return s;
}

int finish(const Source& src, const char* file, const std::string& report, int status) {
  std::cout << report;
  if (!src.out.empty()) write_text(out_dir(src) / file, report);
  return status;
}

int cmd_tune(const Source& src, const TuneArgs& t) {
  const GainSet g = gains_for(src, t);
  const PoleReport p = verify_poles(g);
  std::string r = gain_table(g);
  bool positive = true;
  for (double l : g.l) positive = positive && l > 0.0;
  r += format("observer gains positive: %s\n", positive ? "yes" : "no");
  r += format("char. poly vs (s+omega_o)^7: max rel dev %.3e exact, %.3e stored gains\n",
              p.max_coeff_rel_dev, p.max_coeff_rel_dev_rounded);
  r += format("scaled eigenvalues: max |lambda/omega_o + 1| %.3e\n", p.max_eig_rel_dev);
  const PoleReport printed = verify_printed_table(g.omega_c, g.omega_o, g.omega_r_hat);
  r += format("printed table at these bandwidths: max rel coeff dev %.3e\n",
              printed.max_coeff_rel_dev);
  r += format("placement: %s\n", p.pass ? "ok" : "VIOLATED");
  return finish(src, "tune.txt", r, p.pass && positive ? kOk : kViolation);
}

int cmd_analyze(const Source& src, const TuneArgs& t) {
  const GainSet g = gains_for(src, t);
  const auto d = decompose(g, false);
  std::string r = gain_table(g);
  r += format("eps %.9e\n", d.eps);
  r += format("similarity dev %.3e (<= 1e-10)\n", d.similarity_dev);
  r += format("decomposition dev %.3e (<= 1e-12)\n", d.decomposition_dev);
  r += format("stored gains dev %.3e (<= 1e-12)\n", d.gain_dev);
  r += format("eig(H_q): max |lambda + 1| %.3e (<= 1e-6), double solve %.3e\n", d.eig_dev_Hq,
              d.eig_dev_Hq_double);
  r += format("eig(A_q): max |lambda + 1| %.3e\n", d.eig_dev_Aq);
  r += format("max Re eig(H_q) %.6e, max Re eig(A_q) %.6e\n", d.max_re_Hq, d.max_re_Aq);
  r += "H_eps first column:";
  for (int i = 0; i < 7; ++i) r += format(" %.6e", d.H_eps(i, 0));
  r += "\n";
  for (const auto& p : d.printed_discrepancies) r += "printed matrices: " + p + "\n";
  if (has_scenario(src)) {
    const auto m = closed_loop_modes(resolve(src, "e2b"));
    r += format("closed loop: %zu modes, max Re %.6e, fastest |lambda| %.6e, %s\n", m.eig.size(),
                m.max_real, m.fastest_abs, m.hurwitz ? "Hurwitz" : "NOT Hurwitz");
  }
  r += "identities: " + (d.pass ? std::string("ok") : "VIOLATED: " + d.violation) + "\n";
  return finish(src, "analyze.txt", r, d.pass ? kOk : kViolation);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADRC speed control with a resonant extended state observer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "resoctl 1.0");

  Source run_src, sweep_src, tune_src, analyze_src;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario, write traces and metrics");
  add_source_options(run_cmd, run_src);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario over a list of values");
  add_source_options(sweep_cmd, sweep_src);
  std::string key;
  std::vector<double> values;
  sweep_cmd->add_option("--key", key, "Dotted config key (default: omega_r_hat mismatch grid)");
  sweep_cmd->add_option("--values", values, "Comma-separated values")->delimiter(',');

  TuneArgs targs;
  auto add_tuning = [&](CLI::App* cmd, Source& src) {
    add_source_options(cmd, src);
    cmd->add_option("--omega-c", targs.omega_c, "Controller bandwidth")->capture_default_str();
    cmd->add_option("--omega-o", targs.omega_o, "Observer bandwidth")->capture_default_str();
    cmd->add_option("--omega-r-hat", targs.omega_r_hat, "Observer resonance, rad/s")
        ->capture_default_str();
    cmd->add_option("--table", targs.table, "Gain table")
        ->check(CLI::IsMember({"corrected", "printed"}))
        ->capture_default_str();
  };
  auto* tune_cmd = app.add_subcommand("tune", "Print observer and controller gains");
  add_tuning(tune_cmd, tune_src);
  auto* analyze_cmd = app.add_subcommand("analyze", "Singular-perturbation report");
  add_tuning(analyze_cmd, analyze_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }

  try {
    if (*run_cmd) return cmd_run(run_src);
    if (*sweep_cmd) return cmd_sweep(sweep_src, key, values);
    if (*tune_cmd) return cmd_tune(tune_src, targs);
    if (*analyze_cmd) return cmd_analyze(analyze_src, targs);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDiverged;
  } catch (const IdentityViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
