#include <doctest.h>

#include <cmath>
#include <functional>
#include <regex>
#include <sstream>

#include "reso/errors.hpp"
#include "reso/metrics.hpp"
#include "reso/trace_io.hpp"

using namespace reso;

namespace {

Trace synthetic(double horizon, double dt, const std::function<double(double)>& e,
                double u = 0.0) {
  Trace tr;
  tr.dt = dt;
  const long n = std::lround(horizon / dt);
  for (long i = 0; i <= n; ++i) {
    TraceRow r{};
    r.t = static_cast<double>(i) * dt;
    r.wd = 100.0;
    r.e = e(r.t);
    r.u_sat = u;
    tr.rows.push_back(r);
  }
  return tr;
}

}  // namespace

TEST_CASE("zero error") {
  const auto m = compute_metrics(synthetic(3.0, 1e-3, [](double) { return 0.0; }), {});
  CHECK(m.iae == 0.0);
  CHECK(m.ise == 0.0);
  CHECK(m.max_abs_e == 0.0);
  CHECK(m.residual == 0.0);
  CHECK(m.recovery_time == 0.0);
  CHECK(m.recovered);
  CHECK(m.drop == 0.0);
}

TEST_CASE("residual is half the peak-to-peak") {
  const double w = 6.0 * M_PI;
  MetricsOptions o;
  o.onset = 1.0;
  const auto m =
      compute_metrics(synthetic(3.0, 1e-4, [&](double t) { return 22.4 * std::sin(w * t); }), o);
  CHECK(m.residual == doctest::Approx(22.4).epsilon(1e-6));
  CHECK(m.ss_abs_e == doctest::Approx(22.4).epsilon(1e-6));
}

TEST_CASE("recovery time") {
  MetricsOptions o;
  o.onset = 1.0;
  auto e = [](double t) { return t >= 1.0 && t < 1.5 ? 10.0 : 0.0; };
  const auto m = compute_metrics(synthetic(3.0, 1e-3, e), o);
  CHECK(m.recovered);
  CHECK(m.recovery_time == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.drop == 10.0);
  CHECK(m.iae == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(m.ise == doctest::Approx(50.0).epsilon(1e-9));

  // Inside the 2 % band from the start.
  const auto in = compute_metrics(synthetic(3.0, 1e-3, [](double) { return 1.9; }), o);
  CHECK(in.recovery_time == 0.0);

  const auto never = compute_metrics(synthetic(3.0, 1e-3, [](double) { return 5.0; }), o);
  CHECK_FALSE(never.recovered);
  CHECK(never.recovery_time <= 3.0);

  o.band = 0.1;
  CHECK(compute_metrics(synthetic(3.0, 1e-3, [](double) { return 5.0; }), o).recovered);
}

TEST_CASE("energy") {
  const auto m = compute_metrics(synthetic(2.0, 1e-3, [](double) { return 0.0; }, 0.5), {});
  CHECK(m.energy == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bad traces") {
  MetricsOptions o;
  o.onset = 1.0;
  CHECK_THROWS_AS(compute_metrics(synthetic(1.5, 1e-3, [](double) { return 0.0; }), o),
                  WindowTooShort);
  Trace tr = synthetic(3.0, 1e-3, [](double) { return 0.0; });
  tr.rows[100].t += 3e-4;
  CHECK_THROWS_AS(compute_metrics(tr, {}), InvalidParameter);
  tr.rows.resize(1);
  CHECK_THROWS_AS(compute_metrics(tr, {}), InvalidParameter);
}

TEST_CASE("CSV layout") {
  Scenario s = preset("e2b");
  s.horizon = 0.01;
  const Trace tr = run(s);
  std::stringstream ss;
  write_trace_csv(tr, ss);
  std::string header, first;
  std::getline(ss, header);
  std::getline(ss, first);
  std::string expect;
  for (const auto& c : Trace::channels()) expect += (expect.empty() ? "" : ",") + c;
  CHECK(header == expect);
  const std::regex num(R"(-?\d\.\d{8}e[+-]\d{2,3})");
  std::stringstream fields(first);
  std::string f;
  int count = 0;
  while (std::getline(fields, f, ',')) {
    CHECK(std::regex_match(f, num));
    ++count;
  }
  CHECK(count == static_cast<int>(Trace::channels().size()));
  std::size_t lines = 1;
  while (std::getline(ss, f)) ++lines;
  CHECK(lines == tr.size());
}

TEST_CASE("CSV round-trip reproduces the metrics") {
  for (auto kind : {ControllerKind::Pi, ControllerKind::AdrcGpio, ControllerKind::AdrcReso}) {
    const Scenario s = with_controller(preset("e2a"), kind);
    const Trace tr = run(s);
    std::stringstream ss;
    write_trace_csv(tr, ss);
    const Trace back = read_trace_csv(ss);
    REQUIRE(back.size() == tr.size());
    const auto a = compute_metrics(tr, metrics_options(s));
    const auto b = compute_metrics(back, metrics_options(s));
    auto rel = [](double x, double y) {
      return x == y ? 0.0 : std::abs(x - y) / std::max(std::abs(x), std::abs(y));
    };
    CAPTURE(controller_name(kind));
    for (auto [x, y] : {std::pair{a.iae, b.iae}, {a.ise, b.ise}, {a.max_abs_e, b.max_abs_e},
                        {a.recovery_time, b.recovery_time}, {a.residual, b.residual},
                        {a.energy, b.energy}, {a.drop, b.drop}, {a.ss_abs_e, b.ss_abs_e},
                        {a.f_est_err, b.f_est_err}})
      CHECK(rel(x, y) <= 1e-9);
    CHECK(a.recovered == b.recovered);
  }
}

TEST_CASE("recorded precision") {
  CHECK(as_recorded(1.0) == 1.0);
  CHECK(as_recorded(0.1234567891234) == 0.123456789);
  CHECK(as_recorded(-9.87654321987e-12) == -9.87654322e-12);
  CHECK(as_recorded(as_recorded(M_PI)) == as_recorded(M_PI));
}

TEST_CASE("malformed CSV") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_trace_csv(empty), InvalidParameter);
  std::stringstream wrong("a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(read_trace_csv(wrong), InvalidParameter);
  std::string header;
  for (const auto& c : Trace::channels()) header += (header.empty() ? "" : ",") + c;
  std::stringstream shortrow(header + "\n1,2,3\n");
  CHECK_THROWS_AS(read_trace_csv(shortrow), InvalidParameter);
  std::stringstream text(header + "\nx" + std::string(60, ',') + "\n");
  CHECK_THROWS_AS(read_trace_csv(text), InvalidParameter);
}

TEST_CASE("summary table is deterministic") {
  MetricsReport a, b;
  a.iae = 1.0 / 3.0;
  a.residual = 22.4;
  b.recovered = false;
  b.recovery_time = 3.0;
  const std::vector<std::pair<std::string, MetricsReport>> rows{{"one", a}, {"two", b}};
  const std::string t1 = format_metrics_table(rows), t2 = format_metrics_table(rows);
  CHECK(t1 == t2);
  CHECK(t1.find("not-recovered") != std::string::npos);
  CHECK(t1.find("3.333333e-01") != std::string::npos);
}
