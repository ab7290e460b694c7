#include "reso/simulator.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "reso/errors.hpp"
#include "reso/flatness.hpp"
#include "reso/kernels.hpp"
#include "reso/observer.hpp"

namespace reso {

const std::vector<std::string>& Trace::channels() {
  static const std::vector<std::string> names{
      "t",  "i",  "v",  "i_a", "omega", "z1", "z2",    "z3",    "z4",  "z5",     "z6",
      "z7", "wd", "e",  "u_raw", "u_sat", "tau", "F_true", "F_hat",
      "F_err"};
  return names;
}

double Scenario::metrics_onset() const {
  const double t = disturbance.first_onset();
  return t < 0.0 ? 0.0 : t;
}

void Scenario::validate() const {
  plant.validate();
  controller.validate();
  reference.validate();
  disturbance.validate();
  if (!std::isfinite(h) || h <= 0.0) throw InvalidParameter("sim.h must be > 0");
  if (!std::isfinite(horizon) || horizon < h) throw InvalidParameter("sim.horizon must be >= h");
  if (mode == SimMode::Zoh) {
    if (!std::isfinite(Ts) || Ts < h) throw InvalidParameter("sim.Ts must be >= h");
    const double ratio = Ts / h;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
      throw InvalidParameter("sim.Ts must be an integer multiple of sim.h");
  }
  if (record_every < 1) throw InvalidParameter("sim.record_every must be >= 1");
  if (!std::isfinite(noise.std) || noise.std < 0.0) throw InvalidParameter("noise.std must be >= 0");
  for (double v : x0)
    if (!std::isfinite(v)) throw InvalidParameter("sim.x0 must be finite");
  if (!(band > 0.0) || !(window > 0.0)) throw InvalidParameter("metrics band/window must be > 0");
  kern::parse_isa(kernel);
}

double scenario_b0_hat(const Scenario& s) {
  return s.controller.b0_hat ? *s.controller.b0_hat : s.plant.b0();
}

GainSet scenario_gains(const Scenario& s) {
  const auto& c = s.controller;
  const double wr = c.kind == ControllerKind::AdrcReso ? c.omega_r_hat : 0.0;
  // Infeasible observer tunings are only fatal when an observer runs.
  const bool needs_observer = c.kind == ControllerKind::AdrcReso ||
                              (c.kind == ControllerKind::AdrcGpio && !c.perfect_estimate);
  return tune(c.omega_c, c.omega_o, wr, c.table, needs_observer);
}

namespace {

// State layout, padded to a multiple of four.
constexpr int kX = 0, kZ = 4, kI = 11, kWd = 12, kWdd = 13, kN = 14, kPad = 16;
using StateVec = std::array<double, kPad>;
// Switches located per step before the rest of the step runs unsplit.
constexpr int kMaxEvents = 8;

struct Aux {
  double e_true, u_raw, u_sat, tau, F_true, F_hat;
};

// Control action held over a sample period in ZOH mode.
struct Held {
  double u_raw, u_sat, u0, F_hat;
};

// Which duty limit is active and whether the PI integral is frozen. Within an
// RK4 step the pattern is held fixed so the right-hand side stays smooth;
// switching instants are located and the step is split there.
struct Mode {
  int sat = 0;  // -1 at u_min, +1 at u_max
  bool frozen = false;
  bool operator==(const Mode&) const = default;
};

class Loop {
 public:
  explicit Loop(const Scenario& s)
      : s_(s),
        ss_(build_state_space(s.plant)),
        kt_(kern::table(kern::parse_isa(s.kernel))),
        gains_(scenario_gains(s)),
        b0_hat_(scenario_b0_hat(s)),
        b0_(s.plant.b0()) {
    kind_ = s.controller.kind;
    if (kind_ == ControllerKind::AdrcGpio || kind_ == ControllerKind::AdrcReso) {
      obs_ = std::make_unique<Observer>(
          kind_ == ControllerKind::AdrcReso ? ObserverKind::Reso : ObserverKind::Gpio, gains_.k,
          gains_.l, gains_.omega_r_hat, b0_hat_, kt_);
    }
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) a_[j * 4 + i] = ss_.A(i, j);
    Row4 r = ss_.C_out;
    for (int p = 0; p < 5; ++p) {
      ca_[p] = r;
      r = r * ss_.A;
    }
    for (int p = 0; p < 4; ++p) cabd_[p] = ca_[p].dot(ss_.B_d);
    needs_truth_ = kind_ == ControllerKind::AdrcOracle || s.controller.perfect_estimate;
  }

  // Disturbance F of the error-domain model with the given applied duty.
  double f_true(const double* S, const std::array<double, 4>& tau, const ReferenceState& ref,
                double u) const {
    const Vec4 x(S[kX], S[kX + 1], S[kX + 2], S[kX + 3]);
    const auto w = omega_derivs(x, tau);
    const double e1 = ref.wd_dot - w[1], e2 = ref.wd_ddot - w[2], e3 = ref.wd3 - w[3];
    return gains_.k[1] * e1 + gains_.k[2] * e2 + gains_.k[3] * e3 + ref.wd4 -
           f_tilde(x, tau, u);
  }

  Mode classify(double u_raw, double e) const {
    const auto& c = s_.controller;
    Mode m;
    m.sat = u_raw < c.u_min ? -1 : (u_raw > c.u_max ? 1 : 0);
    m.frozen = kind_ == ControllerKind::Pi && pi_integral_frozen(u_raw, e, c.u_min, c.u_max);
    return m;
  }

  // Derivative of the full state. held is non-null in ZOH mode. fixed imposes
  // a switching pattern, seen receives the one the state itself implies.
  void deriv(double t, double gate, const double* S, double noise, const Held* held,
             double* out, Aux* aux, const Mode* fixed = nullptr, Mode* seen = nullptr) const {
    const double r = s_.reference.level(gate);
    const auto tau = s_.disturbance.derivs(t, gate);
    const double omega = S[kX + 3];
    const double e_true = S[kWd] - omega;
    const double e = e_true - noise;
    const auto& c = s_.controller;

    double u_raw = 0.0, u0 = 0.0, F_hat = 0.0, dI = 0.0;
    ReferenceState ref{};
    if (needs_truth_ || aux) ref = filter_outputs(s_.reference, r, S[kWd], S[kWdd]);
    if (held) {
      u_raw = held->u_raw;
      u0 = held->u0;
      F_hat = held->F_hat;
    } else {
      control(S, e, tau, ref, u_raw, u0, F_hat);
    }
    double u = 0.0;
    if (held) {
      u = held->u_sat;
    } else {
      const Mode natural = classify(u_raw, e);
      if (seen) *seen = natural;
      const Mode& m = fixed ? *fixed : natural;
      u = m.sat < 0 ? c.u_min : (m.sat > 0 ? c.u_max : u_raw);
      if (kind_ == ControllerKind::Pi) dI = m.frozen ? 0.0 : e;
    }

    kt_.matvec(a_.data(), S + kX, out + kX, 4);
    out[kX] += ss_.B_u[0] * u;
    out[kX + 3] += ss_.B_d[3] * tau[0];

    if (obs_ && !held) {
      obs_->derivative(S + kZ, u, u0, e, out + kZ);
    } else {
      for (int i = 0; i < 7; ++i) out[kZ + i] = 0.0;
    }
    out[kI] = dI;
    out[kWd] = S[kWdd];
    out[kWdd] = (r - s_.reference.a1 * S[kWdd] - S[kWd]) / s_.reference.a2;
    out[14] = out[15] = 0.0;

    if (aux) {
      aux->e_true = e_true;
      aux->u_raw = u_raw;
      aux->u_sat = u;
      aux->tau = tau[0];
      aux->F_true = f_true(S, tau, ref, u);
      aux->F_hat = F_hat;
    }
  }

  // Control law from a (possibly sampled) state.
  void control(const double* S, double e, const std::array<double, 4>& tau,
               const ReferenceState& ref, double& u_raw, double& u0, double& F_hat) const {
    const auto& c = s_.controller;
    switch (kind_) {
      case ControllerKind::Pi:
        u_raw = pi_control(e, S[kI], c.kp, c.ki);
        u0 = 0.0;
        F_hat = 0.0;
        return;
      case ControllerKind::AdrcGpio:
      case ControllerKind::AdrcReso:
        if (c.perfect_estimate) {
          // F depends on u through (b0 - b0_hat) u; solve the scalar loop.
          const double Fx = f_true(S, tau, ref, 0.0);
          u0 = gains_.k[0] * e;
          u_raw = (u0 + Fx) / b0_;
          F_hat = f_true(S, tau, ref, u_raw);
        } else {
          F_hat = S[kZ + 4];
          const auto o = adrc_control(e, F_hat, gains_.k[0], b0_hat_);
          u_raw = o.u_raw;
          u0 = o.u0;
        }
        return;
      case ControllerKind::AdrcOracle: {
        const Vec4 x(S[kX], S[kX + 1], S[kX + 2], S[kX + 3]);
        const auto w = omega_derivs(x, tau);
        const std::array<double, 4> ed{e, ref.wd_dot - w[1], ref.wd_ddot - w[2],
                                       ref.wd3 - w[3]};
        double s = ref.wd4;
        for (int i = 0; i < 4; ++i) s += gains_.k[i] * ed[i];
        const double Fx = f_tilde(x, tau, 0.0);
        const double u_star = (s - Fx) / b0_;
        const double Ft_hat = f_tilde(x, tau, u_star);
        u_raw = conventional_adrc_oracle(ed, ref.wd4, Ft_hat, gains_.k, b0_hat_);
        u0 = gains_.k[0] * e;
        F_hat = f_true(S, tau, ref, u_raw);
        return;
      }
    }
  }

  std::array<double, 4> omega_derivs(const Vec4& x, const std::array<double, 4>& tau) const {
    return {ca_[0].dot(x), ca_[1].dot(x) + cabd_[0] * tau[0],
            ca_[2].dot(x) + cabd_[1] * tau[0] + cabd_[0] * tau[1],
            ca_[3].dot(x) + cabd_[2] * tau[0] + cabd_[1] * tau[1] + cabd_[0] * tau[2]};
  }

  double f_tilde(const Vec4& x, const std::array<double, 4>& tau, double u) const {
    return ca_[4].dot(x) + cabd_[3] * tau[0] + cabd_[2] * tau[1] + cabd_[1] * tau[2] +
           cabd_[0] * tau[3] + (b0_ - b0_hat_) * u;
  }

  Trace integrate();

 private:

  // One RK4 step of length dt from (t, S) with k1 given and the pattern held.
  void rk4(double t, double gate, const StateVec& S, const StateVec& k1, double dt,
           double noise, const Mode& m, StateVec& out) const {
    StateVec k2, k3, k4, tmp;
    kt_.stage(S.data(), 0.5 * dt, k1.data(), tmp.data(), kN);
    deriv(t + 0.5 * dt, gate, tmp.data(), noise, nullptr, k2.data(), nullptr, &m);
    kt_.stage(S.data(), 0.5 * dt, k2.data(), tmp.data(), kN);
    deriv(t + 0.5 * dt, gate, tmp.data(), noise, nullptr, k3.data(), nullptr, &m);
    kt_.stage(S.data(), dt, k3.data(), tmp.data(), kN);
    deriv(t + dt, gate, tmp.data(), noise, nullptr, k4.data(), nullptr, &m);
    kt_.rk4_combine(S.data(), dt / 6.0, k1.data(), k2.data(), k3.data(), k4.data(), out.data(),
                    kN);
  }

  Mode mode_at(double t, double gate, const StateVec& S, double noise) const {
    StateVec d;
    Mode m;
    deriv(t, gate, S.data(), noise, nullptr, d.data(), nullptr, nullptr, &m);
    return m;
  }

  // Advances S over [t, t + h], splitting at saturation and anti-windup switches.
  void continuous_step(double t, double h, StateVec& S, StateVec& k1, Mode m,
                       double noise) const;

  const Scenario& s_;
  StateSpace ss_;
  const kern::KernelTable& kt_;
  GainSet gains_;
  double b0_hat_, b0_;
  ControllerKind kind_;
  std::unique_ptr<Observer> obs_;
  alignas(32) std::array<double, 16> a_{};
  std::array<Row4, 5> ca_;
  std::array<double, 4> cabd_{};
  bool needs_truth_ = false;
};

std::string describe(const StateVec& S) {
  std::ostringstream os;
  os.precision(9);
  const char* names[kN] = {"i", "v", "i_a", "omega", "z1", "z2", "z3",
                           "z4", "z5", "z6", "z7", "I", "wd", "wd_dot"};
  for (int i = 0; i < kN; ++i) os << (i ? " " : "") << names[i] << "=" << S[i];
  return os.str();
}

TraceRow make_row(double t, const StateVec& S, const Aux& a) {
  TraceRow row;
  row.t = t;
  for (int i = 0; i < 4; ++i) row.x[i] = S[kX + i];
  for (int i = 0; i < 7; ++i) row.z_hat[i] = S[kZ + i];
  row.wd = S[kWd];
  row.e = a.e_true;
  row.u_raw = a.u_raw;
  row.u_sat = a.u_sat;
  row.tau = a.tau;
  row.F_true = a.F_true;
  row.F_hat = a.F_hat;
  row.F_err = a.F_hat - a.F_true;
  return row;
}

void Loop::continuous_step(double t, double h, StateVec& S, StateVec& k1, Mode m,
                           double noise) const {
  double tc = t, rem = h;
  StateVec trial, probe, past;
  for (int ev = 0;; ++ev) {
    rk4(tc, t, S, k1, rem, noise, m, trial);
    if (ev == kMaxEvents || mode_at(tc + rem, t, trial, noise) == m) {
      S = trial;
      return;
    }
    double lo = 0.0, hi = rem;
    past = trial;
    while (hi - lo > 1e-12 * h) {
      const double mid = 0.5 * (lo + hi);
      rk4(tc, t, S, k1, mid, noise, m, probe);
      if (mode_at(tc + mid, t, probe, noise) == m) {
        lo = mid;
      } else {
        hi = mid;
        past = probe;
      }
    }
    S = past;
    tc += hi;
    rem -= hi;
    if (rem <= 1e-12 * h) return;
    deriv(tc, t, S.data(), noise, nullptr, k1.data(), nullptr, nullptr, &m);
  }
}

Trace Loop::integrate() {
  const double h = s_.h;
  const long N = std::lround(s_.horizon / h);
  const int every = s_.record_every;
  const long zoh_every = s_.mode == SimMode::Zoh ? std::lround(s_.Ts / h) : 0;

  StateVec S{};
  for (int i = 0; i < 4; ++i) S[kX + i] = s_.x0[i];
  S[kWd] = s_.reference.wd0;
  S[kWdd] = s_.reference.wd_dot0;

  std::mt19937_64 rng(s_.noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool noisy = s_.noise.std > 0.0;

  Trace tr;
  tr.controller = controller_name(kind_);
  tr.dt = h * every;
  tr.rows.reserve(static_cast<std::size_t>(N / every + 2));

  StateVec k1{}, k2{}, k3{}, k4{}, tmp{};
  Held held{};
  Aux aux{};
  const auto& c = s_.controller;
  for (long n = 0;; ++n) {
    const double t = static_cast<double>(n) * h;
    const double noise = noisy ? s_.noise.std * gauss(rng) : 0.0;
    const Held* hp = nullptr;
    if (zoh_every) {
      if (n % zoh_every == 0) {
        // Sample, compute and hold; observer and PI integral advance by Euler.
        const double r = s_.reference.level(t);
        const auto tau = s_.disturbance.derivs(t, t);
        const ReferenceState ref = filter_outputs(s_.reference, r, S[kWd], S[kWdd]);
        const double e = S[kWd] - S[kX + 3] - noise;
        std::array<double, 7> zs;
        for (int i = 0; i < 7; ++i) zs[i] = S[kZ + i];
        if (obs_) obs_->state = zs;
        control(S.data(), e, tau, ref, held.u_raw, held.u0, held.F_hat);
        held.u_sat = saturate(held.u_raw, c.u_min, c.u_max);
        if (obs_) {
          obs_->euler_step(s_.Ts, held.u_sat, held.u0, e);
          for (int i = 0; i < 7; ++i) S[kZ + i] = obs_->state[i];
        }
        if (kind_ == ControllerKind::Pi &&
            !pi_integral_frozen(held.u_raw, e, c.u_min, c.u_max))
          S[kI] += s_.Ts * e;
        // Recorded rows show the pre-update observer state.
        if (n % every == 0) {
          StateVec Sr = S;
          for (int i = 0; i < 7; ++i) Sr[kZ + i] = zs[i];
          deriv(t, t, Sr.data(), noise, &held, k1.data(), &aux);
          tr.rows.push_back(make_row(t, Sr, aux));
        }
      }
      hp = &held;
      if (n % zoh_every != 0 && n % every == 0) {
        deriv(t, t, S.data(), noise, hp, k1.data(), &aux);
        tr.rows.push_back(make_row(t, S, aux));
      }
      if (n == N) break;
      deriv(t, t, S.data(), noise, hp, k1.data(), nullptr);
      kt_.stage(S.data(), 0.5 * h, k1.data(), tmp.data(), kN);
      deriv(t + 0.5 * h, t, tmp.data(), noise, hp, k2.data(), nullptr);
      kt_.stage(S.data(), 0.5 * h, k2.data(), tmp.data(), kN);
      deriv(t + 0.5 * h, t, tmp.data(), noise, hp, k3.data(), nullptr);
      kt_.stage(S.data(), h, k3.data(), tmp.data(), kN);
      deriv(t + h, t, tmp.data(), noise, hp, k4.data(), nullptr);
      kt_.rk4_combine(S.data(), h / 6.0, k1.data(), k2.data(), k3.data(), k4.data(), S.data(),
                      kN);
    } else {
      const bool rec = n % every == 0;
      Mode m;
      deriv(t, t, S.data(), noise, nullptr, k1.data(), rec ? &aux : nullptr, nullptr, &m);
      if (rec) tr.rows.push_back(make_row(t, S, aux));
      if (n == N) break;
      continuous_step(t, h, S, k1, m, noise);
    }
    for (int i = 0; i < kN; ++i) {
      if (!std::isfinite(S[i])) throw DivergenceError(t + h, describe(S));
    }
  }
  return tr;
}

// Onsets and reference switching instants moved onto the step grid.
Scenario snapped(const Scenario& s) {
  Scenario out = s;
  auto snap = [&](double t) { return std::round(t / s.h) * s.h; };
  for (auto& c : out.disturbance.components) c.onset = snap(c.onset);
  for (auto& st : out.reference.steps) st.time = snap(st.time);
  return out;
}

}  // namespace

Trace run(const Scenario& s) {
  s.validate();
  const Scenario g = snapped(s);
  Loop loop(g);
  return loop.integrate();
}

}  // namespace reso
