#include "reso/config.hpp"

#include <fstream>
#include <sstream>

#include "reso/errors.hpp"

namespace reso {

Json parse_config_text(const std::string& text) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw InvalidParameter(std::string("config parse error: ") + e.what());
  }
}

Json load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidParameter("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

const char* mode_name(SimMode m) { return m == SimMode::Zoh ? "zoh" : "continuous"; }

SimMode parse_mode(const std::string& s) {
  if (s == "continuous") return SimMode::Continuous;
  if (s == "zoh") return SimMode::Zoh;
  throw InvalidParameter("unknown sim.mode '" + s + "'");
}

const char* kind_name(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::Step: return "step";
    case DisturbanceKind::Polynomial: return "polynomial";
    case DisturbanceKind::Sinusoid: return "sinusoid";
  }
  return "?";
}

// Reads every member of obj through fn, rejecting names fn does not know.
template <class Fn>
void each_member(const Json& obj, const char* where, Fn&& fn) {
  if (!obj.is_object()) throw InvalidParameter(std::string(where) + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!fn(it.key(), it.value()))
      throw InvalidParameter(std::string("unknown key ") + where + "." + it.key());
  }
}

double num(const Json& v, const std::string& key) {
  if (!v.is_number()) throw InvalidParameter(key + " must be a number");
  return v.get<double>();
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  const auto& p = s.plant;
  j["plant"] = {{"L", p.L},     {"C", p.C},     {"R", p.R},     {"E", p.E}, {"L_a", p.L_a},
                {"R_a", p.R_a}, {"k_e", p.k_e}, {"k_m", p.k_m}, {"J", p.J}, {"b_m", p.b_m}};
  const auto& c = s.controller;
  j["controller"] = {{"type", controller_name(c.kind)},
                     {"kp", c.kp},
                     {"ki", c.ki},
                     {"omega_c", c.omega_c},
                     {"omega_o", c.omega_o},
                     {"omega_r_hat", c.omega_r_hat},
                     {"b0_hat", c.b0_hat ? Json(*c.b0_hat) : Json(nullptr)},
                     {"table", table_variant_name(c.table)},
                     {"u_min", c.u_min},
                     {"u_max", c.u_max},
                     {"perfect_estimate", c.perfect_estimate}};
  Json steps = Json::array();
  for (const auto& st : s.reference.steps) steps.push_back({st.time, st.level});
  j["reference"] = {{"steps", steps},
                    {"a2", s.reference.a2},
                    {"a1", s.reference.a1},
                    {"wd0", s.reference.wd0},
                    {"wd_dot0", s.reference.wd_dot0}};
  Json dist = Json::array();
  for (const auto& d : s.disturbance.components) {
    Json e = {{"kind", kind_name(d.kind)}, {"onset", d.onset}};
    switch (d.kind) {
      case DisturbanceKind::Step: e["c0"] = d.c0; break;
      case DisturbanceKind::Polynomial: e["coeffs"] = d.coeffs; break;
      case DisturbanceKind::Sinusoid:
        e["a1"] = d.a1;
        e["a2"] = d.a2;
        e["omega_r"] = d.omega_r;
        break;
    }
    dist.push_back(e);
  }
  j["disturbance"] = dist;
  j["sim"] = {{"horizon", s.horizon},
              {"h", s.h},
              {"mode", mode_name(s.mode)},
              {"Ts", s.Ts},
              {"record_every", s.record_every},
              {"x0", s.x0},
              {"kernel", s.kernel},
              {"noise_std", s.noise.std},
              {"seed", s.noise.seed}};
  j["metrics"] = {{"band", s.band}, {"window", s.window}};
  return j;
}

namespace {

Scenario from_json_unchecked(const Json& j) {
  Scenario s;
  s.disturbance.components.clear();
  each_member(j, "scenario", [&](const std::string& k, const Json& v) {
    if (k == "name") {
      s.name = v.get<std::string>();
    } else if (k == "plant") {
      auto& p = s.plant;
      each_member(v, "plant", [&](const std::string& f, const Json& x) {
        double* dst = f == "L"     ? &p.L
                      : f == "C"   ? &p.C
                      : f == "R"   ? &p.R
                      : f == "E"   ? &p.E
                      : f == "L_a" ? &p.L_a
                      : f == "R_a" ? &p.R_a
                      : f == "k_e" ? &p.k_e
                      : f == "k_m" ? &p.k_m
                      : f == "J"   ? &p.J
                      : f == "b_m" ? &p.b_m
                                   : nullptr;
        if (!dst) return false;
        *dst = num(x, "plant." + f);
        return true;
      });
    } else if (k == "controller") {
      auto& c = s.controller;
      each_member(v, "controller", [&](const std::string& f, const Json& x) {
        if (f == "type") c.kind = parse_controller(x.get<std::string>());
        else if (f == "kp") c.kp = num(x, f);
        else if (f == "ki") c.ki = num(x, f);
        else if (f == "omega_c") c.omega_c = num(x, f);
        else if (f == "omega_o") c.omega_o = num(x, f);
        else if (f == "omega_r_hat") c.omega_r_hat = num(x, f);
        else if (f == "b0_hat") c.b0_hat = x.is_null() ? std::nullopt : std::optional(num(x, f));
        else if (f == "table") c.table = parse_table_variant(x.get<std::string>().c_str());
        else if (f == "u_min") c.u_min = num(x, f);
        else if (f == "u_max") c.u_max = num(x, f);
        else if (f == "perfect_estimate") c.perfect_estimate = x.get<bool>();
        else return false;
        return true;
      });
    } else if (k == "reference") {
      auto& r = s.reference;
      each_member(v, "reference", [&](const std::string& f, const Json& x) {
        if (f == "steps") {
          r.steps.clear();
          for (const auto& st : x) {
            if (!st.is_array() || st.size() != 2)
              throw InvalidParameter("reference.steps entries are [time, level]");
            r.steps.push_back({num(st[0], "step time"), num(st[1], "step level")});
          }
        } else if (f == "a2") r.a2 = num(x, f);
        else if (f == "a1") r.a1 = num(x, f);
        else if (f == "wd0") r.wd0 = num(x, f);
        else if (f == "wd_dot0") r.wd_dot0 = num(x, f);
        else return false;
        return true;
      });
    } else if (k == "disturbance") {
      if (!v.is_array()) throw InvalidParameter("disturbance must be a list");
      for (const auto& d : v) {
        DisturbanceComponent c;
        const std::string kind = d.value("kind", std::string());
        if (kind == "step") c.kind = DisturbanceKind::Step;
        else if (kind == "polynomial") c.kind = DisturbanceKind::Polynomial;
        else if (kind == "sinusoid") c.kind = DisturbanceKind::Sinusoid;
        else throw InvalidParameter("unknown disturbance kind '" + kind + "'");
        each_member(d, "disturbance[]", [&](const std::string& f, const Json& x) {
          if (f == "kind") return true;
          if (f == "onset") c.onset = num(x, f);
          else if (f == "c0") c.c0 = num(x, f);
          else if (f == "coeffs") c.coeffs = x.get<std::vector<double>>();
          else if (f == "a1") c.a1 = num(x, f);
          else if (f == "a2") c.a2 = num(x, f);
          else if (f == "omega_r") c.omega_r = num(x, f);
          else return false;
          return true;
        });
        s.disturbance.components.push_back(c);
      }
    } else if (k == "sim") {
      each_member(v, "sim", [&](const std::string& f, const Json& x) {
        if (f == "horizon") s.horizon = num(x, f);
        else if (f == "h") s.h = num(x, f);
        else if (f == "mode") s.mode = parse_mode(x.get<std::string>());
        else if (f == "Ts") s.Ts = num(x, f);
        else if (f == "record_every") s.record_every = x.get<int>();
        else if (f == "x0") s.x0 = x.get<std::array<double, 4>>();
        else if (f == "kernel") s.kernel = x.get<std::string>();
        else if (f == "noise_std") s.noise.std = num(x, f);
        else if (f == "seed") s.noise.seed = x.get<std::uint64_t>();
        else return false;
        return true;
      });
    } else if (k == "metrics") {
      each_member(v, "metrics", [&](const std::string& f, const Json& x) {
        if (f == "band") s.band = num(x, f);
        else if (f == "window") s.window = num(x, f);
        else return false;
        return true;
      });
    } else {
      return false;
    }
    return true;
  });
  return s;
}

}  // namespace

Scenario scenario_from_json(const Json& j) {
  try {
    return from_json_unchecked(j);
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("config: ") + e.what());
  }
}

Scenario scenario_from_config(const Json& j) {
  if (!j.is_object()) throw InvalidParameter("config must be an object");
  if (!j.contains("preset")) return scenario_from_json(j);
  Json base = scenario_to_json(preset(j.at("preset").get<std::string>()));
  Json patch = j;
  patch.erase("preset");
  base.merge_patch(patch);
  return scenario_from_json(base);
}

void apply_override(Json& j, std::string_view key, const Json& value) {
  std::string ptr;
  std::size_t start = 0;
  while (start <= key.size()) {
    const std::size_t dot = key.find('.', start);
    const std::string_view part =
        key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part.empty()) throw InvalidParameter("bad override key '" + std::string(key) + "'");
    ptr += '/';
    ptr += part;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  const Json::json_pointer jp(ptr);
  if (!j.contains(jp)) throw InvalidParameter("override key '" + std::string(key) + "' does not exist");
  j[jp] = value;
}

void apply_override(Json& j, std::string_view key, std::string_view value) {
  Json v;
  try {
    v = Json::parse(value);
  } catch (const Json::parse_error&) {
    v = std::string(value);
  }
  apply_override(j, key, v);
}

void apply_assignment(Json& j, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw InvalidParameter("override must look like key=value, got '" + std::string(assignment) + "'");
  apply_override(j, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace reso
