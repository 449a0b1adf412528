#pragma once

// Run configuration shared by the CLI subcommands. A RunConfig can be
// loaded from a JSON file (--config) with flags overriding file values;
// unknown keys and parameters that do not apply to the chosen model are
// rejected. The effective configuration is echoed into every output
// manifest so runs are reproducible from the artifacts alone.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "solact/io.hpp"
#include "solact/models.hpp"

namespace solact::cli {

struct Range {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

struct RunConfig {
  std::string command;  // profile | phase | action | verify
  std::string model;    // kdv | sg | kpp | burgers
  std::optional<double> A, D, k, u1, u2;
  std::string v = "auto";  // number or "auto"
  double z0 = 0.0;
  std::optional<std::string> branch;

  // profile
  std::string range = "-20:20:0.01";

  // phase
  int orbits = 4;
  std::optional<std::string> window;

  // action
  double quad_abs_tol = 1e-10;
  double quad_rel_tol = 1e-11;

  // verify
  double dx = 0.05;
  double dt = 0.0;  // 0: auto
  std::optional<double> T;
  std::optional<std::string> domain;
  int snapshots = 21;
  std::optional<double> force_v;
  double speed_tol = 0.01;
  double drift_tol = 0.01;
  double residual_tol = 1e-9;
  int residual_points = 1000;
  std::uint64_t seed = 0x5eed5eedULL;

  std::string out;  // output directory; env SOLACT_OUT, then "." when empty
  std::vector<nlohmann::json> sweep;  // verify only: parameter overrides
};

inline Range parse_range(const std::string& text, std::size_t parts) {
  Range r;
  char extra = 0;
  if (parts == 3) {
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.lo, &r.hi, &r.step,
                    &extra) != 3)
      throw validation_error("malformed range '" + text +
                             "', expected lo:hi:step");
    if (!(r.step > 0.0) || !(r.hi > r.lo))
      throw validation_error("range must have hi > lo and step > 0");
  } else {
    if (std::sscanf(text.c_str(), "%lf:%lf%c", &r.lo, &r.hi, &extra) != 2)
      throw validation_error("malformed interval '" + text +
                             "', expected lo:hi");
    if (!(r.hi > r.lo)) throw validation_error("interval must have hi > lo");
  }
  return r;
}

inline std::optional<double> parse_speed(const std::string& text) {
  if (text == "auto" || text.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw validation_error("speed must be a number or \"auto\", got '" + text +
                           "'");
  }
}

inline Branch parse_branch(const std::string& name) {
  if (name == "soliton") return Branch::soliton;
  if (name == "kink-up") return Branch::kink_up;
  if (name == "kink-down") return Branch::kink_down;
  if (name == "falling") return Branch::front_falling;
  if (name == "rising") return Branch::front_rising;
  if (name == "shock") return Branch::shock;
  throw validation_error(
      "unknown branch '" + name +
      "' (soliton, kink-up, kink-down, falling, rising, shock)");
}

/// Builds the validated model from the config, rejecting parameters that
/// do not apply to it.
inline ModelSpec build_model(const RunConfig& c) {
  const auto reject = [&](const std::optional<double>& p, const char* name) {
    if (p)
      throw validation_error(std::string(name) + " does not apply to model '" +
                             c.model + "'");
  };
  if (c.model == "kdv") {
    reject(c.D, "D");
    reject(c.k, "k");
    reject(c.u1, "u1");
    reject(c.u2, "u2");
    return make_kdv(c.A.value_or(1.0));
  }
  if (c.model == "sg") {
    reject(c.A, "A");
    reject(c.D, "D");
    reject(c.k, "k");
    reject(c.u1, "u1");
    reject(c.u2, "u2");
    return make_sine_gordon();
  }
  if (c.model == "kpp") {
    reject(c.A, "A");
    reject(c.u1, "u1");
    reject(c.u2, "u2");
    return make_fisher_kpp(c.D.value_or(1.0), c.k.value_or(1.0));
  }
  if (c.model == "burgers") {
    reject(c.A, "A");
    reject(c.k, "k");
    return make_burgers(c.D.value_or(1.0), c.u1.value_or(0.0),
                        c.u2.value_or(1.0));
  }
  throw validation_error("unknown model '" + c.model +
                         "' (kdv, sg, kpp, burgers)");
}

inline TravelingWave build_wave(const RunConfig& c) {
  const ModelSpec m = build_model(c);
  std::optional<Branch> br;
  if (c.branch) br = parse_branch(*c.branch);
  return closed_form_profile(m, parse_speed(c.v), c.z0, br);
}

/// Applies a JSON object onto a RunConfig. Unknown keys are rejected.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object())
    throw validation_error("config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    try {
      if (key == "command") c.command = val.get<std::string>();
      else if (key == "model") c.model = val.get<std::string>();
      else if (key == "A") c.A = val.get<double>();
      else if (key == "D") c.D = val.get<double>();
      else if (key == "k") c.k = val.get<double>();
      else if (key == "u1") c.u1 = val.get<double>();
      else if (key == "u2") c.u2 = val.get<double>();
      else if (key == "v")
        c.v = val.is_string() ? val.get<std::string>()
                              : io::fmt17(val.get<double>());
      else if (key == "z0") c.z0 = val.get<double>();
      else if (key == "branch") c.branch = val.get<std::string>();
      else if (key == "range") c.range = val.get<std::string>();
      else if (key == "orbits") c.orbits = val.get<int>();
      else if (key == "window") c.window = val.get<std::string>();
      else if (key == "quad_abs_tol") c.quad_abs_tol = val.get<double>();
      else if (key == "quad_rel_tol") c.quad_rel_tol = val.get<double>();
      else if (key == "dx") c.dx = val.get<double>();
      else if (key == "dt") c.dt = val.get<double>();
      else if (key == "T") c.T = val.get<double>();
      else if (key == "domain") c.domain = val.get<std::string>();
      else if (key == "snapshots") c.snapshots = val.get<int>();
      else if (key == "force_v") c.force_v = val.get<double>();
      else if (key == "speed_tol") c.speed_tol = val.get<double>();
      else if (key == "drift_tol") c.drift_tol = val.get<double>();
      else if (key == "residual_tol") c.residual_tol = val.get<double>();
      else if (key == "residual_points") c.residual_points = val.get<int>();
      else if (key == "seed") c.seed = val.get<std::uint64_t>();
      else if (key == "out") c.out = val.get<std::string>();
      else if (key == "sweep") {
        if (!val.is_array())
          throw validation_error("sweep must be an array of objects");
        c.sweep.assign(val.begin(), val.end());
      } else {
        throw validation_error("unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw validation_error("bad value for config key '" + key +
                             "': " + e.what());
    }
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw validation_error("cannot read config file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("config file " + path + " is not valid JSON: " +
                           e.what());
  }
  apply_json(base, j);
  return base;
}

/// Effective-configuration echo for output manifests.
inline io::Json echo_config(const RunConfig& c) {
  io::Json j = io::Json::object();
  j.set("command", c.command);
  j.set("model", c.model);
  if (c.A) j.set("A", *c.A);
  if (c.D) j.set("D", *c.D);
  if (c.k) j.set("k", *c.k);
  if (c.u1) j.set("u1", *c.u1);
  if (c.u2) j.set("u2", *c.u2);
  j.set("v", c.v);
  j.set("z0", c.z0);
  if (c.branch) j.set("branch", *c.branch);
  if (c.command == "profile") j.set("range", c.range);
  if (c.command == "phase") {
    j.set("orbits", c.orbits);
    if (c.window) j.set("window", *c.window);
  }
  if (c.command == "action") {
    j.set("quad_abs_tol", c.quad_abs_tol);
    j.set("quad_rel_tol", c.quad_rel_tol);
  }
  if (c.command == "verify") {
    j.set("dx", c.dx);
    j.set("dt", c.dt);
    if (c.T) j.set("T", *c.T);
    if (c.domain) j.set("domain", *c.domain);
    j.set("snapshots", c.snapshots);
    if (c.force_v) j.set("force_v", *c.force_v);
    j.set("speed_tol", c.speed_tol);
    j.set("drift_tol", c.drift_tol);
    j.set("residual_tol", c.residual_tol);
    j.set("residual_points", c.residual_points);
    j.set("seed", static_cast<long long>(c.seed));
  }
  j.set("out", c.out);
  return j;
}

}  // namespace solact::cli
