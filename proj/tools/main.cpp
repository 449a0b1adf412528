// solact: solitary traveling waves of KdV / sine-Gordon / Fisher-KPP /
// Burgers in action-angle variables.
//
// Subcommands:
//   profile  sample a closed-form wave -> profile.csv (z, u, du_dz)
//   phase    separatrix + orbit fan + equilibria -> CSV / JSON
//   action   profile action vs closed form -> action.json
//   verify   evolve the PDE, measure speed and action drift -> report.json
//
// Every command accepts --config FILE (JSON, flags override file values),
// echoes the effective configuration into manifest.json, and writes all
// artifacts into --out (or $SOLACT_OUT, or the working directory).
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solact/solact.hpp"

namespace fs = std::filesystem;
using namespace solact;
using cli::RunConfig;

namespace {

fs::path out_dir(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("SOLACT_OUT"); env && *env) return env;
  return ".";
}

io::Json params_json(const ModelSpec& m) {
  io::Json p = io::Json::object();
  if (const auto* kdv = std::get_if<KdV>(&m)) {
    p.set("A", kdv->A);
  } else if (const auto* kpp = std::get_if<FisherKPP>(&m)) {
    p.set("D", kpp->D);
    p.set("k", kpp->k);
  } else if (const auto* bu = std::get_if<Burgers>(&m)) {
    p.set("D", bu->D);
    p.set("u1", bu->u1);
    p.set("u2", bu->u2);
  }
  return p;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg,
                    const std::vector<std::string>& outputs) {
  io::Json m = io::Json::object();
  m.set("command", cfg.command);
  m.set("config", cli::echo_config(cfg));
  io::Json files = io::Json::array();
  for (const auto& f : outputs) files.push(f);
  m.set("outputs", std::move(files));
  io::write_json(dir / "manifest.json", m);
}

// ---------------------------------------------------------------------- //

int cmd_profile(RunConfig cfg) {
  const TravelingWave wave = cli::build_wave(cfg);
  const auto r = cli::parse_range(cfg.range, 3);
  const auto n = static_cast<std::size_t>(
                     std::llround((r.hi - r.lo) / r.step)) + 1;
  io::Csv csv;
  csv.header({"z", "u", "du_dz"});
  for (std::size_t i = 0; i < n; ++i) {
    const double z = r.lo + static_cast<double>(i) * r.step;
    const auto [u, du] = eval_profile(wave, z);
    csv.row({z, u, du});
  }
  const fs::path dir = out_dir(cfg);
  io::write_file(dir / "profile.csv", csv.str());
  write_manifest(dir, cfg, {"profile.csv"});
  std::cout << "profile.csv: " << n << " rows, v = " << io::fmt17(wave.v)
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------- //

std::pair<double, double> phase_window(const RunConfig& cfg,
                                       const TravelingWave& w) {
  if (cfg.window) {
    const auto r = cli::parse_range(*cfg.window, 2);
    return {r.lo, r.hi};
  }
  if (const auto* kdv = std::get_if<KdV>(&w.model)) {
    const double crest = 3.0 * w.v / kdv->A;
    const double lo = std::min(0.0, crest), hi = std::max(0.0, crest);
    return {lo - 0.3 * std::abs(crest), hi + 0.3 * std::abs(crest)};
  }
  if (std::holds_alternative<SineGordon>(w.model)) return {-1.0, 2.0 * pi + 1.0};
  if (std::holds_alternative<FisherKPP>(w.model)) return {-0.5, 1.5};
  const auto& bu = std::get<Burgers>(w.model);
  const double jump = bu.u2 - bu.u1;
  return {bu.u1 - 0.3 * jump, bu.u2 + 0.3 * jump};
}

std::string orbit_csv(const ModelSpec& m, double v, const Orbit& orbit) {
  const bool with_h = is_hamiltonian(m);
  io::Csv csv;
  if (with_h)
    csv.header({"z", "u", "p", "H"});
  else
    csv.header({"z", "u", "p"});
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const auto& s = orbit.pts[i];
    if (with_h)
      csv.row({orbit.z[i], s.u, s.p, hamiltonian(m, v, s)});
    else
      csv.row({orbit.z[i], s.u, s.p});
  }
  return csv.str();
}

int cmd_phase(RunConfig cfg) {
  const TravelingWave wave = cli::build_wave(cfg);
  const auto [ulo, uhi] = phase_window(cfg, wave);
  const fs::path dir = out_dir(cfg);
  std::vector<std::string> outputs;

  const auto eqs = equilibria(wave.model, wave.v, ulo, uhi);
  io::Json list = io::Json::array();
  for (const auto& e : eqs) {
    io::Json one = io::Json::object();
    one.set("u", e.point.u);
    one.set("p", e.point.p);
    one.set("kind", equilibrium_kind_name(e.kind));
    io::Json eig = io::Json::array();
    for (const auto& l : e.eigenvalues) {
      io::Json pair = io::Json::array();
      pair.push(l.real());
      pair.push(l.imag());
      eig.push(std::move(pair));
    }
    one.set("eigenvalues", std::move(eig));
    list.push(std::move(one));
  }
  io::Json ej = io::Json::object();
  ej.set("model", model_name(wave.model));
  ej.set("v", wave.v);
  ej.set("window", io::Json::array().push(ulo).push(uhi));
  ej.set("equilibria", std::move(list));
  io::write_json(dir / "equilibria.json", ej);
  outputs.push_back("equilibria.json");

  const Orbit sep = trace_separatrix(wave.model, wave.v, wave.branch);
  io::write_file(dir / "separatrix.csv", orbit_csv(wave.model, wave.v, sep));
  outputs.push_back("separatrix.csv");

  // fan of companion orbits: closed loops inside the Hamiltonian
  // separatrices, plain trajectories for the dissipative reductions
  const int nfan = cfg.orbits;
  for (int j = 1; j <= nfan; ++j) {
    Orbit orbit;
    const double frac = static_cast<double>(j) / (nfan + 1);
    if (const auto* kdv = std::get_if<KdV>(&wave.model)) {
      const double uc = 2.0 * wave.v / kdv->A;
      const double crest = 3.0 * wave.v / kdv->A;
      orbit = integrate_closed_orbit(wave.model, wave.v,
                                     uc + frac * (crest - uc));
    } else if (std::holds_alternative<SineGordon>(wave.model)) {
      orbit = integrate_closed_orbit(wave.model, wave.v, pi * frac);
    } else {
      const double kappa = decay_rate(wave);
      const double u0 = ulo + frac * (uhi - ulo);
      IntegrateOptions iopts;
      iopts.sample_dz = 0.01 / kappa;
      orbit = integrate_orbit(wave.model, wave.v, {u0, 0.0}, 0.0, 20.0 / kappa,
                              iopts);
    }
    char name[32];
    std::snprintf(name, sizeof name, "orbit_%02d.csv", j - 1);
    io::write_file(dir / name, orbit_csv(wave.model, wave.v, orbit));
    outputs.push_back(name);
  }

  write_manifest(dir, cfg, outputs);
  std::cout << "separatrix.csv: " << sep.size() << " samples, "
            << eqs.size() << " equilibria, " << nfan << " fan orbits\n";
  return 0;
}

// ---------------------------------------------------------------------- //

int cmd_action(RunConfig cfg) {
  const TravelingWave wave = cli::build_wave(cfg);
  ActionOptions aopts;
  aopts.abs_tol = cfg.quad_abs_tol;
  aopts.rel_tol = cfg.quad_rel_tol;
  const QuadratureEstimate est = action_profile(wave, aopts);
  const double ref = action_reference(wave.model, wave.v);

  io::Json rep = io::Json::object();
  rep.set("model", model_name(wave.model));
  rep.set("params", params_json(wave.model));
  rep.set("v", wave.v);
  rep.set("I_numeric", est.value);
  rep.set("I_reference", ref);
  rep.set("abs_error", std::abs(est.value - ref));
  rep.set("error_estimate", est.abs_error_estimate);
  rep.set("L", est.half_width);
  rep.set("nodes", est.nodes);

  const fs::path dir = out_dir(cfg);
  io::write_json(dir / "action.json", rep);
  write_manifest(dir, cfg, {"action.json"});
  std::cout << "I_numeric = " << io::fmt17(est.value)
            << ", I_reference = " << io::fmt17(ref)
            << ", |diff| = " << io::fmt17(std::abs(est.value - ref)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------- //

VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions v;
  v.dx = cfg.dx;
  v.dt = cfg.dt;
  v.T = cfg.T;
  if (cfg.domain) {
    const auto r = cli::parse_range(*cfg.domain, 2);
    v.domain_lo = r.lo;
    v.domain_hi = r.hi;
  }
  v.snapshots = static_cast<std::size_t>(cfg.snapshots);
  v.force_v = cfg.force_v;
  v.speed_tol = cfg.speed_tol;
  v.drift_tol = cfg.drift_tol;
  v.residual_tol = cfg.residual_tol;
  v.residual_points = static_cast<std::size_t>(cfg.residual_points);
  v.seed = cfg.seed;
  return v;
}

io::Json report_json(const VerifyReport& rep, const TravelingWave& wave,
                     const RunConfig& cfg) {
  io::Json j = io::Json::object();
  j.set("model", rep.model);
  j.set("params", params_json(wave.model));
  j.set("v_claimed", rep.v_claimed);
  j.set("v_measured", rep.v_measured);
  j.set("speed_error", rep.speed_error);
  j.set("action_drift", rep.action_drift);
  j.set("residual_max", rep.residual_max);
  j.set("pass", rep.pass);
  io::Json checks = io::Json::object();
  checks.set("speed", rep.pass_speed);
  checks.set("action_drift", rep.pass_drift);
  checks.set("residual", rep.pass_residual);
  j.set("checks", std::move(checks));
  io::Json thresholds = io::Json::object();
  thresholds.set("speed_tol", cfg.speed_tol);
  thresholds.set("drift_tol", cfg.drift_tol);
  thresholds.set("residual_tol", cfg.residual_tol);
  j.set("thresholds", std::move(thresholds));
  j.set("speed_method", speed_method_name(rep.speed.method));
  j.set("fit_residual", rep.speed.fit_residual);
  j.set("dx", rep.dx);
  j.set("dt", rep.dt);
  j.set("T", rep.T);
  j.set("domain", io::Json::array().push(rep.domain_lo).push(rep.domain_hi));
  j.set("steps", rep.steps);
  io::Json actions = io::Json::array();
  for (const auto& [t, i] : rep.actions.series)
    actions.push(io::Json::array().push(t).push(i));
  j.set("action_series", std::move(actions));
  return j;
}

void write_verify_outputs(const fs::path& dir, const RunConfig& cfg,
                          const TravelingWave& wave, const VerifyReport& rep,
                          std::vector<std::string>& outputs) {
  io::write_json(dir / "report.json", report_json(rep, wave, cfg));
  outputs.push_back("report.json");

  io::Json snaps = io::Json::object();
  snaps.set("model", rep.model);
  snaps.set("params", params_json(wave.model));
  snaps.set("v", wave.v);
  snaps.set("dx", rep.dx);
  snaps.set("dt", rep.dt);
  io::Json times = io::Json::array();
  const bool with_ut = !rep.snapshots.empty() && !rep.snapshots[0].ut.empty();
  for (std::size_t s = 0; s < rep.snapshots.size(); ++s) {
    const Field1D& f = rep.snapshots[s];
    times.push(f.t);
    io::Csv csv;
    if (with_ut)
      csv.header({"x", "u", "u_t"});
    else
      csv.header({"x", "u"});
    for (std::size_t i = 0; i < f.n(); ++i) {
      if (with_ut)
        csv.row({f.x(i), f.u[i], f.ut[i]});
      else
        csv.row({f.x(i), f.u[i]});
    }
    char name[40];
    std::snprintf(name, sizeof name, "snapshots/snap_%03zu.csv", s);
    io::write_file(dir / name, csv.str());
    outputs.push_back(name);
  }
  snaps.set("times", std::move(times));
  io::write_json(dir / "snapshots.json", snaps);
  outputs.push_back("snapshots.json");
}

int cmd_verify_single(const RunConfig& cfg) {
  const TravelingWave wave = cli::build_wave(cfg);
  const VerifyReport rep = run_verification(wave, verify_options(cfg));
  const fs::path dir = out_dir(cfg);
  std::vector<std::string> outputs;
  write_verify_outputs(dir, cfg, wave, rep, outputs);
  write_manifest(dir, cfg, outputs);
  std::cout << (rep.pass ? "PASS" : "FAIL") << " " << rep.model
            << ": v_measured = " << io::fmt17(rep.v_measured)
            << " (claimed " << io::fmt17(rep.v_claimed)
            << "), speed_error = " << io::fmt17(rep.speed_error)
            << ", action_drift = " << io::fmt17(rep.action_drift)
            << ", residual_max = " << io::fmt17(rep.residual_max) << "\n";
  return rep.pass ? 0 : 2;
}

int cmd_verify(RunConfig cfg) {
  if (cfg.sweep.empty()) return cmd_verify_single(cfg);

  // independent parameter combinations run concurrently; results are
  // merged in sorted parameter order so the sweep output is deterministic
  std::vector<RunConfig> combos;
  for (const auto& patch : cfg.sweep) {
    RunConfig sub = cfg;
    sub.sweep.clear();
    cli::apply_json(sub, patch);
    if (!sub.sweep.empty())
      throw validation_error("sweep entries cannot nest further sweeps");
    combos.push_back(std::move(sub));
  }
  std::sort(combos.begin(), combos.end(),
            [](const RunConfig& a, const RunConfig& b) {
              return cli::echo_config(a).dump() < cli::echo_config(b).dump();
            });
  for (std::size_t i = 0; i < combos.size(); ++i) {
    char sub[32];
    std::snprintf(sub, sizeof sub, "sweep_%03zu", i);
    combos[i].out = (out_dir(cfg) / sub).string();
  }

  struct Outcome {
    TravelingWave wave;
    VerifyReport rep;
  };
  std::vector<std::future<Outcome>> futures;
  futures.reserve(combos.size());
  for (const auto& sub : combos)
    futures.push_back(std::async(std::launch::async, [&sub] {
      const TravelingWave w = cli::build_wave(sub);
      return Outcome{w, run_verification(w, verify_options(sub))};
    }));

  bool all_pass = true;
  io::Json runs = io::Json::array();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const Outcome oc = futures[i].get();
    const fs::path dir = combos[i].out;
    std::vector<std::string> outputs;
    write_verify_outputs(dir, combos[i], oc.wave, oc.rep, outputs);
    write_manifest(dir, combos[i], outputs);
    io::Json row = io::Json::object();
    row.set("dir", fs::path(combos[i].out).filename().string());
    row.set("model", oc.rep.model);
    row.set("v_claimed", oc.rep.v_claimed);
    row.set("v_measured", oc.rep.v_measured);
    row.set("speed_error", oc.rep.speed_error);
    row.set("action_drift", oc.rep.action_drift);
    row.set("residual_max", oc.rep.residual_max);
    row.set("pass", oc.rep.pass);
    runs.push(std::move(row));
    all_pass = all_pass && oc.rep.pass;
    std::cout << (oc.rep.pass ? "PASS " : "FAIL ") << combos[i].out << "\n";
  }
  io::Json summary = io::Json::object();
  summary.set("command", "verify-sweep");
  summary.set("runs", std::move(runs));
  summary.set("pass", all_pass);
  io::write_json(out_dir(cfg) / "sweep.json", summary);
  return all_pass ? 0 : 2;
}

// ---------------------------------------------------------------------- //

struct FlagSet {
  std::string config, model, v, branch, range, window, domain, out;
  double A = 0, D = 0, k = 0, u1 = 0, u2 = 0, z0 = 0;
  double dx = 0, dt = 0, T = 0, force_v = 0;
  double speed_tol = 0, drift_tol = 0, residual_tol = 0;
  double quad_abs_tol = 0, quad_rel_tol = 0;
  int orbits = 0, snapshots = 0, residual_points = 0;
  std::uint64_t seed = 0;
};

struct OptionRefs {
  CLI::Option *config = nullptr, *model = nullptr, *v = nullptr,
              *branch = nullptr, *z0 = nullptr, *A = nullptr, *D = nullptr,
              *k = nullptr, *u1 = nullptr, *u2 = nullptr, *out = nullptr,
              *range = nullptr, *window = nullptr, *orbits = nullptr,
              *quad_abs = nullptr, *quad_rel = nullptr, *dx = nullptr,
              *dt = nullptr, *T = nullptr, *domain = nullptr,
              *snapshots = nullptr, *force_v = nullptr, *speed_tol = nullptr,
              *drift_tol = nullptr, *residual_tol = nullptr,
              *residual_points = nullptr, *seed = nullptr;
};

OptionRefs add_common(CLI::App* cmd, FlagSet& f) {
  OptionRefs o;
  o.config = cmd->add_option("--config", f.config,
                             "JSON config file; flags override its values");
  o.model = cmd->add_option("--model", f.model, "kdv | sg | kpp | burgers");
  o.v = cmd->add_option("--v", f.v, "wave speed (number or 'auto')");
  o.branch = cmd->add_option(
      "--branch", f.branch,
      "soliton | kink-up | kink-down | falling | rising | shock");
  o.z0 = cmd->add_option("--z0", f.z0, "phase offset");
  o.A = cmd->add_option("--A", f.A, "KdV nonlinearity coefficient");
  o.D = cmd->add_option("--D", f.D, "diffusion/viscosity coefficient");
  o.k = cmd->add_option("--k", f.k, "Fisher-KPP growth rate");
  o.u1 = cmd->add_option("--u1", f.u1, "Burgers right state");
  o.u2 = cmd->add_option("--u2", f.u2, "Burgers left state");
  o.out = cmd->add_option("--out", f.out,
                          "output directory (default $SOLACT_OUT or '.')");
  return o;
}

void apply_common(const OptionRefs& o, const FlagSet& f, RunConfig& cfg) {
  if (o.model->count()) cfg.model = f.model;
  if (o.v->count()) cfg.v = f.v;
  if (o.branch->count()) cfg.branch = f.branch;
  if (o.z0->count()) cfg.z0 = f.z0;
  if (o.A->count()) cfg.A = f.A;
  if (o.D->count()) cfg.D = f.D;
  if (o.k->count()) cfg.k = f.k;
  if (o.u1->count()) cfg.u1 = f.u1;
  if (o.u2->count()) cfg.u2 = f.u2;
  if (o.out->count()) cfg.out = f.out;
}

RunConfig make_config(const std::string& command, const OptionRefs& o,
                      const FlagSet& f) {
  RunConfig cfg;
  cfg.command = command;
  if (o.config->count()) cfg = cli::load_config_file(f.config, cfg);
  cfg.command = command;
  apply_common(o, f, cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "solact: solitary traveling waves in action-angle variables "
      "(KdV, sine-Gordon, Fisher-KPP, Burgers)"};
  app.require_subcommand(1);

  FlagSet f;

  CLI::App* profile = app.add_subcommand(
      "profile", "sample the closed-form wave into profile.csv");
  OptionRefs po = add_common(profile, f);
  po.range = profile->add_option("--range", f.range, "z grid as lo:hi:step");

  CLI::App* phase = app.add_subcommand(
      "phase", "separatrix, orbit fan, and equilibria of the reduction");
  OptionRefs ho = add_common(phase, f);
  ho.window = phase->add_option("--window", f.window, "u window as lo:hi");
  ho.orbits = phase->add_option("--orbits", f.orbits, "fan orbit count");

  CLI::App* action = app.add_subcommand(
      "action", "profile action vs its closed form into action.json");
  OptionRefs ao = add_common(action, f);
  ao.quad_abs =
      action->add_option("--quad-abs-tol", f.quad_abs_tol, "quadrature abs tol");
  ao.quad_rel =
      action->add_option("--quad-rel-tol", f.quad_rel_tol, "quadrature rel tol");

  CLI::App* verify = app.add_subcommand(
      "verify", "evolve the PDE and verify speed and action constancy");
  OptionRefs vo = add_common(verify, f);
  vo.dx = verify->add_option("--dx", f.dx, "grid spacing");
  vo.dt = verify->add_option("--dt", f.dt, "time step (0 = auto)");
  vo.T = verify->add_option("--T", f.T, "horizon (default: 5 decay lengths)");
  vo.domain = verify->add_option("--domain", f.domain, "domain as lo:hi");
  vo.snapshots = verify->add_option("--snapshots", f.snapshots,
                                    "snapshot count (>= 20 recommended)");
  vo.force_v = verify->add_option(
      "--force-v", f.force_v, "claim this speed instead of the admissible one");
  vo.speed_tol = verify->add_option("--speed-tol", f.speed_tol,
                                    "relative speed tolerance");
  vo.drift_tol = verify->add_option("--drift-tol", f.drift_tol,
                                    "relative action drift tolerance");
  vo.residual_tol =
      verify->add_option("--residual-tol", f.residual_tol, "residual bound");
  vo.residual_points = verify->add_option("--residual-points",
                                          f.residual_points, "sample count");
  vo.seed = verify->add_option("--seed", f.seed, "residual sampling seed");

  try {
    app.parse(argc, argv);

    if (profile->parsed()) {
      RunConfig cfg = make_config("profile", po, f);
      if (po.range->count()) cfg.range = f.range;
      return cmd_profile(std::move(cfg));
    }
    if (phase->parsed()) {
      RunConfig cfg = make_config("phase", ho, f);
      if (ho.window->count()) cfg.window = f.window;
      if (ho.orbits->count()) cfg.orbits = f.orbits;
      return cmd_phase(std::move(cfg));
    }
    if (action->parsed()) {
      RunConfig cfg = make_config("action", ao, f);
      if (ao.quad_abs->count()) cfg.quad_abs_tol = f.quad_abs_tol;
      if (ao.quad_rel->count()) cfg.quad_rel_tol = f.quad_rel_tol;
      return cmd_action(std::move(cfg));
    }
    RunConfig cfg = make_config("verify", vo, f);
    if (vo.dx->count()) cfg.dx = f.dx;
    if (vo.dt->count()) cfg.dt = f.dt;
    if (vo.T->count()) cfg.T = f.T;
    if (vo.domain->count()) cfg.domain = f.domain;
    if (vo.snapshots->count()) cfg.snapshots = f.snapshots;
    if (vo.force_v->count()) cfg.force_v = f.force_v;
    if (vo.speed_tol->count()) cfg.speed_tol = f.speed_tol;
    if (vo.drift_tol->count()) cfg.drift_tol = f.drift_tol;
    if (vo.residual_tol->count()) cfg.residual_tol = f.residual_tol;
    if (vo.residual_points->count()) cfg.residual_points = f.residual_points;
    if (vo.seed->count()) cfg.seed = f.seed;
    return cmd_verify(std::move(cfg));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "{\"error\": \"validation\", \"message\": \""
              << io::json_escape(e.what()) << "\"}\n";
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "{\"error\": \"validation\", \"message\": \""
              << io::json_escape(e.what()) << "\"}\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "{\"error\": \"numeric\", \"message\": \""
              << io::json_escape(e.what()) << "\"}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"numeric\", \"message\": \""
              << io::json_escape(e.what()) << "\"}\n";
    return 2;
  }
}
