#include "qf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qf/checks.hpp"
#include "qf/dynamics_bose.hpp"
#include "qf/dynamics_fermi.hpp"
#include "qf/io.hpp"

namespace qf {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  return j.at(key).get<T>();
}

double require_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw ConfigError("non-finite value in field '" + field + "'");
  return v;
}

// default tolerances; every value can be overridden from the config
std::map<std::string, double> default_tolerances(const ScenarioConfig& cfg, int n) {
  return {
      {"wick_max_gap", 1e-10},
      {"wick_detector_gap", 1e-3},
      {"reduction_three_way_gap", 1e-9},
      {"projection_idempotent", 1e-11},
      {"projection_self_adjoint", 1e-11},
      {"projection_range", 1e-11},
      {"projection_commute", 1e-11},
      {"projection_orthogonality", 1e-11},
      {"pull_through_identity", 1e-12},
      {"tr_gamma_drift", 1e-8 * n},
      {"energy_drift", 1e-6},  // scaled by (1+|E0|) at evaluation
      {"spectrum_drift", 1e-6},
      {"purity_drift", 1e-6},
      {"unitarity_residual", 1e-6},
      {"reconstruction_residual", 1e-6},
      {"free_energy_constant", 1e-12},
      {"picard_contraction", 1.0},
      {"picard_rk4_agreement", 1e-6},
      {"cutoff_consistency", 1e-9},
      {"cutoff_full_lambda_error", 1e-8},
      {"cutoff_monotone", 0.0},
      {"bose_total_n_drift", 1e-6},
      {"bose_purity_drift", 1e-6},
      {"bose_structure_residual", 1e-7},
      {"bose_dual_form_agreement", 1e-11},
  };
}

double tol_for(const ScenarioConfig& cfg, const std::map<std::string, double>& defaults,
               const std::string& name) {
  for (const auto& [k, v] : cfg.tolerances)
    if (k == name) return v;
  auto it = defaults.find(name);
  if (it == defaults.end()) throw ConfigError("unknown tolerance '" + name + "'");
  return it->second;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// deterministic JSON emission with 17-significant-digit numbers
struct SummaryWriter {
  std::ostringstream os;
  bool first_top = true;

  SummaryWriter() { os << "{"; }
  void key(const std::string& k) {
    if (!first_top) os << ",";
    first_top = false;
    os << "\"" << json_escape(k) << "\":";
  }
  void field(const std::string& k, double v) {
    key(k);
    os << format_double(v);
  }
  void field(const std::string& k, const std::string& v) {
    key(k);
    os << "\"" << json_escape(v) << "\"";
  }
  void field_int(const std::string& k, long v) {
    key(k);
    os << v;
  }
  void field_bool(const std::string& k, bool v) {
    key(k);
    os << (v ? "true" : "false");
  }
  void raw(const std::string& k, const std::string& content) {
    key(k);
    os << content;
  }
  std::string finish() {
    os << "}\n";
    return os.str();
  }
};

std::string checks_to_json(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < checks.size(); ++i) {
    if (i) os << ",";
    os << "{\"name\":\"" << json_escape(checks[i].name)
       << "\",\"residual\":" << format_double(checks[i].residual)
       << ",\"tolerance\":" << format_double(checks[i].tolerance)
       << ",\"pass\":" << (checks[i].pass ? "true" : "false") << "}";
  }
  os << "]";
  return os.str();
}

void write_error_json(const std::string& dir, const std::string& kind,
                      const std::string& message, const std::string& field = "",
                      const std::string& check = "", double residual = 0.0) {
  std::ostringstream os;
  os << "{\"error\":\"" << json_escape(kind) << "\",\"message\":\""
     << json_escape(message) << "\"";
  if (!field.empty()) os << ",\"field\":\"" << json_escape(field) << "\"";
  if (!check.empty())
    os << ",\"check\":\"" << json_escape(check)
       << "\",\"residual\":" << format_double(residual);
  os << "}\n";
  write_text_file(dir + "/error.json", os.str());
}

struct Problem {
  Grid grid;
  PairPotential V;
  Mat h;  // kinetic
};

Problem build_problem(const ScenarioConfig& cfg) {
  if (cfg.n_per_dim < 2) throw ConfigError("invalid field 'grid.n_per_dim'");
  if (cfg.dim < 1 || cfg.dim > 3) throw ConfigError("invalid field 'grid.dim'");
  if (!(cfg.box_length > 0.0)) throw ConfigError("invalid field 'grid.box_length'");
  Grid grid(cfg.n_per_dim, cfg.dim, cfg.box_length);
  PairPotential v = potential_by_name(grid, cfg.profile, cfg.amplitude, cfg.range, cfg.reg);
  Mat h = grid.kinetic_matrix();
  return {std::move(grid), std::move(v), std::move(h)};
}

BdGState initial_fermi(const ScenarioConfig& cfg, const Grid& grid) {
  if (cfg.initial_kind == "slater") return random_slater(grid, cfg.slater_n, cfg.seed);
  if (cfg.initial_kind == "paired")
    return random_paired(grid, cfg.seed, cfg.state_scale);
  if (cfg.initial_kind == "file") {
    const Snapshot s = read_snapshot(cfg.initial_file);
    if (s.n != grid.n()) throw ConfigError("initial.file: mode count mismatch");
    BdGState w{s.gamma, s.alpha};
    validate_bdg(w, 1e-9);
    return w;
  }
  throw ConfigError("invalid field 'initial.kind' for fermi statistics");
}

HFBState initial_bose(const ScenarioConfig& cfg, const Grid& grid) {
  if (cfg.initial_kind != "bogoliubov")
    throw ConfigError("invalid field 'initial.kind' for bose statistics");
  std::mt19937_64 rng(cfg.seed);
  HFBState s;
  s.alpha_t = random_symmetric(grid.n(), rng, 0.3 * cfg.state_scale);
  s.gamma_t = gamma_from_alpha(s.alpha_t);
  s.phi = cfg.condensate_amplitude * random_vector(grid.n(), rng);
  return s;
}

IntegrateOptions run_options(const ScenarioConfig& cfg) {
  IntegrateOptions opts;
  opts.t_final = cfg.t_final;
  opts.dt = cfg.dt;
  if (cfg.scheme == "rk4")
    opts.scheme = Scheme::rk4;
  else if (cfg.scheme == "split")
    opts.scheme = Scheme::split;
  else
    throw ConfigError("invalid field 'run.scheme'");
  opts.with_propagator = cfg.with_propagator;
  return opts;
}

void write_snapshots(const std::string& dir, const Grid& grid, const Trajectory& traj,
                     int stride) {
  if (stride > 0) {
    // states are already recorded at this stride; name files by step index
    for (size_t i = 0; i < traj.states.size(); ++i) {
      std::ostringstream name;
      name << dir << "/snapshot_" << std::setw(6) << std::setfill('0') << i * stride
           << ".json";
      write_snapshot(name.str(), grid, traj.states[i].gamma, traj.states[i].alpha);
    }
  }
  write_snapshot(dir + "/snapshot_final.json", grid, traj.states.back().gamma,
                 traj.states.back().alpha);
}

int finish(const std::string& dir, SummaryWriter& sw,
           const std::vector<CheckResult>& checks) {
  sw.raw("checks", checks_to_json(checks));
  write_text_file(dir + "/summary.json", sw.finish());
  for (const auto& c : checks)
    if (!c.pass) {
      write_error_json(dir, "CheckFailed", "verification check failed", "", c.name,
                       c.residual);
      return kExitCheckFailed;
    }
  return kExitOk;
}

int cmd_evolve(const ScenarioConfig& cfg, const std::string& dir) {
  Problem pr = build_problem(cfg);
  const BdGState w0 = initial_fermi(cfg, pr.grid);
  const auto defaults = default_tolerances(cfg, pr.grid.n());
  IntegrateOptions opts = run_options(cfg);
  const int nsteps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));
  opts.record_stride = cfg.snapshot_stride > 0 ? cfg.snapshot_stride
                                               : std::max(1, nsteps);

  Trajectory traj = cfg.cutoff ? cutoff_evolve(pr.grid, w0, pr.h, pr.V, *cfg.cutoff, opts)
                               : integrate(pr.grid, w0, pr.h, pr.V, opts);
  write_trajectory_csv(dir + "/trajectory.csv", traj);
  write_snapshots(dir, pr.grid, traj, cfg.snapshot_stride);

  const DriftReport drifts = trajectory_drifts(traj);
  SummaryWriter sw;
  sw.field("subcommand", std::string("evolve"));
  sw.field_int("n_modes", pr.grid.n());
  sw.field("t_final", cfg.t_final);
  sw.field("final_tr_gamma", traj.points.back().tr_gamma);
  sw.field("final_energy", traj.points.back().energy);
  sw.field("final_purity_defect", traj.points.back().purity_defect);
  sw.field("drift_tr_gamma", drifts.tr_gamma);
  sw.field("drift_energy", drifts.energy);
  sw.field("drift_spectrum", drifts.spectrum);
  sw.field("drift_purity", drifts.purity);
  if (cfg.with_propagator) {
    sw.field("unitarity_residual", drifts.unitarity);
    sw.field("reconstruction_residual", drifts.reconstruction);
  }
  if (cfg.cutoff) {
    double worst = 0.0;
    for (const auto& p : traj.points) worst = std::max(worst, p.cutoff_residual);
    sw.field("cutoff_consistency", worst);
  }

  std::vector<CheckResult> checks;
  for (const std::string& name : cfg.verify) {
    if (name == "conservation") {
      const double e0 = traj.points.front().energy;
      checks.push_back(check_le("tr_gamma_drift", drifts.tr_gamma,
                                tol_for(cfg, defaults, "tr_gamma_drift")));
      checks.push_back(check_le(
          "energy_drift", drifts.energy,
          tol_for(cfg, defaults, "energy_drift") * (1.0 + std::abs(e0))));
      checks.push_back(check_le("spectrum_drift", drifts.spectrum,
                                tol_for(cfg, defaults, "spectrum_drift")));
      checks.push_back(
          check_le("purity_drift", drifts.purity, tol_for(cfg, defaults, "purity_drift")));
      if (cfg.with_propagator) {
        checks.push_back(check_le("unitarity_residual", drifts.unitarity,
                                  tol_for(cfg, defaults, "unitarity_residual")));
        checks.push_back(check_le("reconstruction_residual", drifts.reconstruction,
                                  tol_for(cfg, defaults, "reconstruction_residual")));
      }
    } else if (name == "free_energy_constant") {
      checks.push_back(check_le("free_energy_constant", trajectory_drifts(traj).energy,
                                tol_for(cfg, defaults, "free_energy_constant")));
    } else {
      throw ConfigError("unknown verify check '" + name + "' for evolve");
    }
  }
  return finish(dir, sw, checks);
}

int cmd_bose_evolve(const ScenarioConfig& cfg, const std::string& dir) {
  Problem pr = build_problem(cfg);
  const HFBState s0 = initial_bose(cfg, pr.grid);
  const auto defaults = default_tolerances(cfg, pr.grid.n());

  HFBIntegrateOptions opts;
  opts.t_final = cfg.t_final;
  opts.dt = cfg.dt;
  HFBTrajectory traj = integrate_hfb(pr.grid, s0, pr.h, pr.V, opts);
  write_hfb_trajectory_csv(dir + "/trajectory.csv", traj);

  double drift_n = 0.0, drift_purity = 0.0, worst_res = 0.0;
  for (const auto& p : traj.points) {
    drift_n = std::max(drift_n, std::abs(p.total_n - traj.points.front().total_n));
    drift_purity = std::max(
        drift_purity, std::abs(p.purity_quantity - traj.points.front().purity_quantity));
    worst_res = std::max(worst_res, p.bogoliubov_residual);
  }

  // dual-formula agreement at the sample states
  double dual = 0.0;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const HFBState& s = traj.states[i];
    const HFBDeriv d = hfb_rhs(pr.grid, s, pr.h, pr.V);
    const Mat sym = hfb_rhs_symplectic(pr.grid, s, pr.h, pr.V);
    const int n = pr.grid.n();
    dual = std::max({dual, (sym.topLeftCorner(n, n) - d.dgamma_t).norm(),
                     (sym.topRightCorner(n, n) - d.dalpha_t).norm()});
  }

  SummaryWriter sw;
  sw.field("subcommand", std::string("bose-evolve"));
  sw.field_int("n_modes", pr.grid.n());
  sw.field("final_total_N", traj.points.back().total_n);
  sw.field("final_purity_quantity", traj.points.back().purity_quantity);
  sw.field("drift_total_N", drift_n);
  sw.field("drift_purity_quantity", drift_purity);
  sw.field("max_bogoliubov_residual", worst_res);
  sw.field("dual_form_agreement", dual);

  std::vector<CheckResult> checks;
  for (const std::string& name : cfg.verify) {
    if (name == "conservation") {
      checks.push_back(check_le("bose_total_n_drift", drift_n,
                                tol_for(cfg, defaults, "bose_total_n_drift")));
      checks.push_back(check_le("bose_purity_drift", drift_purity,
                                tol_for(cfg, defaults, "bose_purity_drift")));
      checks.push_back(check_le("bose_structure_residual", worst_res,
                                tol_for(cfg, defaults, "bose_structure_residual")));
    } else if (name == "dual_form") {
      checks.push_back(check_le("bose_dual_form_agreement", dual,
                                tol_for(cfg, defaults, "bose_dual_form_agreement")));
    } else {
      throw ConfigError("unknown verify check '" + name + "' for bose-evolve");
    }
  }
  return finish(dir, sw, checks);
}

int cmd_verify(const ScenarioConfig& cfg, const std::string& dir) {
  Problem pr = build_problem(cfg);
  const auto defaults = default_tolerances(cfg, pr.grid.n());
  std::vector<CheckResult> checks;
  std::vector<std::string> list = cfg.verify;
  if (list.empty()) list = {"wick", "reduction_theorem", "projections"};

  for (const std::string& name : list) {
    if (name == "wick" || name == "reduction_theorem") {
      if (pr.grid.n() > 12)
        throw ConfigError("oracle checks require at most 12 modes (field 'grid')");
    }
    if (name == "wick") {
      auto r = wick_suite(pr.grid, 20, cfg.seed, tol_for(cfg, defaults, "wick_max_gap"),
                          tol_for(cfg, defaults, "wick_detector_gap"));
      checks.insert(checks.end(), r.begin(), r.end());
    } else if (name == "reduction_theorem") {
      auto r = reduction_suite(pr.grid, pr.h, pr.V, 10, 5, cfg.seed,
                               tol_for(cfg, defaults, "reduction_three_way_gap"));
      checks.insert(checks.end(), r.begin(), r.end());
    } else if (name == "projections") {
      auto r = projection_suite(pr.grid, cfg.seed,
                                tol_for(cfg, defaults, "projection_idempotent"));
      checks.insert(checks.end(), r.begin(), r.end());
    } else if (name == "estimates") {
      auto r = estimates_suite(pr.grid, pr.V, 100, cfg.seed);
      checks.insert(checks.end(), r.begin(), r.end());
      auto e = energy_bound_suite(pr.grid, pr.V, 200, cfg.seed);
      checks.insert(checks.end(), e.begin(), e.end());
    } else if (name == "pull_through") {
      auto r = pull_through_suite(pr.grid, cfg.seed,
                                  tol_for(cfg, defaults, "pull_through_identity"));
      checks.insert(checks.end(), r.begin(), r.end());
    } else {
      throw ConfigError("unknown verify check '" + name + "'");
    }
  }

  SummaryWriter sw;
  sw.field("subcommand", std::string("verify"));
  sw.field_int("n_modes", pr.grid.n());
  return finish(dir, sw, checks);
}

int cmd_picard(const ScenarioConfig& cfg, const std::string& dir) {
  Problem pr = build_problem(cfg);
  const auto defaults = default_tolerances(cfg, pr.grid.n());
  const BdGState w0 = initial_fermi(cfg, pr.grid);

  PicardResult res = picard_solve(pr.grid, w0, pr.V, cfg.picard_interval,
                                  cfg.picard_steps, cfg.picard_tol, cfg.picard_max_iter);

  // rk4 reference over the same interval
  IntegrateOptions opts;
  opts.t_final = cfg.picard_interval;
  opts.dt = cfg.picard_reference_dt;
  opts.scheme = Scheme::rk4;
  Trajectory ref = integrate(pr.grid, w0, pr.h, pr.V, opts);
  const BdGState& a = res.states.back();
  const BdGState& b = ref.states.back();
  const double agreement = s1s2_norm(a.gamma - b.gamma, a.alpha - b.alpha);

  SummaryWriter sw;
  sw.field("subcommand", std::string("picard"));
  sw.field("interval", res.report.interval);
  sw.field_int("iterations", res.report.iterations);
  sw.field_bool("converged", res.report.converged);
  sw.field("contraction", res.report.contraction);
  sw.field("rk4_agreement", agreement);
  {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < res.report.diffs.size(); ++i) {
      if (i) os << ",";
      os << format_double(res.report.diffs[i]);
    }
    os << "]";
    sw.raw("diffs", os.str());
  }

  std::vector<CheckResult> checks;
  checks.push_back(check_le("picard_contraction", res.report.contraction,
                            tol_for(cfg, defaults, "picard_contraction")));
  checks.push_back(check_le("picard_rk4_agreement", agreement,
                            tol_for(cfg, defaults, "picard_rk4_agreement")));
  checks.push_back(
      CheckResult{"picard_converged", res.report.converged ? 0.0 : 1.0, 0.5,
                  res.report.converged});
  return finish(dir, sw, checks);
}

int cmd_cutoff_sweep(const ScenarioConfig& cfg, const std::string& dir) {
  Problem pr = build_problem(cfg);
  const auto defaults = default_tolerances(cfg, pr.grid.n());
  const BdGState w0 = initial_fermi(cfg, pr.grid);
  IntegrateOptions opts = run_options(cfg);
  opts.scheme = Scheme::rk4;

  Trajectory full = integrate(pr.grid, w0, pr.h, pr.V, opts);
  const BdGState& wf = full.states.back();

  // thresholds: just above each distinct kinetic eigenvalue
  std::set<double> levels(pr.grid.ksq().data(), pr.grid.ksq().data() + pr.grid.n());
  std::vector<double> lambdas;
  for (double l : levels) lambdas.push_back(l + 1e-9);

  std::ostringstream table;
  table << "[";
  double prev_err = -1.0;
  bool monotone = true;
  double full_err = 0.0, worst_consistency = 0.0;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    Trajectory t = cutoff_evolve(pr.grid, w0, pr.h, pr.V, lambdas[i], opts);
    const BdGState& wl = t.states.back();
    const double err = s1s2_norm(wl.gamma - wf.gamma, wl.alpha - wf.alpha);
    double cres = 0.0;
    for (const auto& p : t.points) cres = std::max(cres, p.cutoff_residual);
    worst_consistency = std::max(worst_consistency, cres);
    if (i) table << ",";
    table << "{\"lambda\":" << format_double(lambdas[i])
          << ",\"error\":" << format_double(err)
          << ",\"consistency\":" << format_double(cres) << "}";
    if (prev_err >= 0.0 && err > prev_err + 1e-12) monotone = false;
    prev_err = err;
    if (i + 1 == lambdas.size()) full_err = err;
  }
  table << "]";

  SummaryWriter sw;
  sw.field("subcommand", std::string("cutoff-sweep"));
  sw.raw("cutoff_table", table.str());

  std::vector<CheckResult> checks;
  checks.push_back(CheckResult{"cutoff_monotone", monotone ? 0.0 : 1.0,
                               tol_for(cfg, defaults, "cutoff_monotone") + 0.5, monotone});
  checks.push_back(check_le("cutoff_full_lambda_error", full_err,
                            tol_for(cfg, defaults, "cutoff_full_lambda_error")));
  checks.push_back(check_le("cutoff_consistency", worst_consistency,
                            tol_for(cfg, defaults, "cutoff_consistency")));
  return finish(dir, sw, checks);
}

int cmd_norms(const ScenarioConfig& cfg, const std::string& dir) {
  Problem pr = build_problem(cfg);
  const BdGState w = initial_fermi(cfg, pr.grid);
  const NormReport r = norms(pr.grid, w.gamma, w.alpha);
  SummaryWriter sw;
  sw.field("subcommand", std::string("norms"));
  sw.field_int("n_modes", pr.grid.n());
  sw.field("s1", r.s1);
  sw.field("s2", r.s2);
  sw.field("h1_kernel", r.h1_kernel);
  sw.field("y1", r.y1);
  sw.field("y2", r.y2);
  sw.field("z1", r.z1);
  sw.field("c_v", compute_cv(pr.grid, pr.V));
  return finish(dir, sw, {});
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      cfg.n_per_dim = get_or(g, "n_per_dim", cfg.n_per_dim);
      cfg.dim = get_or(g, "dim", cfg.dim);
      cfg.box_length = require_finite(get_or(g, "box_length", cfg.box_length),
                                      "grid.box_length");
    }
    if (j.contains("potential")) {
      const auto& p = j.at("potential");
      cfg.profile = get_or<std::string>(p, "profile", cfg.profile);
      cfg.amplitude = require_finite(get_or(p, "amplitude", cfg.amplitude),
                                     "potential.amplitude");
      cfg.range = require_finite(get_or(p, "range", cfg.range), "potential.range");
      cfg.reg = get_or(p, "reg", cfg.reg);
    }
    cfg.statistics = get_or<std::string>(j, "statistics", cfg.statistics);
    if (j.contains("initial")) {
      const auto& i = j.at("initial");
      cfg.initial_kind = get_or<std::string>(i, "kind", cfg.initial_kind);
      cfg.seed = get_or<std::uint64_t>(i, "seed", cfg.seed);
      cfg.slater_n = get_or(i, "N", cfg.slater_n);
      cfg.state_scale = require_finite(get_or(i, "scale", cfg.state_scale),
                                       "initial.scale");
      cfg.condensate_amplitude = require_finite(
          get_or(i, "condensate_amplitude", cfg.condensate_amplitude),
          "initial.condensate_amplitude");
      cfg.initial_file = get_or<std::string>(i, "file", cfg.initial_file);
    }
    if (j.contains("run")) {
      const auto& r = j.at("run");
      cfg.t_final = require_finite(get_or(r, "t_final", cfg.t_final), "run.t_final");
      cfg.dt = require_finite(get_or(r, "dt", cfg.dt), "run.dt");
      cfg.scheme = get_or<std::string>(r, "scheme", cfg.scheme);
      cfg.snapshot_stride = get_or(r, "snapshot_stride", cfg.snapshot_stride);
      cfg.with_propagator = get_or(r, "with_propagator", cfg.with_propagator);
      if (r.contains("cutoff"))
        cfg.cutoff = require_finite(r.at("cutoff").get<double>(), "run.cutoff");
      if (r.contains("picard")) {
        const auto& pb = r.at("picard");
        cfg.has_picard = true;
        cfg.picard_interval = require_finite(
            get_or(pb, "interval", cfg.picard_interval), "run.picard.interval");
        cfg.picard_steps = get_or(pb, "quadrature_steps", cfg.picard_steps);
        cfg.picard_tol = get_or(pb, "tol", cfg.picard_tol);
        cfg.picard_max_iter = get_or(pb, "max_iter", cfg.picard_max_iter);
        cfg.picard_reference_dt =
            get_or(pb, "reference_dt", cfg.picard_reference_dt);
      }
    }
    if (j.contains("verify"))
      cfg.verify = j.at("verify").get<std::vector<std::string>>();
    if (j.contains("tolerances"))
      for (const auto& [k, v] : j.at("tolerances").items())
        cfg.tolerances.emplace_back(k, v.get<double>());
    cfg.out_dir = get_or<std::string>(j, "output_dir", cfg.out_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  // validation with field names
  if (cfg.n_per_dim < 2) throw ConfigError("invalid field 'grid.n_per_dim'");
  if (cfg.dim < 1 || cfg.dim > 3) throw ConfigError("invalid field 'grid.dim'");
  if (!(cfg.box_length > 0.0)) throw ConfigError("invalid field 'grid.box_length'");
  if (!(cfg.dt > 0.0)) throw ConfigError("invalid field 'run.dt'");
  if (!(cfg.t_final > 0.0)) throw ConfigError("invalid field 'run.t_final'");
  if (cfg.dt >= cfg.t_final) throw ConfigError("invalid fields: run.dt >= run.t_final");
  if (cfg.statistics != "fermi" && cfg.statistics != "bose")
    throw ConfigError("invalid field 'statistics'");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

int run_scenario(const std::string& subcommand, ScenarioConfig cfg,
                 const std::string& out_dir_override,
                 std::optional<std::uint64_t> seed_override) {
  const std::string dir = out_dir_override.empty() ? cfg.out_dir : out_dir_override;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return kExitValidation;
  }
  if (seed_override) cfg.seed = *seed_override;
  try {
    if (subcommand == "evolve") {
      if (cfg.statistics != "fermi")
        throw ConfigError("evolve requires statistics = fermi");
      return cmd_evolve(cfg, dir);
    }
    if (subcommand == "bose-evolve") {
      if (cfg.statistics != "bose")
        throw ConfigError("bose-evolve requires statistics = bose");
      return cmd_bose_evolve(cfg, dir);
    }
    if (subcommand == "verify") return cmd_verify(cfg, dir);
    if (subcommand == "picard") return cmd_picard(cfg, dir);
    if (subcommand == "cutoff-sweep") return cmd_cutoff_sweep(cfg, dir);
    if (subcommand == "norms") return cmd_norms(cfg, dir);
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  } catch (const ConfigError& e) {
    // the validation messages name the offending field as: ... field 'x.y' ...
    std::string field;
    const std::string msg = e.what();
    const auto pos = msg.find("field '");
    if (pos != std::string::npos) {
      const auto end = msg.find('\'', pos + 7);
      if (end != std::string::npos) field = msg.substr(pos + 7, end - pos - 7);
    }
    write_error_json(dir, "ValidationError", msg, field);
    return kExitValidation;
  } catch (const NumericalError& e) {
    write_error_json(dir, "NumericalError", e.what());
    return kExitNumerical;
  }
}

int run_scenario_file(const std::string& subcommand, const std::string& config_path,
                      const std::string& out_dir_override,
                      std::optional<std::uint64_t> seed_override) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    const std::string dir = out_dir_override.empty() ? "." : out_dir_override;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::string field;
    const std::string msg = e.what();
    const auto pos = msg.find("field '");
    if (pos != std::string::npos) {
      const auto end = msg.find('\'', pos + 7);
      if (end != std::string::npos) field = msg.substr(pos + 7, end - pos - 7);
    }
    write_error_json(dir, "ValidationError", msg, field);
    return kExitValidation;
  }
  return run_scenario(subcommand, cfg, out_dir_override, seed_override);
}

}  // namespace qf
