// Acceptance suite: runs every top-level verification criterion at its pinned
// tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "qf/checks.hpp"
#include "qf/dynamics_bose.hpp"
#include "qf/dynamics_fermi.hpp"
#include "qf/fock.hpp"
#include "qf/geometry.hpp"
#include "qf/io.hpp"
#include "qf/norms.hpp"
#include "qf/scenario.hpp"

using namespace qf;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  std::string name;
  std::vector<CheckResult> results;
  double seconds = 0.0;
};

void report(const Criterion& c) {
  bool pass = true;
  for (const auto& r : c.results) pass = pass && r.pass;
  if (!pass) ++g_failures;
  std::printf("%s  criterion %02d  %-24s  (%zu checks, %.1fs)\n",
              pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.results.size(),
              c.seconds);
  for (const auto& r : c.results)
    if (!r.pass)
      std::printf("      failed: %s residual=%.3e tolerance=%.3e\n", r.name.c_str(),
                  r.residual, r.tolerance);
  std::fflush(stdout);
}

template <typename Fn>
void run_criterion(int id, const std::string& name, Fn&& fn) {
  Criterion c{id, name, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.results = fn();
  } catch (const std::exception& e) {
    c.results = {CheckResult{std::string("exception: ") + e.what(), 1.0, 0.0, false}};
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(c);
}

// 1. CAR algebra on 6 modes, every anticommutator identity to 1e-13
std::vector<CheckResult> criterion_car() {
  const int n = 6;
  const FockOperatorSet ops = build_car(n);
  const FockSpace fs(n);
  const long d = fs.dim();
  double worst = 0.0;
  const Mat id = Mat::Identity(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      worst = std::max(worst, Mat(ops.a[i] * ops.a[j] + ops.a[j] * ops.a[i]).norm());
      worst = std::max(worst,
                       Mat(ops.adag[i] * ops.adag[j] + ops.adag[j] * ops.adag[i]).norm());
      Mat anti = Mat(ops.a[i] * ops.adag[j] + ops.adag[j] * ops.a[i]);
      if (i == j) anti -= id;
      worst = std::max(worst, anti.norm());
    }
  double vac = 0.0;
  for (int j = 0; j < n; ++j) vac = std::max(vac, fs.apply_a(j, fs.vacuum()).norm());
  return {check_le("car_anticommutators", worst, 1e-13),
          check_le("car_vacuum_annihilated", vac, 1e-15)};
}

// 2. Wick theorem on 20 random pure quasifree states, n = 4, plus detector
std::vector<CheckResult> criterion_wick() {
  Grid g(4, 1, 2.0 * M_PI);
  return wick_suite(g, 20, 1001, 1e-10, 1e-3);
}

// 3. quasifree reduction theorem, 10 paired + 5 Slater, interacting V
std::vector<CheckResult> criterion_reduction() {
  Grid g(4, 1, 2.0 * M_PI);
  const PairPotential v = potential_gaussian(g, 0.8, 1.0);
  return reduction_suite(g, g.kinetic_matrix(), v, 10, 5, 2002, 1e-9);
}

// 4. tangent-space projections: idempotent, HS-self-adjoint, stated ranges
std::vector<CheckResult> criterion_projections() {
  Grid g3(3, 1, 2.0 * M_PI);
  Grid g4(4, 1, 2.0 * M_PI);
  auto a = projection_suite(g3, 3003, 1e-11);
  auto b = projection_suite(g4, 3004, 1e-11);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// 5. conservation laws on the n = 8 lattice with co-integrated propagator
std::vector<CheckResult> criterion_conservation() {
  Grid g(8, 1, 2.0 * M_PI);
  const PairPotential v = potential_yukawa(g, 0.6, 0.9);
  const BdGState w0 = random_paired(g, 5005);
  IntegrateOptions opts;
  opts.t_final = 1.0;
  opts.dt = 1e-3;
  opts.with_propagator = true;
  opts.record_stride = 200;
  const Trajectory tr = integrate(g, w0, g.kinetic_matrix(), v, opts);
  const DriftReport d = trajectory_drifts(tr);
  const double e0 = std::abs(tr.points.front().energy);
  return {check_le("tr_gamma_drift", d.tr_gamma, 1e-8 * g.n()),
          check_le("energy_drift", d.energy, 1e-6 * (1.0 + e0)),
          check_le("spectrum_drift", d.spectrum, 1e-6),
          check_le("purity_drift", d.purity, 1e-6),
          check_le("unitarity_residual", d.unitarity, 1e-6),
          check_le("reconstruction_residual", d.reconstruction, 1e-6)};
}

// 6. short-time optimality: BdG vs exact many-body gamma in trace norm
std::vector<CheckResult> criterion_short_time() {
  Grid g(4, 1, 2.0 * M_PI);
  const Mat h = g.kinetic_matrix();
  const PairPotential v = potential_gaussian(g, 0.8, 1.0);
  FockSpace fs(4);
  const SpMat H = build_h_many_body(fs, g, h, v).H;
  const Vec psi0 = quasifree_vector(fs, assemble(random_paired(g, 6006)));
  const ReducedDensities red0 = reduce(fs, psi0);
  const BdGState w0{red0.gamma, red0.alpha};
  auto err = [&](double t) {
    IntegrateOptions opts;
    opts.t_final = t;
    opts.dt = 1e-4;
    const Trajectory tr = integrate(g, w0, h, v, opts);
    const ReducedDensities red = reduce(fs, exact_evolve(fs, H, psi0, t));
    return trace_norm(tr.states.back().gamma - red.gamma);
  };
  const double ratio = err(0.04) / err(0.02);
  std::vector<CheckResult> out;
  out.push_back(check_le("o_t2_ratio_upper", ratio, 4.5));
  out.push_back(check_gt("o_t2_ratio_lower", ratio, 3.5));
  return out;
}

// 7. Picard mild solver: contraction, rk4 agreement, blow-up detection
std::vector<CheckResult> criterion_picard() {
  Grid g(4, 1, 2.0 * M_PI);
  const PairPotential v = potential_gaussian(g, 2.5, 1.0);
  const BdGState w0 = random_paired(g, 7007);
  std::vector<CheckResult> out;

  const PicardResult r = picard_solve(g, w0, v, 0.05, 64, 1e-10, 30);
  out.push_back(check_le("picard_contraction", r.report.contraction, 1.0));
  out.push_back(CheckResult{"picard_converged", r.report.converged ? 0.0 : 1.0, 0.5,
                            r.report.converged});

  IntegrateOptions opts;
  opts.t_final = 0.05;
  opts.dt = 1e-4;
  const Trajectory ref = integrate(g, w0, g.kinetic_matrix(), v, opts);
  const double agree = s1s2_norm(r.states.back().gamma - ref.states.back().gamma,
                                 r.states.back().alpha - ref.states.back().alpha);
  out.push_back(check_le("picard_rk4_agreement", agree, 1e-6));

  bool raised = false;
  try {
    picard_solve(g, w0, v, 0.05 * 50.0, 64, 1e-10, 30);
  } catch (const NoContraction&) {
    raised = true;
  }
  out.push_back(CheckResult{"picard_no_contraction_raised", raised ? 0.0 : 1.0, 0.5,
                            raised});
  return out;
}

// 8. interaction-estimate lemmas (100 instances each) and pull-through identity
std::vector<CheckResult> criterion_estimates() {
  Grid g(8, 1, 2.0 * M_PI);
  const PairPotential v = potential_yukawa(g, 0.9, 0.8);
  auto out = estimates_suite(g, v, 100, 8008);
  auto pt = pull_through_suite(g, 8009, 1e-12);
  out.insert(out.end(), pt.begin(), pt.end());
  return out;
}

// 9. energy-space control on 200 random admissible states
std::vector<CheckResult> criterion_energy_bounds() {
  Grid g(6, 1, 2.0 * M_PI);
  const PairPotential v = potential_gaussian(g, 0.8, 1.0);
  return energy_bound_suite(g, v, 200, 9009);
}

// 10. cutoff regularization: consistency, monotone sweep, full-cutoff limit
std::vector<CheckResult> criterion_cutoff() {
  Grid g(4, 1, 2.0 * M_PI);
  const Mat h = g.kinetic_matrix();
  const PairPotential v = potential_gaussian(g, 0.5, 1.0);
  const BdGState w0 = random_paired(g, 1010);
  IntegrateOptions opts;
  opts.t_final = 0.5;
  opts.dt = 1e-3;
  const Trajectory ref = integrate(g, w0, h, v, opts);

  std::set<double> levels(g.ksq().data(), g.ksq().data() + g.n());
  double worst_consistency = 0.0, monotone_violation = 0.0, prev = -1.0, last = 0.0;
  for (double l : levels) {
    const Trajectory t = cutoff_evolve(g, w0, h, v, l + 1e-9, opts);
    for (const auto& p : t.points)
      worst_consistency = std::max(worst_consistency, p.cutoff_residual);
    last = s1s2_norm(t.states.back().gamma - ref.states.back().gamma,
                     t.states.back().alpha - ref.states.back().alpha);
    if (prev >= 0.0) monotone_violation = std::max(monotone_violation, last - prev);
    prev = last;
  }
  return {check_le("cutoff_consistency", worst_consistency, 1e-9),
          check_le("cutoff_monotone_violation", monotone_violation, 0.0),
          check_le("cutoff_full_lambda_error", last, 1e-8)};
}

// 11. bosonic HFB: dual formulas, conserved quantities, tangent orthogonality
std::vector<CheckResult> criterion_bose() {
  Grid g(4, 1, 2.0 * M_PI);
  const Mat h = g.kinetic_matrix();
  const PairPotential v = potential_gaussian(g, 0.5, 1.0);
  std::mt19937_64 rng(1111);
  HFBState s0;
  s0.alpha_t = random_symmetric(g.n(), rng, 0.35);
  s0.gamma_t = gamma_from_alpha(s0.alpha_t);
  s0.phi = 0.8 * random_vector(g.n(), rng);

  HFBIntegrateOptions opts;
  opts.t_final = 1.0;
  opts.dt = 1e-3;
  opts.record_stride = 100;  // ten interior sample times
  const HFBTrajectory tr = integrate_hfb(g, s0, h, v, opts);

  double drift_n = 0.0, drift_p = 0.0, dual = 0.0, ortho = 0.0;
  for (const auto& p : tr.points) {
    drift_n = std::max(drift_n, std::abs(p.total_n - tr.points.front().total_n));
    drift_p = std::max(drift_p,
                       std::abs(p.purity_quantity - tr.points.front().purity_quantity));
  }
  const int n = g.n();
  for (const HFBState& s : tr.states) {
    const HFBDeriv d = hfb_rhs(g, s, h, v);
    const Mat sym = hfb_rhs_symplectic(g, s, h, v);
    dual = std::max({dual, (sym.topLeftCorner(n, n) - d.dgamma_t).norm(),
                     (sym.topRightCorner(n, n) - d.dalpha_t).norm()});
    Mat dgt(2 * n, 2 * n);
    dgt.topLeftCorner(n, n) = d.dgamma_t;
    dgt.topRightCorner(n, n) = d.dalpha_t;
    dgt.bottomLeftCorner(n, n) = d.dalpha_t.conjugate();
    dgt.bottomRightCorner(n, n) = d.dgamma_t.conjugate();
    const Mat gt = assemble_bosonic(s.gamma_t, s.alpha_t);
    for (int t = 0; t < 20; ++t) {
      const Mat b = random_normal_input(n, rng);
      const Mat a = bosonic_normal_component(gt, b, 1e-6);
      ortho = std::max(ortho, std::abs((a.adjoint() * dgt).trace().real()) /
                                  (1.0 + a.norm() * dgt.norm()));
    }
  }
  return {check_le("bose_dual_form_agreement", dual, 1e-11),
          check_le("bose_total_n_drift", drift_n, 1e-6),
          check_le("bose_purity_drift", drift_p, 1e-6),
          check_le("bose_tangent_orthogonality", ortho, 1e-9)};
}

// 12. CLI reproducibility and the exit-code contract
std::vector<CheckResult> criterion_cli() {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "qfr_acceptance").string();
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::string valid = R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.6, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 12},
    "run": {"t_final": 0.1, "dt": 0.001, "with_propagator": true},
    "verify": ["conservation"]
  })";
  const std::string malformed = R"({
    "grid": {"n_per_dim": 1, "dim": 1, "box_length": 6.283185307179586},
    "statistics": "fermi",
    "run": {"t_final": 0.1, "dt": 0.001}
  })";
  const std::string violating = R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.6, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 12},
    "run": {"t_final": 0.05, "dt": 0.001},
    "verify": ["conservation"],
    "tolerances": {"energy_drift": 1e-30}
  })";
  write_text_file(dir + "/valid.json", valid);
  write_text_file(dir + "/malformed.json", malformed);
  write_text_file(dir + "/violating.json", violating);

  const int rc_a = run_scenario_file("evolve", dir + "/valid.json", dir + "/a");
  const int rc_b = run_scenario_file("evolve", dir + "/valid.json", dir + "/b");
  bool identical = rc_a == kExitOk && rc_b == kExitOk;
  for (const char* f : {"/trajectory.csv", "/summary.json", "/snapshot_final.json"})
    identical = identical && read_text_file(dir + "/a" + f) ==
                                 read_text_file(dir + "/b" + f);

  const int rc_bad = run_scenario_file("evolve", dir + "/malformed.json", dir + "/bad");
  const int rc_tol =
      run_scenario_file("evolve", dir + "/violating.json", dir + "/tol");

  return {CheckResult{"cli_byte_identical", identical ? 0.0 : 1.0, 0.5, identical},
          CheckResult{"cli_exit_valid", double(rc_a), 0.5, rc_a == kExitOk},
          CheckResult{"cli_exit_malformed", double(rc_bad), double(kExitValidation),
                      rc_bad == kExitValidation},
          CheckResult{"cli_exit_tolerance", double(rc_tol), double(kExitCheckFailed),
                      rc_tol == kExitCheckFailed}};
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run_criterion(1, "car_algebra", criterion_car);
  run_criterion(2, "wick_theorem", criterion_wick);
  run_criterion(3, "quasifree_reduction", criterion_reduction);
  run_criterion(4, "tangent_projections", criterion_projections);
  run_criterion(5, "conservation_laws", criterion_conservation);
  run_criterion(6, "short_time_optimality", criterion_short_time);
  run_criterion(7, "picard_mild_solver", criterion_picard);
  run_criterion(8, "estimate_lemmas", criterion_estimates);
  run_criterion(9, "energy_space_control", criterion_energy_bounds);
  run_criterion(10, "cutoff_regularization", criterion_cutoff);
  run_criterion(11, "bosonic_hfb", criterion_bose);
  run_criterion(12, "cli_contract", criterion_cli);
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
