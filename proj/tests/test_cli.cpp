#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "qf/io.hpp"
#include "qf/scenario.hpp"
#include "qf/state.hpp"

using namespace qf;
namespace fs = std::filesystem;

namespace {

std::string tmpdir(const std::string& tag) {
  const std::string d = (fs::temp_directory_path() / ("qfr_test_" + tag)).string();
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string write_config(const std::string& dir, const std::string& body) {
  const std::string path = dir + "/config.json";
  write_text_file(path, body);
  return path;
}

}  // namespace

TEST_CASE("snapshot round-trip is bit-exact") {
  Grid g(4, 1, 2.0 * M_PI);
  const BdGState w = random_paired(g, 3);
  const std::string dir = tmpdir("snap");
  write_snapshot(dir + "/s.json", g, w.gamma, w.alpha);
  const Snapshot s = read_snapshot(dir + "/s.json");
  CHECK(s.n == 4);
  CHECK(s.dim == 1);
  CHECK(s.box_length == 2.0 * M_PI);
  CHECK((s.gamma - w.gamma).norm() == 0.0);
  CHECK((s.alpha - w.alpha).norm() == 0.0);

  // re-serialization byte-identical
  const std::string once = snapshot_to_json(g, w.gamma, w.alpha);
  const std::string twice = snapshot_to_json(g, s.gamma, s.alpha);
  CHECK(once == twice);
}

TEST_CASE("free evolution: energy column constant to 1e-12") {
  const std::string dir = tmpdir("free");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "zero"},
    "statistics": "fermi",
    "initial": {"kind": "slater", "N": 2, "seed": 5},
    "run": {"t_final": 0.2, "dt": 0.001},
    "verify": ["free_energy_constant"]
  })");
  CHECK(run_scenario_file("evolve", cfg, dir) == kExitOk);
  CHECK(fs::exists(dir + "/trajectory.csv"));
  CHECK(fs::exists(dir + "/summary.json"));
  CHECK(fs::exists(dir + "/snapshot_final.json"));
}

TEST_CASE("reproducibility: identical config gives byte-identical outputs") {
  const std::string dir = tmpdir("repro");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.6, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 11},
    "run": {"t_final": 0.1, "dt": 0.001, "with_propagator": true, "snapshot_stride": 50},
    "verify": ["conservation"]
  })");
  CHECK(run_scenario_file("evolve", cfg, dir + "/a") == kExitOk);
  CHECK(run_scenario_file("evolve", cfg, dir + "/b") == kExitOk);
  for (const char* f : {"/trajectory.csv", "/summary.json", "/snapshot_final.json",
                        "/snapshot_000000.json"}) {
    CHECK(read_text_file(dir + "/a" + f) == read_text_file(dir + "/b" + f));
  }
}

TEST_CASE("malformed grid: exit 2 and error.json names the field") {
  const std::string dir = tmpdir("bad");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 1, "dim": 1, "box_length": 6.283185307179586},
    "statistics": "fermi",
    "run": {"t_final": 0.1, "dt": 0.001}
  })");
  CHECK(run_scenario_file("evolve", cfg, dir) == kExitValidation);
  const std::string err = read_text_file(dir + "/error.json");
  CHECK(err.find("grid.n_per_dim") != std::string::npos);
}

TEST_CASE("unknown subcommand and unknown check: exit 2") {
  const std::string dir = tmpdir("unk");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "statistics": "fermi",
    "run": {"t_final": 0.1, "dt": 0.001}
  })");
  CHECK(run_scenario_file("frobnicate", cfg, dir) == kExitValidation);
  ScenarioConfig c = load_config(cfg);
  c.verify = {"definitely_not_a_check"};
  CHECK(run_scenario(std::string("evolve"), c, dir) == kExitValidation);
}

TEST_CASE("tolerance-violating config: exit 4 with failing check recorded") {
  const std::string dir = tmpdir("tolviol");
  // an impossible tolerance forces a check failure
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.6, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 11},
    "run": {"t_final": 0.05, "dt": 0.001},
    "verify": ["conservation"],
    "tolerances": {"energy_drift": 1e-30}
  })");
  CHECK(run_scenario_file("evolve", cfg, dir) == kExitCheckFailed);
  const std::string err = read_text_file(dir + "/error.json");
  CHECK(err.find("energy_drift") != std::string::npos);
  const std::string summary = read_text_file(dir + "/summary.json");
  CHECK(summary.find("\"pass\":false") != std::string::npos);
}

TEST_CASE("numerical failure: exit 3") {
  const std::string dir = tmpdir("num");
  // a violently attractive bosonic run focuses and goes non-finite
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "onsite", "amplitude": -500.0},
    "statistics": "bose",
    "initial": {"kind": "bogoliubov", "seed": 2, "condensate_amplitude": 10.0},
    "run": {"t_final": 5.0, "dt": 0.05}
  })");
  const int rc = run_scenario_file("bose-evolve", cfg, dir);
  CHECK(rc == kExitNumerical);
  CHECK(read_text_file(dir + "/error.json").find("NumericalError") != std::string::npos);
}

TEST_CASE("verify subcommand on n = 4: wick + reduction + projections pass") {
  const std::string dir = tmpdir("verify");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.7, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 1},
    "run": {"t_final": 0.1, "dt": 0.001},
    "verify": ["reduction_theorem", "projections"]
  })");
  CHECK(run_scenario_file("verify", cfg, dir) == kExitOk);
  const std::string summary = read_text_file(dir + "/summary.json");
  CHECK(summary.find("reduction_three_way_gap") != std::string::npos);
  CHECK(summary.find("\"pass\":false") == std::string::npos);
}

TEST_CASE("verify rejects oracle checks beyond 12 modes") {
  const std::string dir = tmpdir("verify_big");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 16, "dim": 1, "box_length": 6.283185307179586},
    "statistics": "fermi",
    "run": {"t_final": 0.1, "dt": 0.001},
    "verify": ["wick"]
  })");
  CHECK(run_scenario_file("verify", cfg, dir) == kExitValidation);
}

TEST_CASE("picard subcommand") {
  const std::string dir = tmpdir("picard");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.4, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 7},
    "run": {"t_final": 1.0, "dt": 0.001,
            "picard": {"interval": 0.05, "quadrature_steps": 64, "tol": 1e-10}}
  })");
  CHECK(run_scenario_file("picard", cfg, dir) == kExitOk);
  const std::string summary = read_text_file(dir + "/summary.json");
  CHECK(summary.find("\"contraction\"") != std::string::npos);
  CHECK(summary.find("\"pass\":false") == std::string::npos);
}

TEST_CASE("cutoff-sweep subcommand: monotone table") {
  const std::string dir = tmpdir("sweep");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.5, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 13},
    "run": {"t_final": 0.5, "dt": 0.001}
  })");
  CHECK(run_scenario_file("cutoff-sweep", cfg, dir) == kExitOk);
  const std::string summary = read_text_file(dir + "/summary.json");
  CHECK(summary.find("cutoff_table") != std::string::npos);
}

TEST_CASE("norms subcommand: zero state reports zeros") {
  const std::string dir = tmpdir("norms");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.5, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "slater", "N": 0, "seed": 1},
    "run": {"t_final": 0.1, "dt": 0.001}
  })");
  CHECK(run_scenario_file("norms", cfg, dir) == kExitOk);
  const std::string summary = read_text_file(dir + "/summary.json");
  CHECK(summary.find("\"s1\":0") != std::string::npos);
  CHECK(summary.find("\"z1\":0") != std::string::npos);
}

TEST_CASE("bose-evolve subcommand with conservation checks") {
  const std::string dir = tmpdir("bose");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.5, "range": 1.0},
    "statistics": "bose",
    "initial": {"kind": "bogoliubov", "seed": 3, "condensate_amplitude": 0.8},
    "run": {"t_final": 0.5, "dt": 0.001},
    "verify": ["conservation", "dual_form"]
  })");
  CHECK(run_scenario_file("bose-evolve", cfg, dir) == kExitOk);
  const std::string head = read_text_file(dir + "/trajectory.csv").substr(0, 60);
  CHECK(head.find("t,total_N,energy_placeholder,purity_quantity,bog_residual") == 0);
}

TEST_CASE("initial.kind = file round-trips through a snapshot") {
  Grid g(4, 1, 2.0 * M_PI);
  const BdGState w = random_paired(g, 19);
  const std::string dir = tmpdir("fromfile");
  write_snapshot(dir + "/init.json", g, w.gamma, w.alpha);
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "zero"},
    "statistics": "fermi",
    "initial": {"kind": "file", "file": ")" + dir + R"(/init.json"},
    "run": {"t_final": 0.01, "dt": 0.001}
  })");
  CHECK(run_scenario_file("evolve", cfg, dir) == kExitOk);
}

TEST_CASE("evolve with the split scheme and with a spectral cutoff") {
  const std::string dir = tmpdir("split");
  const std::string cfg = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.6, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 11},
    "run": {"t_final": 0.1, "dt": 0.001, "scheme": "split"}
  })");
  CHECK(run_scenario_file("evolve", cfg, dir + "/s") == kExitOk);

  const std::string cfg2 = write_config(dir, R"({
    "grid": {"n_per_dim": 4, "dim": 1, "box_length": 6.283185307179586},
    "potential": {"profile": "gaussian", "amplitude": 0.6, "range": 1.0},
    "statistics": "fermi",
    "initial": {"kind": "paired", "seed": 11},
    "run": {"t_final": 0.1, "dt": 0.001, "cutoff": 1.5}
  })");
  CHECK(run_scenario_file("evolve", cfg2, dir + "/c") == kExitOk);
  const std::string summary = read_text_file(dir + "/c/summary.json");
  CHECK(summary.find("cutoff_consistency") != std::string::npos);
}
