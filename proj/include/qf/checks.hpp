#pragma once

#include <string>
#include <vector>

#include "qf/dynamics_fermi.hpp"
#include "qf/fock.hpp"
#include "qf/geometry.hpp"

namespace qf {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckResult check_le(const std::string& name, double residual, double tol) {
  return {name, residual, tol, residual <= tol};
}

inline CheckResult check_gt(const std::string& name, double value, double tol) {
  return {name, value, tol, value > tol};
}

// Wick theorem on random pure quasifree states: exhaustive 4-operator sweep
// (all mode tuples, all creation/annihilation patterns). Also runs the
// detector on a constructed non-quasifree particle-number superposition.
std::vector<CheckResult> wick_suite(const Grid& grid, int n_states,
                                    std::uint64_t seed, double tol,
                                    double detector_tol);

// three-way reduction-theorem agreement on paired and Slater states
std::vector<CheckResult> reduction_suite(const Grid& grid, const Mat& h,
                                         const PairPotential& V, int n_paired,
                                         int n_slater, std::uint64_t seed, double tol);

// idempotence, HS-self-adjointness (via vectorization over a Hermitian basis),
// commutation and range characterization of the tangent projections
std::vector<CheckResult> projection_suite(const Grid& grid, std::uint64_t seed,
                                          double tol);

// operator-inequality lemmas with the lattice C_V: interaction estimates,
// H^1 sandwich, trace-norm domination, quadratic nonlinearity bounds
std::vector<CheckResult> estimates_suite(const Grid& grid, const PairPotential& V,
                                         int n_samples, std::uint64_t seed);

// pull-through identity on band-limited inputs (the identity requires the
// momentum supports to stay inside the Brillouin zone; see README)
std::vector<CheckResult> pull_through_suite(const Grid& grid, std::uint64_t seed,
                                            double tol);

// crude energy-space bounds and the Y1 control estimate on admissible states
std::vector<CheckResult> energy_bound_suite(const Grid& grid, const PairPotential& V,
                                            int n_samples, std::uint64_t seed);

// conservation drifts extracted from a trajectory
struct DriftReport {
  double tr_gamma = 0.0;
  double energy = 0.0;
  double spectrum = 0.0;
  double purity = 0.0;
  double unitarity = 0.0;
  double reconstruction = 0.0;
};

DriftReport trajectory_drifts(const Trajectory& traj);

}  // namespace qf
