#pragma once

#include <optional>
#include <vector>

#include "qf/meanfield.hpp"
#include "qf/norms.hpp"
#include "qf/state.hpp"

namespace qf {

// generalized Hartree-Fock operator [[h_HF, Pi_V(alpha)], [Pi_V(alpha)*, -conj(h_HF)]]
Mat build_f(const Grid& grid, const Mat& h, const PairPotential& V, const BdGState& w);

// Bogoliubov-de Gennes right-hand side d/dt (gamma, alpha)
BdGState rhs(const Grid& grid, const BdGState& w, const Mat& h, const PairPotential& V);

// same with every interaction block compressed by a momentum projector p
BdGState rhs_cutoff(const Grid& grid, const BdGState& w, const Mat& h,
                    const PairPotential& V, const Mat& p);

// quadratic nonlinearities K_1, K_2 and their polarizations
struct KPair {
  Mat k1;
  Mat k2;
};
KPair polarized_k(const Grid& grid, const BdGState& w1, const BdGState& w2,
                  const PairPotential& V);
KPair nonlinearity_k(const Grid& grid, const BdGState& w, const PairPotential& V);

double energy(const Grid& grid, const BdGState& w, const Mat& h, const PairPotential& V);
double potential_energy(const Grid& grid, const BdGState& w, const PairPotential& V);

// exact free flights of the linear part (h = -Delta)
Mat free_flight_gamma(const Grid& grid, const Mat& gamma, double t);
Mat free_flight_alpha_kinetic(const Grid& grid, const Mat& alpha, double t);
// one Strang step of the two-body propagator exp(-i hh t), hh = -D1 - D2 + V(x1-x2)
Mat two_body_strang_step(const Grid& grid, const PairPotential& V, const Mat& alpha,
                         double t);

struct TrajectoryPoint {
  double t = 0.0;
  double tr_gamma = 0.0;
  double energy = 0.0;
  double purity_defect = 0.0;
  double alpha_s2 = 0.0;
  RVec spectrum;            // sorted eigenvalues of Gamma
  double spec_drift = 0.0;  // max displacement against the initial spectrum
  std::optional<double> unitarity_residual;
  std::optional<double> reconstruction_residual;
  double cutoff_residual = 0.0;  // ||(1-P) omega|| + ||omega (1-P)||, cutoff runs only
};

enum class Scheme { rk4, split };

struct IntegrateOptions {
  double t_final = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::rk4;
  bool with_propagator = false;
  double positivity_guard = 1e-6;
  int record_stride = 1;  // diagnostics every step; states kept at this stride
};

struct Trajectory {
  std::vector<double> times;          // state snapshot times
  std::vector<BdGState> states;       // state snapshots (record_stride)
  std::vector<TrajectoryPoint> points;  // diagnostics, every step
  Mat propagator;                     // U(t_final, 0) if co-integrated
};

Trajectory integrate(const Grid& grid, const BdGState& w0, const Mat& h,
                     const PairPotential& V, const IntegrateOptions& opts);

Trajectory cutoff_evolve(const Grid& grid, const BdGState& w0, const Mat& h,
                         const PairPotential& V, double lambda,
                         const IntegrateOptions& opts);

struct PicardReport {
  double interval = 0.0;
  int iterations = 0;
  std::vector<double> diffs;  // successive Z-norm differences
  double contraction = 0.0;   // max observed ratio of successive differences
  bool converged = false;
};

struct PicardResult {
  std::vector<double> times;
  std::vector<BdGState> states;
  PicardReport report;
};

// fixed-point iteration of the Duhamel integral form on a uniform mesh;
// trapezoidal quadrature, free flights exact for gamma, Strang for alpha
PicardResult picard_solve(const Grid& grid, const BdGState& w0, const PairPotential& V,
                          double interval, int quadrature_steps, double tol,
                          int max_iter);

}  // namespace qf
