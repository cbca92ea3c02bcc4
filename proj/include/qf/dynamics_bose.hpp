#pragma once

#include <vector>

#include "qf/geometry.hpp"
#include "qf/meanfield.hpp"
#include "qf/norms.hpp"
#include "qf/state.hpp"

namespace qf {

// Bosonic state: condensate phi plus truncated expectations (gamma_t, alpha_t);
// gamma_t Hermitian PSD, alpha_t symmetric.
struct HFBState {
  Vec phi;
  Mat gamma_t;
  Mat alpha_t;

  int n() const { return static_cast<int>(phi.size()); }
};

void validate_hfb(const HFBState& s, double tol = 1e-10);

// truncated generalized density [[gamma_t, alpha_t], [conj(alpha_t), 1 + conj(gamma_t)]]
Mat assemble_bosonic(const Mat& gamma_t, const Mat& alpha_t);

// h + V*rho_gamma + X_V(gamma); the exchange sign is opposite to the fermionic case
Mat hfb_mean_field(const Grid& grid, const Mat& h, const Mat& gamma,
                   const PairPotential& V);

// generalized operator [[h_HFB(gamma), Pi_V(alpha)], [Pi_V(alpha)*, +conj(h_HFB)]]
Mat build_g(const Grid& grid, const Mat& h, const Mat& gamma, const Mat& alpha,
            const PairPotential& V);

struct HFBDeriv {
  Vec dphi;
  Mat dgamma_t;
  Mat dalpha_t;
};

// Hartree-Fock-Bogoliubov equations with full densities gamma = gamma_t + |phi><phi|
// and pairing argument alpha_t + phi (x) phi
HFBDeriv hfb_rhs(const Grid& grid, const HFBState& s, const Mat& h,
                 const PairPotential& V);

// symplectic form of the (gamma_t, alpha_t) part: -i (S G Gamma_t - Gamma_t G S)
Mat hfb_rhs_symplectic(const Grid& grid, const HFBState& s, const Mat& h,
                       const PairPotential& V);

// graph formula: gamma_t = (sqrt(1 + 4 alpha conj(alpha)) - 1)/2; the result
// satisfies Gamma_t S Gamma_t = -Gamma_t
Mat gamma_from_alpha(const Mat& alpha_t);

struct BosonicInvariants {
  double total_n = 0.0;          // tr gamma_t + ||phi||^2
  double purity_quantity = 0.0;  // tr(P^2 - P), P = -Gamma_t S
  double bogoliubov_residual = 0.0;  // ||Gamma_t S Gamma_t + Gamma_t||_S2
  double purity_identity_residual = 0.0;  // vs 2 tr(gamma(1+gamma) - alpha conj(alpha))
};

BosonicInvariants bosonic_invariants(const HFBState& s);

struct HFBTrajectoryPoint {
  double t = 0.0;
  double total_n = 0.0;
  double purity_quantity = 0.0;
  double bogoliubov_residual = 0.0;
};

struct HFBTrajectory {
  std::vector<double> times;
  std::vector<HFBState> states;
  std::vector<HFBTrajectoryPoint> points;
};

struct HFBIntegrateOptions {
  double t_final = 1.0;
  double dt = 1e-3;
  int record_stride = 1;
};

HFBTrajectory integrate_hfb(const Grid& grid, const HFBState& s0, const Mat& h,
                            const PairPotential& V, const HFBIntegrateOptions& opts);

}  // namespace qf
