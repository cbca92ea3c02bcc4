#pragma once

#include "qf/kernels.hpp"
#include "qf/types.hpp"

namespace qf {

enum class OperatorRole { kinetic, multiplier, mean_field, generic };

struct OneBodyOperator {
  Mat matrix;
  OperatorRole role = OperatorRole::generic;
};

inline OneBodyOperator build_kinetic(const Grid& grid) {
  return {grid.kinetic_matrix(), OperatorRole::kinetic};
}

inline OneBodyOperator build_multiplier(const Grid& grid) {
  return {grid.multiplier_matrix(), OperatorRole::multiplier};
}

struct MeanFieldOps {
  RVec direct;        // (V * rho_gamma)(x), a multiplication operator
  Mat exchange;       // X_V(gamma)(x,y) = V(x-y) gamma(x,y)
  Mat pairing_field;  // Pi_V(alpha)(x,y) = V(x-y) alpha(x,y)
};

inline MeanFieldOps mean_field_ops(const Grid& grid, const Mat& gamma, const Mat& alpha,
                                   const PairPotential& V) {
  if (gamma.rows() != grid.n() || gamma.cols() != grid.n() ||
      alpha.rows() != grid.n() || alpha.cols() != grid.n())
    throw DimensionMismatch("mean_field_ops: size");
  MeanFieldOps ops;
  RVec rho(grid.n());
  for (int x = 0; x < grid.n(); ++x) rho(x) = gamma(x, x).real();
  ops.direct = kernels::convolve_density(grid, V, rho);
  ops.exchange = kernels::hadamard_disp(grid, V, gamma);
  ops.pairing_field = kernels::hadamard_disp(grid, V, alpha);
  return ops;
}

inline Mat direct_operator(const Grid& grid, const Mat& gamma, const PairPotential& V) {
  RVec rho(grid.n());
  for (int x = 0; x < grid.n(); ++x) rho(x) = gamma(x, x).real();
  return kernels::convolve_density(grid, V, rho).cast<cplx>().asDiagonal();
}

// mean-field part V*rho_gamma - X_V(gamma) of the Hartree-Fock operator
inline Mat script_v(const Grid& grid, const Mat& gamma, const PairPotential& V) {
  return direct_operator(grid, gamma, V) - kernels::hadamard_disp(grid, V, gamma);
}

inline Mat pi_v(const Grid& grid, const Mat& alpha, const PairPotential& V) {
  return kernels::hadamard_disp(grid, V, alpha);
}

inline Mat h_hf(const Grid& grid, const Mat& h, const Mat& gamma,
                const PairPotential& V) {
  return h + script_v(grid, gamma, V);
}

// bosonic variant, exchange enters with the opposite sign
inline Mat h_hfb(const Grid& grid, const Mat& h, const Mat& gamma,
                 const PairPotential& V) {
  return h + direct_operator(grid, gamma, V) + kernels::hadamard_disp(grid, V, gamma);
}

}  // namespace qf
