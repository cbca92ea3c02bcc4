#pragma once

#include "qf/grid.hpp"
#include "qf/potential.hpp"
#include "qf/types.hpp"

namespace qf::kernels {

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path; the parallel path must produce bitwise-identical results
// (each output element is computed independently with a fixed-order inner
// loop), which the kernel tests assert.
enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec e);

// out(x,y) = V(x-y) * A(x,y); the X_V / Pi_V kernel
Mat hadamard_disp(const Grid& grid, const PairPotential& V, const Mat& A,
                  Exec exec = default_exec());

// out(x) = sum_y V(x-y) rho(y); the direct-term convolution
RVec convolve_density(const Grid& grid, const PairPotential& V, const RVec& rho,
                      Exec exec = default_exec());

// A(p,q) *= row(p) * col(q); two-body momentum phases
void scale_rows_cols(Mat& A, const Vec& row, const Vec& col,
                     Exec exec = default_exec());

// A(x,y) *= exp(-i * V(x-y) * t); two-body interaction phases
void interaction_phase(const Grid& grid, const PairPotential& V, double t, Mat& A,
                       Exec exec = default_exec());

// (1/2) sum_{x,y} V(x-y) [rho(x) rho(y) - |gamma(x,y)|^2 + |alpha(x,y)|^2]
double interaction_energy(const Grid& grid, const PairPotential& V, const Mat& gamma,
                          const Mat& alpha, Exec exec = default_exec());

}  // namespace qf::kernels
