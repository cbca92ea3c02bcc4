#pragma once

#include <string>

#include "qf/grid.hpp"
#include "qf/types.hpp"

namespace qf {

// Even pair potential sampled on the displacement lattice, V(-r) = V(r).
struct PairPotential {
  RVec values;  // indexed by displacement site index

  double operator()(int r) const { return values(r); }
  int size() const { return static_cast<int>(values.size()); }
};

PairPotential make_potential(const Grid& grid, const RVec& values);

// Lattice-sampled closed-form profiles. `range` is a length, `reg` the
// regularization length used by the singular cores (default: one spacing).
PairPotential potential_zero(const Grid& grid);
PairPotential potential_onsite(const Grid& grid, double amplitude);
PairPotential potential_gaussian(const Grid& grid, double amplitude, double range);
PairPotential potential_yukawa(const Grid& grid, double amplitude, double range,
                               double reg = -1.0);
PairPotential potential_coulomb_regularized(const Grid& grid, double amplitude,
                                            double reg = -1.0);
PairPotential potential_by_name(const Grid& grid, const std::string& profile,
                                double amplitude, double range, double reg = -1.0);

// Band-limited even profile: keeps only Fourier modes with |k|^2 <= ksq_max.
PairPotential band_limit(const Grid& grid, const PairPotential& V, double ksq_max);

// Smallest C_V >= 0 with V^2 <= C_V^2 M^2 as an operator inequality, i.e. the
// square root of the largest eigenvalue of M^{-1} diag(V^2) M^{-1}.
double compute_cv(const Grid& grid, const PairPotential& V);

}  // namespace qf
