#include "qf/potential.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qf {

PairPotential make_potential(const Grid& grid, const RVec& values) {
  if (values.size() != grid.n()) throw DimensionMismatch("potential: wrong size");
  for (int r = 0; r < grid.n(); ++r) {
    if (std::abs(values(r) - values(grid.neg_index(r))) > 1e-12 * (1.0 + std::abs(values(r))))
      throw ConfigError("potential: V(-r) = V(r) violated");
    if (!std::isfinite(values(r))) throw ConfigError("potential: non-finite value");
  }
  return PairPotential{values};
}

PairPotential potential_zero(const Grid& grid) {
  return PairPotential{RVec::Zero(grid.n())};
}

PairPotential potential_onsite(const Grid& grid, double amplitude) {
  RVec v = RVec::Zero(grid.n());
  v(0) = amplitude;
  return PairPotential{v};
}

PairPotential potential_gaussian(const Grid& grid, double amplitude, double range) {
  if (!(range > 0.0)) throw ConfigError("potential: gaussian range must be > 0");
  RVec v(grid.n());
  for (int r = 0; r < grid.n(); ++r) {
    const double d = grid.min_image_dist(r);
    v(r) = amplitude * std::exp(-d * d / (2.0 * range * range));
  }
  return make_potential(grid, v);
}

PairPotential potential_yukawa(const Grid& grid, double amplitude, double range,
                               double reg) {
  if (!(range > 0.0)) throw ConfigError("potential: yukawa range must be > 0");
  if (reg <= 0.0) reg = grid.spacing();
  RVec v(grid.n());
  for (int r = 0; r < grid.n(); ++r) {
    const double d = grid.min_image_dist(r);
    v(r) = amplitude * std::exp(-d / range) / std::sqrt(d * d + reg * reg);
  }
  return make_potential(grid, v);
}

PairPotential potential_coulomb_regularized(const Grid& grid, double amplitude,
                                            double reg) {
  if (reg <= 0.0) reg = grid.spacing();
  RVec v(grid.n());
  for (int r = 0; r < grid.n(); ++r) {
    const double d = grid.min_image_dist(r);
    v(r) = amplitude / std::sqrt(d * d + reg * reg);
  }
  return make_potential(grid, v);
}

PairPotential potential_by_name(const Grid& grid, const std::string& profile,
                                double amplitude, double range, double reg) {
  if (profile == "zero") return potential_zero(grid);
  if (profile == "onsite") return potential_onsite(grid, amplitude);
  if (profile == "gaussian") return potential_gaussian(grid, amplitude, range);
  if (profile == "yukawa") return potential_yukawa(grid, amplitude, range, reg);
  if (profile == "coulomb_regularized")
    return potential_coulomb_regularized(grid, amplitude, reg);
  throw ConfigError("potential: unknown profile '" + profile + "'");
}

PairPotential band_limit(const Grid& grid, const PairPotential& V, double ksq_max) {
  // V(r) = sum_k Vhat(k) e^{i k r}; drop all modes above the band.
  const Mat& F = grid.fourier();
  Vec vals = V.values.cast<cplx>();
  Vec vhat = F * vals;
  for (int p = 0; p < grid.n(); ++p)
    if (grid.ksq(p) > ksq_max) vhat(p) = 0.0;
  Vec filtered = F.adjoint() * vhat;
  return make_potential(grid, filtered.real());
}

double compute_cv(const Grid& grid, const PairPotential& V) {
  const Mat minv = grid.inv_multiplier_matrix();
  const Mat a = minv * V.values.cwiseAbs2().asDiagonal() * minv;
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, lmax));
}

}  // namespace qf
