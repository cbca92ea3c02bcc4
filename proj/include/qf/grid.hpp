#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "qf/types.hpp"

namespace qf {

// Finite periodic lattice with n_per_dim sites per dimension. Momenta follow
// the FFT convention k_int in {0, 1, ..., ceil(n/2)-1, -floor(n/2), ..., -1}
// (negative frequencies in the upper half of the index range), scaled by
// 2*pi/box_length. Units: hbar = 1, 2m = 1, so the kinetic symbol is |k|^2.
class Grid {
 public:
  Grid(int n_per_dim, int dim, double box_length);

  int n_per_dim() const { return n_per_dim_; }
  int dim() const { return dim_; }
  double box_length() const { return box_length_; }
  int n() const { return n_; }
  double spacing() const { return box_length_ / n_per_dim_; }

  // momentum vector of mode p (length dim), |k|^2, position of site x
  const RMat& kvecs() const { return kvecs_; }
  double ksq(int p) const { return ksq_(p); }
  const RVec& ksq() const { return ksq_; }
  double kcomp(int p, int j) const { return kvecs_(p, j); }

  // unitary discrete Fourier transform, F(p, x) = exp(-i k_p . x) / sqrt(n)
  const Mat& fourier() const { return fourier_; }

  // site index of the displacement (x - y) mod n_per_dim, per dimension
  int disp_index(int x, int y) const { return disp_(x, y); }
  const Eigen::MatrixXi& disp_table() const { return disp_; }
  // site index of -r for displacement index r
  int neg_index(int r) const { return neg_[r]; }

  // multi-index of site s in each dimension
  std::array<int, 3> coords(int s) const;

  // minimal-image Euclidean distance (length units) for displacement index r
  double min_image_dist(int r) const { return dist_[r]; }

  // diagonal momentum-space multipliers lifted to position space
  Mat momentum_multiplier(const RVec& symbol) const;
  Mat kinetic_matrix() const { return momentum_multiplier(ksq_); }
  Mat multiplier_matrix() const;               // M = (1 - Delta)^{1/2}
  Mat inv_multiplier_matrix() const;           // M^{-1}
  Mat derivative_matrix(int j) const;          // i k_j
  Mat momentum_projector(double lambda) const; // indicator(|k|^2 < lambda)

 private:
  int n_per_dim_, dim_, n_;
  double box_length_;
  RMat kvecs_;
  RVec ksq_;
  Mat fourier_;
  Eigen::MatrixXi disp_;
  std::vector<int> neg_;
  std::vector<double> dist_;
};

inline Grid build_grid(int n_per_dim, int dim, double box_length) {
  return Grid(n_per_dim, dim, box_length);
}

}  // namespace qf
