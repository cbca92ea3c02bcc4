#pragma once

#include <Eigen/SVD>

#include "qf/grid.hpp"
#include "qf/types.hpp"

namespace qf {

inline double hs_norm(const Mat& a) { return a.norm(); }

inline double trace_norm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

inline double op_norm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// two-body wave-function transform of an integral kernel,
// Ahat(p,q) = (1/n) sum_{x,y} e^{-i k_p x} e^{-i k_q y} A(x,y)
inline Mat kernel_fourier(const Grid& grid, const Mat& a) {
  return grid.fourier() * a * grid.fourier().transpose();
}

// H^1 kernel norm: sqrt( sum_{p,q} (1 + |p|^2 + |q|^2) |Ahat(p,q)|^2 )
inline double h1_kernel_norm(const Grid& grid, const Mat& a) {
  const Mat ahat = kernel_fourier(grid, a);
  double s = 0.0;
  for (int p = 0; p < grid.n(); ++p)
    for (int q = 0; q < grid.n(); ++q)
      s += (1.0 + grid.ksq(p) + grid.ksq(q)) * std::norm(ahat(p, q));
  return std::sqrt(s);
}

// Norms used by the fixed-point analysis. s1/s2 are the S1 x S2 components of
// the pair (gamma, alpha); y1, y2 the energy-space norms; z1 the norm used by
// the contraction argument.
struct NormReport {
  double s1 = 0.0;         // ||gamma||_S1
  double s2 = 0.0;         // ||alpha||_S2
  double h1_kernel = 0.0;  // H^1 kernel norm of alpha
  double y1 = 0.0;         // ||M gamma M||_S1
  double y2 = 0.0;         // H^1 kernel norm of alpha (the Y2 norm)
  double z1 = 0.0;         // ||M gamma||_S1 + ||gamma M||_S1
};

inline NormReport norms(const Grid& grid, const Mat& gamma, const Mat& alpha) {
  if (gamma.rows() != grid.n() || alpha.rows() != grid.n())
    throw DimensionMismatch("norms: size");
  const Mat m = grid.multiplier_matrix();
  NormReport r;
  r.s1 = trace_norm(gamma);
  r.s2 = hs_norm(alpha);
  r.h1_kernel = h1_kernel_norm(grid, alpha);
  r.y1 = trace_norm(m * gamma * m);
  r.y2 = r.h1_kernel;
  r.z1 = trace_norm(m * gamma) + trace_norm(gamma * m);
  return r;
}

inline double z_norm(const Grid& grid, const Mat& m, const Mat& gamma, const Mat& alpha) {
  return trace_norm(m * gamma) + trace_norm(gamma * m) + h1_kernel_norm(grid, alpha);
}

inline double s1s2_norm(const Mat& gamma, const Mat& alpha) {
  return trace_norm(gamma) + hs_norm(alpha);
}

}  // namespace qf
