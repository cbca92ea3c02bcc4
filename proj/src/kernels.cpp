#include "qf/kernels.hpp"

#include <cmath>

namespace qf::kernels {

namespace {
Exec g_exec = Exec::parallel;
}

Exec default_exec() { return g_exec; }
void set_default_exec(Exec e) { g_exec = e; }

Mat hadamard_disp(const Grid& grid, const PairPotential& V, const Mat& A, Exec exec) {
  const int n = grid.n();
  if (A.rows() != n || A.cols() != n) throw DimensionMismatch("hadamard_disp: size");
  Mat out(n, n);
  const auto& disp = grid.disp_table();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) out(x, y) = V(disp(x, y)) * A(x, y);
  } else {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) out(x, y) = V(disp(x, y)) * A(x, y);
  }
  return out;
}

RVec convolve_density(const Grid& grid, const PairPotential& V, const RVec& rho,
                      Exec exec) {
  const int n = grid.n();
  if (rho.size() != n) throw DimensionMismatch("convolve_density: size");
  RVec out(n);
  const auto& disp = grid.disp_table();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int y = 0; y < n; ++y) s += V(disp(x, y)) * rho(y);
      out(x) = s;
    }
  } else {
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int y = 0; y < n; ++y) s += V(disp(x, y)) * rho(y);
      out(x) = s;
    }
  }
  return out;
}

void scale_rows_cols(Mat& A, const Vec& row, const Vec& col, Exec exec) {
  const int nr = static_cast<int>(A.rows());
  const int nc = static_cast<int>(A.cols());
  if (row.size() != nr || col.size() != nc)
    throw DimensionMismatch("scale_rows_cols: size");
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int p = 0; p < nr; ++p)
      for (int q = 0; q < nc; ++q) A(p, q) *= row(p) * col(q);
  } else {
    for (int p = 0; p < nr; ++p)
      for (int q = 0; q < nc; ++q) A(p, q) *= row(p) * col(q);
  }
}

void interaction_phase(const Grid& grid, const PairPotential& V, double t, Mat& A,
                       Exec exec) {
  const int n = grid.n();
  if (A.rows() != n || A.cols() != n) throw DimensionMismatch("interaction_phase: size");
  const auto& disp = grid.disp_table();
  // phases depend only on the displacement; precompute once
  Vec phase(n);
  for (int r = 0; r < n; ++r) phase(r) = std::exp(cplx(0.0, -V(r) * t));
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) A(x, y) *= phase(disp(x, y));
  } else {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) A(x, y) *= phase(disp(x, y));
  }
}

double interaction_energy(const Grid& grid, const PairPotential& V, const Mat& gamma,
                          const Mat& alpha, Exec exec) {
  const int n = grid.n();
  if (gamma.rows() != n || alpha.rows() != n)
    throw DimensionMismatch("interaction_energy: size");
  const auto& disp = grid.disp_table();
  RVec rho(n);
  for (int x = 0; x < n; ++x) rho(x) = gamma(x, x).real();
  RVec partial(n);
  // per-row partial sums are accumulated in a fixed order and then combined
  // sequentially, so the result is bitwise independent of the thread count
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int y = 0; y < n; ++y)
        s += V(disp(x, y)) *
             (rho(x) * rho(y) - std::norm(gamma(x, y)) + std::norm(alpha(x, y)));
      partial(x) = s;
    }
  } else {
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int y = 0; y < n; ++y)
        s += V(disp(x, y)) *
             (rho(x) * rho(y) - std::norm(gamma(x, y)) + std::norm(alpha(x, y)));
      partial(x) = s;
    }
  }
  double total = 0.0;
  for (int x = 0; x < n; ++x) total += partial(x);
  return 0.5 * total;
}

}  // namespace qf::kernels
