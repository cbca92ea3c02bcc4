#include "qf/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <vector>

namespace qf {

Mat jconj(const Mat& a) {
  const int n = static_cast<int>(a.rows()) / 2;
  Mat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a.bottomRightCorner(n, n).conjugate();
  out.topRightCorner(n, n) = a.bottomLeftCorner(n, n).conjugate();
  out.bottomLeftCorner(n, n) = a.topRightCorner(n, n).conjugate();
  out.bottomRightCorner(n, n) = a.topLeftCorner(n, n).conjugate();
  return out;
}

Mat gamma_vacuum(int n) {
  Mat g = Mat::Zero(2 * n, 2 * n);
  g.bottomRightCorner(n, n) = Mat::Identity(n, n);
  return g;
}

void validate_bdg(const BdGState& state, double tol) {
  const int n = state.n();
  if (state.alpha.rows() != n || state.alpha.cols() != n || state.gamma.cols() != n)
    throw DimensionMismatch("bdg state: gamma/alpha size mismatch");
  if ((state.gamma - state.gamma.adjoint()).norm() > tol)
    throw NumericalError("bdg state: gamma not Hermitian");
  if ((state.alpha + state.alpha.transpose()).norm() > tol)
    throw NumericalError("bdg state: alpha not antisymmetric");
}

GeneralizedDensity assemble(const BdGState& state) {
  validate_bdg(state);
  const int n = state.n();
  Mat g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = state.gamma;
  g.topRightCorner(n, n) = state.alpha;
  g.bottomLeftCorner(n, n) = -state.alpha.conjugate();
  g.bottomRightCorner(n, n) = Mat::Identity(n, n) - state.gamma.conjugate();
  return {g};
}

BdGState extract(const GeneralizedDensity& G) {
  const int n = G.n();
  return {G.Gamma.topLeftCorner(n, n), G.Gamma.topRightCorner(n, n)};
}

double purity_defect(const GeneralizedDensity& G) {
  return ((G.Gamma * G.Gamma).trace() - G.Gamma.trace()).real();
}

ConstraintReport constraint_report(const GeneralizedDensity& G) {
  const int n = G.n();
  ConstraintReport r;
  r.block_residual = (G.Gamma + jconj(G.Gamma) - Mat::Identity(2 * n, 2 * n)).norm();
  r.hermiticity_residual = (G.Gamma - G.Gamma.adjoint()).norm();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (G.Gamma + G.Gamma.adjoint()),
                                        Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  r.positivity_violation = std::max({0.0, -lmin, lmax - 1.0});
  r.purity_defect = purity_defect(G);
  const BdGState w = extract(G);
  r.quasifree_residual_1 =
      (w.gamma * w.gamma - w.gamma - w.alpha * w.alpha.conjugate()).norm();
  r.quasifree_residual_2 =
      (w.alpha.conjugate() * w.gamma - w.gamma.conjugate() * w.alpha.conjugate()).norm();
  return r;
}

BogoliubovMap bogoliubov_diagonalize(const GeneralizedDensity& G, double tol) {
  const int n = G.n();
  const Mat& g = G.Gamma;
  if (std::abs(purity_defect(G)) > tol)
    throw NotPure("bogoliubov_diagonalize: purity defect above tolerance");

  // pivoted double-pass Gram-Schmidt on the columns of Gamma gives a
  // deterministic orthonormal basis of the 1-eigenspace (= ran Gamma)
  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.col(a).norm() > g.col(b).norm(); });

  Mat w(2 * n, n);
  int found = 0;
  for (int idx : order) {
    if (found == n) break;
    Vec v = g.col(idx);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < found; ++j) v -= w.col(j).dot(v) * w.col(j);
    const double nv = v.norm();
    if (nv < 1e-7) continue;
    w.col(found++) = v / nv;
  }
  if (found < n)
    throw NotPure("bogoliubov_diagonalize: rank of Gamma is not n");

  Mat V(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    // J w is an eigenvector with eigenvalue 0
    V.col(j).head(n) = w.col(j).tail(n).conjugate();
    V.col(j).tail(n) = w.col(j).head(n).conjugate();
    V.col(n + j) = w.col(j);
  }
  return {V};
}

namespace {

std::normal_distribution<double> g_normal(0.0, 1.0);

Mat random_complex(int rows, int cols, std::mt19937_64& rng, double scale) {
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      a(i, j) = scale * cplx(g_normal(rng), g_normal(rng)) / std::sqrt(2.0);
  return a;
}

}  // namespace

Mat random_hermitian(int n, std::mt19937_64& rng, double scale) {
  Mat a = random_complex(n, n, rng, scale);
  return 0.5 * (a + a.adjoint());
}

Mat random_antisymmetric(int n, std::mt19937_64& rng, double scale) {
  Mat a = random_complex(n, n, rng, scale);
  return 0.5 * (a - a.transpose());
}

Mat random_symmetric(int n, std::mt19937_64& rng, double scale) {
  Mat a = random_complex(n, n, rng, scale);
  return 0.5 * (a + a.transpose());
}

Vec random_vector(int n, std::mt19937_64& rng, double scale) {
  return random_complex(n, 1, rng, scale);
}

Mat random_j_unitary(int n, std::mt19937_64& rng, double scale) {
  Mat k(2 * n, 2 * n);
  const Mat a = random_hermitian(n, rng, scale);
  const Mat b = random_antisymmetric(n, rng, scale);
  k.topLeftCorner(n, n) = a;
  k.topRightCorner(n, n) = b;
  k.bottomLeftCorner(n, n) = b.adjoint();
  k.bottomRightCorner(n, n) = -a.conjugate();
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  Vec phases(2 * n);
  for (int j = 0; j < 2 * n; ++j)
    phases(j) = std::exp(cplx(0.0, -es.eigenvalues()(j)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

BdGState random_slater(const Grid& grid, int N, std::uint64_t seed) {
  const int n = grid.n();
  if (N < 0 || N > n) throw ConfigError("random_slater: N out of range");
  std::mt19937_64 rng(seed);
  if (N == 0) return {Mat::Zero(n, n), Mat::Zero(n, n)};
  Mat a = random_complex(n, N, rng, 1.0);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, N);
  Mat gamma = q * q.adjoint();
  return {0.5 * (gamma + gamma.adjoint()), Mat::Zero(n, n)};
}

BdGState random_paired(const Grid& grid, std::uint64_t seed, double scale) {
  const int n = grid.n();
  std::mt19937_64 rng(seed);
  const Mat v = random_j_unitary(n, rng, scale);
  GeneralizedDensity G{v * gamma_vacuum(n) * v.adjoint()};
  BdGState w = extract(G);
  // symmetrize away the last rounding in the structural identities
  w.gamma = 0.5 * (w.gamma + w.gamma.adjoint());
  w.alpha = 0.5 * (w.alpha - w.alpha.transpose());
  return w;
}

BdGState random_mixed(const Grid& grid, std::uint64_t seed, double scale) {
  const int n = grid.n();
  std::mt19937_64 rng(seed);
  const Mat v = random_j_unitary(n, rng, scale);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat d = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double occ = uni(rng);
    d(j, j) = occ;
    d(n + j, n + j) = 1.0 - occ;
  }
  GeneralizedDensity G{v * d * v.adjoint()};
  BdGState w = extract(G);
  w.gamma = 0.5 * (w.gamma + w.gamma.adjoint());
  w.alpha = 0.5 * (w.alpha - w.alpha.transpose());
  return w;
}

}  // namespace qf
