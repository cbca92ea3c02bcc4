#pragma once

#include "qf/state.hpp"
#include "qf/types.hpp"

namespace qf {

// Tangent-space projections of the Dirac-Frenkel construction. All formulas
// are direct matrix products; purity of the base point is checked, not assumed.

inline void require_projector(const Mat& p, double tol, const char* who) {
  if ((p * p - p).norm() > tol) throw NotProjector(std::string(who) + ": gamma^2 != gamma");
}

inline void require_pure(const GeneralizedDensity& G, double tol, const char* who) {
  if (std::abs(purity_defect(G)) > tol)
    throw NotPure(std::string(who) + ": purity defect above tolerance");
}

// gamma A (1-gamma) + (1-gamma) A gamma = [[A, gamma], gamma]
inline Mat proj_nopairing(const Mat& gamma, const Mat& a, double tol = 1e-9) {
  require_projector(gamma, tol, "proj_nopairing");
  const Mat id = Mat::Identity(gamma.rows(), gamma.cols());
  return gamma * a * (id - gamma) + (id - gamma) * a * gamma;
}

inline Mat proj_aux(const GeneralizedDensity& G, const Mat& xi, double tol = 1e-8) {
  require_pure(G, tol, "proj_aux");
  const Mat id = Mat::Identity(G.Gamma.rows(), G.Gamma.cols());
  return G.Gamma * xi * (id - G.Gamma) + (id - G.Gamma) * xi * G.Gamma;
}

// (1/2)(Xi - J Xi J), the projection onto the block-structure tangent space
inline Mat proj_minus(const Mat& xi) { return 0.5 * (xi - jconj(xi)); }

// projection onto the tangent space of quasifree states,
// proj = proj_minus o proj_aux = proj_aux o proj_minus
inline Mat proj_quasifree(const GeneralizedDensity& G, const Mat& xi, double tol = 1e-8) {
  return proj_minus(proj_aux(G, xi, tol));
}

// --- bosonic side ---

inline Mat bosonic_metric(int n) {
  Mat s = Mat::Identity(2 * n, 2 * n);
  s.bottomRightCorner(n, n) *= -1.0;
  return s;
}

// normal element A = -(P* B P* + (1-P*) B (1-P*)) S with P = -Gamma S;
// input B must satisfy S B* S = B and B + J B J = 0. The output is Hermitian
// and J-symmetric (A = J A J), matching the affine constraint
// Gamma - J Gamma J = -S of the bosonic ambient space.
inline Mat bosonic_normal_component(const Mat& gamma_t, const Mat& b, double tol = 1e-9) {
  const int n2 = static_cast<int>(gamma_t.rows());
  const Mat s = bosonic_metric(n2 / 2);
  if ((gamma_t * s * gamma_t + gamma_t).norm() > tol * (1.0 + gamma_t.norm()))
    throw NotBosonicQuasifree("bosonic_normal_component: Gamma S Gamma != -Gamma");
  if ((s * b.adjoint() * s - b).norm() > 1e-10 * (1.0 + b.norm()) ||
      (b + jconj(b)).norm() > 1e-10 * (1.0 + b.norm()))
    throw ConfigError("bosonic_normal_component: B symmetry violated");
  const Mat p = -gamma_t * s;
  const Mat pa = p.adjoint();
  const Mat id = Mat::Identity(n2, n2);
  return -(pa * b * pa + (id - pa) * b * (id - pa)) * s;
}

// random element of the space the normal inputs live in:
// B = [[H, C], [-C*, -conj(H)]] with H Hermitian, C symmetric
inline Mat random_normal_input(int n, std::mt19937_64& rng, double scale = 1.0) {
  Mat b(2 * n, 2 * n);
  const Mat h = random_hermitian(n, rng, scale);
  const Mat c = random_symmetric(n, rng, scale);
  b.topLeftCorner(n, n) = h;
  b.topRightCorner(n, n) = c;
  b.bottomLeftCorner(n, n) = -c.adjoint();
  b.bottomRightCorner(n, n) = -h.conjugate();
  return b;
}

}  // namespace qf
