#include "qf/fock.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "qf/dynamics_fermi.hpp"
#include "qf/geometry.hpp"

namespace qf {

namespace {

inline int parity_below(long m, int j) {
  return std::popcount(static_cast<unsigned long>(m) & ((1UL << j) - 1UL)) & 1;
}

inline double jw_sign(long m, int j) { return parity_below(m, j) ? -1.0 : 1.0; }

}  // namespace

FockSpace::FockSpace(int n_modes) : n_(n_modes) {
  if (n_modes < 1) throw ConfigError("fock: need at least one mode");
  if (n_modes > 12) throw TooManyModes("fock: more than 12 modes");
}

Vec FockSpace::vacuum() const {
  Vec v = Vec::Zero(dim());
  v(0) = 1.0;
  return v;
}

Vec FockSpace::apply_a(int j, const Vec& in) const {
  const long d = dim();
  const long bj = 1L << j;
  Vec out = Vec::Zero(d);
  for (long m = 0; m < d; ++m)
    if (m & bj) out(m ^ bj) = jw_sign(m, j) * in(m);
  return out;
}

Vec FockSpace::apply_adag(int j, const Vec& in) const {
  const long d = dim();
  const long bj = 1L << j;
  Vec out = Vec::Zero(d);
  for (long m = 0; m < d; ++m)
    if (!(m & bj)) out(m | bj) = jw_sign(m, j) * in(m);
  return out;
}

SpMat FockSpace::a_matrix(int j) const {
  const long d = dim();
  const long bj = 1L << j;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(d / 2);
  for (long m = 0; m < d; ++m)
    if (m & bj) trip.emplace_back(m ^ bj, m, jw_sign(m, j));
  SpMat s(d, d);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

SpMat FockSpace::adag_matrix(int j) const {
  return SpMat(a_matrix(j).adjoint());
}

SpMat FockSpace::number_matrix() const {
  const long d = dim();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(d);
  for (long m = 0; m < d; ++m)
    trip.emplace_back(m, m, static_cast<double>(std::popcount(static_cast<unsigned long>(m))));
  SpMat s(d, d);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

FockOperatorSet build_car(int n_modes) {
  FockSpace fs(n_modes);
  FockOperatorSet ops;
  ops.n_modes = n_modes;
  for (int j = 0; j < n_modes; ++j) {
    ops.a.push_back(fs.a_matrix(j));
    ops.adag.push_back(fs.adag_matrix(j));
  }
  ops.number = fs.number_matrix();
  return ops;
}

ManyBodyHamiltonian build_h_many_body(const FockSpace& fs, const Grid& grid,
                                      const Mat& h, const PairPotential& V) {
  const int n = fs.n_modes();
  if (h.rows() != n || grid.n() != n)
    throw DimensionMismatch("build_h_many_body: size mismatch");
  const long d = fs.dim();
  std::vector<Eigen::Triplet<cplx>> trip;
  const auto& disp = grid.disp_table();
  for (long m = 0; m < d; ++m) {
    // diagonal: occupied one-body energies plus the pair interaction
    cplx diag = 0.0;
    for (int x = 0; x < n; ++x) {
      if (!(m & (1L << x))) continue;
      diag += h(x, x);
      for (int y = 0; y < n; ++y)
        if (y != x && (m & (1L << y))) diag += 0.5 * V(disp(x, y));
    }
    if (diag != 0.0) trip.emplace_back(m, m, diag);
    // hopping a*_x a_y, x != y: source m, target m - y + x
    for (int y = 0; y < n; ++y) {
      if (!(m & (1L << y))) continue;
      const long m1 = m ^ (1L << y);
      const double sy = jw_sign(m, y);
      for (int x = 0; x < n; ++x) {
        if (x == y || (m1 & (1L << x))) continue;
        trip.emplace_back(m1 | (1L << x), m, h(x, y) * sy * jw_sign(m1, x));
      }
    }
  }
  SpMat H(d, d);
  H.setFromTriplets(trip.begin(), trip.end());
  return {H};
}

Vec apply_h_many_body(const FockSpace& fs, const Grid& grid, const Mat& h,
                      const PairPotential& V, const Vec& in, kernels::Exec exec) {
  const int n = fs.n_modes();
  const long d = fs.dim();
  const auto& disp = grid.disp_table();
  Vec out(d);
  auto row = [&](long m) {
    cplx acc = 0.0;
    cplx diag = 0.0;
    for (int x = 0; x < n; ++x) {
      if (!(m & (1L << x))) continue;
      diag += h(x, x);
      for (int y = 0; y < n; ++y)
        if (y != x && (m & (1L << y))) diag += 0.5 * V(disp(x, y));
    }
    acc = diag * in(m);
    // gather: <m| a*_x a_y |m''> with x in m, y not in m, m'' = m - x + y
    for (int x = 0; x < n; ++x) {
      if (!(m & (1L << x))) continue;
      const long m0 = m ^ (1L << x);
      const double sx = jw_sign(m0, x);
      for (int y = 0; y < n; ++y) {
        if (y == x || (m & (1L << y))) continue;
        acc += h(x, y) * sx * jw_sign(m0, y) * in(m0 | (1L << y));
      }
    }
    return acc;
  };
  if (exec == kernels::Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long m = 0; m < d; ++m) out(m) = row(m);
  } else {
    for (long m = 0; m < d; ++m) out(m) = row(m);
  }
  return out;
}

namespace {

// quadratic operator Q = sum A_ij a*_i a_j
//                      + 1/2 sum (B_ij a*_i a*_j + conj(B_ij) a_j a_i)
SpMat build_quadratic(const FockSpace& fs, const Mat& a, const Mat& b) {
  const int n = fs.n_modes();
  const long d = fs.dim();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (long m = 0; m < d; ++m) {
    cplx diag = 0.0;
    for (int x = 0; x < n; ++x)
      if (m & (1L << x)) diag += a(x, x);
    if (diag != 0.0) trip.emplace_back(m, m, diag);
    for (int y = 0; y < n; ++y) {
      const long by = 1L << y;
      if (m & by) {
        const long m1 = m ^ by;
        const double sy = jw_sign(m, y);
        // hopping a*_x a_y
        for (int x = 0; x < n; ++x) {
          if (x == y || (m1 & (1L << x))) continue;
          trip.emplace_back(m1 | (1L << x), m, a(x, y) * sy * jw_sign(m1, x));
        }
        // 1/2 conj(B_xy) a_y a_x  (x removed first)
        for (int x = 0; x < n; ++x) {
          if (x == y || !(m & (1L << x))) continue;
          const long m2 = m ^ (1L << x);
          trip.emplace_back(m2 ^ by, m,
                            0.5 * std::conj(b(x, y)) * jw_sign(m, x) * jw_sign(m2, y));
        }
      } else {
        // 1/2 B_xy a*_x a*_y  (y added first)
        const long m1 = m | by;
        const double sy = jw_sign(m, y);
        for (int x = 0; x < n; ++x) {
          if (x == y || (m1 & (1L << x))) continue;
          trip.emplace_back(m1 | (1L << x), m, 0.5 * b(x, y) * sy * jw_sign(m1, x));
        }
      }
    }
  }
  SpMat q(d, d);
  q.setFromTriplets(trip.begin(), trip.end());
  return q;
}

// smallest eigenpair by Lanczos with full reorthogonalization
std::pair<double, Vec> lanczos_ground(const SpMat& H, double gap_out[1]) {
  const long d = H.rows();
  const int kmax = std::min<long>(d, 90);
  std::vector<Vec> basis;
  Vec v = Vec::Zero(d);
  v(0) = 0.57;
  for (long i = 1; i < d; ++i) v(i) = std::cos(0.7 * i) / std::sqrt(double(d));
  v.normalize();
  Eigen::VectorXd alpha(kmax), beta(kmax);
  basis.push_back(v);
  Vec w;
  int k = 0;
  for (; k < kmax; ++k) {
    w = H * basis[k];
    alpha(k) = basis[k].dot(w).real();
    w -= alpha(k) * basis[k];
    if (k > 0) w -= beta(k - 1) * basis[k - 1];
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& u : basis) w -= u.dot(w) * u;
    beta(k) = w.norm();
    if (beta(k) < 1e-12) {
      ++k;
      break;
    }
    basis.push_back(w / beta(k));
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha(i);
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  gap_out[0] = k > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : 1e30;
  Vec ground = Vec::Zero(d);
  for (int i = 0; i < k; ++i) ground += es.eigenvectors()(i, 0) * basis[i];
  ground.normalize();
  return {es.eigenvalues()(0), ground};
}

}  // namespace

Vec quasifree_vector(const FockSpace& fs, const GeneralizedDensity& G,
                     double purity_tol) {
  const int n = fs.n_modes();
  if (G.n() != n) throw DimensionMismatch("quasifree_vector: size");
  if (std::abs(purity_defect(G)) > purity_tol)
    throw NotPure("quasifree_vector: Gamma is not pure quasifree");
  const BdGState w = extract(G);
  const Mat a = Mat::Identity(n, n) - 2.0 * w.gamma;
  const Mat b = -2.0 * w.alpha;
  const SpMat q = build_quadratic(fs, a, b);

  Vec psi;
  double gap = 0.0;
  if (fs.dim() <= 256) {
    const Mat qdense = Mat(q);
    Eigen::SelfAdjointEigenSolver<Mat> es(qdense);
    gap = es.eigenvalues()(1) - es.eigenvalues()(0);
    psi = es.eigenvectors().col(0);
  } else {
    double g[1];
    auto [e0, v] = lanczos_ground(q, g);
    (void)e0;
    gap = g[0];
    psi = v;
  }
  if (gap < 1e-8)
    throw DegenerateGroundState("quasifree_vector: Fock gap below 1e-8");

  const ReducedDensities red = reduce(fs, psi);
  if ((red.gamma - w.gamma).norm() + (red.alpha - w.alpha).norm() > 1e-8)
    throw NumericalError("quasifree_vector: reduce round-trip failed");
  return psi;
}

ReducedDensities reduce(const FockSpace& fs, const Vec& psi) {
  const int n = fs.n_modes();
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw NumericalError("reduce: state is not normalized");
  std::vector<Vec> apsi(n);
  for (int x = 0; x < n; ++x) apsi[x] = fs.apply_a(x, psi);
  ReducedDensities r;
  r.gamma = Mat(n, n);
  r.alpha = Mat(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      r.gamma(x, y) = apsi[y].dot(apsi[x]);           // <psi, a*_y a_x psi>
      r.alpha(x, y) = psi.dot(fs.apply_a(y, apsi[x]));  // <psi, a_y a_x psi>
    }
  r.gamma = 0.5 * (r.gamma + r.gamma.adjoint());
  r.alpha = 0.5 * (r.alpha - r.alpha.transpose());
  r.G = assemble(BdGState{r.gamma, r.alpha});
  return r;
}

Vec exact_evolve(const FockSpace& fs, const SpMat& H, const Vec& psi, double t) {
  const long d = fs.dim();
  if (H.rows() != d || psi.size() != d) throw DimensionMismatch("exact_evolve: size");
  if (d <= 256) {
    const Mat hdense = Mat(H);
    Eigen::SelfAdjointEigenSolver<Mat> es(hdense);
    Vec phases(d);
    for (long j = 0; j < d; ++j)
      phases(j) = std::exp(cplx(0.0, -es.eigenvalues()(j) * t));
    return es.eigenvectors() *
           (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
  }
  // Krylov propagation with full reorthogonalization and fixed substeps
  double hnorm = 0.0;
  for (long j = 0; j < d; ++j) hnorm = std::max(hnorm, std::abs(H.coeff(j, j)));
  const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(t) * (hnorm + 1.0) / 4.0)));
  const double tau = t / nsub;
  const int kdim = 48;
  Vec cur = psi;
  for (int s = 0; s < nsub; ++s) {
    std::vector<Vec> basis;
    Eigen::VectorXd alpha(kdim), beta(kdim);
    basis.push_back(cur.normalized());
    const double nrm = cur.norm();
    int k = 0;
    for (; k < kdim; ++k) {
      Vec w = H * basis[k];
      alpha(k) = basis[k].dot(w).real();
      w -= alpha(k) * basis[k];
      if (k > 0) w -= beta(k - 1) * basis[k - 1];
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& u : basis) w -= u.dot(w) * u;
      beta(k) = w.norm();
      if (beta(k) < 1e-13 || k + 1 == kdim) {
        ++k;
        break;
      }
      basis.push_back(w / beta(k));
    }
    Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      tm(i, i) = alpha(i);
      if (i + 1 < k) tm(i, i + 1) = tm(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tm);
    Eigen::VectorXcd small = Eigen::VectorXcd::Zero(k);
    for (int i = 0; i < k; ++i) {
      cplx c = 0.0;
      for (int j = 0; j < k; ++j)
        c += es.eigenvectors()(i, j) * std::exp(cplx(0.0, -es.eigenvalues()(j) * tau)) *
             es.eigenvectors()(0, j);
      small(i) = c;
    }
    Vec next = Vec::Zero(d);
    for (int i = 0; i < k; ++i) next += small(i) * basis[i];
    cur = nrm * next;
  }
  return cur;
}

WickResult wick_check(const FockSpace& fs, const Vec& psi,
                      const std::array<WickOp, 4>& ops) {
  auto apply = [&](const WickOp& op, const Vec& v) {
    return op.dagger ? fs.apply_adag(op.mode, v) : fs.apply_a(op.mode, v);
  };
  // lhs = <psi, O1 O2 O3 O4 psi>
  Vec v = apply(ops[3], psi);
  v = apply(ops[2], v);
  v = apply(ops[1], v);
  v = apply(ops[0], v);
  WickResult r;
  r.lhs = psi.dot(v);
  auto pair_exp = [&](int i, int j) {
    Vec u = apply(ops[j], psi);
    u = apply(ops[i], u);
    return psi.dot(u);
  };
  r.rhs = pair_exp(0, 1) * pair_exp(2, 3) - pair_exp(0, 2) * pair_exp(1, 3) +
          pair_exp(0, 3) * pair_exp(1, 2);
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

Mat mb_tangent(const FockSpace& fs, const Vec& psi, const SpMat& H) {
  const int n = fs.n_modes();
  const Vec phi = H * psi;
  // generalized annihilators over the standard basis: A(e_k) = a_k (k < n),
  // A(e_{n+k}) = a*_k
  std::vector<Vec> apsi(2 * n), aphi(2 * n);
  for (int k = 0; k < n; ++k) {
    apsi[k] = fs.apply_a(k, psi);
    apsi[n + k] = fs.apply_adag(k, psi);
    aphi[k] = fs.apply_a(k, phi);
    aphi[n + k] = fs.apply_adag(k, phi);
  }
  Mat xi(2 * n, 2 * n);
  for (int k = 0; k < 2 * n; ++k)
    for (int l = 0; l < 2 * n; ++l)
      xi(k, l) = -I_UNIT * (apsi[l].dot(aphi[k]) - aphi[l].dot(apsi[k]));
  return xi;
}

ReductionReport verify_reduction_theorem(const Grid& grid, const GeneralizedDensity& G,
                                         const Mat& h, const PairPotential& V) {
  const int n = grid.n();
  FockSpace fs(n);
  const Vec psi = quasifree_vector(fs, G);
  const SpMat H = build_h_many_body(fs, grid, h, V).H;
  const Mat xi_mb = mb_tangent(fs, psi, H);
  const Mat xi_proj = proj_quasifree(G, xi_mb);
  const BdGState w = extract(G);
  const Mat f = build_f(grid, h, V, w);
  const Mat xi_bdg = -I_UNIT * (f * G.Gamma - G.Gamma * f);
  ReductionReport rep;
  rep.gap_mb_proj = (xi_mb - xi_proj).norm();
  rep.gap_mb_bdg = (xi_mb - xi_bdg).norm();
  rep.gap_proj_bdg = (xi_proj - xi_bdg).norm();
  return rep;
}

}  // namespace qf
