#include "qf/dynamics_bose.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qf {

void validate_hfb(const HFBState& s, double tol) {
  const int n = s.n();
  if (s.gamma_t.rows() != n || s.gamma_t.cols() != n || s.alpha_t.rows() != n ||
      s.alpha_t.cols() != n)
    throw DimensionMismatch("hfb state: size mismatch");
  if ((s.gamma_t - s.gamma_t.adjoint()).norm() > tol)
    throw NumericalError("hfb state: gamma_t not Hermitian");
  if ((s.alpha_t - s.alpha_t.transpose()).norm() > tol)
    throw NumericalError("hfb state: alpha_t not symmetric");
}

Mat assemble_bosonic(const Mat& gamma_t, const Mat& alpha_t) {
  const int n = static_cast<int>(gamma_t.rows());
  Mat g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = gamma_t;
  g.topRightCorner(n, n) = alpha_t;
  g.bottomLeftCorner(n, n) = alpha_t.conjugate();
  g.bottomRightCorner(n, n) = Mat::Identity(n, n) + gamma_t.conjugate();
  return g;
}

Mat hfb_mean_field(const Grid& grid, const Mat& h, const Mat& gamma,
                   const PairPotential& V) {
  return h_hfb(grid, h, gamma, V);
}

Mat build_g(const Grid& grid, const Mat& h, const Mat& gamma, const Mat& alpha,
            const PairPotential& V) {
  const int n = grid.n();
  const Mat hb = h_hfb(grid, h, gamma, V);
  const Mat pi = pi_v(grid, alpha, V);
  Mat g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = hb;
  g.topRightCorner(n, n) = pi;
  g.bottomLeftCorner(n, n) = pi.adjoint();
  g.bottomRightCorner(n, n) = hb.conjugate();
  return g;
}

HFBDeriv hfb_rhs(const Grid& grid, const HFBState& s, const Mat& h,
                 const PairPotential& V) {
  const int n = grid.n();
  if (h.rows() != n || s.n() != n) throw DimensionMismatch("hfb_rhs: size");
  const Mat gamma_full = s.gamma_t + s.phi * s.phi.adjoint();
  const Mat alpha_full = s.alpha_t + s.phi * s.phi.transpose();
  const Mat hb_trunc = h_hfb(grid, h, s.gamma_t, V);
  const Mat hb_full = h_hfb(grid, h, gamma_full, V);
  const Mat pi = pi_v(grid, alpha_full, V);
  HFBDeriv d;
  d.dphi = -I_UNIT * (hb_trunc * s.phi + pi * s.phi.conjugate());
  d.dgamma_t = -I_UNIT * (hb_full * s.gamma_t - s.gamma_t * hb_full +
                          pi * s.alpha_t.conjugate() - s.alpha_t * pi.adjoint());
  d.dalpha_t = -I_UNIT * (hb_full * s.alpha_t + s.alpha_t * hb_full.conjugate() +
                          pi * (Mat::Identity(n, n) + s.gamma_t.conjugate()) +
                          s.gamma_t * pi);
  return d;
}

Mat hfb_rhs_symplectic(const Grid& grid, const HFBState& s, const Mat& h,
                       const PairPotential& V) {
  const int n = grid.n();
  const Mat gamma_full = s.gamma_t + s.phi * s.phi.adjoint();
  const Mat alpha_full = s.alpha_t + s.phi * s.phi.transpose();
  const Mat g = build_g(grid, h, gamma_full, alpha_full, V);
  const Mat gt = assemble_bosonic(s.gamma_t, s.alpha_t);
  const Mat sm = bosonic_metric(n);
  return -I_UNIT * (sm * g * gt - gt * g * sm);
}

Mat gamma_from_alpha(const Mat& alpha_t) {
  const int n = static_cast<int>(alpha_t.rows());
  if ((alpha_t - alpha_t.transpose()).norm() > 1e-10)
    throw NumericalError("gamma_from_alpha: alpha_t not symmetric");
  const Mat prod = Mat::Identity(n, n) + 4.0 * alpha_t * alpha_t.conjugate();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (prod + prod.adjoint()));
  RVec roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Mat g = es.eigenvectors() * roots.asDiagonal().toDenseMatrix().cast<cplx>() *
          es.eigenvectors().adjoint();
  return 0.5 * (g - Mat::Identity(n, n));
}

BosonicInvariants bosonic_invariants(const HFBState& s) {
  const int n = s.n();
  const Mat gt = assemble_bosonic(s.gamma_t, s.alpha_t);
  const Mat sm = bosonic_metric(n);
  const Mat p = -gt * sm;
  BosonicInvariants inv;
  inv.total_n = s.gamma_t.trace().real() + s.phi.squaredNorm();
  inv.purity_quantity = ((p * p).trace() - p.trace()).real();
  inv.bogoliubov_residual = (gt * sm * gt + gt).norm();
  const double alt = 2.0 * (s.gamma_t * (Mat::Identity(n, n) + s.gamma_t) -
                            s.alpha_t * s.alpha_t.conjugate())
                               .trace()
                               .real();
  inv.purity_identity_residual = std::abs(inv.purity_quantity - alt);
  return inv;
}

namespace {

HFBState axpy(const HFBState& a, double c, const HFBDeriv& d) {
  return {a.phi + c * d.dphi, a.gamma_t + c * d.dgamma_t, a.alpha_t + c * d.dalpha_t};
}

}  // namespace

HFBTrajectory integrate_hfb(const Grid& grid, const HFBState& s0, const Mat& h,
                            const PairPotential& V, const HFBIntegrateOptions& opts) {
  if (!(opts.dt > 0.0) || !(opts.t_final > 0.0))
    throw ConfigError("integrate_hfb: dt and t_final must be > 0");
  validate_hfb(s0);
  const int nsteps = static_cast<int>(std::llround(opts.t_final / opts.dt));
  if (nsteps < 1) throw ConfigError("integrate_hfb: t_final < dt");
  const int stride = std::max(1, opts.record_stride);

  HFBTrajectory traj;
  HFBState s = s0;
  auto record = [&](int step, double t) {
    const BosonicInvariants inv = bosonic_invariants(s);
    traj.points.push_back({t, inv.total_n, inv.purity_quantity, inv.bogoliubov_residual});
    if (step % stride == 0 || step == nsteps) {
      traj.times.push_back(t);
      traj.states.push_back(s);
    }
  };
  record(0, 0.0);
  for (int step = 1; step <= nsteps; ++step) {
    const HFBDeriv k1 = hfb_rhs(grid, s, h, V);
    const HFBDeriv k2 = hfb_rhs(grid, axpy(s, 0.5 * opts.dt, k1), h, V);
    const HFBDeriv k3 = hfb_rhs(grid, axpy(s, 0.5 * opts.dt, k2), h, V);
    const HFBDeriv k4 = hfb_rhs(grid, axpy(s, opts.dt, k3), h, V);
    const double c = opts.dt / 6.0;
    s.phi += c * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
    s.gamma_t +=
        c * (k1.dgamma_t + 2.0 * k2.dgamma_t + 2.0 * k3.dgamma_t + k4.dgamma_t);
    s.alpha_t +=
        c * (k1.dalpha_t + 2.0 * k2.dalpha_t + 2.0 * k3.dalpha_t + k4.dalpha_t);
    if (!s.phi.allFinite() || !s.gamma_t.allFinite() || !s.alpha_t.allFinite())
      throw NonFinite("integrate_hfb: state became non-finite");
    record(step, step * opts.dt);
  }
  return traj;
}

}  // namespace qf
