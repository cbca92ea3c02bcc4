#include "qf/dynamics_fermi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qf {

Mat build_f(const Grid& grid, const Mat& h, const PairPotential& V, const BdGState& w) {
  if (h.rows() != grid.n()) throw DimensionMismatch("build_f: h size");
  const int n = grid.n();
  const Mat hhf = h_hf(grid, h, w.gamma, V);
  const Mat pi = pi_v(grid, w.alpha, V);
  Mat f(2 * n, 2 * n);
  f.topLeftCorner(n, n) = hhf;
  f.topRightCorner(n, n) = pi;
  f.bottomLeftCorner(n, n) = pi.adjoint();
  f.bottomRightCorner(n, n) = -hhf.conjugate();
  return f;
}

BdGState rhs(const Grid& grid, const BdGState& w, const Mat& h, const PairPotential& V) {
  if (h.rows() != grid.n() || w.gamma.rows() != grid.n())
    throw DimensionMismatch("rhs: size");
  const Mat hhf = h_hf(grid, h, w.gamma, V);
  const Mat pi = pi_v(grid, w.alpha, V);
  const Mat ac = w.alpha.conjugate();
  const int n = grid.n();
  BdGState d;
  d.gamma = -I_UNIT * (hhf * w.gamma - w.gamma * hhf - pi * ac - w.alpha * pi.adjoint());
  d.alpha = -I_UNIT * (hhf * w.alpha + w.alpha * hhf.conjugate() +
                       pi * (Mat::Identity(n, n) - w.gamma.conjugate()) - w.gamma * pi);
  return d;
}

BdGState rhs_cutoff(const Grid& grid, const BdGState& w, const Mat& h,
                    const PairPotential& V, const Mat& p) {
  const int n = grid.n();
  const Mat hc = p * h_hf(grid, h, w.gamma, V) * p;
  const Mat pic = p * pi_v(grid, w.alpha, V) * p;
  const Mat ac = w.alpha.conjugate();
  BdGState d;
  d.gamma = -I_UNIT * (hc * w.gamma - w.gamma * hc - pic * ac - w.alpha * pic.adjoint());
  d.alpha = -I_UNIT * (hc * w.alpha + w.alpha * hc.conjugate() +
                       pic * (Mat::Identity(n, n) - w.gamma.conjugate()) - w.gamma * pic);
  return d;
}

KPair polarized_k(const Grid& grid, const BdGState& w1, const BdGState& w2,
                  const PairPotential& V) {
  if (w1.gamma.rows() != grid.n() || w2.gamma.rows() != grid.n())
    throw DimensionMismatch("polarized_k: size");
  const Mat v1 = script_v(grid, w1.gamma, V);
  const Mat v1c = script_v(grid, w1.gamma.conjugate(), V);
  const Mat pi1 = pi_v(grid, w1.alpha, V);
  const Mat pi1c = pi_v(grid, w1.alpha.conjugate(), V);
  const Mat pi2 = pi_v(grid, w2.alpha, V);
  KPair k;
  k.k1 = v1 * w2.gamma - w2.gamma * v1 - pi1 * w2.alpha.conjugate() + w2.alpha * pi1c;
  k.k2 = v1 * w2.alpha + w2.alpha * v1c - w1.gamma * pi2 - pi2 * w1.gamma.conjugate();
  return k;
}

KPair nonlinearity_k(const Grid& grid, const BdGState& w, const PairPotential& V) {
  return polarized_k(grid, w, w, V);
}

double energy(const Grid& grid, const BdGState& w, const Mat& h, const PairPotential& V) {
  const double kin = (h * w.gamma).trace().real();
  return kin + kernels::interaction_energy(grid, V, w.gamma, w.alpha);
}

double potential_energy(const Grid& grid, const BdGState& w, const PairPotential& V) {
  const Mat dir = direct_operator(grid, w.gamma, V);
  const Mat xv = kernels::hadamard_disp(grid, V, w.gamma);
  const Mat piv = pi_v(grid, w.alpha, V);
  const cplx t = (dir * w.gamma).trace() - (w.gamma.adjoint() * xv).trace() +
                 (w.alpha.adjoint() * piv).trace();
  return 0.5 * t.real();
}

Mat free_flight_gamma(const Grid& grid, const Mat& gamma, double t) {
  // e^{i Delta t} gamma e^{-i Delta t}: momentum-space phases
  const Mat& F = grid.fourier();
  Mat ghat = F * gamma * F.adjoint();
  Vec row(grid.n()), col(grid.n());
  for (int p = 0; p < grid.n(); ++p) {
    row(p) = std::exp(cplx(0.0, -grid.ksq(p) * t));
    col(p) = std::exp(cplx(0.0, grid.ksq(p) * t));
  }
  kernels::scale_rows_cols(ghat, row, col);
  return F.adjoint() * ghat * F;
}

Mat free_flight_alpha_kinetic(const Grid& grid, const Mat& alpha, double t) {
  // kernel as a two-body wave function, phases e^{-i(|p|^2+|q|^2)t}
  const Mat& F = grid.fourier();
  Mat ahat = F * alpha * F.transpose();
  Vec ph(grid.n());
  for (int p = 0; p < grid.n(); ++p) ph(p) = std::exp(cplx(0.0, -grid.ksq(p) * t));
  kernels::scale_rows_cols(ahat, ph, ph);
  return F.adjoint() * ahat * F.conjugate();
}

Mat two_body_strang_step(const Grid& grid, const PairPotential& V, const Mat& alpha,
                         double t) {
  Mat a = free_flight_alpha_kinetic(grid, alpha, 0.5 * t);
  kernels::interaction_phase(grid, V, t, a);
  return free_flight_alpha_kinetic(grid, a, 0.5 * t);
}

namespace {

void check_finite(const BdGState& w) {
  if (!w.gamma.allFinite() || !w.alpha.allFinite())
    throw NonFinite("integrate: state became non-finite");
}

struct StepperState {
  BdGState w;
  Mat u;  // propagator, possibly empty
};

BdGState axpy(const BdGState& a, double c, const BdGState& b) {
  return {a.gamma + c * b.gamma, a.alpha + c * b.alpha};
}

// one classical RK4 step of the coupled system (gamma, alpha [, U])
void rk4_step(const Grid& grid, StepperState& s, const Mat& h, const PairPotential& V,
              double dt, bool with_u, const Mat* proj) {
  auto deriv = [&](const BdGState& w) {
    return proj ? rhs_cutoff(grid, w, h, V, *proj) : rhs(grid, w, h, V);
  };
  auto deriv_u = [&](const BdGState& w, const Mat& u) -> Mat {
    Mat f = build_f(grid, h, V, w);
    if (proj) {
      const int n = grid.n();
      Mat p2 = Mat::Zero(2 * n, 2 * n);
      p2.topLeftCorner(n, n) = *proj;
      p2.bottomRightCorner(n, n) = *proj;
      f = p2 * f * p2;
    }
    return -I_UNIT * (f * u);
  };
  const BdGState k1 = deriv(s.w);
  const BdGState w2 = axpy(s.w, 0.5 * dt, k1);
  const BdGState k2 = deriv(w2);
  const BdGState w3 = axpy(s.w, 0.5 * dt, k2);
  const BdGState k3 = deriv(w3);
  const BdGState w4 = axpy(s.w, dt, k3);
  const BdGState k4 = deriv(w4);
  if (with_u) {
    const Mat u1 = deriv_u(s.w, s.u);
    const Mat u2 = deriv_u(w2, s.u + 0.5 * dt * u1);
    const Mat u3 = deriv_u(w3, s.u + 0.5 * dt * u2);
    const Mat u4 = deriv_u(w4, s.u + dt * u3);
    s.u += (dt / 6.0) * (u1 + 2.0 * u2 + 2.0 * u3 + u4);
  }
  s.w.gamma += (dt / 6.0) * (k1.gamma + 2.0 * k2.gamma + 2.0 * k3.gamma + k4.gamma);
  s.w.alpha += (dt / 6.0) * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
}

// Strang step: half free flight, mean-field kick at the midpoint state, half
// free flight. Both maps are unitary conjugations of Gamma, so spectrum and
// purity are preserved exactly.
void split_step(const Grid& grid, StepperState& s, const PairPotential& V, double dt,
                bool with_u) {
  const int n = grid.n();
  BdGState mid;
  mid.gamma = free_flight_gamma(grid, s.w.gamma, 0.5 * dt);
  mid.alpha = free_flight_alpha_kinetic(grid, s.w.alpha, 0.5 * dt);

  // kick generator: bounded part of F at the midpoint state
  const Mat sv = script_v(grid, mid.gamma, V);
  const Mat pi = pi_v(grid, mid.alpha, V);
  Mat b(2 * n, 2 * n);
  b.topLeftCorner(n, n) = sv;
  b.topRightCorner(n, n) = pi;
  b.bottomLeftCorner(n, n) = pi.adjoint();
  b.bottomRightCorner(n, n) = -sv.conjugate();
  Eigen::SelfAdjointEigenSolver<Mat> es(b);
  Vec ph(2 * n);
  for (int j = 0; j < 2 * n; ++j) ph(j) = std::exp(cplx(0.0, -es.eigenvalues()(j) * dt));
  const Mat wkick = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();

  Mat g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = mid.gamma;
  g.topRightCorner(n, n) = mid.alpha;
  g.bottomLeftCorner(n, n) = -mid.alpha.conjugate();
  g.bottomRightCorner(n, n) = Mat::Identity(n, n) - mid.gamma.conjugate();
  g = wkick * g * wkick.adjoint();

  s.w.gamma = free_flight_gamma(grid, g.topLeftCorner(n, n), 0.5 * dt);
  s.w.alpha = free_flight_alpha_kinetic(grid, g.topRightCorner(n, n), 0.5 * dt);

  if (with_u) {
    Vec kin_ph(n);
    for (int p = 0; p < grid.n(); ++p)
      kin_ph(p) = std::exp(cplx(0.0, -grid.ksq(p) * 0.5 * dt));
    Mat efree = Mat::Zero(2 * n, 2 * n);
    efree.topLeftCorner(n, n) =
        grid.fourier().adjoint() * kin_ph.asDiagonal() * grid.fourier();
    efree.bottomRightCorner(n, n) =
        grid.fourier().adjoint() * kin_ph.conjugate().asDiagonal() * grid.fourier();
    s.u = efree * wkick * efree * s.u;
  }
}

Trajectory run(const Grid& grid, const BdGState& w0, const Mat& h,
               const PairPotential& V, const IntegrateOptions& opts, const Mat* proj) {
  if (!(opts.dt > 0.0) || !(opts.t_final > 0.0))
    throw ConfigError("integrate: dt and t_final must be > 0");
  validate_bdg(w0);
  const int n = grid.n();
  const int nsteps = static_cast<int>(std::llround(opts.t_final / opts.dt));
  if (nsteps < 1) throw ConfigError("integrate: t_final < dt");
  const int stride = std::max(1, opts.record_stride);

  StepperState s{w0, Mat()};
  if (proj) {
    s.w.gamma = *proj * w0.gamma * *proj;
    s.w.alpha = *proj * w0.alpha * *proj;
  }
  if (opts.with_propagator) s.u = Mat::Identity(2 * n, 2 * n);

  Mat gamma0_gen(2 * n, 2 * n);
  auto assemble_gen = [n](const BdGState& w) {
    Mat g(2 * n, 2 * n);
    g.topLeftCorner(n, n) = w.gamma;
    g.topRightCorner(n, n) = w.alpha;
    g.bottomLeftCorner(n, n) = -w.alpha.conjugate();
    g.bottomRightCorner(n, n) = Mat::Identity(n, n) - w.gamma.conjugate();
    return g;
  };
  gamma0_gen = assemble_gen(s.w);
  Eigen::SelfAdjointEigenSolver<Mat> es0(gamma0_gen, Eigen::EigenvaluesOnly);
  const RVec spec0 = es0.eigenvalues();

  Trajectory traj;
  auto record = [&](int step, double t) {
    const Mat g = assemble_gen(s.w);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.adjoint()),
                                          Eigen::EigenvaluesOnly);
    const RVec spec = es.eigenvalues();
    if (spec.minCoeff() < -opts.positivity_guard ||
        spec.maxCoeff() > 1.0 + opts.positivity_guard)
      throw StepRejected("integrate: positivity of Gamma violated; reduce dt");
    TrajectoryPoint pt;
    pt.t = t;
    pt.tr_gamma = s.w.gamma.trace().real();
    pt.energy = energy(grid, s.w, h, V);
    pt.purity_defect = ((g * g).trace() - g.trace()).real();
    pt.alpha_s2 = s.w.alpha.norm();
    pt.spectrum = spec;
    pt.spec_drift = (spec - spec0).cwiseAbs().maxCoeff();
    if (proj) {
      const Mat one_m_p = Mat::Identity(n, n) - *proj;
      pt.cutoff_residual = (one_m_p * s.w.gamma).norm() + (s.w.gamma * one_m_p).norm() +
                           (one_m_p * s.w.alpha).norm() + (s.w.alpha * one_m_p).norm();
    }
    if (opts.with_propagator) {
      pt.unitarity_residual =
          (s.u.adjoint() * s.u - Mat::Identity(2 * n, 2 * n)).norm();
      pt.reconstruction_residual = (g - s.u * gamma0_gen * s.u.adjoint()).norm();
    }
    traj.points.push_back(pt);
    if (step % stride == 0 || step == nsteps) {
      traj.times.push_back(t);
      traj.states.push_back(s.w);
    }
  };

  record(0, 0.0);
  for (int step = 1; step <= nsteps; ++step) {
    if (opts.scheme == Scheme::rk4)
      rk4_step(grid, s, h, V, opts.dt, opts.with_propagator, proj);
    else
      split_step(grid, s, V, opts.dt, opts.with_propagator);
    check_finite(s.w);
    record(step, step * opts.dt);
  }
  if (opts.with_propagator) traj.propagator = s.u;
  return traj;
}

}  // namespace

Trajectory integrate(const Grid& grid, const BdGState& w0, const Mat& h,
                     const PairPotential& V, const IntegrateOptions& opts) {
  if (opts.scheme == Scheme::split) {
    // the split scheme assumes the exact free flight, i.e. h = -Delta
    if ((h - grid.kinetic_matrix()).norm() > 1e-12)
      throw ConfigError("integrate: split scheme requires h = -Delta");
  }
  return run(grid, w0, h, V, opts, nullptr);
}

Trajectory cutoff_evolve(const Grid& grid, const BdGState& w0, const Mat& h,
                         const PairPotential& V, double lambda,
                         const IntegrateOptions& opts) {
  if (lambda < 0.0) throw ConfigError("cutoff_evolve: lambda must be >= 0");
  if (opts.scheme != Scheme::rk4)
    throw ConfigError("cutoff_evolve: only the rk4 scheme is supported");
  const Mat p = grid.momentum_projector(lambda);
  return run(grid, w0, h, V, opts, &p);
}

PicardResult picard_solve(const Grid& grid, const BdGState& w0, const PairPotential& V,
                          double interval, int quadrature_steps, double tol,
                          int max_iter) {
  if (!(interval > 0.0)) throw ConfigError("picard_solve: interval must be > 0");
  if (quadrature_steps < 2) throw ConfigError("picard_solve: need >= 2 quadrature steps");
  validate_bdg(w0);
  const int q = quadrature_steps;
  const double delta = interval / q;
  const Mat m = grid.multiplier_matrix();

  // free-evolution curve, also the first iterate
  std::vector<BdGState> cur(q + 1);
  cur[0] = w0;
  for (int j = 1; j <= q; ++j) {
    cur[j].gamma = free_flight_gamma(grid, cur[j - 1].gamma, delta);
    cur[j].alpha = two_body_strang_step(grid, V, cur[j - 1].alpha, delta);
  }
  const std::vector<BdGState> free_curve = cur;

  PicardReport rep;
  rep.interval = interval;
  int grow_streak = 0;

  for (int it = 1; it <= max_iter; ++it) {
    // nonlinearities along the current iterate
    std::vector<KPair> k(q + 1);
    for (int j = 0; j <= q; ++j) k[j] = nonlinearity_k(grid, cur[j], V);

    std::vector<BdGState> next(q + 1);
    next[0] = w0;
    Mat t1 = Mat::Zero(grid.n(), grid.n());
    Mat t2 = Mat::Zero(grid.n(), grid.n());
    for (int jm = 1; jm <= q; ++jm) {
      // running trapezoidal Duhamel sums, propagated one mesh step at a time
      t1 = free_flight_gamma(grid, t1 + 0.5 * delta * k[jm - 1].k1, delta) +
           0.5 * delta * k[jm].k1;
      t2 = two_body_strang_step(grid, V, t2 + 0.5 * delta * k[jm - 1].k2, delta) +
           0.5 * delta * k[jm].k2;
      next[jm].gamma = free_curve[jm].gamma - I_UNIT * t1;
      next[jm].alpha = free_curve[jm].alpha - I_UNIT * t2;
      if (!next[jm].gamma.allFinite() || !next[jm].alpha.allFinite())
        throw NonFinite("picard_solve: iterate became non-finite");
    }

    double diff = 0.0;
    for (int j = 0; j <= q; ++j)
      diff = std::max(diff, z_norm(grid, m, next[j].gamma - cur[j].gamma,
                                   next[j].alpha - cur[j].alpha));
    rep.diffs.push_back(diff);
    rep.iterations = it;
    if (rep.diffs.size() >= 2) {
      const double prev = rep.diffs[rep.diffs.size() - 2];
      if (prev > 0.0) rep.contraction = std::max(rep.contraction, diff / prev);
      grow_streak = diff > prev ? grow_streak + 1 : 0;
      if (grow_streak >= 3)
        throw NoContraction(
            "picard_solve: differences grew for 3 consecutive iterations; "
            "shorten the interval");
    }
    cur = std::move(next);
    if (diff < tol) {
      rep.converged = true;
      break;
    }
  }

  PicardResult res;
  res.report = rep;
  res.states = std::move(cur);
  res.times.resize(q + 1);
  for (int j = 0; j <= q; ++j) res.times[j] = j * delta;
  return res;
}

}  // namespace qf
