#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qf/dynamics_bose.hpp"
#include "qf/dynamics_fermi.hpp"
#include "qf/geometry.hpp"

using namespace qf;

namespace {
Grid grid4() { return Grid(4, 1, 2.0 * M_PI); }

HFBState bogoliubov_state(const Grid& g, std::uint64_t seed, double pair_scale = 0.35,
                          double cond = 0.8) {
  std::mt19937_64 rng(seed);
  HFBState s;
  s.alpha_t = random_symmetric(g.n(), rng, pair_scale);
  s.gamma_t = gamma_from_alpha(s.alpha_t);
  s.phi = cond * random_vector(g.n(), rng);
  return s;
}
}  // namespace

TEST_CASE("hfb_mean_field: trivial cases and sign of the exchange term") {
  const Grid g = grid4();
  const Mat h = g.kinetic_matrix();
  const int n = g.n();
  const PairPotential v = potential_gaussian(g, 0.7, 1.0);

  CHECK((hfb_mean_field(g, h, Mat::Zero(n, n), v) - h).norm() == 0.0);

  // on-site V: direct + exchange = 2 v0 diag(gamma(x,x)) (no cancellation)
  std::mt19937_64 rng(3);
  const Mat gamma = random_hermitian(n, rng);
  const PairPotential v0 = potential_onsite(g, 1.3);
  const Mat mb = hfb_mean_field(g, Mat::Zero(n, n), gamma, v0);
  Mat expect = Mat::Zero(n, n);
  for (int x = 0; x < n; ++x) expect(x, x) = 2.0 * 1.3 * gamma(x, x).real();
  CHECK((mb - expect).norm() < 1e-13);

  // equals the fermionic operator with the exchange sign flipped
  const Mat hf = h_hf(g, h, gamma, v);
  const Mat hb = hfb_mean_field(g, h, gamma, v);
  const Mat x_v = kernels::hadamard_disp(g, v, gamma);
  CHECK((hb - (hf + 2.0 * x_v)).norm() < 1e-14);
}

TEST_CASE("build_g: free case and sign structure") {
  const Grid g = grid4();
  const Mat h = g.kinetic_matrix();
  const int n = g.n();
  const PairPotential v = potential_gaussian(g, 0.7, 1.0);
  const Mat g0 = build_g(g, h, Mat::Zero(n, n), Mat::Zero(n, n), v);
  CHECK((g0.topLeftCorner(n, n) - h).norm() < 1e-14);
  CHECK((g0.bottomRightCorner(n, n) - h.conjugate()).norm() < 1e-14);  // + sign

  std::mt19937_64 rng(5);
  const Mat gamma = random_hermitian(n, rng);
  const Mat alpha = random_symmetric(n, rng);
  const Mat gg = build_g(g, h, gamma, alpha, v);
  CHECK((gg - gg.adjoint()).norm() < 1e-13);
  const Mat hb = hfb_mean_field(g, h, gamma, v);
  CHECK((gg.bottomRightCorner(n, n) - hb.conjugate()).norm() < 1e-13);
}

TEST_CASE("gamma_from_alpha: trivial, rank-one scalar formula, residuals") {
  const int n = 4;
  CHECK(gamma_from_alpha(Mat::Zero(n, n)).norm() == 0.0);

  // alpha = s e1 (x) e1: gamma = (sqrt(1+4s^2)-1)/2 |e1><e1|
  const double s = 0.8;
  Mat alpha = Mat::Zero(n, n);
  alpha(1, 1) = s;
  const Mat gamma = gamma_from_alpha(alpha);
  Mat expect = Mat::Zero(n, n);
  expect(1, 1) = 0.5 * (std::sqrt(1.0 + 4.0 * s * s) - 1.0);
  CHECK((gamma - expect).norm() < 1e-13);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const Mat a = random_symmetric(n, rng, 0.7);
    const Mat gt = gamma_from_alpha(a);
    // bosonic quasifree relation gamma^2 + gamma = alpha conj(alpha)
    CHECK((gt * gt + gt - a * a.conjugate()).norm() < 1e-10);
    // assembled form: Gamma S Gamma = -Gamma and (2Gamma+S) S (2Gamma+S) = S
    const Mat big = assemble_bosonic(gt, a);
    const Mat sm = bosonic_metric(n);
    CHECK((big * sm * big + big).norm() < 1e-10);
    const Mat two = 2.0 * big + sm;
    CHECK((two * sm * two - sm).norm() < 1e-9);
    // gamma_t is PSD
    Eigen::SelfAdjointEigenSolver<Mat> es(gt, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-11);
  }
}

TEST_CASE("hfb_rhs: free condensate, vanishing pairing source, structure") {
  const Grid g = grid4();
  const Mat h = g.kinetic_matrix();
  const int n = g.n();
  const PairPotential v = potential_gaussian(g, 0.7, 1.0);
  std::mt19937_64 rng(9);

  // V = 0, gamma_t = alpha_t = 0: free Schroedinger for phi
  {
    HFBState s{random_vector(n, rng), Mat::Zero(n, n), Mat::Zero(n, n)};
    const HFBDeriv d = hfb_rhs(g, s, h, potential_zero(g));
    CHECK((d.dphi - (-I_UNIT) * (h * s.phi)).norm() < 1e-13);
    CHECK(d.dgamma_t.norm() == 0.0);
    CHECK(d.dalpha_t.norm() == 0.0);
  }

  // phi = 0, alpha_t = 0: pairing source Pi_V(0) = 0, gamma commutator only
  {
    Mat gam = random_hermitian(n, rng);
    gam = gam * gam.adjoint();  // PSD
    HFBState s{Vec::Zero(n), gam, Mat::Zero(n, n)};
    const HFBDeriv d = hfb_rhs(g, s, h, v);
    CHECK(d.dalpha_t.norm() < 1e-13);
    const Mat hb = hfb_mean_field(g, h, gam, v);
    CHECK((d.dgamma_t - (-I_UNIT) * (hb * gam - gam * hb)).norm() < 1e-12);
  }

  // structure preservation on generic Bogoliubov states
  for (std::uint64_t seed : {11, 12, 13}) {
    const HFBState s = bogoliubov_state(g, seed);
    const HFBDeriv d = hfb_rhs(g, s, h, v);
    CHECK((d.dgamma_t - d.dgamma_t.adjoint()).norm() < 1e-11);
    CHECK((d.dalpha_t - d.dalpha_t.transpose()).norm() < 1e-11);
  }
}

// Note the sign in the pairing equation: the bosonic source term enters as
// + gamma_t Pi_V(alpha), where the fermionic analogue carries a minus sign.
// The dual-formula agreement below confirms the plus sign: the symplectic
// form S G Gamma_t - Gamma_t G S reproduces it exactly.
TEST_CASE("hfb_rhs agrees with the symplectic form") {
  const Grid g = grid4();
  const Mat h = g.kinetic_matrix();
  const int n = g.n();
  const PairPotential v = potential_gaussian(g, 0.7, 1.0);
  for (std::uint64_t seed : {21, 22, 23}) {
    const HFBState s = bogoliubov_state(g, seed);
    const HFBDeriv d = hfb_rhs(g, s, h, v);
    const Mat sym = hfb_rhs_symplectic(g, s, h, v);
    CHECK((sym.topLeftCorner(n, n) - d.dgamma_t).norm() < 1e-11);
    CHECK((sym.topRightCorner(n, n) - d.dalpha_t).norm() < 1e-11);
    // lower blocks are the conjugates, as for d/dt of the assembled form
    CHECK((sym.bottomLeftCorner(n, n) - d.dalpha_t.conjugate()).norm() < 1e-11);
    CHECK((sym.bottomRightCorner(n, n) - d.dgamma_t.conjugate()).norm() < 1e-11);
  }
}

TEST_CASE("bosonic invariants: vacuum, coherent state, identity") {
  const Grid g = grid4();
  const int n = g.n();
  std::mt19937_64 rng(31);

  const HFBState vac{Vec::Zero(n), Mat::Zero(n, n), Mat::Zero(n, n)};
  const BosonicInvariants iv = bosonic_invariants(vac);
  CHECK(iv.total_n == 0.0);
  CHECK(iv.purity_quantity == doctest::Approx(0.0));
  CHECK(iv.bogoliubov_residual == doctest::Approx(0.0));

  const Vec phi = random_vector(n, rng);
  const HFBState coh{phi, Mat::Zero(n, n), Mat::Zero(n, n)};
  const BosonicInvariants ic = bosonic_invariants(coh);
  CHECK(ic.total_n == doctest::Approx(phi.squaredNorm()).epsilon(1e-13));
  CHECK(ic.purity_quantity == doctest::Approx(0.0));

  for (std::uint64_t seed : {41, 42}) {
    const HFBState s = bogoliubov_state(g, seed);
    const BosonicInvariants i = bosonic_invariants(s);
    CHECK(i.purity_identity_residual < 1e-11);
    CHECK(i.bogoliubov_residual < 1e-9);
    CHECK(std::abs(i.purity_quantity) < 1e-9);
  }

  // a visibly mixed truncated density has positive purity quantity
  HFBState mixed{Vec::Zero(n), 0.4 * Mat::Identity(n, n), Mat::Zero(n, n)};
  CHECK(bosonic_invariants(mixed).purity_quantity > 0.1);
}

TEST_CASE("integrate_hfb: free closed forms and order check") {
  const Grid g = grid4();
  const Mat h = g.kinetic_matrix();
  const PairPotential v0 = potential_zero(g);
  const HFBState s0 = bogoliubov_state(g, 51);
  const double T = 0.4;

  HFBIntegrateOptions opts;
  opts.t_final = T;
  opts.dt = 1e-2;
  const HFBTrajectory t1 = integrate_hfb(g, s0, h, v0, opts);
  // phi_t = e^{-iht} phi_0, gamma_t = e^{-iht} gamma_0 e^{iht}
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec ph(g.n());
  for (int j = 0; j < g.n(); ++j) ph(j) = std::exp(cplx(0.0, -es.eigenvalues()(j) * T));
  const Mat u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  const Vec phi_exact = u * s0.phi;
  const Mat gam_exact = u * s0.gamma_t * u.adjoint();
  const double e1 = (t1.states.back().phi - phi_exact).norm() +
                    (t1.states.back().gamma_t - gam_exact).norm();

  opts.dt = 5e-3;
  const HFBTrajectory t2 = integrate_hfb(g, s0, h, v0, opts);
  const double e2 = (t2.states.back().phi - phi_exact).norm() +
                    (t2.states.back().gamma_t - gam_exact).norm();
  CHECK(e1 < 1e-7);
  const double ratio = e1 / std::max(e2, 1e-300);
  CHECK(ratio > 10.0);
  CHECK(ratio < 26.0);
}

TEST_CASE("integrate_hfb: conservation and structure over T = 1") {
  const Grid g = grid4();
  const Mat h = g.kinetic_matrix();
  const PairPotential v = potential_gaussian(g, 0.5, 1.0);
  const HFBState s0 = bogoliubov_state(g, 52);

  HFBIntegrateOptions opts;
  opts.t_final = 1.0;
  opts.dt = 1e-3;
  opts.record_stride = 100;
  const HFBTrajectory tr = integrate_hfb(g, s0, h, v, opts);

  double drift_n = 0.0, drift_p = 0.0, worst_res = 0.0;
  for (const auto& p : tr.points) {
    drift_n = std::max(drift_n, std::abs(p.total_n - tr.points.front().total_n));
    drift_p = std::max(drift_p,
                       std::abs(p.purity_quantity - tr.points.front().purity_quantity));
    worst_res = std::max(worst_res, p.bogoliubov_residual);
  }
  CHECK(drift_n <= 1e-6);
  CHECK(drift_p <= 1e-6);
  CHECK(worst_res <= 1e-7);

  // orthogonality to the bosonic normal space along the trajectory
  std::mt19937_64 rng(77);
  for (size_t i = 0; i < tr.states.size(); ++i) {
    const HFBState& s = tr.states[i];
    const HFBDeriv d = hfb_rhs(g, s, h, v);
    Mat dgt(2 * g.n(), 2 * g.n());
    dgt.topLeftCorner(g.n(), g.n()) = d.dgamma_t;
    dgt.topRightCorner(g.n(), g.n()) = d.dalpha_t;
    dgt.bottomLeftCorner(g.n(), g.n()) = d.dalpha_t.conjugate();
    dgt.bottomRightCorner(g.n(), g.n()) = d.dgamma_t.conjugate();
    const Mat gt = assemble_bosonic(s.gamma_t, s.alpha_t);
    for (int t = 0; t < 4; ++t) {
      const Mat b = random_normal_input(g.n(), rng);
      const Mat a = bosonic_normal_component(gt, b, 1e-6);
      CHECK(std::abs((a.adjoint() * dgt).trace().real()) <
            1e-9 * (1.0 + a.norm() * dgt.norm()));
    }
  }
}

TEST_CASE("integrate_hfb: guards") {
  const Grid g = grid4();
  const HFBState s0 = bogoliubov_state(g, 53);
  HFBIntegrateOptions opts;
  opts.dt = 0.0;
  CHECK_THROWS_AS(integrate_hfb(g, s0, g.kinetic_matrix(), potential_zero(g), opts),
                  ConfigError);
  HFBState bad = s0;
  bad.alpha_t(0, 1) += 0.3;  // breaks the symmetry
  HFBIntegrateOptions ok;
  CHECK_THROWS_AS(integrate_hfb(g, bad, g.kinetic_matrix(), potential_zero(g), ok),
                  NumericalError);
}
