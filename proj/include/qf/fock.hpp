#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "qf/grid.hpp"
#include "qf/kernels.hpp"
#include "qf/potential.hpp"
#include "qf/state.hpp"
#include "qf/types.hpp"

namespace qf {

using SpMat = Eigen::SparseMatrix<cplx>;

// Exact fermionic many-body space on <= 12 modes. Creation/annihilation
// operators use the sign-string (Jordan-Wigner) representation with mode j
// acting on bit j; basis index = occupation bitmask.
class FockSpace {
 public:
  explicit FockSpace(int n_modes);

  int n_modes() const { return n_; }
  long dim() const { return 1L << n_; }

  Vec vacuum() const;

  // out = a_j in / a^*_j in; matrix-free
  Vec apply_a(int j, const Vec& in) const;
  Vec apply_adag(int j, const Vec& in) const;

  SpMat a_matrix(int j) const;
  SpMat adag_matrix(int j) const;
  SpMat number_matrix() const;

 private:
  int n_;
};

struct FockOperatorSet {
  int n_modes = 0;
  std::vector<SpMat> a;
  std::vector<SpMat> adag;
  SpMat number;
};

FockOperatorSet build_car(int n_modes);

// H = dGamma(h) + (1/2) sum_{x,y} V(x-y) a*_x a*_y a_y a_x
struct ManyBodyHamiltonian {
  SpMat H;
};

ManyBodyHamiltonian build_h_many_body(const FockSpace& fs, const Grid& grid,
                                      const Mat& h, const PairPotential& V);

// matrix-free H application (kernel with serial reference); equals H * in
Vec apply_h_many_body(const FockSpace& fs, const Grid& grid, const Mat& h,
                      const PairPotential& V, const Vec& in,
                      kernels::Exec exec = kernels::default_exec());

// ground state of the quadratic operator with blocks read from 1 - 2 Gamma;
// the unique gapped ground state is the quasifree state whose generalized
// density is Gamma. The reduce round-trip is re-verified internally.
Vec quasifree_vector(const FockSpace& fs, const GeneralizedDensity& G,
                     double purity_tol = 1e-8);

struct ReducedDensities {
  Mat gamma;
  Mat alpha;
  GeneralizedDensity G;
};

ReducedDensities reduce(const FockSpace& fs, const Vec& psi);

Vec exact_evolve(const FockSpace& fs, const SpMat& H, const Vec& psi, double t);

struct WickOp {
  int mode = 0;
  bool dagger = false;
};

struct WickResult {
  cplx lhs;
  cplx rhs;
  double gap;
};

// four-operator expectation against its signed pair-contraction expansion
WickResult wick_check(const FockSpace& fs, const Vec& psi,
                      const std::array<WickOp, 4>& ops);

// matrix of commutator expectations over the generalized basis,
// Xi(k,l) = < psi, [A*(e_l) A(e_k), (1/i) H] psi >
Mat mb_tangent(const FockSpace& fs, const Vec& psi, const SpMat& H);

struct ReductionReport {
  double gap_mb_proj = 0.0;   // || Xi_MB - proj(Gamma) Xi_MB ||
  double gap_mb_bdg = 0.0;    // || Xi_MB - (-i)[F_Gamma, Gamma] ||
  double gap_proj_bdg = 0.0;  // || proj(Gamma) Xi_MB - (-i)[F_Gamma, Gamma] ||
};

ReductionReport verify_reduction_theorem(const Grid& grid, const GeneralizedDensity& G,
                                         const Mat& h, const PairPotential& V);

}  // namespace qf
