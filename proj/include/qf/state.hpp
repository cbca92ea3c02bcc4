#pragma once

#include <cstdint>
#include <random>

#include "qf/grid.hpp"
#include "qf/types.hpp"

namespace qf {

// Fermionic reduced densities: gamma Hermitian, alpha^T = -alpha.
struct BdGState {
  Mat gamma;
  Mat alpha;

  int n() const { return static_cast<int>(gamma.rows()); }
};

// 2n x 2n generalized density, blocks [[gamma, alpha], [-conj(alpha), 1-conj(gamma)]]
struct GeneralizedDensity {
  Mat Gamma;

  int n() const { return static_cast<int>(Gamma.rows()) / 2; }
};

struct ConstraintReport {
  double block_residual = 0.0;
  double hermiticity_residual = 0.0;
  double positivity_violation = 0.0;
  double purity_defect = 0.0;        // tr(Gamma^2 - Gamma), <= 0 for states
  double quasifree_residual_1 = 0.0; // ||gamma^2 - gamma - alpha conj(alpha)||_S2
  double quasifree_residual_2 = 0.0; // ||conj(alpha) gamma - conj(gamma) conj(alpha)||_S2
};

// Bogoliubov map with block structure [[u, conj(v)], [v, conj(u)]]
struct BogoliubovMap {
  Mat V;
};

// J A J for the antiunitary J = (block swap) o (complex conjugation)
Mat jconj(const Mat& a);

Mat gamma_vacuum(int n);

void validate_bdg(const BdGState& state, double tol = 1e-10);

GeneralizedDensity assemble(const BdGState& state);
BdGState extract(const GeneralizedDensity& G);

ConstraintReport constraint_report(const GeneralizedDensity& G);

double purity_defect(const GeneralizedDensity& G);

// V^* Gamma V = Gamma_vac for pure quasifree Gamma; throws NotPure otherwise.
// The 1-eigenspace basis is chosen deterministically by pivoted Gram-Schmidt
// on the columns of Gamma (descending column norm, ties by index); the
// 0-eigenspace columns are the J-images.
BogoliubovMap bogoliubov_diagonalize(const GeneralizedDensity& G, double tol = 1e-8);

// Random matrices with the symmetries used throughout; all randomness flows
// through the caller-provided engine.
Mat random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);
Mat random_antisymmetric(int n, std::mt19937_64& rng, double scale = 1.0);
Mat random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0);
Vec random_vector(int n, std::mt19937_64& rng, double scale = 1.0);

// unitary commuting with the J symmetry, exp(-iK) with K = [[A,B],[B*,-conj(A)]]
Mat random_j_unitary(int n, std::mt19937_64& rng, double scale = 1.0);

BdGState random_slater(const Grid& grid, int N, std::uint64_t seed);
BdGState random_paired(const Grid& grid, std::uint64_t seed, double scale = 1.0);

// mixed admissible state, 0 <= Gamma <= 1 with the block condition
BdGState random_mixed(const Grid& grid, std::uint64_t seed, double scale = 1.0);

}  // namespace qf
