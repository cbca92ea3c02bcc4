// Timing comparison of the serial reference kernels against the OpenMP paths.
// Usage: qf_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "qf/fock.hpp"
#include "qf/kernels.hpp"
#include "qf/state.hpp"

using namespace qf;
using kernels::Exec;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_best(int repeats, Fn&& fn) {
  double best = 1e30;
  for (int r = 0; r < repeats; ++r) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-26s %10.3f ms %10.3f ms   speedup %.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
#ifdef _OPENMP
  std::printf("kernel benchmark, %d repeats, OpenMP enabled\n", repeats);
#else
  std::printf("kernel benchmark, %d repeats, OpenMP disabled\n", repeats);
#endif
  std::printf("%-26s %13s %13s\n", "kernel", "serial", "parallel");

  // lattice kernels on a 32x32 grid (1024 modes)
  Grid g(32, 2, 10.0);
  const PairPotential v = potential_gaussian(g, 0.7, 1.5);
  std::mt19937_64 rng(1);
  const Mat a = random_hermitian(g.n(), rng);
  RVec rho(g.n());
  for (int x = 0; x < g.n(); ++x) rho(x) = a(x, x).real();

  volatile double sink = 0.0;
  row("hadamard_disp (n=1024)",
      time_best(repeats, [&] { sink = sink + kernels::hadamard_disp(g, v, a, Exec::serial)(0, 0).real(); }),
      time_best(repeats, [&] { sink = sink + kernels::hadamard_disp(g, v, a, Exec::parallel)(0, 0).real(); }));

  row("convolve_density (n=1024)",
      time_best(repeats, [&] { sink = sink + kernels::convolve_density(g, v, rho, Exec::serial)(0); }),
      time_best(repeats, [&] { sink = sink + kernels::convolve_density(g, v, rho, Exec::parallel)(0); }));

  row("interaction_energy",
      time_best(repeats, [&] { sink = sink + kernels::interaction_energy(g, v, a, a, Exec::serial); }),
      time_best(repeats, [&] { sink = sink + kernels::interaction_energy(g, v, a, a, Exec::parallel); }));

  {
    Mat b = a;
    const PairPotential vp = potential_yukawa(g, 0.4, 1.0);
    row("interaction_phase",
        time_best(repeats, [&] { kernels::interaction_phase(g, vp, 1e-3, b, Exec::serial); }),
        time_best(repeats, [&] { kernels::interaction_phase(g, vp, 1e-3, b, Exec::parallel); }));
    sink = sink + b(0, 0).real();
  }

  // many-body Hamiltonian application on 12 modes (dimension 4096)
  {
    Grid gf(12, 1, 2.0 * M_PI);
    FockSpace fs(12);
    const PairPotential vf = potential_gaussian(gf, 0.6, 1.0);
    const Mat h = gf.kinetic_matrix();
    Vec psi = random_vector(fs.dim(), rng);
    psi.normalize();
    row("fock matvec (12 modes)",
        time_best(repeats, [&] { sink = sink + apply_h_many_body(fs, gf, h, vf, psi, Exec::serial)(0).real(); }),
        time_best(repeats, [&] { sink = sink + apply_h_many_body(fs, gf, h, vf, psi, Exec::parallel)(0).real(); }));
  }

  return sink == 123456.5 ? 1 : 0;
}
