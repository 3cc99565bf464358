// Benchmark comparing the serial reference kernels against the OpenMP paths.
// Usage: vflab_bench [band_list...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "vflab/coeff_evolution.hpp"
#include "vflab/coeff_system.hpp"
#include "vflab/curve_pipeline.hpp"
#include "vflab/parallel.hpp"
#include "vflab/riemann_function.hpp"

using namespace vflab;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best(F&& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> bands{16, 32, 48, 64};
  if (argc > 1) {
    bands.clear();
    for (int i = 1; i < argc; ++i) bands.push_back(std::atoi(argv[i]));
  }
  std::printf("threads: %d\n\n", thread_count());

  std::printf("cubic interaction sums (accumulate + contract), per evaluation\n");
  std::printf("%6s %12s %12s %12s %10s %10s\n", "band", "pairs", "serial[ms]",
              "openmp[ms]", "speedup", "Mpairs/s");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int band : bands) {
    TripleTable table(band);
    const int n = table.modes();
    std::vector<cplx> A(n), w(2 * table.m_max() + 1), out(n), S(table.s_size());
    for (auto& z : A) z = cplx(U(rng), U(rng));
    for (auto& z : w) z = cplx(U(rng), U(rng));
    const auto run = [&](bool par) {
      table.accumulate(A.data(), S.data(), par);
      table.contract(S.data(), w.data(), out.data(), par);
    };
    const double ts = time_best([&] { run(false); });
    const double tp = time_best([&] { run(true); });
    std::printf("%6d %12zu %12.3f %12.3f %10.2f %10.1f\n", band,
                table.pair_count(), 1e3 * ts, 1e3 * tp, ts / tp,
                table.pair_count() / tp / 1e6);
  }

  std::printf("\nfield evaluation on a 65536-point grid\n");
  {
    ComplexSeq A(32);
    for (int k = -32; k <= 32; ++k) A.at(k) = cplx(U(rng), U(rng));
    CoeffState st(0.05, A);
    std::vector<double> xs(65536);
    for (size_t i = 0; i < xs.size(); ++i) xs[i] = -8.0 + 16.0 * i / xs.size();
    const double ts = time_best([&] { evaluate_u(st, xs, false); });
    const double tp = time_best([&] { evaluate_u(st, xs, true); });
    std::printf("  serial %.1f ms, openmp %.1f ms, speedup %.2f\n", 1e3 * ts,
                1e3 * tp, ts / tp);
  }

  std::printf("\ncoefficient evolution, band 24, t: 1 -> 0.02 (tol 1e-9)\n");
  {
    ComplexSeq alpha(24);
    for (int k = -24; k <= 24; ++k) alpha.at(k) = cplx(U(rng), U(rng)) * 0.1;
    EvolveOptions eo;
    eo.tol = 1e-9;
    eo.store_trajectory = false;
    eo.parallel = false;
    const double ts = time_best([&] { evolve_coeffs(alpha, 1.0, 0.02, eo); }, 1);
    eo.parallel = true;
    const double tp = time_best([&] { evolve_coeffs(alpha, 1.0, 0.02, eo); }, 1);
    std::printf("  serial %.2f s, openmp %.2f s, speedup %.2f\n", ts, tp, ts / tp);
  }

  std::printf("\nphase-exact stepper vs brute-force reference (cross-validation cost)\n");
  std::printf("band 6, t: 1e-3 -> 0.1\n");
  {
    ComplexSeq alpha(6);
    for (int k = -6; k <= 6; ++k) alpha.at(k) = cplx(U(rng), U(rng)) * 0.2;
    CoeffState a0 = anchor_state(alpha, 1e-3);
    EvolveOptions eo;
    eo.tol = 1e-9;
    eo.store_trajectory = false;
    const double tf = time_best([&] { evolve_state(a0, 0.1, eo); }, 1);
    const double tr = time_best([&] { evolve_state_rk(a0, 0.1, 1e-9); }, 1);
    std::printf("  filon %.3f s, brute-force rk %.3f s\n", tf, tr);
  }

  std::printf("\nspace fan-out, soliton field, x in [-8,8], dx = 2^-7, 8 times\n");
  {
    SolitonField field(0.5);
    CurveOptions opts;
    opts.x_min = -8;
    opts.x_max = 8;
    opts.dx = 1.0 / 128;
    opts.x0 = 0;
    for (int i = 1; i <= 8; ++i) opts.save_times.push_back(0.1 * i);
    opts.parallel = false;
    const double ts = time_best([&] { evolve_curve(field, 0.05, opts); }, 1);
    opts.parallel = true;
    const double tp = time_best([&] { evolve_curve(field, 0.05, opts); }, 1);
    std::printf("  serial %.2f s, openmp %.2f s, speedup %.2f\n", ts, tp, ts / tp);
  }

  return 0;
}
