#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "vflab/continued_fraction.hpp"

namespace vflab {

using cplx = std::complex<double>;

// Generalized Riemann sum R(t) = sum_{j != 0} w_j (e^{i t (j-w0)^2} - 1) e^{i j x0},
// w_j = (j - w0)^{-2}, truncated at |j| <= N with a certified tail.
// The index j = w0 (possible only for integer w0) is excluded.
struct RiemannSeries {
  double x0 = 0;       // space location in radians; rational lattice (2 pi/q) Z
  double omega0 = 0;   // torsion offset; 0 for the plain function
  int truncation = 10000;

  double tail_bound() const;  // sum_{|j|>N} 2/(j-w0)^2 <= 4/(N - |w0|)
};

cplx eval_R(const RiemannSeries& series, double t);

// Increment R(t0 + h) - R(t0) evaluated termwise (cancellation-free form).
cplx eval_R_increment(const RiemannSeries& series, double t0, double h,
                      int truncation_override = 0);

// F(z) = integral of (e^{iy^2} - 1) y^{-2} e^{iyz} dy over the line:
// oscillatory panel quadrature on |y| <= Y plus analytic integration-by-parts
// tails. F is even, F(0) = sqrt(2 pi) (-1 + i), |F(z)| = O(1/z^2).
cplx F_kernel(double z);

// Variation of R at the rational time 2 pi p / q:
//   R(2 pi p/q + h) - R(2 pi p/q)
//     = (sqrt(h)/q) G(p, m*, q) F(d(x0, (2 pi/q) Z)/sqrt(h)) - i h + error,
// with m* the nearest lattice index. Returns prediction, the directly
// evaluated difference, and their discrepancy.
struct NearRationalExpansion {
  cplx predicted;
  cplx actual;
  double discrepancy;
  cplx gauss;           // G(p, m*, q)
  double lattice_dist;  // d(x0, (2 pi / q) Z)
};
NearRationalExpansion near_rational_expansion(const RiemannSeries& series,
                                              long long p, long long q, double h);

// Flatness of the high-pass filtered sum: keep modes with (j-w0)^2 >= N.
//   F_R(N) = ||P_{>=N} R||_4^4 / ||P_{>=N} R||_2^4
// L2 exactly via Parseval; L4 by uniform quadrature over one period (the
// grid is a power of two; refinement sensitivity is the caller's check).
struct FlatnessResult {
  double flatness = 0;
  double l2 = 0;            // Parseval value
  double l2_quadrature = 0;
  double l4 = 0;
  int modes = 0;
};
FlatnessResult flatness(const RiemannSeries& series, double N, int j_max = 768,
                        int log2_grid = 21);

// Lp norm over one period of the dyadic block 2^M <= |j| < 2^{M+1} of the
// term-derivative series sum i e^{it(j-w0)^2 + i j x0} (unit coefficients).
struct BlockNorm {
  double norm = 0;
  int modes = 0;
};
BlockNorm dyadic_block_lp(const RiemannSeries& series, int M, double p,
                          int log2_grid = 0 /* 0: auto */);

// Empirical structure exponents: fit log2 ||block_M||_p over a range of M.
struct BlockExponent {
  double eta = 0;  // slope of log2 norm vs M
  double r2 = 0;
  std::vector<double> log2_norms;
};
BlockExponent block_exponent(const RiemannSeries& series, double p, int M_min,
                             int M_max);

// Local Hoelder exponent by oscillation regression over dyadic scales:
// alpha = slope of log sup_{|h|<=delta} |R(t+h)-R(t)| against log delta.
struct HolderEstimate {
  double t = 0;
  double alpha = 0;
  double r2 = 0;
  bool poor_fit = false;     // r2 < 0.9 (estimate still returned)
  double mu = 0;             // companion irrationality diagnostic (inf at rationals)
  std::vector<double> scales;
  std::vector<double> oscillation;
};
HolderEstimate holder_estimate(const RiemannSeries& series, double t,
                               const std::vector<double>& scales,
                               uint64_t seed = 12345, int samples_per_scale = 64);

// Constructed near-Liouville time 2 pi x with continued-fraction quotients
// grown so the irrationality exponent over the working scale window is mu.
// Good rational approximations of such times are sparse, so the local
// regularity is visible only at the contact scales err_n = |x - p_n/q_n|;
// the touches list records them together with their realized exponents.
struct ApproximationTouch {
  long long p, q;  // convergent
  double err;      // |x - p_n/q_n|
  double mu;       // log(1/err)/log(q)
};
struct PanelPoint {
  double t;
  double mu_hat;  // realized exponent within [delta_min, delta_max]
  std::vector<ApproximationTouch> touches;
};
PanelPoint liouville_time(double mu, double delta_min, double delta_max,
                          uint64_t seed = 99);

// Pointwise exponent at one contact scale: log of the oscillation of R over
// |h| <= scale against log(scale).
double touch_exponent(const RiemannSeries& series, double t, double scale,
                      uint64_t seed = 12345, int samples = 32);

}  // namespace vflab
