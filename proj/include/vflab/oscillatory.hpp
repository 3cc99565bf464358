#pragma once

#include <complex>

namespace vflab {

// Normalized polynomial-times-exponential moments
//   I_r(z) = integral_0^1 x^r exp(i z x) dx,   r = 0, 1, 2.
// Closed forms are used for |z| >= 1; a short Taylor series takes over below
// that to avoid cancellation. Accurate to ~1e-15 across all z.
struct ExpMoments {
  std::complex<double> i0, i1, i2;
};

ExpMoments exp_moments(double z);

// Integral over [s0, s0+h] of exp(i*omega*sigma) * l(x(sigma)) dsigma for the
// three quadratic Lagrange basis functions on nodes x = 0, 1/2, 1
// (x = (sigma-s0)/h). Returned in node order.
struct FilonWeights {
  std::complex<double> w0, wm, w1;
};

FilonWeights filon_simpson_weights(double omega, double s0, double h);

// Same but integrating only the first half [s0, s0+h/2], still with the
// full-interval basis (used by the predictor-corrector to advance to the
// midpoint consistently).
FilonWeights filon_simpson_weights_half(double omega, double s0, double h);

// Trapezoid-type weights: integral of exp(i*omega*sigma) * {1-x, x} over
// [s0, s0+h].
struct FilonLinearWeights {
  std::complex<double> w0, w1;
};

FilonLinearWeights filon_linear_weights(double omega, double s0, double h);

}  // namespace vflab
