#include "vflab/oscillatory.hpp"

#include <cmath>

namespace vflab {

using cplx = std::complex<double>;

ExpMoments exp_moments(double z) {
  ExpMoments m;
  if (std::fabs(z) < 1.0) {
    // I_r(z) = sum_n (iz)^n / (n! (n+r+1))
    cplx term(1, 0);  // (iz)^n / n!
    cplx s0 = 0, s1 = 0, s2 = 0;
    const cplx iz(0, z);
    for (int n = 0; n < 22; ++n) {
      s0 += term / double(n + 1);
      s1 += term / double(n + 2);
      s2 += term / double(n + 3);
      term *= iz / double(n + 1);
    }
    m.i0 = s0;
    m.i1 = s1;
    m.i2 = s2;
  } else {
    const cplx iz(0, z);
    const cplx eiz = std::polar(1.0, z);
    m.i0 = (eiz - 1.0) / iz;
    m.i1 = (eiz - m.i0) / iz;
    m.i2 = (eiz - 2.0 * m.i1) / iz;
  }
  return m;
}

namespace {
// Quadratic Lagrange basis on x = 0, 1/2, 1 expressed in monomials:
//   l0 = 1 - 3x + 2x^2,  lm = 4x - 4x^2,  l1 = -x + 2x^2
inline FilonWeights assemble(const ExpMoments& mm, const cplx& scale) {
  FilonWeights w;
  w.w0 = scale * (mm.i0 - 3.0 * mm.i1 + 2.0 * mm.i2);
  w.wm = scale * (4.0 * mm.i1 - 4.0 * mm.i2);
  w.w1 = scale * (-mm.i1 + 2.0 * mm.i2);
  return w;
}
}  // namespace

FilonWeights filon_simpson_weights(double omega, double s0, double h) {
  const cplx scale = h * std::polar(1.0, omega * s0);
  return assemble(exp_moments(omega * h), scale);
}

FilonWeights filon_simpson_weights_half(double omega, double s0, double h) {
  // integral_0^{1/2} x^r exp(izx) dx = (1/2)^{r+1} I_r(z/2)
  ExpMoments mm = exp_moments(omega * h * 0.5);
  mm.i0 *= 0.5;
  mm.i1 *= 0.25;
  mm.i2 *= 0.125;
  const cplx scale = h * std::polar(1.0, omega * s0);
  return assemble(mm, scale);
}

FilonLinearWeights filon_linear_weights(double omega, double s0, double h) {
  const ExpMoments mm = exp_moments(omega * h);
  const cplx scale = h * std::polar(1.0, omega * s0);
  FilonLinearWeights w;
  w.w0 = scale * (mm.i0 - mm.i1);
  w.w1 = scale * mm.i1;
  return w;
}

}  // namespace vflab
