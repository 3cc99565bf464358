#include "vflab/frames.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace vflab {

double orthonormality_defect(const Frame& f) {
  double d = 0;
  d = std::max(d, std::fabs(dot(f.T, f.e1)));
  d = std::max(d, std::fabs(dot(f.T, f.e2)));
  d = std::max(d, std::fabs(dot(f.e1, f.e2)));
  d = std::max(d, std::fabs(norm(f.T) - 1.0));
  d = std::max(d, std::fabs(norm(f.e1) - 1.0));
  d = std::max(d, std::fabs(norm(f.e2) - 1.0));
  return d;
}

double handedness_defect(const Frame& f) { return norm(f.T - cross(f.e1, f.e2)); }

namespace {
// The generator (g01, g02, g12) acts on the frame-index space; its axial
// vector there is (-g12, g02, -g01).
inline Frame apply_axial(const Frame& f, const Vec3& w) {
  const Mat3 R = so3_exp(w);
  Frame out;
  out.T = R(0, 0) * f.T + R(0, 1) * f.e1 + R(0, 2) * f.e2;
  out.e1 = R(1, 0) * f.T + R(1, 1) * f.e1 + R(1, 2) * f.e2;
  out.e2 = R(2, 0) * f.T + R(2, 1) * f.e1 + R(2, 2) * f.e2;
  return out;
}
inline Vec3 axial(const std::array<double, 3>& g) { return {-g[2], g[1], -g[0]}; }
}  // namespace

Frame advance(const Frame& f, double g01, double g02, double g12, double h) {
  return apply_axial(f, axial({g01, g02, g12}) * h);
}

Frame advance_magnus4(const Frame& f, const std::array<double, 3>& gA,
                      const std::array<double, 3>& gB, double h) {
  const Vec3 a = axial(gA), b = axial(gB);
  // Omega = h/2 (A+B) + sqrt(3)/12 h^2 [B, A]; the bracket of axial vectors
  // is their cross product.
  const Vec3 w = (a + b) * (0.5 * h) + cross(b, a) * (std::sqrt(3.0) / 12.0 * h * h);
  return apply_axial(f, w);
}

// Complex-normal convention: T_x = Re(conj(u) N), N_x = -u T with N = e1 + i e2.
std::array<double, 3> space_generator(std::complex<double> u) {
  return {u.real(), u.imag(), 0.0};
}

// Zero-curvature pairing: with the N-rotation rate (|u|^2 - f)/2 the space and
// time systems commute exactly when i u_t + u_xx + ((|u|^2 - f)/2) u = 0.
// Solutions of i v_t + v_xx + |v|^2 v = 0 therefore drive the frames through
// u = sqrt(2) v.
std::array<double, 3> time_generator(std::complex<double> u,
                                     std::complex<double> ux, double f) {
  return {-ux.imag(), ux.real(), -(std::norm(u) - f) * 0.5};
}

Frame rotate_frame(const Mat3& R, const Frame& f) {
  return {R * f.T, R * f.e1, R * f.e2};
}

}  // namespace vflab
