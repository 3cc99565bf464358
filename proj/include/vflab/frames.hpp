#pragma once

#include <array>
#include <complex>

#include "vflab/vec3.hpp"

namespace vflab {

// Orthonormal right-handed triad (T, e1, e2); the complex normal is
// N = e1 + i e2.
struct Frame {
  Vec3 T{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
};

// max over { |<T,e1>|, |<T,e2>|, |<e1,e2>|, ||T|-1|, ||e1|-1|, ||e2|-1| }
double orthonormality_defect(const Frame& f);

// |T - e1 x e2| (right-handedness defect)
double handedness_defect(const Frame& f);

// Advance the frame by the exact rotation generated by the antisymmetric
// matrix with independent entries (g01, g02, g12) held constant over
// parameter length h:
//   T'  =  g01 e1 + g02 e2
//   e1' = -g01 T  + g12 e2
//   e2' = -g02 T  - g12 e1
Frame advance(const Frame& f, double g01, double g02, double g12, double h);

// Fourth-order Magnus step: generators (as axial entries) sampled at the two
// Gauss nodes of the step; g_i = (g01, g02, g12) at node i.
Frame advance_magnus4(const Frame& f, const std::array<double, 3>& gA,
                      const std::array<double, 3>& gB, double h);

// Frame generators of the space and time systems driven by a filament value,
// in the complex-normal convention T_x = Re(conj(u) N), N_x = -u T,
// T_t = Im(conj(u_x) N), N_t = -i u_x T + i ((|u|^2 - f)/2) N:
//   space: g01 = Re u,    g02 = Im u,    g12 = 0
//   time:  g01 = -Im u_x, g02 = Re u_x,  g12 = -(|u|^2 - f)/2
// This pair commutes exactly when i u_t + u_xx + ((|u|^2 - f)/2) u = 0.
std::array<double, 3> space_generator(std::complex<double> u);
std::array<double, 3> time_generator(std::complex<double> u,
                                     std::complex<double> ux, double f);

// Rotate a whole frame by a rotation matrix acting on ambient space.
Frame rotate_frame(const Mat3& R, const Frame& f);

}  // namespace vflab
