#pragma once

#include <vector>

#include "vflab/vec3.hpp"

namespace vflab {

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};

// Least-squares line y = slope*x + intercept with coefficient of determination.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares proportional fit y = c*x (through the origin), with R^2
// computed against the centered total sum of squares.
LinearFit proportional_fit(const std::vector<double>& x, const std::vector<double>& y);

// Best rotation R (det +1) minimizing sum |R*a_i - b_i|^2 (Horn's quaternion
// method, deterministic Jacobi eigensolver).
Mat3 best_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// Best orthogonal map allowing reflections (det +/-1).
Mat3 best_orthogonal(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// Rigid motion b ~ R*a + d.
struct RigidMotion {
  Mat3 R;
  Vec3 d;
};
RigidMotion best_rigid_motion(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                              bool allow_reflection = false);

}  // namespace vflab
