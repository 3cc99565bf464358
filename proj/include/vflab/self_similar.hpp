#pragma once

#include <vector>

#include "vflab/curve_pipeline.hpp"

namespace vflab {

// Profile curve G of the one-parameter self-similar family: constant
// curvature a, torsion s/2, integrated through the parallel-frame transport
// with filament a*exp(i s^2/4).
struct SelfSimilarProfile {
  double a = 0;
  double S = 0;
  std::vector<double> s;
  std::vector<Vec3> G;
  std::vector<Frame> frames;
  Vec3 A_plus, A_minus;      // fitted asymptotic tangent directions
  double theta = 0;          // angle between A_plus and -A_minus
  double tail_oscillation = 0;  // max |T - window mean| in the averaging windows
  bool saturated = true;     // tail oscillation below threshold
};

SelfSimilarProfile integrate_profile(double a, double S, double ds,
                                     double saturation_threshold = 0.2);

// a * exp(i x^2 / (4 t)) / sqrt(t)
cplx selfsim_filament(double a, double t, double x);

// integral over [t0, t1] of ||dT/dx||_{Linf}^2 = a^2/t: a^2 log(t1/t0).
// Diverges as t0 -> 0.
double cfm_integral(double a, double t0, double t1);

// Fit of -log sin(theta(a)/2) = c* a^2 over a list of parameter values.
struct AngleCalibration {
  std::vector<double> a, theta;
  double cstar = 0;
  double r2 = 0;
};
AngleCalibration calibrate_angle_law(const std::vector<double>& a_values,
                                     double S_over_a = 30.0, double ds = 0.005);

}  // namespace vflab
