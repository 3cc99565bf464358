#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vflab/curve_pipeline.hpp"
#include "vflab/riemann_function.hpp"

namespace vflab {

// Corner angles theta_k in (0, pi] (pi = flat) and torsion angles gamma_k at
// integer arclength locations k in [-n, n]; the geometric initial datum.
struct PolygonSpec {
  int n = 0;
  std::vector<double> theta;  // 2n+1 values
  std::vector<double> gamma;  // 2n+1 values
  Vec3 base_point{0, 0, 0};
  Frame base_frame{};

  double theta_at(int k) const { return theta[k + n]; }
  double gamma_at(int k) const { return gamma[k + n]; }

  static PolygonSpec straight(int n);
  static PolygonSpec single_corner(double theta0);
  static PolygonSpec two_corner(double theta0);  // corners at -1 and +1
  static PolygonSpec uniform(int n, double theta0);
};

// a(theta) = sqrt(-(2/pi) log sin(theta/2)); inverse sin(theta/2) = e^{-pi a^2/2}.
double angle_to_weight(double theta);
double weight_to_angle(double a);

// Coefficient data of the polygon: alpha_k = (a_k / sqrt(2)) e^{i gamma_k}.
// The 1/sqrt(2) converts the geometric profile weight into the normalization
// of the coefficient system (whose solutions drive frames through sqrt(2) u).
ComplexSeq polygon_filament(const PolygonSpec& spec);

// The discrete initial line itself: unit tangent per segment and the tangent
// jump at each corner (turn angle pi - theta_k in the plane selected by
// gamma_k, normal vectors parallel-transported across corners).
struct PolygonGeometry {
  int n;
  std::vector<Vec3> segment_tangent;  // segment k: x in [k, k+1], k = -n-1..n
  std::vector<Vec3> jump;             // per corner k = -n..n
  std::vector<Vec3> vertex;           // positions at x = -n-1..n+1, chi(0) = base
  Vec3 chi(double x) const;
  Vec3 tangent(double x) const;
};
PolygonGeometry polygon_geometry(const PolygonSpec& spec);

struct PolygonRunOptions {
  double t0 = 1e-3;         // anchor time
  int band = -1;            // default n + 8
  double tol = 1e-10;
  double x_min = -8, x_max = 8, dx = 1.0 / 128;
  std::vector<double> save_times;  // ascending, > t0
  bool space_fanout = true;
  bool parallel = true;
};

struct PolygonRun {
  PolygonSpec spec;
  PolygonRunOptions opts;
  EvolveResult coeffs;
  std::shared_ptr<CoeffField> field;
  CurveTrajectory curve;
};

// Full pipeline: polygon data -> anchored coefficients -> filament field ->
// frames and curve at the requested times.
PolygonRun simulate_polygon(const PolygonSpec& spec, const PolygonRunOptions& opts);

// sqrt(t) trace convergence: least-squares chi(t,x) = chi0(x) + c(x) sqrt(t)
// on >= 4 saved times, plus the log-log exponent of |chi(t,x) - chi0(x)|.
struct TraceConvergence {
  std::vector<Vec3> chi0;        // extrapolated trace
  std::vector<double> exponent;  // per x sample (target 0.5)
  std::vector<double> constant;  // fitted c(x) magnitude
};
TraceConvergence trace_convergence(const PolygonRun& run);

// Rescaled corner trajectory against the Riemann-sum model. The measured
// path n (chi_n(t,0) - chi_n(t0,0)) is compared with the rotated reference
//   theta * (0, Re w, Im w)(t) - same at t0,
//   w(t) = t - i R0(4 pi^2 t) / (4 pi^2),
// one global rotation fitted over the grid (Procrustes).
struct CornerTrajectory {
  int n = 0;
  double nu = 1, theta = 1;
  std::vector<double> t;
  std::vector<Vec3> measured;    // rescaled, re-anchored at t0
  std::vector<Vec3> reference;   // rotated model path
  Mat3 rotation;
  double sup_deviation = 0;
};
CornerTrajectory corner_vs_riemann(int n, double nu, double theta, double T,
                                   const PolygonRunOptions& opts,
                                   int time_samples = 64, double corner_x = 0.0);

// Windowed transform of the tangent-derivative field at one time:
// what(xi) = sum_i W(x_i/L) T_x(x_i) e^{i x_i xi} dx, T_x = Re(conj(u) N).
struct GrowthPoint {
  double t = 0;
  double sup_window = 0;       // sup over B(1/t, sqrt(t))
  double sup_window_alt = 0;   // with the alternate window length
  double outside_max = 0;      // max outside B(+-1/t, 3/(4t))
};
struct GrowthResult {
  std::vector<GrowthPoint> points;
  double slope = 0, r2 = 0;        // sup vs log(1/t)
  double window_sensitivity = 0;   // max relative difference between windows
  bool window_flagged = false;     // sensitivity > 10%
  double outside_spread = 0;       // max over t / median over t
};
GrowthResult tangent_fourier_growth(double theta0, const std::vector<double>& ts,
                                    double window_L = 8.0, double window_L_alt = 6.0,
                                    double t0 = -1, double tol = 1e-9);

// Large-frequency energy density of the tangent field.
//   t = 0: band integrals of |sum_k Delta_k e^{ik xi}|^2 against the closed
//          form 4 sum_k (1 - e^{-pi a_k^2}) and the bound 4 pi sum a_k^2.
struct EnergyReport {
  double closed_form = 0;       // 4 sum (1 - e^{-pi a_k^2}) = sum |Delta_k|^2
  double upper_value = 0;       // 4 pi sum a_k^2
  std::vector<double> bands;    // integral over [n_i, n_i+1] of |what(0,.)|^2
  std::vector<int> band_index;
  double plateau_spread = 0;    // max/min over the requested bands
  bool plateau_flagged = false; // spread deviates by > 10%
};
EnergyReport energy_density_t0(const PolygonSpec& spec, const std::vector<int>& bands);

// Band integrals at a positive time from a simulated run's tangent field.
std::vector<double> energy_density_bands(const PolygonRun& run, size_t state_index,
                                         const std::vector<int>& bands,
                                         double window_L = 8.0);

}  // namespace vflab
