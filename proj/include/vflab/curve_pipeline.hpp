#pragma once

#include <vector>

#include "vflab/filament_fields.hpp"
#include "vflab/frames.hpp"
#include "vflab/vec3.hpp"

namespace vflab {

// A sampled curve with per-sample parallel frames on a uniform arclength grid.
struct CurveState {
  double t = 0;
  std::vector<double> x;
  std::vector<Vec3> chi;
  std::vector<Frame> frames;
  double ortho_defect = 0;  // max orthonormality defect over the samples

  // discrete grid-consistency defect: max |(chi_{i+1}-chi_i)/dx - T_mid|
  double tangent_consistency() const;
};

struct CurveOptions {
  double x0 = 0.0;
  Vec3 base_point{0, 0, 0};
  Frame base_frame{};
  double x_min = -8.0, x_max = 8.0, dx = 1.0 / 128.0;
  std::vector<double> save_times;   // ascending, all > t_start
  double max_phase_step = 0.5;      // radians per space substep
  double max_freq_step = 0.5;       // radians per time substep
  int min_substeps = 2;             // per space cell
  double ortho_abort = 1e-6;        // abort threshold for frame drift
  bool parallel = true;
  bool space_fanout = true;         // false: only the x0 time-trace is computed
};

struct CurveTrajectory {
  std::vector<CurveState> states;   // at t_start then each save time
  std::vector<double> trace_t;      // x0 time-trace (every save time)
  std::vector<Vec3> trace_chi;
  std::vector<Frame> trace_frames;
  size_t time_substeps = 0;
};

// Full construction: time transport at x0, then per-saved-time space
// transport with curve quadrature.
CurveTrajectory evolve_curve(const FilamentField& field, double t_start,
                             const CurveOptions& opts);

// Space transport at fixed t from (x0, frame0, chi0) across the grid.
// xs must be uniform and contain x0 (index i0).
struct SpaceMarch {
  std::vector<Frame> frames;
  std::vector<Vec3> chi;
};
SpaceMarch parallel_frame_space(const FilamentField& field, double t,
                                const std::vector<double>& xs, int i0,
                                const Frame& f0, const Vec3& chi0,
                                double max_phase_step = 0.5, int min_substeps = 2,
                                double ortho_abort = 1e-6);

// One Magnus-4 step of the frame time system over [t0, t1] at fixed x0.
Frame frame_time_step(const FilamentField& field, const Frame& f, double t0,
                      double t1, double x0);

// Finite-difference residuals of the curve evolution and of the tangent map
// on saved states (requires >= 3 states at uniform dt):
//   curve:   chi_t - chi_x ^ chi_xx
//   tangent: T_t - T ^ T_xx
struct ResidualReport {
  double max_curve = 0;
  double max_tangent = 0;
  std::vector<double> curve;    // flattened interior samples
  std::vector<double> tangent;
};
ResidualReport binormal_residual(const CurveTrajectory& traj);

// Independent-route check: re-derives chi(t, x_probe) by transporting in time
// at x_probe and integrating chi_t = Im(conj(u) N) there, then compares with
// the fanned-out curve. Returns the max deviation over probes and times.
double route_consistency(const FilamentField& field, const CurveTrajectory& traj,
                         const std::vector<int>& probe_indices,
                         const CurveOptions& opts);

// Filament function recovered from a framed curve: <T_x, e1> + i <T_x, e2>
// by centered differences on the sample grid.
std::vector<cplx> recover_filament(const CurveState& state);

}  // namespace vflab
