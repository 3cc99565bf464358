#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "vflab/coeff_system.hpp"
#include "vflab/sequence.hpp"

namespace vflab {

// Snapshot of the coefficient vector at a physical time t > 0.
struct CoeffState {
  double t = 1;
  ComplexSeq A;
  double mass = 0;  // cached sum |A_k|^2

  CoeffState() = default;
  CoeffState(double t_, ComplexSeq A_) : t(t_), A(std::move(A_)), mass(A.mass()) {}

  // cached mass must track the coefficients to 1e-12 relative
  bool mass_consistent(double rel = 1e-12) const {
    const double m = A.mass();
    return std::abs(m - mass) <= rel * std::max(1.0, m);
  }
};

// Leading-order state at a small anchor time: A_k(t0) = exp(-i(|a_k|^2 - 2M) log t0) * a_k.
CoeffState anchor_state(const ComplexSeq& alpha, double t0);

// The time-inversion map: (t, {A_k}) -> (1/t, {conj A_k}).
CoeffState pseudo_conformal(const CoeffState& state);

struct EvolveOptions {
  double tol = 1e-10;          // local target per step (relative)
  int band = -1;               // default: alpha.band()
  bool parallel = true;
  double max_step_fraction = 0.35;  // |h| <= fraction * min |s| over the step
  double initial_step_fraction = 0.01;
  std::vector<double> save_times;   // additional interior save times
  bool store_trajectory = true;     // keep all accepted nodes for dense output
};

// Dense-output record of an integration in the reciprocal variable s = 1/(4t).
class CoeffTrajectory {
 public:
  CoeffTrajectory(int band, double mass) : band_(band), mass_(mass) {}

  void push(double s, const std::vector<cplx>& A);
  int band() const { return band_; }
  double mass() const { return mass_; }
  size_t nodes() const { return s_.size(); }
  double s_front() const { return s_.front(); }
  double s_back() const { return s_.back(); }

  // Cubic 4-point Lagrange interpolation in s (the coefficients vary slowly
  // in this variable). t = 1/(4s).
  void eval_s(double s, cplx* A_out) const;
  ComplexSeq eval_time(double t) const;
  CoeffState state_at_time(double t) const;

 private:
  int band_;
  double mass_;
  std::vector<double> s_;
  std::vector<std::vector<cplx>> A_;
  bool increasing_ = true;
};

struct EvolveResult {
  std::vector<CoeffState> states;  // at t_start, save_times..., t_end
  std::shared_ptr<CoeffTrajectory> trajectory;
  size_t steps_accepted = 0;
  size_t steps_rejected = 0;
};

// Integrates the coefficient system from the pure-phase anchor at t_start to
// t_end. The integration runs in s = 1/(4t), where the nonresonant phases are
// exp(-2i m s): each step integrates them exactly against a quadratic
// interpolant of the slow envelopes (Filon-type predictor-corrector), so the
// cost per step is set by the envelope variation, not the phase frequency.
EvolveResult evolve_coeffs(const ComplexSeq& alpha, double t_start, double t_end,
                           const EvolveOptions& opts = {});

// Same integrator but starting from an arbitrary state (no anchor phase).
EvolveResult evolve_state(const CoeffState& start, double t_end,
                          const EvolveOptions& opts = {});

// Reference integrator: adaptive Dormand-Prince RK5(4) on the same system in
// s, resolving every oscillation by brute force. Serial; usable for small
// bands and short windows, and as the independent route in tests.
EvolveResult evolve_state_rk(const CoeffState& start, double t_end, double tol,
                             int band = -1);

// u(t, x) = sum_k A_k exp(i (x-k)^2 / (4t)) / sqrt(t) and its x-derivative.
struct FieldSample {
  cplx u, ux;
};
FieldSample evaluate_u(const CoeffState& state, double x);
std::vector<FieldSample> evaluate_u(const CoeffState& state,
                                    const std::vector<double>& xs,
                                    bool parallel = true);

}  // namespace vflab
