#pragma once

#include <memory>

#include "vflab/coeff_evolution.hpp"
#include "vflab/sequence.hpp"

namespace vflab {

// Fixed-time view of a field; lets trajectory-backed fields interpolate their
// coefficients once per time slice instead of once per sample.
class FieldSlice {
 public:
  virtual ~FieldSlice() = default;
  virtual cplx u(double x) const = 0;
  virtual cplx ux(double x) const = 0;
};

// A filament function u(t, x) driving the frame systems, together with the
// space-independent gauge function f(t) it is paired with.
class FilamentField {
 public:
  virtual ~FilamentField() = default;
  virtual cplx u(double t, double x) const = 0;
  virtual cplx ux(double t, double x) const = 0;
  virtual double f(double t) const { return 0.0; }
  struct Sample {
    cplx u, ux;
  };
  virtual Sample sample(double t, double x) const { return {u(t, x), ux(t, x)}; }
  virtual std::unique_ptr<FieldSlice> slice(double t) const;

  // Resolution hints for the marches. phase_rate_x bounds |d/dx arg-scale| of
  // u at time t over the working window; freq_s bounds the frequencies of the
  // field at fixed x as a function of s = 1/(4t). Zero means "non-stiff".
  virtual double phase_rate_x(double t) const { return 0.0; }
  virtual double freq_s(double x) const { return 0.0; }
  // Fields with 1/t stiffness are marched in s = 1/(4t); smooth fields in t.
  virtual bool reciprocal_time() const { return false; }
};

class ZeroField : public FilamentField {
 public:
  cplx u(double, double) const override { return {0, 0}; }
  cplx ux(double, double) const override { return {0, 0}; }
};

// u = c (real constant); not a solution of the evolution equations, used for
// closed-form space-transport checks.
class ConstantField : public FilamentField {
 public:
  explicit ConstantField(double c) : c_(c) {}
  cplx u(double, double) const override { return {c_, 0}; }
  cplx ux(double, double) const override { return {0, 0}; }

 private:
  double c_;
};

// Filament of the unit circle translating at unit speed (smoke ring):
// u = e^{i t/2}, an x-independent solution of the half-normalized equation.
class SmokeRingField : public FilamentField {
 public:
  cplx u(double t, double) const override { return std::polar(1.0, 0.5 * t); }
  cplx ux(double, double) const override { return {0, 0}; }
};

// Traveling loop filament u = 2B sech(B(x - 2 a t)) e^{i(ax + (B^2-a^2)t)}
// (curvature 2B sech, the classical one-loop profile), translating at 2a.
class SolitonField : public FilamentField {
 public:
  SolitonField(double a, double B = 1.0) : a_(a), B_(B) {}
  cplx u(double t, double x) const override {
    const double arg = B_ * (x - 2 * a_ * t);
    const double amp = 2.0 * B_ / std::cosh(arg);
    return std::polar(amp, a_ * x + (B_ * B_ - a_ * a_) * t);
  }
  cplx ux(double t, double x) const override {
    const double arg = B_ * (x - 2 * a_ * t);
    return u(t, x) * cplx(-B_ * std::tanh(arg), a_);
  }
  double phase_rate_x(double) const override { return std::fabs(a_) + B_; }

 private:
  double a_, B_;
};

// Self-similar filament u = a e^{i x^2/(4t)}/sqrt(t), paired with f = a^2/t.
class SelfSimilarField : public FilamentField {
 public:
  explicit SelfSimilarField(double a) : a_(a) {}
  cplx u(double t, double x) const override {
    return std::polar(a_ / std::sqrt(t), x * x / (4.0 * t));
  }
  cplx ux(double t, double x) const override {
    return u(t, x) * cplx(0, x / (2.0 * t));
  }
  double f(double t) const override { return a_ * a_ / t; }
  double phase_rate_x(double t) const override { return 10.0 / (2.0 * t); }
  double freq_s(double x) const override { return x * x; }
  bool reciprocal_time() const override { return true; }

 private:
  double a_;
};

// u multiplied by the time phase e^{i c t}, with the gauge shifted by -2c so
// the N-rotation rate (|u|^2 - f)/2 absorbs the extra phase speed. Yields the
// same tangent evolution as the base field.
class PhaseShiftedField : public FilamentField {
 public:
  PhaseShiftedField(std::shared_ptr<const FilamentField> base, double c)
      : base_(std::move(base)), c_(c) {}
  cplx u(double t, double x) const override {
    return base_->u(t, x) * std::polar(1.0, c_ * t);
  }
  cplx ux(double t, double x) const override {
    return base_->ux(t, x) * std::polar(1.0, c_ * t);
  }
  double f(double t) const override { return base_->f(t) - 2.0 * c_; }
  double phase_rate_x(double t) const override { return base_->phase_rate_x(t); }
  double freq_s(double x) const override { return base_->freq_s(x); }
  bool reciprocal_time() const override { return base_->reciprocal_time(); }

 private:
  std::shared_ptr<const FilamentField> base_;
  double c_;
};

// Filament field backed by an integrated coefficient trajectory:
//   u(t,x) = scale * sum_k A_k(t) e^{i(x-k)^2/(4t)} / sqrt(t).
// The default scale sqrt(2) converts solutions of i v_t + v_xx + |v|^2 v = 0
// into filament functions of the half-normalized frame system.
class CoeffField : public FilamentField {
 public:
  CoeffField(std::shared_ptr<const CoeffTrajectory> traj, double x_extent = 10.0,
             double scale = std::sqrt(2.0))
      : traj_(std::move(traj)), x_extent_(x_extent), scale_(scale) {}

  cplx u(double t, double x) const override;
  cplx ux(double t, double x) const override;
  double phase_rate_x(double t) const override {
    return (x_extent_ + traj_->band()) / (2.0 * t);
  }
  double freq_s(double x) const override {
    const double r = std::fabs(x) + traj_->band();
    return r * r;
  }
  bool reciprocal_time() const override { return true; }
  Sample sample(double t, double x) const override;
  std::unique_ptr<FieldSlice> slice(double t) const override;
  const CoeffTrajectory& trajectory() const { return *traj_; }
  double scale() const { return scale_; }

 private:
  std::shared_ptr<const CoeffTrajectory> traj_;
  double x_extent_;
  double scale_;
};

}  // namespace vflab
