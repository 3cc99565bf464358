#include "vflab/filament_fields.hpp"

#include <cmath>
#include <vector>

namespace vflab {

namespace {
class DefaultSlice : public FieldSlice {
 public:
  DefaultSlice(const FilamentField& f, double t) : f_(f), t_(t) {}
  cplx u(double x) const override { return f_.u(t_, x); }
  cplx ux(double x) const override { return f_.ux(t_, x); }

 private:
  const FilamentField& f_;
  double t_;
};

class CoeffSlice : public FieldSlice {
 public:
  CoeffSlice(std::vector<cplx> A, int band, double t, double scale)
      : A_(std::move(A)), band_(band), t_(t), scale_(scale) {}
  cplx u(double x) const override {
    const double inv_sqrt_t = 1.0 / std::sqrt(t_);
    cplx acc{0, 0};
    for (int k = -band_; k <= band_; ++k) {
      const double d = x - k;
      acc += A_[k + band_] * std::polar(inv_sqrt_t, d * d / (4.0 * t_));
    }
    return scale_ * acc;
  }
  cplx ux(double x) const override {
    const double inv_sqrt_t = 1.0 / std::sqrt(t_);
    cplx acc{0, 0};
    for (int k = -band_; k <= band_; ++k) {
      const double d = x - k;
      acc += A_[k + band_] * std::polar(inv_sqrt_t, d * d / (4.0 * t_)) *
             cplx(0, d / (2.0 * t_));
    }
    return scale_ * acc;
  }

 private:
  std::vector<cplx> A_;
  int band_;
  double t_;
  double scale_;
};
}  // namespace

namespace {
std::vector<cplx>& coeff_scratch(int n) {
  thread_local std::vector<cplx> buf;
  if ((int)buf.size() < n) buf.resize(n);
  return buf;
}
}  // namespace

std::unique_ptr<FieldSlice> FilamentField::slice(double t) const {
  return std::make_unique<DefaultSlice>(*this, t);
}

std::unique_ptr<FieldSlice> CoeffField::slice(double t) const {
  const int band = traj_->band();
  std::vector<cplx> A(2 * band + 1);
  traj_->eval_s(1.0 / (4.0 * t), A.data());
  return std::make_unique<CoeffSlice>(std::move(A), band, t, scale_);
}

FilamentField::Sample CoeffField::sample(double t, double x) const {
  const int band = traj_->band();
  auto& A = coeff_scratch(2 * band + 1);
  traj_->eval_s(1.0 / (4.0 * t), A.data());
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  cplx acc{0, 0}, accx{0, 0};
  for (int k = -band; k <= band; ++k) {
    const double d = x - k;
    const cplx term = A[k + band] * std::polar(inv_sqrt_t, d * d / (4.0 * t));
    acc += term;
    accx += term * cplx(0, d / (2.0 * t));
  }
  return {scale_ * acc, scale_ * accx};
}

cplx CoeffField::u(double t, double x) const {
  const int band = traj_->band();
  auto& A = coeff_scratch(2 * band + 1);
  traj_->eval_s(1.0 / (4.0 * t), A.data());
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  cplx acc{0, 0};
  for (int k = -band; k <= band; ++k) {
    const double d = x - k;
    acc += A[k + band] * std::polar(inv_sqrt_t, d * d / (4.0 * t));
  }
  return scale_ * acc;
}

cplx CoeffField::ux(double t, double x) const {
  const int band = traj_->band();
  auto& A = coeff_scratch(2 * band + 1);
  traj_->eval_s(1.0 / (4.0 * t), A.data());
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  cplx acc{0, 0};
  for (int k = -band; k <= band; ++k) {
    const double d = x - k;
    acc += A[k + band] * std::polar(inv_sqrt_t, d * d / (4.0 * t)) *
           cplx(0, d / (2.0 * t));
  }
  return scale_ * acc;
}

}  // namespace vflab
