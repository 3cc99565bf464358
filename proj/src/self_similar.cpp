#include "vflab/self_similar.hpp"

#include <cmath>
#include <stdexcept>

#include "vflab/fitting.hpp"
#include "vflab/parallel.hpp"

namespace vflab {

namespace {
// Filament of the profile curve at unit time with explicit extent hint.
class ProfileField : public FilamentField {
 public:
  ProfileField(double a, double extent) : a_(a), extent_(extent) {}
  cplx u(double, double x) const override { return std::polar(a_, x * x / 4.0); }
  cplx ux(double, double x) const override { return u(0, x) * cplx(0, x / 2.0); }
  double phase_rate_x(double) const override { return 0.5 * extent_ + 1.0; }

 private:
  double a_, extent_;
};
}  // namespace

SelfSimilarProfile integrate_profile(double a, double S, double ds,
                                     double saturation_threshold) {
  if (a <= 0) throw std::invalid_argument("integrate_profile: a must be positive");
  if (S < 20.0 / a)
    throw std::invalid_argument("integrate_profile: S too short for tangent saturation");

  SelfSimilarProfile out;
  out.a = a;
  out.S = S;
  const int half = (int)std::ceil(S / ds);
  out.s.resize(2 * half + 1);
  for (int i = 0; i <= 2 * half; ++i) out.s[i] = (i - half) * ds;

  ProfileField field(a, S);
  SpaceMarch sm = parallel_frame_space(field, 1.0, out.s, half, Frame{}, Vec3{0, 0, 0},
                                       0.5, 2, 1e-6);
  out.G = std::move(sm.chi);
  out.frames = std::move(sm.frames);

  auto window_mean = [&](int lo, int hi, double& osc) {
    Vec3 mean{0, 0, 0};
    for (int i = lo; i <= hi; ++i) mean += out.frames[i].T;
    mean *= 1.0 / double(hi - lo + 1);
    osc = 0;
    for (int i = lo; i <= hi; ++i) osc = std::max(osc, norm(out.frames[i].T - mean));
    return normalized(mean);
  };

  const int n = (int)out.s.size();
  const int wlen = std::max(2, (int)std::llround(0.1 * S / ds));
  double osc_p = 0, osc_m = 0;
  out.A_plus = window_mean(n - 1 - wlen, n - 1, osc_p);
  out.A_minus = window_mean(0, wlen, osc_m);
  out.tail_oscillation = std::max(osc_p, osc_m);
  out.saturated = out.tail_oscillation < saturation_threshold;

  const Vec3 b = -out.A_minus;
  out.theta = std::atan2(norm(cross(out.A_plus, b)), dot(out.A_plus, b));
  return out;
}

cplx selfsim_filament(double a, double t, double x) {
  if (t <= 0) throw std::invalid_argument("selfsim_filament: t must be positive");
  return std::polar(a / std::sqrt(t), x * x / (4.0 * t));
}

double cfm_integral(double a, double t0, double t1) {
  if (!(0 < t0 && t0 <= t1)) throw std::invalid_argument("cfm_integral: need 0 < t0 <= t1");
  return a * a * std::log(t1 / t0);
}

AngleCalibration calibrate_angle_law(const std::vector<double>& a_values,
                                     double S_over_a, double ds) {
  AngleCalibration cal;
  cal.a = a_values;
  cal.theta.resize(a_values.size());
  const int n = (int)a_values.size();
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int i = 0; i < n; ++i) {
    const double a = a_values[i];
    const double S = std::max(S_over_a / a, 25.0);
    cal.theta[i] = integrate_profile(a, S, ds).theta;
  }
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = a_values[i] * a_values[i];
    y[i] = -std::log(std::sin(0.5 * cal.theta[i]));
  }
  const LinearFit fit = proportional_fit(x, y);
  cal.cstar = fit.slope;
  cal.r2 = fit.r2;
  return cal;
}

}  // namespace vflab
