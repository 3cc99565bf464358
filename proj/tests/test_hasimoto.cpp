#include <doctest.h>

#include <cmath>

#include "vflab/curve_pipeline.hpp"
#include "vflab/fitting.hpp"
#include "vflab/self_similar.hpp"

using namespace vflab;

TEST_SUITE_BEGIN("hasimoto");

namespace {
std::vector<double> grid(double a, double b, double dx) {
  std::vector<double> xs;
  const int n = (int)std::llround((b - a) / dx);
  for (int i = 0; i <= n; ++i) xs.push_back(a + i * dx);
  return xs;
}
}  // namespace

TEST_CASE("zero filament: constant frame, straight line") {
  ZeroField field;
  auto xs = grid(-4, 4, 1.0 / 64);
  const int i0 = (int)(xs.size() / 2);
  auto sm = parallel_frame_space(field, 1.0, xs, i0, Frame{}, Vec3{1, 2, 3});
  for (size_t i = 0; i < xs.size(); ++i) {
    CHECK(norm(sm.frames[i].T - Frame{}.T) < 1e-14);
    CHECK(norm(sm.frames[i].e1 - Frame{}.e1) < 1e-14);
    const Vec3 expect = Vec3{1, 2, 3} + Frame{}.T * xs[i];
    CHECK(norm(sm.chi[i] - expect) < 1e-12);
  }
}

TEST_CASE("constant real filament rotates T in the (T,e1) plane at rate c") {
  const double c = 0.7;
  ConstantField field(c);
  auto xs = grid(0, 3, 1.0 / 128);
  auto sm = parallel_frame_space(field, 1.0, xs, 0, Frame{}, Vec3{});
  for (size_t i = 0; i < xs.size(); ++i) {
    const double ang = c * xs[i];
    const Vec3 expectT = Frame{}.T * std::cos(ang) + Frame{}.e1 * std::sin(ang);
    CHECK(norm(sm.frames[i].T - expectT) < 1e-10);
    // rotation never leaves the (T, e1) plane
    CHECK(std::fabs(dot(sm.frames[i].T, Frame{}.e2)) < 1e-12);
  }
}

TEST_CASE("unit-circle filament: tangent closes after arclength 2*pi") {
  ConstantField field(1.0);
  auto xs = grid(0, 2 * M_PI, 2 * M_PI / 1024);
  auto sm = parallel_frame_space(field, 1.0, xs, 0, Frame{}, Vec3{});
  CHECK(norm(sm.frames.back().T - sm.frames.front().T) < 1e-9);
  CHECK(norm(sm.chi.back() - sm.chi.front()) < 1e-8);
}

TEST_CASE("frame orthonormality is preserved to rounding by construction") {
  SolitonField field(0.5);
  auto xs = grid(-6, 6, 1.0 / 128);
  const int i0 = (int)(xs.size() / 2);
  auto sm = parallel_frame_space(field, 0.3, xs, i0, Frame{}, Vec3{});
  double worst = 0;
  for (const auto& f : sm.frames) {
    worst = std::max(worst, orthonormality_defect(f));
    CHECK(handedness_defect(f) < 1e-10);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("time step: zero field leaves the frame fixed") {
  ZeroField field;
  Frame f;
  Frame g = frame_time_step(field, f, 0.1, 0.9, 0.0);
  CHECK(norm(g.T - f.T) < 1e-15);
  CHECK(norm(g.e1 - f.e1) < 1e-15);
}

TEST_CASE("time step with x-independent field keeps T fixed and spins N") {
  SmokeRingField field;  // u = e^{it}, ux = 0, |u|^2 = 1
  Frame f;
  const double dt = 0.37;
  Frame g = frame_time_step(field, f, 0.2, 0.2 + dt, 1.3);
  CHECK(norm(g.T - f.T) < 1e-13);
  // N picks up the phase (|u|^2 - f)/2 * t: e1(t) = cos(t/2) e1 - sin(t/2) e2
  const double ang = 0.5 * dt;
  const Vec3 expect_e1 = f.e1 * std::cos(ang) - f.e2 * std::sin(ang);
  CHECK(norm(g.e1 - expect_e1) < 1e-10);
}

TEST_CASE("generator antisymmetry: advance preserves orthonormality exactly") {
  Frame f;
  Frame g = advance(f, 0.3, -1.2, 0.8, 0.5);
  CHECK(orthonormality_defect(g) < 1e-15);
  CHECK(handedness_defect(g) < 1e-15);
}

TEST_CASE("smoke ring: reconstructed curve matches the translating circle") {
  SmokeRingField field;
  CurveOptions opts;
  opts.x_min = -M_PI;
  opts.x_max = M_PI;
  opts.dx = 2 * M_PI / 512;
  opts.x0 = opts.x_min + 256 * opts.dx;
  for (int i = 1; i <= 8; ++i) opts.save_times.push_back(0.125 * i);
  auto traj = evolve_curve(field, 1e-9, opts);

  // reference: circle of radius 1 translating at unit speed along its axis;
  // one rigid motion fitted on the first state only.
  auto ref_curve = [&](double t, double x) { return Vec3{std::cos(x), std::sin(x), t}; };
  std::vector<Vec3> a, b;
  for (const auto& st : traj.states)
    for (size_t j = 0; j < st.x.size(); j += 16) {
      a.push_back(st.chi[j]);
      b.push_back(ref_curve(st.t - 1e-9, st.x[j]));
    }
  // the vertical direction may be mirrored depending on base-frame handedness
  RigidMotion rm = best_rigid_motion(a, b, true);
  double worst = 0;
  for (const auto& st : traj.states)
    for (size_t j = 0; j < st.x.size(); ++j) {
      const Vec3 mapped = rm.R * st.chi[j] + rm.d;
      const Vec3 want = ref_curve(st.t - 1e-9, st.x[j]);
      worst = std::max(worst, norm(mapped - want));
    }
  CHECK(worst < 1e-4);
}

TEST_CASE("soliton travels at speed 2*alpha (curvature peak tracking)") {
  const double alpha = 0.5;
  SolitonField field(alpha);
  CurveOptions opts;
  opts.x_min = -8;
  opts.x_max = 8;
  opts.dx = 1.0 / 128;
  opts.x0 = 0;
  for (int i = 1; i <= 6; ++i) opts.save_times.push_back(0.5 * i);
  auto traj = evolve_curve(field, 1e-9, opts);

  std::vector<double> ts, peaks;
  for (const auto& st : traj.states) {
    auto u = recover_filament(st);
    // quadratic refinement of the |u| peak
    int best = 0;
    for (size_t j = 1; j + 1 < u.size(); ++j)
      if (std::abs(u[j]) > std::abs(u[best])) best = (int)j;
    const double ym = std::abs(u[best - 1]), y0 = std::abs(u[best]), yp = std::abs(u[best + 1]);
    const double frac = 0.5 * (ym - yp) / (ym - 2 * y0 + yp);
    ts.push_back(st.t);
    peaks.push_back(st.x[best] + frac * opts.dx);
  }
  auto fit = linear_fit(ts, peaks);
  CHECK(fit.slope == doctest::Approx(2 * alpha).epsilon(0.01));
  CHECK(fit.r2 > 0.999);
}

TEST_CASE("soliton curve is a traveling shape: rigid-motion residual small") {
  const double alpha = 0.5;
  SolitonField field(alpha);
  CurveOptions opts;
  opts.x_min = -10;
  opts.x_max = 10;
  opts.dx = 1.0 / 128;
  opts.x0 = 0;
  for (int i = 1; i <= 4; ++i) opts.save_times.push_back(0.25 * i);
  auto traj = evolve_curve(field, 1e-9, opts);

  // chi(t, x) should equal a rigid motion of chi(0, x - 2 alpha t); compare on
  // the overlapping window
  const auto& s0 = traj.states[0];
  double worst = 0;
  for (size_t is = 1; is < traj.states.size(); ++is) {
    const auto& st = traj.states[is];
    const double shift = 2 * alpha * (st.t - s0.t);
    const int joff = (int)std::llround(shift / opts.dx);
    std::vector<Vec3> a, b;
    for (size_t j = 0; j + joff < st.x.size(); ++j) {
      a.push_back(s0.chi[j]);
      b.push_back(st.chi[j + joff]);
    }
    RigidMotion rm = best_rigid_motion(a, b, false);
    for (size_t j = 0; j < a.size(); ++j)
      worst = std::max(worst, norm(rm.R * a[j] + rm.d - b[j]));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("gauge covariance: phase-shifted field gives the same tangents") {
  auto base = std::make_shared<SolitonField>(0.4);
  PhaseShiftedField shifted(base, 1.3);
  CurveOptions opts;
  opts.x_min = -5;
  opts.x_max = 5;
  opts.dx = 1.0 / 64;
  opts.x0 = 0;
  opts.save_times = {0.3, 0.6, 0.9};
  auto t1 = evolve_curve(*base, 1e-9, opts);
  auto t2 = evolve_curve(shifted, 1e-9, opts);
  double worst = 0;
  for (size_t i = 0; i < t1.states.size(); ++i)
    for (size_t j = 0; j < t1.states[i].x.size(); ++j)
      worst = std::max(worst, norm(t1.states[i].frames[j].T - t2.states[i].frames[j].T));
  CHECK(worst < 1e-6);
}

TEST_CASE("filament round trip: recovered u reproduces the source tangents") {
  SolitonField field(0.3);
  CurveOptions opts;
  opts.x_min = -6;
  opts.x_max = 6;
  opts.dx = 1.0 / 256;
  opts.x0 = 0;
  opts.save_times = {0.5};
  auto traj = evolve_curve(field, 1e-9, opts);
  const auto& st = traj.states[0];
  auto u = recover_filament(st);
  double worst = 0;
  for (size_t j = 2; j + 2 < u.size(); ++j)
    worst = std::max(worst, std::abs(u[j] - field.u(st.t, st.x[j])));
  CHECK(worst < 1e-3);

  // re-transporting the recovered filament reproduces the tangents
  // (round trip closes on the same grid)
  class Sampled : public FilamentField {
   public:
    Sampled(std::vector<double> xs, std::vector<cplx> us)
        : xs_(std::move(xs)), us_(std::move(us)) {}
    cplx u(double, double x) const override {
      const double dx = xs_[1] - xs_[0];
      double w = (x - xs_.front()) / dx;
      int i = std::clamp((int)w, 0, (int)xs_.size() - 2);
      const double fr = w - i;
      return us_[i] * (1 - fr) + us_[i + 1] * fr;
    }
    cplx ux(double, double) const override { return {0, 0}; }

   private:
    std::vector<double> xs_;
    std::vector<cplx> us_;
  };
  Sampled sampled(st.x, u);
  const int i0 = (int)(st.x.size() / 2);
  auto sm = parallel_frame_space(sampled, st.t, st.x, i0, st.frames[i0], st.chi[i0]);
  double tworst = 0;
  for (size_t j = 4; j + 4 < st.x.size(); ++j)
    tworst = std::max(tworst, norm(sm.frames[j].T - st.frames[j].T));
  CHECK(tworst < 2e-3);
}

TEST_CASE("rotating the initial normal plane multiplies the filament by a phase") {
  SolitonField field(0.4);
  auto xs = grid(-4, 4, 1.0 / 128);
  const int i0 = (int)(xs.size() / 2);
  const double th = 0.77;
  Frame f0;
  Frame f1;
  f1.e1 = f0.e1 * std::cos(th) + f0.e2 * std::sin(th);
  f1.e2 = f0.e2 * std::cos(th) - f0.e1 * std::sin(th);
  auto sm0 = parallel_frame_space(field, 0.5, xs, i0, f0, Vec3{});

  // transporting the rotated frame under the phase-rotated filament gives the
  // same tangents
  // rotating (e1,e2) by +theta (e1 toward e2) sends N to e^{-i theta} N, so
  // the matching filament is u e^{-i theta}
  class Rotated : public FilamentField {
   public:
    Rotated(const FilamentField& b, double th) : b_(b), ph_(std::polar(1.0, -th)) {}
    cplx u(double t, double x) const override { return b_.u(t, x) * ph_; }
    cplx ux(double t, double x) const override { return b_.ux(t, x) * ph_; }
    double phase_rate_x(double t) const override { return b_.phase_rate_x(t); }

   private:
    const FilamentField& b_;
    cplx ph_;
  };
  Rotated rot(field, th);
  auto sm1 = parallel_frame_space(rot, 0.5, xs, i0, f1, Vec3{});
  double worst = 0;
  for (size_t j = 0; j < xs.size(); ++j)
    worst = std::max(worst, norm(sm0.frames[j].T - sm1.frames[j].T));
  CHECK(worst < 1e-9);
}

TEST_CASE("binormal residual: smoke ring at second order") {
  SmokeRingField field;
  auto run = [&](double dx, double dt) {
    CurveOptions opts;
    opts.x_min = -2;
    opts.x_max = 2;
    opts.dx = dx;
    opts.x0 = 0;
    for (int i = 1; i <= 6; ++i) opts.save_times.push_back(0.2 + dt * i);
    auto traj = evolve_curve(field, 0.2, opts);
    return binormal_residual(traj).max_curve;
  };
  const double r1 = run(1.0 / 32, 0.04);
  const double r2 = run(1.0 / 64, 0.02);
  const double order = std::log2(r1 / r2);
  CHECK(order > 1.8);
}

TEST_CASE("route consistency: independent time transport agrees with fan-out") {
  SolitonField field(0.5);
  CurveOptions opts;
  opts.x_min = -6;
  opts.x_max = 6;
  opts.dx = 1.0 / 64;
  opts.x0 = 0;
  opts.save_times = {0.2, 0.4, 0.6, 0.8};
  auto traj = evolve_curve(field, 0.05, opts);
  const int n = (int)traj.states[0].x.size();
  const double dev = route_consistency(field, traj, {n / 4, n / 2 + 7, (3 * n) / 4}, opts);
  CHECK(dev < 1e-6);
}

TEST_SUITE_END();
