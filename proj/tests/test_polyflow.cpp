#include <doctest.h>

#include <cmath>

#include "vflab/fitting.hpp"
#include "vflab/polygon_flow.hpp"
#include "vflab/self_similar.hpp"

using namespace vflab;

TEST_SUITE_BEGIN("polyflow");

TEST_CASE("angle/weight inverse pair") {
  CHECK(angle_to_weight(M_PI) == 0.0);
  CHECK(angle_to_weight(M_PI / 2) ==
        doctest::Approx(std::sqrt(std::log(2.0) / M_PI)).epsilon(1e-12));
  for (double th = 0.1; th < 3.11; th += 0.25)
    CHECK(weight_to_angle(angle_to_weight(th)) == doctest::Approx(th).epsilon(1e-12));
  CHECK_THROWS(angle_to_weight(0.0));
}

TEST_CASE("polygon filament data") {
  auto straight = PolygonSpec::straight(3);
  auto a0 = polygon_filament(straight);
  for (int k = -3; k <= 3; ++k) CHECK(std::abs(a0[k]) == 0.0);

  auto one = PolygonSpec::single_corner(2.0);
  auto a1 = polygon_filament(one);
  CHECK(std::abs(a1[0] - angle_to_weight(2.0) / std::sqrt(2.0)) < 1e-15);

  auto two = PolygonSpec::two_corner(1.3);
  auto a2 = polygon_filament(two);
  CHECK(a2[-1].real() == doctest::Approx(a2[1].real()));
  CHECK(a2[-1].imag() == 0.0);
  CHECK(std::abs(a2[0]) == 0.0);
}

TEST_CASE("polygon geometry: jumps have size 2 cos(theta/2)") {
  for (double th : {0.8, M_PI / 2, 2.4}) {
    auto spec = PolygonSpec::two_corner(th);
    auto geo = polygon_geometry(spec);
    for (int k = -1; k <= 1; ++k) {
      const double expect = (spec.theta_at(k) < M_PI) ? 2.0 * std::cos(th / 2) : 0.0;
      CHECK(norm(geo.jump[k + 1]) == doctest::Approx(expect).epsilon(1e-12));
    }
    // wedge angle between the incoming ray (-T_in) and the outgoing tangent
    const double cosang = -dot(geo.segment_tangent[0], geo.segment_tangent[1]);
    CHECK(std::acos(std::clamp(-cosang, -1.0, 1.0)) ==
          doctest::Approx(M_PI - th).epsilon(1e-9));
  }
  auto geo = polygon_geometry(PolygonSpec::two_corner(M_PI / 2));
  CHECK(std::fabs(dot(geo.jump[0], geo.jump[2])) < 1e-12);
}

TEST_CASE("straight spec stays a straight still line") {
  PolygonRunOptions opts;
  opts.t0 = 0.05;
  opts.save_times = {0.2, 0.5};
  opts.band = 4;
  auto run = simulate_polygon(PolygonSpec::straight(1), opts);
  for (const auto& st : run.curve.states)
    for (size_t j = 0; j < st.x.size(); ++j) {
      CHECK(norm(st.frames[j].T - Frame{}.T) < 1e-12);
      CHECK(norm(st.chi[j] - Vec3{0, 0, 0} - Frame{}.T * st.x[j]) < 1e-10);
    }
}

TEST_CASE("one corner reproduces the self-similar profile up to a rigid motion") {
  const double theta = M_PI / 2;
  const double a = angle_to_weight(theta);
  PolygonRunOptions opts;
  opts.t0 = 1e-3;
  opts.save_times = {0.25};
  opts.band = 8;
  opts.tol = 1e-11;
  auto run = simulate_polygon(PolygonSpec::single_corner(theta), opts);

  const double ds = 1.0 / 64;
  auto prof = integrate_profile(a, 48.0, ds);
  const auto& st = run.curve.states[0];
  const double rt = std::sqrt(st.t);

  std::vector<Vec3> meas, ref;
  const int half_prof = (int)(prof.s.size() / 2);
  for (size_t j = 0; j < st.x.size(); j += 4) {
    if (std::fabs(st.x[j]) > 6.0) continue;
    const double s = st.x[j] / rt;  // lands on the profile grid
    const int idx = half_prof + (int)std::llround(s / ds);
    meas.push_back(st.chi[j]);
    ref.push_back(prof.G[idx] * rt);
  }
  auto rm = best_rigid_motion(ref, meas, false);
  double worst = 0;
  for (size_t i = 0; i < meas.size(); ++i)
    worst = std::max(worst, norm(rm.R * ref[i] + rm.d - meas[i]));
  CHECK(worst < 2e-4);
}

TEST_CASE("two corners: extrapolated trace recovers the prescribed angles") {
  const double theta = 2.0;
  PolygonRunOptions opts;
  opts.t0 = 1e-3;
  opts.save_times = {2e-3, 4e-3, 8e-3, 16e-3};
  opts.band = 10;
  auto run = simulate_polygon(PolygonSpec::two_corner(theta), opts);
  auto trace = trace_convergence(run);

  const auto& xs = run.curve.states[0].x;
  auto segment_dir = [&](double a, double b) {
    int ia = -1, ib = -1;
    for (size_t j = 0; j < xs.size(); ++j) {
      if (std::fabs(xs[j] - a) < 1e-9) ia = (int)j;
      if (std::fabs(xs[j] - b) < 1e-9) ib = (int)j;
    }
    REQUIRE(ia >= 0);
    REQUIRE(ib >= 0);
    return normalized(trace.chi0[ib] - trace.chi0[ia]);
  };
  const Vec3 left = segment_dir(-3.0, -1.5);
  const Vec3 mid = segment_dir(-0.5, 0.5);
  const Vec3 right = segment_dir(1.5, 3.0);
  const double ang_l = std::acos(std::clamp(-dot(left, mid), -1.0, 1.0));
  const double ang_r = std::acos(std::clamp(-dot(mid, right), -1.0, 1.0));
  CHECK(std::fabs(ang_l - theta) < 1e-2);
  CHECK(std::fabs(ang_r - theta) < 1e-2);

  for (double xc : {-1.0, 1.0}) {
    for (size_t j = 0; j < xs.size(); ++j)
      if (std::fabs(xs[j] - xc) < 1e-9) {
        CHECK(trace.exponent[j] == doctest::Approx(0.5).epsilon(0.2));
      }
  }
}

TEST_CASE("one corner: trace exponent 0.5 at the corner") {
  PolygonRunOptions opts;
  opts.t0 = 1e-3;
  opts.save_times = {2e-3, 4e-3, 8e-3, 16e-3};
  opts.band = 8;
  auto run = simulate_polygon(PolygonSpec::single_corner(1.8), opts);
  auto trace = trace_convergence(run);
  const auto& xs = run.curve.states[0].x;
  for (size_t j = 0; j < xs.size(); ++j)
    if (std::fabs(xs[j]) < 1e-9)
      CHECK(trace.exponent[j] == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("parametrization reversal: reflected data evolves to reflected coefficients") {
  PolygonSpec spec = PolygonSpec::straight(2);
  spec.theta[1] = 1.4;   // k = -1
  spec.theta[4] = 2.2;   // k = +2
  PolygonSpec rev = PolygonSpec::straight(2);
  rev.theta[3] = 1.4;    // k = +1
  rev.theta[0] = 2.2;    // k = -2

  const auto alpha = polygon_filament(spec);
  const auto alpha_rev = polygon_filament(rev);
  for (int k = -2; k <= 2; ++k) CHECK(std::abs(alpha_rev[k] - alpha[-k]) < 1e-15);

  EvolveOptions eo;
  eo.tol = 1e-11;
  eo.band = 6;
  auto fwd = evolve_coeffs(alpha, 1e-2, 0.3, eo);
  auto bwd = evolve_coeffs(alpha_rev, 1e-2, 0.3, eo);
  for (int k = -6; k <= 6; ++k)
    CHECK(std::abs(bwd.states.back().A[k] - fwd.states.back().A[-k]) < 1e-9);

  PolygonRunOptions opts;
  opts.t0 = 1e-3;
  opts.save_times = {2e-3, 4e-3, 8e-3, 16e-3};
  opts.band = 6;
  auto run_f = simulate_polygon(spec, opts);
  auto run_b = simulate_polygon(rev, opts);
  auto tr_f = trace_convergence(run_f);
  auto tr_b = trace_convergence(run_b);
  const auto& xs = run_f.curve.states[0].x;
  std::vector<Vec3> a, b;
  for (size_t j = 0; j < xs.size(); j += 8) {
    size_t jr = xs.size() - 1 - j;
    a.push_back(tr_f.chi0[j]);
    b.push_back(tr_b.chi0[jr]);
  }
  auto rm = best_rigid_motion(a, b, true);
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, norm(rm.R * a[i] + rm.d - b[i]));
  CHECK(worst < 5e-2);
}

TEST_CASE("corner trajectory smoke run at n = 8") {
  PolygonRunOptions opts;
  opts.t0 = 1e-2;
  opts.tol = 1e-9;
  auto ct = corner_vs_riemann(8, 1.0, 1.0, 0.3, opts, 24);
  CHECK(ct.t.size() == 24);
  CHECK(ct.sup_deviation < 0.5);
  double maxmeas = 0;
  for (const auto& v : ct.measured) maxmeas = std::max(maxmeas, norm(v));
  CHECK(maxmeas > 0.05);
  CHECK(maxmeas < 2.0);
}

TEST_CASE("energy density at t = 0: closed form vs band integrals") {
  auto spec = PolygonSpec::two_corner(M_PI / 2);
  auto rep = energy_density_t0(spec, {8, 12, 16});
  CHECK(rep.closed_form == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rep.upper_value == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(rep.closed_form < rep.upper_value);
  for (double b : rep.bands) CHECK(b == doctest::Approx(4.0).epsilon(0.02));
  CHECK(!rep.plateau_flagged);

  auto rep0 = energy_density_t0(PolygonSpec::straight(2), {4, 8});
  CHECK(rep0.closed_form == 0.0);
  for (double b : rep0.bands) CHECK(b < 1e-28);
}

TEST_CASE("tangent transform growth smoke: finite values, positive slope") {
  auto res = tangent_fourier_growth(M_PI / 2, {1.0 / 16, 1.0 / 32, 1.0 / 64}, 8.0, 6.0,
                                    1.0 / 128, 1e-8);
  REQUIRE(res.points.size() == 3);
  for (const auto& pt : res.points) {
    CHECK(pt.sup_window > 0);
    CHECK(std::isfinite(pt.outside_max));
  }
  CHECK(res.slope > 0);
}

TEST_SUITE_END();
