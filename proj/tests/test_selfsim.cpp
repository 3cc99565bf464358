#include <doctest.h>

#include <cmath>

#include "vflab/self_similar.hpp"

using namespace vflab;

TEST_SUITE_BEGIN("selfsim");

TEST_CASE("filament value and scaling") {
  CHECK(std::abs(selfsim_filament(0.8, 0.25, 1.7)) ==
        doctest::Approx(0.8 / 0.5).epsilon(1e-14));
  CHECK(std::arg(selfsim_filament(0.8, 0.25, 0.0)) == doctest::Approx(0.0));
  CHECK_THROWS(selfsim_filament(1.0, 0.0, 0.0));
}

TEST_CASE("cfm integral closed form") {
  CHECK(cfm_integral(1.0, std::exp(-1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cfm_integral(0.5, 0.3, 0.3) == 0.0);
  CHECK(cfm_integral(2.0, 0.1, 0.7) ==
        doctest::Approx(4.0 * cfm_integral(1.0, 0.1, 0.7)).epsilon(1e-14));
  CHECK_THROWS(cfm_integral(1.0, 0.0, 1.0));
}

TEST_CASE("profile invariants: unit tangent, curvature a, torsion s/2") {
  const double a = 0.6;
  auto prof = integrate_profile(a, 40.0, 0.004);
  const int n = (int)prof.s.size();
  const double ds = prof.s[1] - prof.s[0];
  double worst_c = 0, worst_tau = 0;
  for (int i = n / 4; i < (3 * n) / 4; i += 7) {
    CHECK(std::fabs(norm(prof.frames[i].T) - 1.0) < 1e-9);
    // fourth-order stencil: T''' grows like s^2 and would pollute the
    // second-order difference at the window ends
    const Vec3 Tx = (prof.frames[i - 2].T - prof.frames[i + 2].T +
                     (prof.frames[i + 1].T - prof.frames[i - 1].T) * 8.0) /
                    (12 * ds);
    worst_c = std::max(worst_c, std::fabs(norm(Tx) - a));
    // torsion from the filament phase: arg u = s^2/4, d/ds = s/2
    const cplx u0(dot(Tx, prof.frames[i].e1), dot(Tx, prof.frames[i].e2));
    const Vec3 Tx2 = (prof.frames[i + 2].T - prof.frames[i].T) / (2 * ds);
    const cplx u1(dot(Tx2, prof.frames[i + 1].e1), dot(Tx2, prof.frames[i + 1].e2));
    const double dphase = std::arg(u1 / u0) / ds;
    worst_tau = std::max(worst_tau, std::fabs(dphase - 0.5 * prof.s[i]));
  }
  CHECK(worst_c < 1e-4);
  CHECK(worst_tau < 1e-2);
}

TEST_CASE("tangent oscillation decays like 1/s and the limit saturates") {
  auto prof = integrate_profile(0.5, 60.0, 0.005);
  CHECK(prof.saturated);
  // oscillation amplitude near the end is below a/s * margin
  CHECK(prof.tail_oscillation < 4.0 * 0.5 / (0.9 * 60.0));
}

TEST_CASE("small a: no corner (theta -> pi at rate 2 a sqrt(pi))") {
  const double a = 0.05;
  auto prof = integrate_profile(a, 450.0, 0.02);
  CHECK(prof.theta > M_PI - 2.2 * a * std::sqrt(M_PI));
  const double law = 2.0 * std::asin(std::exp(-M_PI * a * a / 2));
  CHECK(prof.theta == doctest::Approx(law).epsilon(0.02));
}

TEST_CASE("theta decreases in a") {
  double prev = M_PI;
  for (double a : {0.2, 0.5, 0.8, 1.2, 1.6}) {
    auto prof = integrate_profile(a, std::max(25.0, 30.0 / a), 0.004);
    CHECK(prof.theta < prev);
    prev = prof.theta;
  }
}

TEST_CASE("angle law calibration: -log sin(theta/2) linear in a^2") {
  auto cal = calibrate_angle_law({0.2, 0.4, 0.6, 0.8, 1.0, 1.2}, 30.0, 0.005);
  CHECK(cal.r2 > 0.999);
  // the fitted constant is recorded by the calibration report; here it should
  // land on the half-pi normalization of the profile equations
  CHECK(cal.cstar == doctest::Approx(M_PI / 2).epsilon(0.02));
}


TEST_CASE("filament agrees with the one-mode coefficient field up to the log phase") {
  const double a = 0.7, t = 0.3;
  ComplexSeq alpha(0);
  alpha.at(0) = a / std::sqrt(2.0);
  auto st = anchor_state(alpha, t);
  std::vector<double> phase_diff;
  for (double x : {-1.1, 0.0, 0.4, 2.2}) {
    const cplx field = std::sqrt(2.0) * evaluate_u(st, x).u;
    const cplx ss = selfsim_filament(a, t, x);
    CHECK(std::abs(std::abs(field) - std::abs(ss)) < 1e-13);
    phase_diff.push_back(std::arg(field / ss));
  }
  // the gauge phase is x-independent
  for (double p : phase_diff) CHECK(p == doctest::Approx(phase_diff[0]).epsilon(1e-10));
}

TEST_CASE("rescaling invariance of the one-corner evolution") {
  // lambda^{-1} chi(lambda^2 t, lambda x) is again the evolution of the same
  // corner; integrate at two scales and compare on the common grid
  const double theta = 1.9, lambda = 2.0;
  const double a = angle_to_weight(theta);
  ComplexSeq alpha(0);
  alpha.at(0) = a / std::sqrt(2.0);

  auto run_at = [&](double t_eval, double dx, double xmax) {
    EvolveOptions eo;
    eo.tol = 1e-11;
    auto res = evolve_coeffs(alpha, 1e-3 * t_eval / 0.2, t_eval, eo);
    auto field = std::make_shared<CoeffField>(res.trajectory, xmax);
    CurveOptions co;
    co.x_min = -xmax;
    co.x_max = xmax;
    co.dx = dx;
    co.x0 = 0;
    co.save_times = {t_eval};
    return evolve_curve(*field, 1e-3 * t_eval / 0.2, co);
  };
  auto base = run_at(0.2, 1.0 / 64, 4.0);
  auto big = run_at(0.2 * lambda * lambda, lambda / 64, 4.0 * lambda);

  std::vector<Vec3> A, B;
  for (size_t j = 0; j < base.states[0].x.size(); j += 4) {
    A.push_back(base.states[0].chi[j]);
    B.push_back(big.states[0].chi[j] / lambda);  // same index: x scaled by lambda
  }
  auto rm = best_rigid_motion(A, B, false);
  double worst = 0;
  for (size_t i = 0; i < A.size(); ++i)
    worst = std::max(worst, norm(rm.R * A[i] + rm.d - B[i]));
  CHECK(worst < 2e-3);
}

TEST_SUITE_END();
