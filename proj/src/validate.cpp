#include "vflab/validate.hpp"

#include <cmath>
#include <random>

#include "vflab/coeff_evolution.hpp"
#include "vflab/curve_pipeline.hpp"
#include "vflab/gauss_sums.hpp"
#include "vflab/polygon_flow.hpp"
#include "vflab/riemann_function.hpp"
#include "vflab/self_similar.hpp"
#include "vflab/talbot.hpp"

namespace vflab {

namespace {
CheckResult make(const std::string& name, double value, double threshold,
                 const std::string& detail = "") {
  return {name, value < threshold, value, threshold, detail};
}
}  // namespace

std::vector<CheckResult> run_validation_suite(uint64_t seed, bool parallel) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);

  {  // Gauss-sum magnitude law on a sample
    double worst = 0;
    for (long long q = 1; q <= 49; q += 2)
      for (long long p = 1; p < q; p += 2) {
        if (std::gcd(p, q) != 1) continue;
        for (long long m = 0; m < q; m += 3)
          worst = std::max(worst,
                           std::fabs(std::abs(gauss_sum(-p, m, q)) - std::sqrt((double)q)));
      }
    out.push_back(make("gauss_magnitude_odd_q", worst, 1e-9));
  }

  {  // nonresonant factorization, exhaustive to band 6
    long long bad = 0;
    for (int band = 0; band <= 6; ++band)
      for (int k = -band; k <= band; ++k) {
        auto part = resonant_partition(k, band);
        for (const auto& nr : part.nonresonant)
          if (nr.omega != 2 * nr.m) ++bad;
      }
    out.push_back(make("nonresonant_phase_factorization", (double)bad, 0.5));
  }

  {  // mass conservation
    ComplexSeq alpha(8);
    for (int k = -8; k <= 8; ++k) alpha.at(k) = cplx(U(rng), U(rng)) * 0.25;
    EvolveOptions eo;
    eo.tol = 1e-11;
    eo.parallel = parallel;
    auto res = evolve_coeffs(alpha, 1.0, 0.05, eo);
    const double m0 = alpha.mass();
    double drift = 0;
    for (const auto& st : res.states) drift = std::max(drift, std::fabs(st.A.mass() - m0) / m0);
    out.push_back(make("coefficient_mass_drift", drift, 1e-8));
  }

  {  // single-mode closed form
    ComplexSeq alpha(0);
    alpha.at(0) = cplx(0.8, -0.3);
    EvolveOptions eo;
    eo.tol = 1e-12;
    auto res = evolve_coeffs(alpha, 1.0, 0.02, eo);
    const cplx expect = alpha[0] * std::polar(1.0, std::norm(alpha[0]) * std::log(0.02));
    out.push_back(make("single_mode_closed_form",
                       std::abs(res.states.back().A[0] - expect), 1e-8));
  }

  {  // integrator cross-check (oscillation-resolving reference)
    ComplexSeq alpha(2);
    for (int k = -2; k <= 2; ++k) alpha.at(k) = cplx(U(rng), U(rng)) * 0.3;
    CoeffState a0 = anchor_state(alpha, 0.4);
    EvolveOptions eo;
    eo.tol = 1e-11;
    eo.parallel = parallel;
    auto filon = evolve_state(a0, 0.06, eo);
    auto ref = evolve_state_rk(a0, 0.06, 1e-11);
    double worst = 0;
    for (int k = -2; k <= 2; ++k)
      worst = std::max(worst, std::abs(filon.states.back().A[k] - ref.states.back().A[k]));
    out.push_back(make("filon_vs_reference_rk", worst, 5e-7));
  }

  {  // frame integrity across the pipeline stages
    double worst = 0;
    SmokeRingField ring;
    CurveOptions co;
    co.x_min = -M_PI;
    co.x_max = M_PI;
    co.dx = 2 * M_PI / 256;
    co.x0 = co.x_min + 128 * co.dx;
    co.save_times = {0.25, 0.5, 0.75, 1.0};
    co.parallel = parallel;
    auto ringtraj = evolve_curve(ring, 1e-6, co);
    for (const auto& st : ringtraj.states) worst = std::max(worst, st.ortho_defect);

    SolitonField sol(0.5);
    CurveOptions cs;
    cs.x_min = -6;
    cs.x_max = 6;
    cs.dx = 1.0 / 64;
    cs.x0 = 0;
    cs.save_times = {0.3, 0.6};
    cs.parallel = parallel;
    auto soltraj = evolve_curve(sol, 1e-6, cs);
    for (const auto& st : soltraj.states) worst = std::max(worst, st.ortho_defect);

    auto prof = integrate_profile(0.6, 40.0, 0.005);
    for (size_t i = 0; i < prof.frames.size(); i += 7)
      worst = std::max(worst, orthonormality_defect(prof.frames[i]));

    PolygonRunOptions po;
    po.t0 = 1e-2;
    po.save_times = {0.05, 0.1};
    po.band = 6;
    po.parallel = parallel;
    auto run = simulate_polygon(PolygonSpec::two_corner(2.2), po);
    for (const auto& st : run.curve.states) worst = std::max(worst, st.ortho_defect);

    out.push_back(make("frame_orthonormality", worst, 1e-8));
  }

  {  // gauge covariance of the tangent evolution
    auto base = std::make_shared<SolitonField>(0.4);
    PhaseShiftedField shifted(base, 0.9);
    CurveOptions co;
    co.x_min = -5;
    co.x_max = 5;
    co.dx = 1.0 / 64;
    co.x0 = 0;
    co.save_times = {0.4, 0.8};
    co.parallel = parallel;
    auto t1 = evolve_curve(*base, 1e-6, co);
    auto t2 = evolve_curve(shifted, 1e-6, co);
    double worst = 0;
    for (size_t i = 0; i < t1.states.size(); ++i)
      for (size_t j = 0; j < t1.states[i].x.size(); ++j)
        worst = std::max(worst, norm(t1.states[i].frames[j].T - t2.states[i].frames[j].T));
    out.push_back(make("gauge_covariance_T", worst, 1e-6));
  }

  {  // route consistency (space fan-out vs time transport)
    SolitonField sol(0.5);
    CurveOptions co;
    co.x_min = -6;
    co.x_max = 6;
    co.dx = 1.0 / 64;
    co.x0 = 0;
    co.save_times = {0.2, 0.4, 0.6};
    co.parallel = parallel;
    auto traj = evolve_curve(sol, 0.05, co);
    const int n = (int)traj.states[0].x.size();
    const double dev = route_consistency(sol, traj, {n / 4, (3 * n) / 4}, co);
    out.push_back(make("curve_route_consistency", dev, 1e-6));
  }

  {  // revival comb: per-cell weight normalization
    double worst = 0;
    for (auto [p, q] : std::vector<std::pair<long long, long long>>{{1, 3}, {2, 7}, {5, 16}}) {
      auto atoms = dirac_comb_evolution(RationalTime(p, q));
      double s = 0;
      for (const auto& a : atoms) s += std::norm(a.weight);
      worst = std::max(worst, std::fabs(s - 1.0));
    }
    out.push_back(make("comb_weight_normalization", worst, 1e-11));
  }

  {  // theta-identity residual
    auto chk = poisson_identity_check(0.3);
    out.push_back(make("poisson_identity_residual", chk.residual, 1e-6));
  }

  {  // Riemann sum structure
    RiemannSeries s;
    s.truncation = 4000;
    double worst = std::abs(eval_R(s, 0.0));
    worst = std::max(worst, std::abs(eval_R(s, 1.1) - eval_R(s, 1.1 + 2 * M_PI)));
    worst = std::max(worst, std::abs(eval_R(s, -0.7) - std::conj(eval_R(s, 0.7))));
    out.push_back(make("riemann_symmetries", worst, 1e-11));

    RiemannSeries big;
    big.truncation = 10000;
    out.push_back(make("riemann_value_at_pi",
                       std::abs(eval_R(big, M_PI) - cplx(-M_PI * M_PI / 2, 0)),
                       big.tail_bound()));
  }

  {  // oscillatory kernel value
    const cplx expect = std::sqrt(2 * M_PI) * cplx(-1.0, 1.0);
    out.push_back(make("F_kernel_at_zero", std::abs(F_kernel(0.0) - expect), 1e-6));
  }

  {  // flatness quadrature vs Parseval
    RiemannSeries s;
    auto f = flatness(s, 64.0, 512, 20);
    out.push_back(make("flatness_parseval_consistency",
                       std::fabs(f.l2 - f.l2_quadrature) / f.l2, 1e-6));
  }

  return out;
}

}  // namespace vflab
