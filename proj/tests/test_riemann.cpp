#include <doctest.h>

#include <cmath>

#include "vflab/fitting.hpp"
#include "vflab/riemann_function.hpp"

using namespace vflab;

TEST_SUITE_BEGIN("riemann");

TEST_CASE("R(0) = 0 exactly and 2pi periodicity") {
  RiemannSeries s;
  s.truncation = 4000;
  CHECK(std::abs(eval_R(s, 0.0)) == 0.0);
  for (double t : {0.37, 1.9, 4.4}) {
    const cplx a = eval_R(s, t);
    const cplx b = eval_R(s, t + 2 * M_PI);
    CHECK(std::abs(a - b) < 1e-11);
  }
}

TEST_CASE("closed value R(pi) = -pi^2/2 within the certified tail") {
  RiemannSeries s;
  s.truncation = 10000;
  const cplx v = eval_R(s, M_PI);
  CHECK(std::abs(v - cplx(-M_PI * M_PI / 2, 0)) < s.tail_bound());
  CHECK(s.tail_bound() < 5e-4);
}

TEST_CASE("tail certificate: quadrupling N moves the value within the bound") {
  RiemannSeries s;
  s.truncation = 64;
  RiemannSeries s4;
  s4.truncation = 256;
  for (double t : {0.3, 1.1, 2.7, 5.5}) {
    const double diff = std::abs(eval_R(s, t) - eval_R(s4, t));
    CHECK(diff <= s.tail_bound());
  }
}

TEST_CASE("conjugate symmetry at x0 = 0") {
  RiemannSeries s;
  s.truncation = 2000;
  for (double t : {0.4, 1.3, 2.9}) {
    const cplx a = eval_R(s, -t);
    const cplx b = std::conj(eval_R(s, t));
    CHECK(std::abs(a - b) < 1e-13);
  }
}

TEST_CASE("F kernel: exact value at 0, evenness, quadratic decay") {
  const cplx f0 = F_kernel(0.0);
  const cplx expect = std::sqrt(2 * M_PI) * cplx(-1.0, 1.0);
  CHECK(std::abs(f0 - expect) < 1e-6);
  CHECK(std::abs(F_kernel(3.7) - F_kernel(-3.7)) < 1e-12);
  CHECK(std::abs(F_kernel(10.0)) < 1.3 * std::abs(f0) / 25.0);
  CHECK(std::abs(F_kernel(10.0)) > 0.2 * std::abs(f0) / 100.0);
}

TEST_CASE("near-rational variation at t = 0 (rational 0/1)") {
  RiemannSeries s;
  s.truncation = 10000;
  // |R(h) - R(0)| / sqrt(h) -> |F(0)| = 2 sqrt(pi)
  for (double h : {1e-4, 1e-5, 1e-6}) {
    auto ex = near_rational_expansion(s, 0, 1, h);
    CHECK(std::abs(ex.actual) / std::sqrt(h) ==
          doctest::Approx(2 * std::sqrt(M_PI)).epsilon(0.02));
    CHECK(ex.discrepancy < 0.05 * std::abs(ex.actual));
  }
}

TEST_CASE("near-rational discrepancy decays like the error term") {
  // the ladder sits where the O(q^{3/2} h^{3/2}) remainder dominates the
  // truncation floor of the direct evaluation
  RiemannSeries s;
  s.truncation = 2'000'000;
  const long long p = 1, q = 3;
  std::vector<double> lh, ld;
  for (double h : {1.2e-2, 6e-3, 3e-3, 1.5e-3}) {
    auto ex = near_rational_expansion(s, p, q, h);
    lh.push_back(std::log(h));
    ld.push_back(std::log(std::max(ex.discrepancy, 1e-300)));
  }
  const auto fit = linear_fit(lh, ld);
  CHECK(fit.slope > 1.0);
  CHECK(fit.slope < 2.0);
}

TEST_CASE("vanishing Gauss sum lifts the local exponent") {
  // q = 2, p = 1, x0 = 0: G(1, 0, 2) = 0, so the sqrt(h) term is absent
  RiemannSeries s;
  s.truncation = 20000;
  auto ex = near_rational_expansion(s, 1, 2, 1e-5);
  CHECK(std::abs(ex.gauss) < 1e-12);
  std::vector<double> lh, li;
  for (double h : {1e-4 / 4, 1e-5, 1e-5 / 4}) {
    auto e2 = near_rational_expansion(s, 1, 2, h);
    lh.push_back(std::log(h));
    li.push_back(std::log(std::abs(e2.actual)));
  }
  const auto fit = linear_fit(lh, li);
  CHECK(fit.slope > 0.65);  // visibly above the generic 1/2
}

TEST_CASE("flatness: Parseval consistency and denominator") {
  RiemannSeries s;
  auto res = flatness(s, 64.0, 512, 20);
  CHECK(std::abs(res.l2 - res.l2_quadrature) < 1e-6 * res.l2);
  // x0 = 0: coefficients 2/j^2 for j^2 >= N
  double expect = 0;
  for (int j = 8; j <= 512; ++j) expect += 4.0 / (double(j) * double(j) * double(j) * double(j));
  CHECK(res.l2 * res.l2 == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("flatness of a single surviving frequency is 1") {
  // keep only j = +/- jmax: choose N just below jmax^2
  RiemannSeries s;
  auto res = flatness(s, 512.0 * 512.0 - 0.5, 512, 20);
  CHECK(res.modes == 1);
  CHECK(res.flatness == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("flatness grows along N = 16..256 at x0 = 0") {
  RiemannSeries s;
  double prev = 0;
  for (double N : {16.0, 32.0, 64.0, 128.0, 256.0}) {
    auto res = flatness(s, N, 768, 21);
    CHECK(res.flatness > prev);
    prev = res.flatness;
  }
  CHECK(prev > 2.0);
}

TEST_CASE("flatness quadrature refinement is converged") {
  RiemannSeries s;
  auto a = flatness(s, 64.0, 512, 20);
  auto b = flatness(s, 64.0, 512, 21);
  CHECK(std::abs(a.l4 - b.l4) < 1e-3 * b.l4);
}

TEST_CASE("dyadic blocks: p=2 Parseval vs quadrature, single-term blocks") {
  RiemannSeries s;
  s.x0 = 0.7;
  const auto par = dyadic_block_lp(s, 5, 2.0);
  const auto quad = dyadic_block_lp(s, 5, 2.0000001);
  CHECK(std::abs(par.norm - quad.norm) < 1e-5 * par.norm);

  // a single-frequency signal has |f| = const = coefficient modulus
  RiemannSeries w;
  w.x0 = 0.0;
  auto b0 = dyadic_block_lp(w, 0, 3.7);  // modes |j| = 1 only
  CHECK(b0.norm == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("block exponents are nondecreasing in p") {
  RiemannSeries s;
  double prev = -1e9;
  for (double p : {1.0, 2.0, 4.0, 6.0}) {
    auto be = block_exponent(s, p, 4, 8);
    CHECK(be.eta >= prev - 0.02);
    prev = be.eta;
  }
}

TEST_CASE("holder estimate at t = 0: exponent 1/2") {
  RiemannSeries s;
  s.truncation = 2000;
  std::vector<double> scales;
  for (int k = 0; k <= 13; ++k) scales.push_back(1e-2 * std::pow(0.5, k));
  auto est = holder_estimate(s, 0.0, scales);
  CHECK(est.alpha == doctest::Approx(0.5).epsilon(0.1));
  CHECK(est.r2 > 0.9);
  CHECK(std::isinf(est.mu));
}

TEST_CASE("holder estimate at the golden time: exponent 3/4") {
  RiemannSeries s;
  s.truncation = 2000;
  const double t = 2 * M_PI * 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<double> scales;
  for (int k = 0; k <= 13; ++k) scales.push_back(1e-2 * std::pow(0.5, k));
  auto est = holder_estimate(s, t, scales);
  CHECK(est.alpha == doctest::Approx(0.75).epsilon(0.1));
  CHECK(est.r2 > 0.9);
  CHECK(est.mu == doctest::Approx(2.0).epsilon(0.25));
  // periodicity of the estimate
  auto est2 = holder_estimate(s, t + 2 * M_PI, scales);
  CHECK(std::abs(est2.alpha - est.alpha) < 0.05);
}

TEST_CASE("liouville panel: constructed exponents hit their targets") {
  for (double mu : {2.0, 3.0, 4.0}) {
    auto pt = liouville_time(mu, 1e-6, 1e-2, 7);
    CHECK(pt.mu_hat == doctest::Approx(mu).epsilon(0.2));
  }
}

TEST_SUITE_END();
