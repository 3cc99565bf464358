#include <doctest.h>

#include <cmath>
#include <random>

#include "vflab/continued_fraction.hpp"
#include "vflab/gauss_sums.hpp"
#include "vflab/sequence.hpp"

using namespace vflab;

TEST_SUITE_BEGIN("seqcore");

TEST_CASE("weighted norm on hand-checked sequences") {
  ComplexSeq zero(4);
  CHECK(weighted_norm(zero, 0.0) == 0.0);
  CHECK(weighted_norm(zero, 3.0) == 0.0);

  ComplexSeq delta(3);
  delta.at(0) = 1.0;
  CHECK(weighted_norm(delta, 3.0) == doctest::Approx(1.0).epsilon(1e-15));

  ComplexSeq three(1);
  three.at(-1) = 1.0;
  three.at(0) = 1.0;
  three.at(1) = 1.0;
  // 1 + 2*(1+1) = 5
  CHECK(weighted_norm(three, 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("weighted norm at s=0 squares to the mass") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  ComplexSeq a(9);
  for (int k = -9; k <= 9; ++k) a.at(k) = cplx(U(rng), U(rng));
  const double n0 = weighted_norm(a, 0.0);
  CHECK(n0 * n0 == doctest::Approx(a.mass()).epsilon(1e-14));
}

TEST_CASE("gauss sum basic values") {
  CHECK(gauss_sum(5, 3, 1) == cplx(1, 0));
  CHECK(std::abs(gauss_sum(0, 0, 7) - cplx(7, 0)) < 1e-12);
  CHECK(std::abs(std::abs(gauss_sum(1, 0, 3)) - std::sqrt(3.0)) < 1e-12);
  // independent 3-term check of G(1,0,3)
  cplx direct{0, 0};
  for (int l = 0; l < 3; ++l) direct += std::polar(1.0, 2.0 * M_PI * (l * l) / 3.0);
  CHECK(std::abs(gauss_sum(1, 0, 3) - direct) < 1e-13);
}

TEST_CASE("gauss sum magnitude law for odd q") {
  for (long long q = 1; q <= 99; q += 2)
    for (long long p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (long long m = 0; m < q; ++m) {
        const double g = std::abs(gauss_sum(-p, m, q));
        REQUIRE(std::abs(g - std::sqrt((double)q)) < 1e-9);
      }
    }
}

TEST_CASE("continued fraction of 1/3 terminates") {
  auto cf = continued_fraction(1.0 / 3.0, 30);
  CHECK(cf.exhausted);
  REQUIRE(cf.quotients.size() >= 2);
  CHECK(cf.quotients[0] == 0);
  CHECK(cf.quotients[1] == 3);
  CHECK(cf.p[1] == 1);
  CHECK(cf.q[1] == 3);
}

TEST_CASE("golden ratio convergents are Fibonacci ratios") {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  auto cf = continued_fraction(phi, 30);
  REQUIRE(cf.q.size() >= 20);
  long long fa = 1, fb = 1;
  for (size_t n = 0; n < 20; ++n) {
    CHECK(cf.p[n] == fb);
    CHECK(cf.q[n] == fa);
    const long long fc = fa + fb;
    fa = fb;
    fb = fc;
  }
  for (size_t n = 0; n + 1 < cf.q.size(); ++n) {
    CHECK(cf.error((int)n) < 1.0 / (double(cf.q[n]) * double(cf.q[n])));
    if (n >= 1) CHECK(cf.q[n + 1] > cf.q[n]);  // q_0 = q_1 = 1 when a_1 = 1
  }
}

TEST_CASE("sqrt(2) has partial quotients [1;2,2,2,...]") {
  auto cf = continued_fraction(std::sqrt(2.0), 20);
  REQUIRE(cf.quotients.size() >= 15);
  CHECK(cf.quotients[0] == 1);
  for (size_t n = 1; n < 15; ++n) CHECK(cf.quotients[n] == 2);
  for (size_t n = 0; n < 15; ++n)
    CHECK(std::abs(std::sqrt(2.0) - double(cf.p[n]) / double(cf.q[n])) <
          1.0 / (double(cf.q[n]) * double(cf.q[n])));
}

TEST_CASE("convergents are in lowest terms and alternate sides") {
  const double t = M_PI / 3.1;
  auto cf = continued_fraction(t, 25);
  for (size_t n = 0; n < cf.q.size(); ++n)
    CHECK(std::gcd(std::llabs(cf.p[n]), cf.q[n]) == 1);
  for (size_t n = 0; n + 1 < cf.q.size(); ++n) {
    const double dn = t - double(cf.p[n]) / double(cf.q[n]);
    const double dn1 = t - double(cf.p[n + 1]) / double(cf.q[n + 1]);
    if (dn != 0 && dn1 != 0) CHECK(dn * dn1 < 0);
  }
}

TEST_CASE("rational time normalizes to lowest terms") {
  RationalTime rt(4, 6);
  CHECK(rt.p == 2);
  CHECK(rt.q == 3);
  CHECK(rt.value() == doctest::Approx(2.0 / (2.0 * M_PI * 3.0)));
  CHECK_THROWS(RationalTime(1, 0));
}

TEST_SUITE_END();
