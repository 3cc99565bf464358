#include "vflab/continued_fraction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vflab {

namespace {
// Decompose |t| as num/den with num, den exact integers (den a power of two).
void dyadic_surrogate(double t, long long& num, unsigned long long& den) {
  int e = 0;
  double m = std::frexp(std::fabs(t), &e);  // t = m * 2^e, m in [0.5, 1)
  // 53 bits of mantissa
  long long mant = (long long)std::ldexp(m, 53);
  int shift = e - 53;
  // num/den = mant * 2^shift
  num = mant;
  den = 1;
  while (shift > 0 && num < (1ll << 61)) { num <<= 1; --shift; }
  while (shift < 0) {
    if (den >= (1ull << 62)) { num = (num + 1) >> 1; }  // beyond double precision anyway
    else den <<= 1;
    ++shift;
  }
  if (t < 0) num = -num;
}
}  // namespace

double ContinuedFractionExpansion::error(int n) const {
  // |t - p_n/q_n| = |num*q_n - p_n*den| / (den*q_n), numerator exact in 128 bits
  __int128 a = (__int128)surrogate_num * q[n] - (__int128)p[n] * (__int128)surrogate_den;
  if (a < 0) a = -a;
  long double v = (long double)a / ((long double)surrogate_den * (long double)q[n]);
  return (double)v;
}

ContinuedFractionExpansion continued_fraction(double t, int depth) {
  if (!std::isfinite(t)) throw std::invalid_argument("continued_fraction: t must be finite");
  if (depth < 1) throw std::invalid_argument("continued_fraction: depth must be >= 1");

  ContinuedFractionExpansion out;
  out.t = t;
  long long num;
  unsigned long long den;
  dyadic_surrogate(t, num, den);
  out.surrogate_num = num;
  out.surrogate_den = den;

  // Euclid on (num, den); negative input handled by flooring the first quotient.
  __int128 a = num, b = (__int128)den;
  long long pm1 = 1, pm2 = 0;  // p_{n-1}, p_{n-2}
  long long qm1 = 0, qm2 = 1;
  const long long qcap = 1ll << 60;

  for (int n = 0; n < depth; ++n) {
    __int128 quot = a >= 0 ? a / b : -((-a + b - 1) / b);  // floor division
    __int128 rem = a - quot * b;
    if (quot > qcap || quot < -qcap) { out.exhausted = true; break; }
    long long an = (long long)quot;

    // convergent recurrence, with overflow guard on q_n
    __int128 pn = (__int128)an * pm1 + pm2;
    __int128 qn = (__int128)an * qm1 + qm2;
    if (qn > qcap || pn > qcap || pn < -qcap) { out.exhausted = true; break; }

    out.quotients.push_back(an);
    out.p.push_back((long long)pn);
    out.q.push_back((long long)qn);
    pm2 = pm1; pm1 = (long long)pn;
    qm2 = qm1; qm1 = (long long)qn;

    if (rem == 0) { out.exhausted = true; break; }  // input rational at this precision
    a = b;
    b = rem;
  }

  out.mu.resize(out.q.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t n = 0; n < out.q.size(); ++n) {
    double err = out.error((int)n);
    if (err > 0 && out.q[n] > 1)
      out.mu[n] = -std::log(err) / std::log((double)out.q[n]);
  }
  return out;
}

}  // namespace vflab
