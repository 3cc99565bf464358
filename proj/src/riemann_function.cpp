#include "vflab/riemann_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "vflab/fitting.hpp"
#include "vflab/gauss_sums.hpp"
#include "vflab/parallel.hpp"

namespace vflab {

namespace {

inline bool excluded(int j, double w0) { return std::fabs(j - w0) < 1e-9; }

// e^{i theta} - 1 without cancellation: 2 i sin(theta/2) e^{i theta/2}
inline cplx expm1_i(double theta) {
  const double s = std::sin(0.5 * theta);
  return cplx(0, 2.0 * s) * std::polar(1.0, 0.5 * theta);
}

// ---------------------------------------------------------------------------
// sine integral, used by the analytic tails of F_kernel

double Si(double x) {
  const double ax = std::fabs(x);
  double v;
  if (ax <= 25.0) {
    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                                 -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const int panels = std::max(4, (int)std::ceil(ax));
    const double hw = ax / panels;
    v = 0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double c = (pnl + 0.5) * hw;
      for (int g = 0; g < 8; ++g) {
        const double t = c + 0.5 * hw * gx[g];
        v += 0.5 * hw * gw[g] * (t == 0 ? 1.0 : std::sin(t) / t);
      }
    }
  } else {
    // Si = pi/2 - f cos - g sin with the asymptotic auxiliary series
    double f = 0, g = 0;
    double fk = 1.0 / ax;
    for (int n = 0; n < 9; ++n) {
      if (n % 2 == 0) f += (n % 4 == 0 ? fk : -fk);
      else g += ((n - 1) % 4 == 0 ? fk : -fk);
      fk *= (n + 1) / ax;
    }
    v = M_PI / 2 - f * std::cos(ax) - g * std::sin(ax);
  }
  return x >= 0 ? v : -v;
}

}  // namespace

double RiemannSeries::tail_bound() const {
  const double margin = truncation - std::fabs(omega0);
  if (margin <= 1) return 4.0;
  return 4.0 / margin;
}

cplx eval_R_increment(const RiemannSeries& series, double t0, double h,
                      int truncation_override) {
  const int N = truncation_override > 0 ? truncation_override : series.truncation;
  if (N < 8) throw std::invalid_argument("eval_R: truncation must be >= 8");
  const double w0 = series.omega0, x0 = series.x0;
  cplx acc{0, 0};
  for (int j = -N; j <= N; ++j) {
    if (j == 0 && std::fabs(w0) < 1e-9) continue;
    if (excluded(j, w0)) continue;
    const double d = j - w0;
    const double freq = d * d;
    const cplx inc =
        std::polar(1.0, std::fmod(t0 * freq, 2 * M_PI)) * expm1_i(h * freq);
    acc += inc * std::polar(1.0 / freq, j * x0);
  }
  return acc;
}

cplx eval_R(const RiemannSeries& series, double t) {
  return eval_R_increment(series, 0.0, t);
}

// ---------------------------------------------------------------------------

namespace {

// one-sided tail integral_Y^inf e^{i(y^2 + z y)}/y^2 dy by two integrations
// by parts (valid when the stationary point -z/2 lies well inside [-Y, Y])
cplx osc_tail(double Y, double z) {
  const double phi = Y * Y + z * Y;
  const double dphi = 2 * Y + z;
  const double g0 = 1.0 / (Y * Y);
  const double w1 = -2.0 / (Y * Y * Y * dphi) - 2.0 * g0 / (dphi * dphi);
  const cplx eiphi = std::polar(1.0, std::fmod(phi, 2 * M_PI));
  const cplx i(0, 1);
  // I = -e^{i phi} g0/(i phi') + (1/i) e^{i phi} w1/(i phi') + O(Y^-5)
  return -eiphi * g0 / (i * dphi) + eiphi * w1 / (i * i * dphi);
}

}  // namespace

cplx F_kernel(double z) {
  z = std::fabs(z);  // even integrand
  const double Y = std::max(60.0, 0.5 * z + 25.0);

  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  auto integrand = [z](double y) -> cplx {
    const double y2 = y * y;
    cplx val;
    if (std::fabs(y) < 1e-4) {
      val = cplx(-0.5 * y2, 1.0 - y2 * y2 / 6.0);
    } else {
      val = expm1_i(y2) / y2;
    }
    return val * std::polar(1.0, y * z);
  };

  cplx acc{0, 0};
  double y = -Y;
  while (y < Y) {
    const double rate = 2 * std::fabs(y) + z + 1.0;
    const double w = std::min(3.0 / rate, Y - y);
    const double c = y + 0.5 * w;
    for (int g = 0; g < 8; ++g) acc += 0.5 * w * gw[g] * integrand(c + 0.5 * w * gx[g]);
    y += w;
  }

  cplx tail{0, 0};
  if (z < 1e-12) {
    tail += cplx(-2.0 / Y, 0);
  } else {
    // -2 integral_Y^inf cos(zy)/y^2 dy = -2[cos(zY)/Y - z(pi/2 - Si(zY))]
    tail += -2.0 * (std::cos(z * Y) / Y - z * (M_PI / 2 - Si(z * Y)));
  }
  tail += osc_tail(Y, z) + osc_tail(Y, -z);
  return acc + tail;
}

NearRationalExpansion near_rational_expansion(const RiemannSeries& series,
                                              long long p, long long q, double h) {
  if (q < 1) throw std::invalid_argument("near_rational_expansion: q >= 1");
  if (h <= 0) throw std::invalid_argument("near_rational_expansion: h > 0");
  const double hmax = 0.05 / double(q);
  if (h > hmax)
    throw std::invalid_argument(
        "near_rational_expansion: h outside the validity window (h_max = " +
        std::to_string(hmax) + ")");
  if (std::fabs(series.omega0) > 1e-12)
    throw std::invalid_argument("near_rational_expansion: plain case only (omega0 = 0)");

  const double tr = 2 * M_PI * double(p) / double(q);
  NearRationalExpansion out;
  const double cell = 2 * M_PI / double(q);
  const long long mstar = (long long)std::llround(series.x0 / cell);
  out.lattice_dist = std::fabs(series.x0 - cell * double(mstar));
  out.gauss = gauss_sum(p, mstar, q);
  out.predicted = std::sqrt(h) / double(q) * out.gauss *
                      F_kernel(out.lattice_dist / std::sqrt(h)) -
                  cplx(0, h);
  const int N = std::max(series.truncation, (int)(40.0 / std::sqrt(h)));
  out.actual = eval_R_increment(series, tr, h, N);
  out.discrepancy = std::abs(out.actual - out.predicted);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void fft_inplace(std::vector<cplx>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2 * M_PI / (double)len;
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        // direct twiddle; the extra trig keeps long transforms accurate
        const cplx w = std::polar(1.0, ang * (double)k);
        const cplx u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

FlatnessResult flatness(const RiemannSeries& series, double N, int j_max,
                        int log2_grid) {
  if (N < 2) throw std::invalid_argument("flatness: N >= 2");
  const double w0 = series.omega0;
  FlatnessResult res;

  if (std::fabs(w0) < 1e-12) {
    const size_t M = 1ull << log2_grid;
    if ((long long)j_max * j_max >= (long long)M)
      throw std::invalid_argument("flatness: grid too small for j_max");
    std::vector<cplx> spec(M, cplx{0, 0});
    double l2sq = 0;
    for (int j = 1; j <= j_max; ++j) {
      const double freq = double(j) * double(j);
      if (freq < N) continue;
      const cplx coef = 2.0 * std::cos(j * series.x0) / freq;
      spec[(size_t)j * j] += coef;
      ++res.modes;
      l2sq += std::norm(coef);
    }
    res.l2 = std::sqrt(l2sq);
    fft_inplace(spec);
    double s2 = 0, s4 = 0;
    for (const auto& v : spec) {
      const double a2 = std::norm(v);
      s2 += a2;
      s4 += a2 * a2;
    }
    res.l2_quadrature = std::sqrt(s2 / (double)M);
    res.l4 = std::pow(s4 / (double)M, 0.25);
  } else {
    const size_t M = 1ull << std::min(log2_grid, 18);
    std::vector<int> js;
    double l2sq = 0;
    for (int j = -j_max; j <= j_max; ++j) {
      if (j == 0 || excluded(j, w0)) continue;
      const double freq = (j - w0) * (j - w0);
      if (freq < N) continue;
      js.push_back(j);
      l2sq += 1.0 / (freq * freq);
    }
    res.modes = (int)js.size();
    res.l2 = std::sqrt(l2sq);
    double s2 = 0, s4 = 0;
    const int nM = (int)M;
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(static) reduction(+ : s2, s4)
#endif
    for (int m = 0; m < nM; ++m) {
      const double t = 2 * M_PI * m / (double)M;
      cplx f{0, 0};
      for (int j : js) {
        const double d = j - w0;
        f += std::polar(1.0 / (d * d), t * d * d + j * series.x0);
      }
      const double a2 = std::norm(f);
      s2 += a2;
      s4 += a2 * a2;
    }
    res.l2_quadrature = std::sqrt(s2 / (double)M);
    res.l4 = std::pow(s4 / (double)M, 0.25);
  }
  res.flatness = std::pow(res.l4, 4) / std::pow(res.l2, 4);
  return res;
}

BlockNorm dyadic_block_lp(const RiemannSeries& series, int M, double p,
                          int log2_grid) {
  if (p < 1 || p > 8) throw std::invalid_argument("dyadic_block_lp: p in [1,8]");
  if (M < 0 || M > 11) throw std::invalid_argument("dyadic_block_lp: M in [0,11]");
  const int lo = 1 << M, hi = (1 << (M + 1)) - 1;
  BlockNorm out;
  out.modes = 2 * (hi - lo + 1);

  if (std::fabs(series.omega0) < 1e-12 && std::fabs(p - 2.0) < 1e-12) {
    double s = 0;
    for (int j = lo; j <= hi; ++j) s += std::norm(2.0 * std::cos(j * series.x0));
    out.norm = std::sqrt(s);
    return out;
  }

  int lg = log2_grid;
  if (lg <= 0) {
    const double need = 4.0 * std::max(2.0, 0.5 * p) * std::pow(2.0, 2.0 * (M + 1));
    lg = std::max(14, (int)std::ceil(std::log2(need)) + 1);
    lg = std::min(lg, 23);
  }
  const size_t G = 1ull << lg;

  if (std::fabs(series.omega0) < 1e-12) {
    std::vector<cplx> spec(G, cplx{0, 0});
    for (int j = lo; j <= hi; ++j) {
      const size_t f = (size_t)j * (size_t)j;
      if (f >= G) throw std::invalid_argument("dyadic_block_lp: grid too small");
      spec[f] += cplx(0, 1) * 2.0 * std::cos(j * series.x0);
    }
    fft_inplace(spec);
    double acc = 0;
    for (const auto& v : spec) acc += std::pow(std::abs(v), p);
    out.norm = std::pow(acc / (double)G, 1.0 / p);
  } else {
    const double w0 = series.omega0;
    const int nG = (int)std::min<size_t>(G, 1 << 18);
    double acc = 0;
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(static) reduction(+ : acc)
#endif
    for (int m = 0; m < nG; ++m) {
      const double t = 2 * M_PI * m / (double)nG;
      cplx f{0, 0};
      for (int j = lo; j <= hi; ++j) {
        const double d1 = j - w0, d2 = -j - w0;
        f += cplx(0, 1) * (std::polar(1.0, t * d1 * d1 + j * series.x0) +
                           std::polar(1.0, t * d2 * d2 - j * series.x0));
      }
      acc += std::pow(std::abs(f), p);
    }
    out.norm = std::pow(acc / (double)nG, 1.0 / p);
  }
  return out;
}

BlockExponent block_exponent(const RiemannSeries& series, double p, int M_min,
                             int M_max) {
  BlockExponent out;
  std::vector<double> xs, ys;
  for (int M = M_min; M <= M_max; ++M) {
    const auto b = dyadic_block_lp(series, M, p);
    xs.push_back(M);
    ys.push_back(std::log2(b.norm));
    out.log2_norms.push_back(ys.back());
  }
  const auto fit = linear_fit(xs, ys);
  out.eta = fit.slope;
  out.r2 = fit.r2;
  return out;
}

HolderEstimate holder_estimate(const RiemannSeries& series, double t,
                               const std::vector<double>& scales, uint64_t seed,
                               int samples_per_scale) {
  if (scales.size() < 4)
    throw std::invalid_argument("holder_estimate: need >= 4 scales");
  HolderEstimate out;
  out.t = t;
  out.scales = scales;
  out.oscillation.resize(scales.size());

  const int ns = (int)scales.size();
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int is = 0; is < ns; ++is) {
    const double delta = scales[is];
    std::mt19937_64 rng(seed + 1000003ull * (uint64_t)is);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int N = std::max(series.truncation, (int)(40.0 / std::sqrt(delta)));
    double sup = 0;
    for (int k = 0; k < samples_per_scale + 2; ++k) {
      const double h = (k == 0) ? delta : (k == 1 ? -delta : delta * U(rng));
      if (h == 0) continue;
      sup = std::max(sup, std::abs(eval_R_increment(series, t, h, N)));
    }
    out.oscillation[is] = sup;
  }

  std::vector<double> lx(ns), ly(ns);
  for (int i = 0; i < ns; ++i) {
    lx[i] = std::log(scales[i]);
    ly[i] = std::log(std::max(out.oscillation[i], 1e-300));
  }
  const auto fit = linear_fit(lx, ly);
  out.alpha = fit.slope;
  out.r2 = fit.r2;
  out.poor_fit = fit.r2 < 0.9;

  const double dmin = *std::min_element(scales.begin(), scales.end());
  const double dmax = *std::max_element(scales.begin(), scales.end());
  auto cf = continued_fraction(t / (2 * M_PI), 60);
  double mu = 0;
  bool any = false;
  for (size_t n = 0; n < cf.q.size(); ++n) {
    if (cf.q[n] < 2) continue;
    const double err = 2 * M_PI * cf.error((int)n);
    if (err <= 0) continue;
    if (err < dmin / 10 || err > dmax) continue;
    mu = std::max(mu, cf.mu[n]);
    any = true;
  }
  out.mu = any ? mu : std::numeric_limits<double>::infinity();
  return out;
}

PanelPoint liouville_time(double mu, double delta_min, double delta_max,
                          uint64_t seed) {
  if (mu < 2.0) throw std::invalid_argument("liouville_time: mu >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.9, 1.1);

  long long pm1 = 0, qm1 = 1;  // convergent n
  long long pm2 = 1, qm2 = 0;  // convergent n-1
  double mu_hat = 0;
  std::vector<ApproximationTouch> touches;
  const double xmin = delta_min / (2 * M_PI);
  while (true) {
    const double target = std::pow((double)qm1, mu - 2.0) * U(rng);
    const long long a = std::max(1ll, (long long)std::llround(target));
    const __int128 pn = (__int128)a * pm1 + pm2;
    const __int128 qn = (__int128)a * qm1 + qm2;
    if (qn > (1ll << 58)) break;
    pm2 = pm1; pm1 = (long long)pn;
    qm2 = qm1; qm1 = (long long)qn;
    // realized exponent of the previous convergent: |x - p/q| ~ 1/(q q')
    if (qm2 > 1) {
      const double err = 1.0 / ((double)qm2 * (double)qm1);
      touches.push_back({pm2, qm2, err, std::log(1.0 / err) / std::log((double)qm2)});
      if (2 * M_PI * err >= delta_min / 10 && 2 * M_PI * err <= delta_max)
        mu_hat = std::max(mu_hat, touches.back().mu);
    }
    const double err_now = 1.0 / ((double)qm1 * (double)qm1);
    if (err_now < xmin / 100.0) break;
  }
  PanelPoint out;
  out.t = 2 * M_PI * (double)pm1 / (double)qm1;
  out.mu_hat = mu_hat;
  // exact errors relative to the final (returned) rational
  for (auto& tc : touches) out.touches.push_back(tc);
  return out;
}

double touch_exponent(const RiemannSeries& series, double t, double scale,
                      uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int N = std::max(series.truncation, (int)(40.0 / std::sqrt(scale)));
  double sup = 0;
  for (int k = 0; k < samples + 2; ++k) {
    const double h = (k == 0) ? scale : (k == 1 ? -scale : scale * U(rng));
    if (h == 0) continue;
    sup = std::max(sup, std::abs(eval_R_increment(series, t, h, N)));
  }
  return std::log(sup) / std::log(scale);
}

}  // namespace vflab
