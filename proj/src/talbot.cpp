#include "vflab/talbot.hpp"

#include <cmath>
#include <stdexcept>

#include "vflab/gauss_sums.hpp"

namespace vflab {

std::vector<CombAtom> dirac_comb_evolution(const RationalTime& rt) {
  std::vector<CombAtom> atoms;
  atoms.reserve(rt.q);
  for (long long m = 0; m < rt.q; ++m)
    atoms.push_back({m, double(m) / double(rt.q),
                     gauss_sum(-rt.p, m, rt.q) / double(rt.q)});
  return atoms;
}

PeriodicFourierProfile::PeriodicFourierProfile(ComplexSeq alpha, double radius)
    : alpha_(std::move(alpha)), radius_(radius) {
  if (radius <= 0 || radius >= M_PI)
    throw std::invalid_argument("PeriodicFourierProfile: radius must be in (0, pi)");
}

cplx PeriodicFourierProfile::hat(double xi) const {
  cplx acc{0, 0};
  for (int k = -alpha_.band(); k <= alpha_.band(); ++k)
    acc += alpha_[k] * std::polar(1.0, k * xi);
  return acc;
}

double PeriodicFourierProfile::max_outside_support(int samples) const {
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const double xi = -M_PI + 2 * M_PI * (i + 0.5) / samples;
    if (std::fabs(xi) <= radius_) continue;
    worst = std::max(worst, std::abs(hat(xi)));
  }
  return worst;
}

PeriodicFourierProfile bump_profile(double radius, double s, double eps, int band,
                                    double flat) {
  // band <= 0: wide enough that the truncation ringing sits near 1e-12
  // (coefficient decay scales with the support width)
  if (band <= 0) band = (int)std::ceil(230.0 / radius);
  // trapezoid over the support; all endpoint derivatives vanish, so the rule
  // converges faster than any power of the step
  const int n = 1 << 16;
  ComplexSeq alpha(band);
  const double h = 2 * radius / n;
  for (int k = -band; k <= band; ++k) {
    double acc = 0;
    for (int i = 1; i < n; ++i) {
      const double xi = -radius + i * h;
      const double y = xi / radius;
      const double g = std::exp(-1.0 / std::pow(1.0 - y * y, flat));
      acc += g * std::cos(k * xi);
    }
    alpha.at(k) = acc * h / (2 * M_PI);
  }
  const double scale = eps / weighted_norm(alpha, s);
  for (auto& z : alpha.raw()) z *= scale;
  return PeriodicFourierProfile(std::move(alpha), radius);
}

cplx free_evolution_direct(const ComplexSeq& alpha, double t, double x) {
  if (t <= 0) throw std::invalid_argument("free_evolution_direct: t must be positive");
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  cplx acc{0, 0};
  for (int k = -alpha.band(); k <= alpha.band(); ++k) {
    const double d = x - k;
    acc += alpha[k] * std::polar(inv_sqrt_t, d * d / (4.0 * t));
  }
  return acc;
}

std::vector<cplx> free_evolution_direct(const ComplexSeq& alpha, double t,
                                        const std::vector<double>& xs,
                                        bool parallel) {
  std::vector<cplx> out(xs.size());
  const int n = (int)xs.size();
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < n; ++i) out[i] = free_evolution_direct(alpha, t, xs[i]);
  (void)parallel;
  return out;
}

cplx linear_talbot_eval(const PeriodicFourierProfile& prof, const RationalTime& rt,
                        double x) {
  if (rt.q % 2 == 0)
    throw std::invalid_argument("linear_talbot_eval: q must be odd");
  if (rt.p < 1) throw std::invalid_argument("linear_talbot_eval: p must be >= 1");
  if (prof.radius() >= M_PI / double(rt.p))
    throw std::invalid_argument("linear_talbot_eval: support radius must be < pi/p");

  const double t = rt.value();
  const double q = (double)rt.q, p = (double)rt.p;
  // zeta_j = -(x + j/q) * pi q / p lies in the support only for j within
  // p*radius/pi + 1 of the nearest lattice index
  const long long j0 = -(long long)std::llround(q * x);
  const long long jw = (long long)(p * prof.radius() / M_PI) + 1;
  cplx acc{0, 0};
  for (long long j = j0 - jw; j <= j0 + jw; ++j) {
    const double zeta = -(x + double(j) / q) * M_PI * q / p;
    if (std::fabs(zeta) > prof.radius()) continue;
    const cplx G = gauss_sum(-rt.p, ((j % rt.q) + rt.q) % rt.q, rt.q);
    acc += G * prof.hat(zeta) * std::polar(1.0, -t * zeta * zeta - x * zeta);
  }
  const cplx front = std::polar(1.0 / std::sqrt(M_PI), M_PI / 4.0) / (2.0 * t * q);
  return front * acc;
}

ConcentrationResult concentration_family(double lambda, const RationalTime& rt,
                                         int band_per_lambda) {
  if (lambda <= (double)rt.p)
    throw std::invalid_argument("concentration_family: need lambda > p");
  // psi: flat bump on [-1/2, 1/2] with psi(0) = 1
  auto psi = [](double y) {
    if (std::fabs(y) >= 0.5) return 0.0;
    const double z = 2 * y;
    return std::exp(1.0 - 1.0 / (1.0 - z * z));
  };
  const int band = (int)(band_per_lambda * lambda);
  ComplexSeq alpha(band);
  const int n = 1 << 14;
  const double w = 0.5 / lambda;  // support of f^lambda
  const double h = 2 * w / n;
  for (int k = -band; k <= band; ++k) {
    double acc = 0;
    for (int i = 1; i < n; ++i) {
      const double xi = -w + i * h;
      acc += lambda * psi(lambda * xi) * std::cos(k * xi);
    }
    alpha.at(k) = acc * h / (2 * M_PI);
  }

  const double t = rt.value();
  ConcentrationResult res;
  res.numerator = std::abs(free_evolution_direct(alpha, t, 0.0));
  ComplexSeq delta(0);
  delta.at(0) = alpha[0];
  res.denominator = std::abs(free_evolution_direct(delta, t, 0.0));
  res.ratio = res.numerator / res.denominator;
  return res;
}

PoissonCheck poisson_identity_check(double t, double eps, double tail_bound) {
  if (t <= 0) throw std::invalid_argument("poisson_identity_check: t must be positive");
  if (eps <= 0) throw std::invalid_argument("poisson_identity_check: eps must be positive");

  PoissonCheck out;
  out.eps = eps;
  // |e^{(i4pi^2 t - eps)k^2}| = e^{-eps k^2}
  const double logtail = std::log(1.0 / tail_bound);
  out.K = (long long)std::ceil(std::sqrt(logtail / eps)) + 2;
  cplx lhs{0, 0};
  for (long long k = -out.K; k <= out.K; ++k) {
    const double kk = double(k) * double(k);
    lhs += std::polar(std::exp(-eps * kk), 4 * M_PI * M_PI * t * kk);
  }

  const cplx wexp = 1.0 / (4.0 * cplx(eps, -4 * M_PI * M_PI * t));
  const double decay = wexp.real() * 4 * M_PI * M_PI;  // per j^2
  out.J = (long long)std::ceil(std::sqrt(logtail / decay)) + 2;
  cplx sumj{0, 0};
  for (long long j = -out.J; j <= out.J; ++j) {
    const double jj = double(j) * double(j);
    sumj += std::exp(-(4 * M_PI * M_PI * jj) * wexp);
  }
  const cplx rhs = std::sqrt(M_PI / cplx(eps, -4 * M_PI * M_PI * t)) * sumj;

  out.lhs = lhs;
  out.rhs = rhs;
  out.residual = std::abs(lhs - rhs);
  return out;
}

NonlinearTalbotResult nonlinear_talbot_profile(const PeriodicFourierProfile& prof,
                                               const RationalTime& rt, double eta,
                                               double t_anchor, double tol,
                                               int grid) {
  const double t_pq = rt.value();
  if (t_anchor >= t_pq)
    throw std::invalid_argument("nonlinear_talbot_profile: anchor must precede t_pq");
  if (eta <= 0 || eta >= 1)
    throw std::invalid_argument("nonlinear_talbot_profile: eta in (0,1)");

  NonlinearTalbotResult res;
  res.eps = weighted_norm(prof.coefficients(), 1.0);
  res.smallness = res.eps * res.eps * std::sqrt((double)rt.q) * std::log((double)rt.q);
  if (res.smallness >= 0.5)
    throw std::invalid_argument(
        "nonlinear_talbot_profile: smallness hypothesis eps^2 sqrt(q) log q < 1/2 "
        "violated (value " + std::to_string(res.smallness) + ")");

  EvolveOptions opts;
  opts.tol = tol;
  opts.store_trajectory = false;
  auto evolved = evolve_coeffs(prof.coefficients(), t_anchor, t_pq, opts);
  const CoeffState& st = evolved.states.back();

  res.xs.resize(grid);
  res.abs_u.resize(grid);
  const double q = (double)rt.q;
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) / grid;  // one unit cell
    res.xs[i] = x;
    const double au = std::abs(evaluate_u(st, x).u);
    res.abs_u[i] = au;
    const double dist = std::fabs(x * q - std::llround(x * q)) / q;
    if (dist > eta / q) {
      res.off_lattice_max = std::max(res.off_lattice_max, au);
      const double al = std::abs(free_evolution_direct(prof.coefficients(), t_pq, x));
      res.linear_off_lattice_max = std::max(res.linear_off_lattice_max, al);
    }
  }
  return res;
}

}  // namespace vflab
