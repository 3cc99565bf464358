#include "vflab/polygon_flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vflab/fitting.hpp"
#include "vflab/parallel.hpp"

namespace vflab {

PolygonSpec PolygonSpec::straight(int n) {
  PolygonSpec s;
  s.n = n;
  s.theta.assign(2 * n + 1, M_PI);
  s.gamma.assign(2 * n + 1, 0.0);
  return s;
}

PolygonSpec PolygonSpec::single_corner(double theta0) {
  PolygonSpec s = straight(0);
  s.theta[0] = theta0;
  return s;
}

PolygonSpec PolygonSpec::two_corner(double theta0) {
  PolygonSpec s = straight(1);
  s.theta[0] = theta0;  // k = -1
  s.theta[2] = theta0;  // k = +1
  return s;
}

PolygonSpec PolygonSpec::uniform(int n, double theta0) {
  PolygonSpec s = straight(n);
  for (auto& th : s.theta) th = theta0;
  return s;
}

double angle_to_weight(double theta) {
  if (theta <= 0 || theta > M_PI)
    throw std::invalid_argument("angle_to_weight: theta in (0, pi]");
  const double s = std::sin(0.5 * theta);
  return std::sqrt(-(2.0 / M_PI) * std::log(s));
}

double weight_to_angle(double a) {
  if (a < 0) throw std::invalid_argument("weight_to_angle: a >= 0");
  return 2.0 * std::asin(std::exp(-0.5 * M_PI * a * a));
}

ComplexSeq polygon_filament(const PolygonSpec& spec) {
  ComplexSeq alpha(spec.n);
  for (int k = -spec.n; k <= spec.n; ++k) {
    const double th = spec.theta_at(k);
    if (th >= M_PI) continue;  // no corner
    const double a = angle_to_weight(th);
    alpha.at(k) = std::polar(a / std::sqrt(2.0), spec.gamma_at(k));
  }
  return alpha;
}

PolygonGeometry polygon_geometry(const PolygonSpec& spec) {
  PolygonGeometry geo;
  geo.n = spec.n;
  Frame f = spec.base_frame;
  geo.segment_tangent.push_back(f.T);  // x < -n
  std::vector<Frame> frames{f};
  for (int k = -spec.n; k <= spec.n; ++k) {
    const double th = spec.theta_at(k);
    const Vec3 told = f.T;
    if (th < M_PI) {
      const double turn = M_PI - th;
      const double g = spec.gamma_at(k);
      const Vec3 d = f.e1 * std::cos(g) + f.e2 * std::sin(g);
      const Mat3 R = axis_angle(normalized(cross(f.T, d)), turn);
      f = rotate_frame(R, f);
    }
    geo.jump.push_back(f.T - told);
    geo.segment_tangent.push_back(f.T);
  }
  // vertices: walk x = -n-1 .. n+1 and shift so chi(0) = base point
  Vec3 pos{0, 0, 0};
  geo.vertex.push_back(pos);
  for (size_t s = 0; s < geo.segment_tangent.size(); ++s) {
    pos += geo.segment_tangent[s];
    geo.vertex.push_back(pos);
  }
  const Vec3 at0 = geo.vertex[spec.n + 1];
  for (auto& v : geo.vertex) v = v - at0 + spec.base_point;
  return geo;
}

Vec3 PolygonGeometry::chi(double x) const {
  const double xl = -double(n) - 1.0;
  const int seg = std::clamp((int)std::floor(x - xl), 0, (int)segment_tangent.size() - 1);
  return vertex[seg] + segment_tangent[seg] * (x - (xl + seg));
}

Vec3 PolygonGeometry::tangent(double x) const {
  const double xl = -double(n) - 1.0;
  const int seg = std::clamp((int)std::floor(x - xl), 0, (int)segment_tangent.size() - 1);
  return segment_tangent[seg];
}

PolygonRun simulate_polygon(const PolygonSpec& spec, const PolygonRunOptions& opts) {
  if (opts.save_times.empty())
    throw std::invalid_argument("simulate_polygon: no save times");
  if (opts.space_fanout && (spec.n + 2 > -opts.x_min || spec.n + 2 > opts.x_max))
    throw std::invalid_argument("simulate_polygon: corners need margin >= 2 inside the grid");

  PolygonRun run;
  run.spec = spec;
  run.opts = opts;

  // stage 1: data
  ComplexSeq alpha = polygon_filament(spec);
  const int band = opts.band > 0 ? opts.band : spec.n + 8;

  // stage 2: coefficient evolution
  try {
    EvolveOptions eo;
    eo.tol = opts.tol;
    eo.band = band;
    eo.parallel = opts.parallel;
    run.coeffs = evolve_coeffs(alpha, opts.t0, opts.save_times.back(), eo);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("[coefficient evolution] ") + e.what());
  }

  // stage 3-5: frames and curve
  try {
    run.field = std::make_shared<CoeffField>(run.coeffs.trajectory,
                                             std::max(-opts.x_min, opts.x_max));
    CurveOptions co;
    co.x0 = 0.0;
    co.base_point = spec.base_point;
    co.base_frame = spec.base_frame;
    co.x_min = opts.x_min;
    co.x_max = opts.x_max;
    co.dx = opts.dx;
    co.save_times = opts.save_times;
    co.parallel = opts.parallel;
    co.space_fanout = opts.space_fanout;
    run.curve = evolve_curve(*run.field, opts.t0, co);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("[frame transport] ") + e.what());
  }
  return run;
}

TraceConvergence trace_convergence(const PolygonRun& run) {
  const auto& st = run.curve.states;
  if (st.size() < 4)
    throw std::invalid_argument("trace_convergence: need >= 4 saved states");
  TraceConvergence out;
  const size_t nx = st[0].x.size();
  out.chi0.resize(nx);
  out.exponent.resize(nx);
  out.constant.resize(nx);

  for (size_t j = 0; j < nx; ++j) {
    // least squares chi = chi0 + c sqrt(t), componentwise
    double s1 = (double)st.size(), sr = 0, srr = 0;
    Vec3 sy{0, 0, 0}, syr{0, 0, 0};
    for (const auto& s : st) {
      const double r = std::sqrt(s.t);
      sr += r;
      srr += r * r;
      sy += s.chi[j];
      syr += s.chi[j] * r;
    }
    const double det = s1 * srr - sr * sr;
    const Vec3 c = (syr * s1 - sy * sr) / det;
    const Vec3 chi0 = (sy * srr - syr * sr) / det;
    out.chi0[j] = chi0;
    out.constant[j] = norm(c);
    std::vector<double> lt, ld;
    for (const auto& s : st) {
      const double d = norm(s.chi[j] - chi0);
      if (d > 1e-14) {
        lt.push_back(std::log(s.t));
        ld.push_back(std::log(d));
      }
    }
    out.exponent[j] = lt.size() >= 2 ? linear_fit(lt, ld).slope : 0.5;
  }
  return out;
}

CornerTrajectory corner_vs_riemann(int n, double nu, double theta, double T,
                                   const PolygonRunOptions& opts_in,
                                   int time_samples, double corner_x) {
  if (n < 8) throw std::invalid_argument("corner_vs_riemann: n >= 8");
  const int reach = (int)std::floor(std::pow((double)n, nu) + 1e-9);
  PolygonSpec spec = PolygonSpec::straight(reach);
  for (int k = -reach; k <= reach; ++k) spec.theta[k + reach] = M_PI - theta / n;

  PolygonRunOptions opts = opts_in;
  opts.space_fanout = false;
  opts.save_times.clear();
  for (int i = 1; i <= time_samples; ++i)
    opts.save_times.push_back(opts.t0 + (T - opts.t0) * i / time_samples);
  if (opts.band <= 0) opts.band = reach + 8;

  PolygonRun run = simulate_polygon(spec, opts);

  CornerTrajectory out;
  out.n = n;
  out.nu = nu;
  out.theta = theta;

  // measured rescaled path, re-anchored at t0 (chi(t0,0) ~ chi(0,0))
  const auto& tt = run.curve.trace_t;
  const auto& cc = run.curve.trace_chi;
  std::vector<Vec3> measured;
  for (size_t i = 1; i < tt.size(); ++i) {
    out.t.push_back(tt[i]);
    measured.push_back((cc[i] - cc[0]) * double(n));
  }

  // reference w(t) - w(t0), w(t) = t - i R0(4 pi^2 t)/(4 pi^2)
  RiemannSeries series;
  series.x0 = -2.0 * M_PI * corner_x;
  series.truncation = 20000;
  auto wmodel = [&](double t) -> cplx {
    const cplx R0 = eval_R(series, 4 * M_PI * M_PI * t);
    return cplx(t, 0) - cplx(0, 1) * R0 / (4 * M_PI * M_PI);
  };
  const cplx w0 = wmodel(tt[0]);
  std::vector<Vec3> reference;
  for (size_t i = 1; i < tt.size(); ++i) {
    const cplx w = wmodel(tt[i]) - w0;
    reference.push_back(Vec3{0, theta * w.real(), theta * w.imag()});
  }

  out.rotation = best_rotation(reference, measured);
  out.sup_deviation = 0;
  out.measured = measured;
  out.reference.resize(reference.size());
  for (size_t i = 0; i < reference.size(); ++i) {
    out.reference[i] = out.rotation * reference[i];
    out.sup_deviation = std::max(out.sup_deviation, norm(measured[i] - out.reference[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// C1 window: 1 on |y| <= 3/4, cosine roll-off to 0 at |y| = 1
double window_fn(double y) {
  const double a = std::fabs(y);
  if (a <= 0.75) return 1.0;
  if (a >= 1.0) return 0.0;
  const double z = (a - 0.75) / 0.25;
  const double c = std::cos(0.5 * M_PI * z);
  return c * c;
}

// windowed transform of T_x = Re(conj(u) N) over the sampled state
struct Transformer {
  const CurveState& st;
  std::vector<Vec3> Tx;  // windowed integrand per sample
  double dx;

  Transformer(const CurveState& st_, const FilamentField& field, double L)
      : st(st_) {
    dx = st.x[1] - st.x[0];
    Tx.resize(st.x.size());
    const auto sl = field.slice(st.t);
    for (size_t i = 0; i < st.x.size(); ++i) {
      const cplx u = sl->u(st.x[i]);
      // Re(conj(u) N) = Re(u) e1 + Im(u) e2
      const Vec3 v = st.frames[i].e1 * u.real() + st.frames[i].e2 * u.imag();
      Tx[i] = v * window_fn(st.x[i] / L);
    }
  }

  double norm_what(double xi) const {
    cplx a{0, 0}, b{0, 0}, c{0, 0};
    for (size_t i = 0; i < Tx.size(); ++i) {
      const cplx ph = std::polar(dx, st.x[i] * xi);
      a += Tx[i].x * ph;
      b += Tx[i].y * ph;
      c += Tx[i].z * ph;
    }
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
  }
};

double window_sup(const Transformer& tr, double center, double halfwidth, int samples) {
  double sup = 0;
  for (int i = 0; i <= samples; ++i) {
    const double xi = center - halfwidth + 2 * halfwidth * i / samples;
    sup = std::max(sup, tr.norm_what(xi));
  }
  return sup;
}

}  // namespace

GrowthResult tangent_fourier_growth(double theta0, const std::vector<double>& ts,
                                    double window_L, double window_L_alt,
                                    double t0, double tol) {
  if (ts.empty()) throw std::invalid_argument("tangent_fourier_growth: no times");
  std::vector<double> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  if (t0 <= 0) t0 = 0.5 * sorted.front();

  // The transform's bounded remainder carries phases of speed ~1/t^2, which
  // modulate the tiny-window sup from one time to the next. Each requested
  // time is therefore sampled over a relative neighborhood of width ~6t (a
  // full phase sweep) and the envelope is taken; the neighborhood shrinks
  // with t, so the asymptotic statement is untouched.
  const int jitters = 5;
  std::vector<double> all_times;
  for (double t : sorted)
    for (int m = 0; m < jitters; ++m)
      all_times.push_back(t * (1.0 + 1.5 * (m - 2) * t));
  std::sort(all_times.begin(), all_times.end());

  PolygonSpec spec = PolygonSpec::two_corner(theta0);
  PolygonRunOptions opts;
  opts.t0 = t0;
  opts.tol = tol;
  opts.save_times = all_times;
  opts.band = 16;
  opts.space_fanout = false;  // fan out manually with a t-adapted grid
  PolygonRun run = simulate_polygon(spec, opts);

  auto sups_at = [&](double t) {
    const double rate = run.field->phase_rate_x(t);
    const double dx = std::min(1.0 / 128, 0.3 / rate);
    const int half = (int)std::ceil(window_L / dx);
    std::vector<double> xs(2 * half + 1);
    for (int i = 0; i <= 2 * half; ++i) xs[i] = (i - half) * dx;
    size_t idx = 0;
    for (size_t i = 0; i < run.curve.trace_t.size(); ++i)
      if (std::fabs(run.curve.trace_t[i] - t) < 1e-14) idx = i;
    auto sm = parallel_frame_space(*run.field, t, xs, half,
                                   run.curve.trace_frames[idx],
                                   run.curve.trace_chi[idx], 0.5, 1);
    CurveState st;
    st.t = t;
    st.x = std::move(xs);
    st.chi = std::move(sm.chi);
    st.frames = std::move(sm.frames);
    Transformer tr(st, *run.field, window_L);
    Transformer tr2(st, *run.field, window_L_alt);
    double outside = 0;
    for (int i = 1; i <= 24; ++i) {
      outside = std::max(outside, tr.norm_what(0.22 / t * i / 24.0));
      outside = std::max(outside, tr.norm_what(1.78 / t + 0.5 / t * i / 24.0));
    }
    return std::array<double, 3>{window_sup(tr, 1.0 / t, std::sqrt(t), 48),
                                 window_sup(tr2, 1.0 / t, std::sqrt(t), 48),
                                 outside};
  };

  GrowthResult res;
  const int nt = (int)sorted.size();
  res.points.resize(nt);

#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int it = 0; it < nt; ++it) {
    const double t = sorted[it];
    GrowthPoint pt;
    pt.t = t;
    for (int m = 0; m < jitters; ++m) {
      const double tm = t * (1.0 + 1.5 * (m - 2) * t);
      const auto s = sups_at(tm);
      pt.sup_window = std::max(pt.sup_window, s[0]);
      pt.sup_window_alt = std::max(pt.sup_window_alt, s[1]);
      if (m == 2) pt.outside_max = s[2];
    }
    res.points[it] = pt;
  }

  std::vector<double> lx, ly, outs;
  double sens = 0;
  for (const auto& pt : res.points) {
    lx.push_back(std::log(1.0 / pt.t));
    ly.push_back(pt.sup_window);
    outs.push_back(pt.outside_max);
    sens = std::max(sens, std::fabs(pt.sup_window - pt.sup_window_alt) /
                              std::max(pt.sup_window, 1e-300));
  }
  const auto fit = linear_fit(lx, ly);
  res.slope = fit.slope;
  res.r2 = fit.r2;
  res.window_sensitivity = sens;
  res.window_flagged = sens > 0.10;
  std::sort(outs.begin(), outs.end());
  const double median = outs[outs.size() / 2];
  res.outside_spread = outs.back() / std::max(median, 1e-300);
  return res;
}

EnergyReport energy_density_t0(const PolygonSpec& spec, const std::vector<int>& bands) {
  EnergyReport rep;
  PolygonGeometry geo = polygon_geometry(spec);
  double upper = 0, closed = 0;
  for (int k = -spec.n; k <= spec.n; ++k) {
    const double th = spec.theta_at(k);
    if (th >= M_PI) continue;
    const double a = angle_to_weight(th);
    closed += 4.0 * (1.0 - std::exp(-M_PI * a * a));
    upper += 4.0 * M_PI * a * a;
  }
  rep.closed_form = closed;
  rep.upper_value = upper;

  // band integral of |sum_k Delta_k e^{i k xi}|^2 by Gauss quadrature
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  for (int nb : bands) {
    double integral = 0;
    const int panels = 16;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = nb + double(pnl) / panels, w = 1.0 / panels;
      for (int g = 0; g < 8; ++g) {
        const double xi = a + 0.5 * w * (1 + gx[g]);
        cplx vx{0, 0}, vy{0, 0}, vz{0, 0};
        for (int k = -spec.n; k <= spec.n; ++k) {
          const Vec3& d = geo.jump[k + spec.n];
          const cplx ph = std::polar(1.0, k * xi);
          vx += d.x * ph;
          vy += d.y * ph;
          vz += d.z * ph;
        }
        integral += 0.5 * w * gw[g] * (std::norm(vx) + std::norm(vy) + std::norm(vz));
      }
    }
    rep.bands.push_back(integral);
    rep.band_index.push_back(nb);
  }
  if (!rep.bands.empty()) {
    const auto [mn, mx] = std::minmax_element(rep.bands.begin(), rep.bands.end());
    rep.plateau_spread = *mx / std::max(*mn, 1e-300);
    rep.plateau_flagged = rep.plateau_spread > 1.10;
  }
  return rep;
}

std::vector<double> energy_density_bands(const PolygonRun& run, size_t state_index,
                                         const std::vector<int>& bands,
                                         double window_L) {
  if (state_index >= run.curve.states.size())
    throw std::invalid_argument("energy_density_bands: bad state index");
  const CurveState& st = run.curve.states[state_index];
  Transformer tr(st, *run.field, window_L);
  std::vector<double> out;
  for (int nb : bands) {
    double integral = 0;
    const int samples = 64;
    for (int i = 0; i < samples; ++i) {
      const double xi = nb + (i + 0.5) / samples;
      const double v = tr.norm_what(xi);
      integral += v * v / samples;
    }
    out.push_back(integral);
  }
  return out;
}

}  // namespace vflab
