#include "vflab/curve_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vflab {

namespace {
constexpr double kGaussA = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt(3)/6
constexpr double kGaussB = 0.5 + 0.28867513459481288225;

struct TimeNodeSampler {
  // Generator of the time system in the march variable (t or s = 1/(4t)).
  const FilamentField& field;
  double x0;
  bool reciprocal;

  std::array<double, 3> generator(double v) const {
    const double t = reciprocal ? 1.0 / (4.0 * v) : v;
    const auto smp = field.sample(t, x0);
    std::array<double, 3> g = time_generator(smp.u, smp.ux, field.f(t));
    if (reciprocal) {
      const double jac = -1.0 / (4.0 * v * v);  // dt/ds
      for (auto& gi : g) gi *= jac;
    }
    return g;
  }

  // d(chi)/dv = Im(conj(u) N) * dt/dv
  Vec3 chi_rate(double v, const Frame& f) const {
    const double t = reciprocal ? 1.0 / (4.0 * v) : v;
    const cplx uu = field.sample(t, x0).u;
    const double jac = reciprocal ? -1.0 / (4.0 * v * v) : 1.0;
    // Im(conj(u) N) = Im(u conj(N))... with N = e1 + i e2:
    // Im(conj(u)(e1 + i e2)) = Im(conj(u)) e1 + Re(conj(u)) e2... componentwise:
    // Im(conj(u) * (e1 + i*e2)) = -Im(u) e1 + Re(u) e2 ... careful below.
    const double a = uu.real(), b = uu.imag();
    // conj(u) N = (a - ib)(e1 + i e2) -> imaginary part = a e2 - b e1
    return (f.e2 * a - f.e1 * b) * jac;
  }
};

// advance over [v, v+h] by two Magnus-4 half-steps; returns frame at the end
// and at the midpoint.
void half_steps(const TimeNodeSampler& smp, const Frame& f, double v, double h,
                Frame& mid, Frame& end) {
  const double h2 = 0.5 * h;
  {
    const auto gA = smp.generator(v + h2 * kGaussA);
    const auto gB = smp.generator(v + h2 * kGaussB);
    mid = advance_magnus4(f, gA, gB, h2);
  }
  {
    const auto gA = smp.generator(v + h2 + h2 * kGaussA);
    const auto gB = smp.generator(v + h2 + h2 * kGaussB);
    end = advance_magnus4(mid, gA, gB, h2);
  }
}

}  // namespace

double CurveState::tangent_consistency() const {
  double worst = 0;
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    const Vec3 fd = (chi[i + 1] - chi[i]) / dx;
    const Vec3 tm = normalized(frames[i].T + frames[i + 1].T);
    worst = std::max(worst, norm(fd - tm));
  }
  return worst;
}

SpaceMarch parallel_frame_space(const FilamentField& field, double t,
                                const std::vector<double>& xs, int i0,
                                const Frame& f0, const Vec3& chi0,
                                double max_phase_step, int min_substeps,
                                double ortho_abort) {
  if (xs.empty() || i0 < 0 || i0 >= (int)xs.size())
    throw std::invalid_argument("parallel_frame_space: bad grid/base index");
  if (orthonormality_defect(f0) > 1e-8)
    throw std::invalid_argument("parallel_frame_space: base frame not orthonormal");

  SpaceMarch out;
  out.frames.assign(xs.size(), Frame{});
  out.chi.assign(xs.size(), Vec3{});
  out.frames[i0] = f0;
  out.chi[i0] = chi0;

  const double rate = std::max(field.phase_rate_x(t), 1e-12);
  const auto sl = field.slice(t);

  auto march = [&](int from, int to, int step) {
    Frame f = out.frames[from];
    Vec3 c = out.chi[from];
    for (int i = from; i != to; i += step) {
      const double xa = xs[i], xb = xs[i + step];
      const double cell = xb - xa;
      const int nsub =
          std::max(min_substeps, (int)std::ceil(std::fabs(cell) * rate / max_phase_step));
      const double h = cell / nsub;
      for (int ss = 0; ss < nsub; ++ss) {
        const double x = xa + ss * h;
        // two half-steps to expose the midpoint tangent for Simpson
        Frame fm, fe;
        const double h2 = 0.5 * h;
        {
          const auto gA = space_generator(sl->u(x + h2 * kGaussA));
          const auto gB = space_generator(sl->u(x + h2 * kGaussB));
          fm = advance_magnus4(f, gA, gB, h2);
        }
        {
          const auto gA = space_generator(sl->u(x + h2 + h2 * kGaussA));
          const auto gB = space_generator(sl->u(x + h2 + h2 * kGaussB));
          fe = advance_magnus4(fm, gA, gB, h2);
        }
        c += (f.T + fm.T * 4.0 + fe.T) * (h / 6.0);
        f = fe;
      }
      out.frames[i + step] = f;
      out.chi[i + step] = c;
    }
  };

  if (i0 + 1 < (int)xs.size()) march(i0, (int)xs.size() - 1, +1);
  if (i0 > 0) march(i0, 0, -1);

  double defect = 0;
  for (const auto& f : out.frames) defect = std::max(defect, orthonormality_defect(f));
  if (defect > ortho_abort)
    throw std::runtime_error("parallel_frame_space: orthonormality drift " +
                             std::to_string(defect) + " at t = " + std::to_string(t));
  return out;
}

Frame frame_time_step(const FilamentField& field, const Frame& f, double t0,
                      double t1, double x0) {
  TimeNodeSampler smp{field, x0, false};
  const double h = t1 - t0;
  const auto gA = smp.generator(t0 + h * kGaussA);
  const auto gB = smp.generator(t0 + h * kGaussB);
  return advance_magnus4(f, gA, gB, h);
}

CurveTrajectory evolve_curve(const FilamentField& field, double t_start,
                             const CurveOptions& opts) {
  if (opts.save_times.empty())
    throw std::invalid_argument("evolve_curve: no save times");
  for (size_t i = 0; i < opts.save_times.size(); ++i) {
    if (opts.save_times[i] <= 0) throw std::invalid_argument("evolve_curve: times > 0");
    if (i && opts.save_times[i] <= opts.save_times[i - 1])
      throw std::invalid_argument("evolve_curve: save times must ascend");
  }
  if (opts.save_times.front() <= t_start)
    throw std::invalid_argument("evolve_curve: saves must follow t_start");

  const bool recip = field.reciprocal_time();
  TimeNodeSampler smp{field, opts.x0, recip};

  // march targets in the march variable
  std::vector<double> targets;
  for (double ts : opts.save_times) targets.push_back(recip ? 1.0 / (4.0 * ts) : ts);

  const double v0 = recip ? 1.0 / (4.0 * t_start) : t_start;
  const double vend = targets.back();
  const int dir = vend > v0 ? +1 : -1;

  const double freq =
      recip ? std::max(field.freq_s(opts.x0), 1e-9) : std::max(64.0, field.phase_rate_x(t_start));
  const double dv_max = opts.max_freq_step / freq;

  CurveTrajectory out;

  // x grid
  std::vector<double> xs;
  int i0 = -1;
  {
    const int n = (int)std::llround((opts.x_max - opts.x_min) / opts.dx);
    xs.reserve(n + 1);
    for (int i = 0; i <= n; ++i) xs.push_back(opts.x_min + i * opts.dx);
    double best = 1e300;
    for (int i = 0; i <= n; ++i)
      if (std::fabs(xs[i] - opts.x0) < best) { best = std::fabs(xs[i] - opts.x0); i0 = i; }
    if (best > 1e-9)
      throw std::invalid_argument("evolve_curve: x0 must lie on the grid");
  }

  // time march with chi quadrature at x0
  Frame f = opts.base_frame;
  Vec3 c = opts.base_point;
  double v = v0;

  out.trace_t.push_back(t_start);
  out.trace_chi.push_back(c);
  out.trace_frames.push_back(f);

  std::vector<std::pair<double, std::pair<Frame, Vec3>>> saved;  // (t, frame&chi)
  for (double target : targets) {
    while ((target - v) * dir > 1e-15 * std::fabs(target)) {
      double h = dir * dv_max;
      if ((v + h - target) * dir > 0) h = target - v;
      Frame fm, fe;
      half_steps(smp, f, v, h, fm, fe);
      const Vec3 g0 = smp.chi_rate(v, f);
      const Vec3 gm = smp.chi_rate(v + 0.5 * h, fm);
      const Vec3 g1 = smp.chi_rate(v + h, fe);
      c += (g0 + gm * 4.0 + g1) * (h / 6.0);
      f = fe;
      v += h;
      ++out.time_substeps;
    }
    const double t_here = recip ? 1.0 / (4.0 * v) : v;
    if (orthonormality_defect(f) > opts.ortho_abort)
      throw std::runtime_error("evolve_curve: frame drift at t = " + std::to_string(t_here));
    saved.emplace_back(t_here, std::make_pair(f, c));
    out.trace_t.push_back(t_here);
    out.trace_chi.push_back(c);
    out.trace_frames.push_back(f);
  }

  if (!opts.space_fanout) return out;

  // fan out in space at every saved time (parallel over saves)
  out.states.resize(saved.size());
  const int nsaves = (int)saved.size();
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (opts.parallel)
#endif
  for (int i = 0; i < nsaves; ++i) {
    const double t = saved[i].first;
    SpaceMarch sm = parallel_frame_space(field, t, xs, i0, saved[i].second.first,
                                         saved[i].second.second, opts.max_phase_step,
                                         opts.min_substeps, opts.ortho_abort);
    CurveState st;
    st.t = t;
    st.x = xs;
    st.chi = std::move(sm.chi);
    st.frames = std::move(sm.frames);
    double defect = 0;
    for (const auto& fr : st.frames) defect = std::max(defect, orthonormality_defect(fr));
    st.ortho_defect = defect;
    out.states[i] = std::move(st);
  }
  return out;
}

ResidualReport binormal_residual(const CurveTrajectory& traj) {
  const auto& st = traj.states;
  if (st.size() < 3) throw std::invalid_argument("binormal_residual: need >= 3 states");
  const double dt = st[1].t - st[0].t;
  for (size_t i = 1; i + 1 < st.size(); ++i)
    if (std::fabs((st[i + 1].t - st[i].t) - dt) > 1e-9 * dt)
      throw std::invalid_argument("binormal_residual: nonuniform dt");

  ResidualReport rep;
  const int nx = (int)st[0].x.size();
  const double dx = st[0].x[1] - st[0].x[0];
  for (size_t i = 1; i + 1 < st.size(); ++i) {
    for (int j = 2; j + 2 < nx; ++j) {
      const Vec3 chi_t = (st[i + 1].chi[j] - st[i - 1].chi[j]) / (2 * dt);
      const Vec3 chi_x = (st[i].chi[j + 1] - st[i].chi[j - 1]) / (2 * dx);
      const Vec3 chi_xx =
          (st[i].chi[j + 1] - st[i].chi[j] * 2.0 + st[i].chi[j - 1]) / (dx * dx);
      const double rc = norm(chi_t - cross(chi_x, chi_xx));
      rep.curve.push_back(rc);
      rep.max_curve = std::max(rep.max_curve, rc);

      const Vec3 T_t = (st[i + 1].frames[j].T - st[i - 1].frames[j].T) / (2 * dt);
      const Vec3 T_xx = (st[i].frames[j + 1].T - st[i].frames[j].T * 2.0 +
                         st[i].frames[j - 1].T) / (dx * dx);
      const double rt = norm(T_t - cross(st[i].frames[j].T, T_xx));
      rep.tangent.push_back(rt);
      rep.max_tangent = std::max(rep.max_tangent, rt);
    }
  }
  return rep;
}

double route_consistency(const FilamentField& field, const CurveTrajectory& traj,
                         const std::vector<int>& probe_indices,
                         const CurveOptions& opts) {
  if (traj.states.empty()) throw std::invalid_argument("route_consistency: no states");
  double worst = 0;
  for (int ip : probe_indices) {
    // independent route: time transport at x_probe from the first state
    CurveOptions o2 = opts;
    o2.x0 = traj.states.front().x[ip];
    o2.base_frame = traj.states.front().frames[ip];
    o2.base_point = traj.states.front().chi[ip];
    o2.space_fanout = false;
    std::vector<double> laters(opts.save_times.begin() + 1, opts.save_times.end());
    if (laters.empty()) continue;
    o2.save_times = laters;
    CurveTrajectory alt = evolve_curve(field, traj.states.front().t, o2);
    for (size_t i = 0; i < laters.size(); ++i) {
      const Vec3 via_time = alt.trace_chi[i + 1];
      const Vec3 via_space = traj.states[i + 1].chi[ip];
      worst = std::max(worst, norm(via_time - via_space));
    }
  }
  return worst;
}

std::vector<cplx> recover_filament(const CurveState& state) {
  const int n = (int)state.x.size();
  std::vector<cplx> u(n, cplx{0, 0});
  const double dx = state.x[1] - state.x[0];
  for (int i = 1; i + 1 < n; ++i) {
    const Vec3 Tx = (state.frames[i + 1].T - state.frames[i - 1].T) / (2 * dx);
    u[i] = cplx(dot(Tx, state.frames[i].e1), dot(Tx, state.frames[i].e2));
  }
  if (n >= 2) { u[0] = u[1]; u[n - 1] = u[n - 2]; }
  return u;
}

}  // namespace vflab
