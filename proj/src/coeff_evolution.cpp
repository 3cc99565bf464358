#include "vflab/coeff_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vflab/oscillatory.hpp"

namespace vflab {

CoeffState anchor_state(const ComplexSeq& alpha, double t0) {
  if (t0 <= 0) throw std::invalid_argument("anchor_state: t0 must be positive");
  const double M = alpha.mass();
  ComplexSeq A(alpha.band());
  const double lt = std::log(t0);
  for (int k = -alpha.band(); k <= alpha.band(); ++k)
    A.at(k) = alpha[k] * std::polar(1.0, -(std::norm(alpha[k]) - 2.0 * M) * lt);
  return CoeffState(t0, std::move(A));
}

CoeffState pseudo_conformal(const CoeffState& state) {
  if (state.t <= 0) throw std::invalid_argument("pseudo_conformal: t must be positive");
  ComplexSeq B(state.A.band());
  for (int i = 0; i < state.A.size(); ++i) B.raw()[i] = std::conj(state.A.raw()[i]);
  return CoeffState(1.0 / state.t, std::move(B));
}

void CoeffTrajectory::push(double s, const std::vector<cplx>& A) {
  if (!s_.empty() && s_.size() == 1) increasing_ = s > s_.front();
  s_.push_back(s);
  A_.push_back(A);
}

void CoeffTrajectory::eval_s(double s, cplx* out) const {
  const int n = (int)s_.size();
  const int modes = 2 * band_ + 1;
  if (n == 1) {
    for (int i = 0; i < modes; ++i) out[i] = A_[0][i];
    return;
  }
  // locate bracketing node (s_ is monotone in either direction)
  auto key = [this](double v) { return increasing_ ? v : -v; };
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (key(s_[mid]) <= key(s)) lo = mid; else hi = mid;
  }
  int i0 = std::clamp(lo - 1, 0, n - 4);
  if (n < 4) i0 = 0;
  const int pts = std::min(4, n);
  // Lagrange interpolation over pts nodes starting at i0
  double w[4];
  for (int a = 0; a < pts; ++a) {
    double num = 1, den = 1;
    for (int b = 0; b < pts; ++b) {
      if (a == b) continue;
      num *= (s - s_[i0 + b]);
      den *= (s_[i0 + a] - s_[i0 + b]);
    }
    w[a] = num / den;
  }
  for (int i = 0; i < modes; ++i) {
    cplx acc{0, 0};
    for (int a = 0; a < pts; ++a) acc += w[a] * A_[i0 + a][i];
    out[i] = acc;
  }
}

ComplexSeq CoeffTrajectory::eval_time(double t) const {
  ComplexSeq out(band_);
  eval_s(1.0 / (4.0 * t), out.raw().data());
  return out;
}

CoeffState CoeffTrajectory::state_at_time(double t) const {
  return CoeffState(t, eval_time(t));
}

namespace {

struct StepWorkspace {
  // S-arrays at the three nodes of the current step
  std::vector<cplx> S0, Sm, S1;
  // weight tables indexed by m + m_max
  std::vector<cplx> w_full0, w_fullm, w_full1;   // quadratic basis over [s0, s0+h]
  std::vector<cplx> w_half0, w_halfm, w_half1;   // same basis over [s0, s0+h/2]
  std::vector<cplx> pred_full, pred_half;        // constant-envelope predictor
  std::vector<cplx> osc;                          // contraction output
};

// D_k(A)/sigma envelope for the resonant part.
inline void resonant_envelope(const std::vector<cplx>& A, double sigma,
                              std::vector<cplx>& out) {
  double M = 0;
  for (const auto& z : A) M += std::norm(z);
  const int n = (int)A.size();
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = A[i] * (2.0 * M - std::norm(A[i])) / sigma;
}

class FilonIntegrator {
 public:
  FilonIntegrator(const TripleTable& table, bool parallel)
      : table_(table), parallel_(parallel) {
    const long long mm = table.m_max();
    ws_.S0.resize(table.s_size());
    ws_.Sm.resize(table.s_size());
    ws_.S1.resize(table.s_size());
    for (auto* w : {&ws_.w_full0, &ws_.w_fullm, &ws_.w_full1, &ws_.w_half0,
                    &ws_.w_halfm, &ws_.w_half1, &ws_.pred_full, &ws_.pred_half})
      w->resize(2 * mm + 1);
    ws_.osc.resize(table.modes());
  }

  // One predictor-corrector step from (s0, A0) over signed h. reuse_node0
  // skips the node-0 accumulation when A0 and s0 match the previous call.
  void step(double s0, double h, const std::vector<cplx>& A0,
            std::vector<cplx>& A_end, bool reuse_node0 = false) {
    const int n = table_.modes();
    const long long mm = table_.m_max();

    // Moment tables for every m in range. The oscillatory weight for value m
    // is exp(-2i m sigma); the envelope quadratic lives on x = (sigma-s0)/h.
    for (long long m = -mm; m <= mm; ++m) {
      const double om = -2.0 * double(m);
      const FilonWeights wf = filon_simpson_weights(om, s0, h);
      const FilonWeights wh = filon_simpson_weights_half(om, s0, h);
      ws_.w_full0[m + mm] = wf.w0;
      ws_.w_fullm[m + mm] = wf.wm;
      ws_.w_full1[m + mm] = wf.w1;
      ws_.w_half0[m + mm] = wh.w0;
      ws_.w_halfm[m + mm] = wh.wm;
      ws_.w_half1[m + mm] = wh.w1;
      const ExpMoments full = exp_moments(om * h);
      const ExpMoments half = exp_moments(om * h * 0.5);
      const cplx ph = std::polar(1.0, om * s0);
      ws_.pred_full[m + mm] = h * ph * full.i0;
      ws_.pred_half[m + mm] = 0.5 * h * ph * half.i0;
    }

    if (!reuse_node0) {
      table_.accumulate(A0.data(), ws_.S0.data(), parallel_);
      scale_by_sigma(ws_.S0, s0);
      resonant_envelope(A0, s0, D0_);
    }

    // ---- predictor: constant envelope -> provisional mid and end values
    std::vector<cplx> Am(n), A1(n);
    contract_into(ws_.S0, ws_.pred_half, ws_.osc);
    for (int i = 0; i < n; ++i)
      Am[i] = A0[i] - cplx(0, 1) * (ws_.osc[i] + D0_[i] * (0.5 * h));
    contract_into(ws_.S0, ws_.pred_full, ws_.osc);
    for (int i = 0; i < n; ++i)
      A1[i] = A0[i] - cplx(0, 1) * (ws_.osc[i] + D0_[i] * h);

    // ---- corrector 1: quadratic envelope through predicted nodes
    std::vector<cplx> Am1(n), A11(n);
    corrector(s0, h, A0, Am, A1, Am1, A11);
    // ---- corrector 2: re-evaluate envelopes at corrected nodes
    std::vector<cplx> Am2(n);
    corrector(s0, h, A0, Am1, A11, Am2, A_end);
  }

 private:
  void scale_by_sigma(std::vector<cplx>& S, double sigma) {
    const double inv = 1.0 / sigma;
    for (auto& z : S) z *= inv;
  }
  void contract_into(const std::vector<cplx>& S, const std::vector<cplx>& w,
                     std::vector<cplx>& out) {
    table_.contract(S.data(), w.data(), out.data(), parallel_);
  }

  // Quadratic Filon corrector: given envelope nodes at (A0 fixed) and the
  // current mid/end values, produce refined mid/end.
  void corrector(double s0, double h, const std::vector<cplx>& A0,
                 const std::vector<cplx>& Am, const std::vector<cplx>& A1,
                 std::vector<cplx>& Am_out, std::vector<cplx>& A1_out) {
    const int n = table_.modes();
    const double sm = s0 + 0.5 * h, s1 = s0 + h;
    table_.accumulate(Am.data(), ws_.Sm.data(), parallel_);
    scale_by_sigma(ws_.Sm, sm);
    table_.accumulate(A1.data(), ws_.S1.data(), parallel_);
    scale_by_sigma(ws_.S1, s1);
    resonant_envelope(Am, sm, Dm_);
    resonant_envelope(A1, s1, D1_);

    // full interval
    std::vector<cplx> acc(n, cplx{0, 0});
    contract_into(ws_.S0, ws_.w_full0, ws_.osc);
    for (int i = 0; i < n; ++i) acc[i] += ws_.osc[i];
    contract_into(ws_.Sm, ws_.w_fullm, ws_.osc);
    for (int i = 0; i < n; ++i) acc[i] += ws_.osc[i];
    contract_into(ws_.S1, ws_.w_full1, ws_.osc);
    for (int i = 0; i < n; ++i) acc[i] += ws_.osc[i];
    // resonant part: omega = 0 weights are the classical Simpson/half-Simpson
    const double b0f = h / 6.0, bmf = 4.0 * h / 6.0, b1f = h / 6.0;
    for (int i = 0; i < n; ++i)
      A1_out[i] = A0[i] - cplx(0, 1) * (acc[i] + b0f * D0_[i] + bmf * Dm_[i] + b1f * D1_[i]);

    // first half interval, same basis
    std::fill(acc.begin(), acc.end(), cplx{0, 0});
    contract_into(ws_.S0, ws_.w_half0, ws_.osc);
    for (int i = 0; i < n; ++i) acc[i] += ws_.osc[i];
    contract_into(ws_.Sm, ws_.w_halfm, ws_.osc);
    for (int i = 0; i < n; ++i) acc[i] += ws_.osc[i];
    contract_into(ws_.S1, ws_.w_half1, ws_.osc);
    for (int i = 0; i < n; ++i) acc[i] += ws_.osc[i];
    const double b0h = h * (5.0 / 24.0), bmh = h * (1.0 / 3.0), b1h = h * (-1.0 / 24.0);
    for (int i = 0; i < n; ++i)
      Am_out[i] = A0[i] - cplx(0, 1) * (acc[i] + b0h * D0_[i] + bmh * Dm_[i] + b1h * D1_[i]);
  }

  const TripleTable& table_;
  bool parallel_;
  StepWorkspace ws_;
  std::vector<cplx> D0_, Dm_, D1_;
};

double amp_scale(const std::vector<cplx>& A) {
  double m = 0;
  for (const auto& z : A) m = std::max(m, std::abs(z));
  return std::max(m, 1e-12);
}

}  // namespace

EvolveResult evolve_state(const CoeffState& start, double t_end,
                          const EvolveOptions& opts) {
  if (start.t <= 0 || t_end <= 0)
    throw std::invalid_argument("evolve_state: times must be positive");

  const int band = opts.band >= 0 ? opts.band : start.A.band();
  ComplexSeq A0seq = start.A.band() == band ? start.A : start.A.rebanded(band);

  TripleTable table(band);
  FilonIntegrator integ(table, opts.parallel);

  const double s_start = 1.0 / (4.0 * start.t);
  const double s_end = 1.0 / (4.0 * t_end);
  const int dir = s_end > s_start ? +1 : -1;

  // save points in s, ordered along the direction of integration
  std::vector<double> saves;
  for (double ts : opts.save_times) {
    if (ts <= 0) throw std::invalid_argument("evolve_state: save times must be positive");
    const double ss = 1.0 / (4.0 * ts);
    if ((ss - s_start) * dir > 1e-14 && (s_end - ss) * dir > 1e-14) saves.push_back(ss);
  }
  saves.push_back(s_end);
  std::sort(saves.begin(), saves.end());
  if (dir < 0) std::reverse(saves.begin(), saves.end());

  EvolveResult res;
  res.trajectory = std::make_shared<CoeffTrajectory>(band, A0seq.mass());
  res.states.push_back(CoeffState(start.t, A0seq));

  std::vector<cplx> A = A0seq.raw();
  double s = s_start;
  res.trajectory->push(s, A);

  double h = dir * opts.initial_step_fraction * std::abs(s);
  const double hmin_rel = 1e-13;

  size_t save_idx = 0;
  std::vector<cplx> A_big(A.size()), A_half(A.size()), A_next(A.size());
  while (save_idx < saves.size()) {
    const double target = saves[save_idx];
    bool hit_target = false;
    if ((s + h - target) * dir >= 0) {
      h = target - s;
      hit_target = true;
    }
    const double max_h = opts.max_step_fraction * std::min(std::abs(s), std::abs(s + h));
    if (std::abs(h) > max_h) {
      h = dir * max_h;
      hit_target = std::abs(s + h - target) < 1e-14 * std::abs(target);
    }
    if (std::abs(h) < hmin_rel * std::abs(s))
      throw std::runtime_error("evolve_state: step size underflow (stiffness) at t = " +
                               std::to_string(1.0 / (4.0 * s)));

    // step doubling: one full step against two half steps (order-4 scheme)
    integ.step(s, h, A, A_big);
    integ.step(s, 0.5 * h, A, A_half, /*reuse_node0=*/true);
    integ.step(s + 0.5 * h, 0.5 * h, A_half, A_next);
    double err = 0;
    for (size_t i = 0; i < A.size(); ++i)
      err = std::max(err, std::abs(A_next[i] - A_big[i]));
    err /= 15.0;

    const double tol_abs = opts.tol * amp_scale(A);
    if (err <= tol_abs) {
      s += h;
      // local extrapolation: the doubled-step pair buys one more order
      for (size_t i = 0; i < A.size(); ++i)
        A_next[i] += (A_next[i] - A_big[i]) / 15.0;
      A.swap(A_next);
      if (opts.store_trajectory) res.trajectory->push(s, A);
      ++res.steps_accepted;
      if (hit_target) {
        res.states.push_back(CoeffState(1.0 / (4.0 * target), ComplexSeq(band, A)));
        ++save_idx;
      }
      const double fac = err > 0 ? 0.9 * std::pow(tol_abs / err, 0.2) : 5.0;
      h *= std::clamp(fac, 0.3, 5.0);
    } else {
      ++res.steps_rejected;
      h *= std::clamp(0.9 * std::pow(tol_abs / err, 0.2), 0.1, 0.7);
    }
  }
  return res;
}

EvolveResult evolve_coeffs(const ComplexSeq& alpha, double t_start, double t_end,
                           const EvolveOptions& opts) {
  const int band = opts.band >= 0 ? opts.band : alpha.band();
  CoeffState a0 = anchor_state(band == alpha.band() ? alpha : alpha.rebanded(band), t_start);
  return evolve_state(a0, t_end, opts);
}

// ---------------------------------------------------------------------------
// Reference Dormand-Prince 5(4) integrator in s (resolves oscillations).

namespace {
void rhs_s(const TripleTable& table, double s, const std::vector<cplx>& A,
           std::vector<cplx>& out) {
  const long long mm = table.m_max();
  std::vector<cplx> w(2 * mm + 1);
  for (long long m = -mm; m <= mm; ++m) w[m + mm] = std::polar(1.0, -2.0 * double(m) * s);
  std::vector<cplx> S(table.s_size());
  table.accumulate(A.data(), S.data(), false);
  table.contract(S.data(), w.data(), out.data(), false);
  double M = 0;
  for (const auto& z : A) M += std::norm(z);
  const int n = (int)A.size();
  for (int i = 0; i < n; ++i)
    out[i] = cplx(0, -1.0 / s) * (out[i] + A[i] * (2.0 * M - std::norm(A[i])));
}
}  // namespace

EvolveResult evolve_state_rk(const CoeffState& start, double t_end, double tol,
                             int band_opt) {
  const int band = band_opt >= 0 ? band_opt : start.A.band();
  ComplexSeq A0seq = start.A.band() == band ? start.A : start.A.rebanded(band);
  TripleTable table(band);

  static const double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
  static const double a21 = 1. / 5;
  static const double a31 = 3. / 40, a32 = 9. / 40;
  static const double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
  static const double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                      a54 = -212. / 729;
  static const double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                      a64 = 49. / 176, a65 = -5103. / 18656;
  static const double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192,
                      b5 = -2187. / 6784, b6 = 11. / 84;
  static const double e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920,
                      e5 = -17253. / 339200, e6 = 22. / 525, e7 = -1. / 40;

  const double s_start = 1.0 / (4.0 * start.t);
  const double s_end = 1.0 / (4.0 * t_end);
  const int dir = s_end > s_start ? 1 : -1;

  EvolveResult res;
  res.trajectory = std::make_shared<CoeffTrajectory>(band, A0seq.mass());
  res.states.push_back(CoeffState(start.t, A0seq));

  const int n = (int)A0seq.raw().size();
  std::vector<cplx> y = A0seq.raw(), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n),
      ytmp(n), y5(n);
  double s = s_start;
  res.trajectory->push(s, y);

  // oscillation-resolving cap
  const double freq = 2.0 * double(table.m_max()) + 1.0;
  double h = dir * std::min(0.2 / freq, std::abs(s_end - s_start));
  rhs_s(table, s, y, k1);

  int guard = 0;
  while ((s_end - s) * dir > 1e-15 * std::abs(s_end)) {
    if (++guard > 50'000'000) throw std::runtime_error("evolve_state_rk: too many steps");
    if ((s + h - s_end) * dir > 0) h = s_end - s;

    auto stage = [&](std::vector<cplx>& out, std::initializer_list<std::pair<double, const std::vector<cplx>*>> terms) {
      for (int i = 0; i < n; ++i) {
        cplx acc = y[i];
        for (auto& [c, kv] : terms) acc += h * c * (*kv)[i];
        out[i] = acc;
      }
    };
    stage(ytmp, {{a21, &k1}});
    rhs_s(table, s + c2 * h, ytmp, k2);
    stage(ytmp, {{a31, &k1}, {a32, &k2}});
    rhs_s(table, s + c3 * h, ytmp, k3);
    stage(ytmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    rhs_s(table, s + c4 * h, ytmp, k4);
    stage(ytmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    rhs_s(table, s + c5 * h, ytmp, k5);
    stage(ytmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    rhs_s(table, s + h, ytmp, k6);
    stage(y5, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    rhs_s(table, s + h, y5, k7);

    double err = 0;
    for (int i = 0; i < n; ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e));
    }
    const double tol_abs = tol * amp_scale(y);
    if (err <= tol_abs) {
      s += h;
      y = y5;
      k1 = k7;
      res.trajectory->push(s, y);
      ++res.steps_accepted;
    } else {
      ++res.steps_rejected;
    }
    const double fac = err > 0 ? 0.9 * std::pow(tol_abs / err, 0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }
  res.states.push_back(CoeffState(t_end, ComplexSeq(band, y)));
  return res;
}

// ---------------------------------------------------------------------------

FieldSample evaluate_u(const CoeffState& state, double x) {
  if (state.t <= 0) throw std::invalid_argument("evaluate_u: t must be positive");
  const double t = state.t;
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  cplx u{0, 0}, ux{0, 0};
  for (int k = -state.A.band(); k <= state.A.band(); ++k) {
    const cplx a = state.A[k];
    if (a == cplx{0, 0}) continue;
    const double d = x - k;
    const cplx ph = std::polar(inv_sqrt_t, d * d / (4.0 * t));
    u += a * ph;
    ux += a * ph * cplx(0, d / (2.0 * t));
  }
  return {u, ux};
}

std::vector<FieldSample> evaluate_u(const CoeffState& state,
                                    const std::vector<double>& xs, bool parallel) {
  std::vector<FieldSample> out(xs.size());
  const int n = (int)xs.size();
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < n; ++i) out[i] = evaluate_u(state, xs[i]);
  (void)parallel;
  return out;
}

}  // namespace vflab
