#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "vflab/coeff_evolution.hpp"
#include "vflab/io_util.hpp"
#include "vflab/parallel.hpp"
#include "vflab/polygon_flow.hpp"
#include "vflab/riemann_function.hpp"
#include "vflab/self_similar.hpp"
#include "vflab/talbot.hpp"
#include "vflab/validate.hpp"

namespace fs = std::filesystem;
using namespace vflab;

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&tt));
  return buf;
}

// One numeric parameter registry per subcommand so a JSON config can be
// applied by name with unknown keys rejected, and the manifest can list
// every resolved value.
struct Params {
  std::map<std::string, double> v;
  double& operator[](const std::string& k) { return v[k]; }
  double at(const std::string& k) const { return v.at(k); }

  void apply_config(const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      auto f = v.find(it.key());
      if (f == v.end())
        throw CLI::ValidationError("config", "unknown config key: " + it.key());
      f->second = it.value().get<double>();
    }
  }
  json to_json() const {
    json j;
    for (const auto& [k, val] : v) j[k] = val;
    return j;
  }
};

struct RunContext {
  fs::path dir;
  json manifest;

  void finish() const { write_json(dir / "manifest.json", manifest); }
};

RunContext make_context(const std::string& out_dir, const std::string& sub,
                        const Params& p, uint64_t seed, int threads) {
  RunContext ctx;
  ctx.dir = out_dir.empty() ? fs::path("runs") / timestamp() : fs::path(out_dir);
  fs::create_directories(ctx.dir);
  ctx.manifest["subcommand"] = sub;
  ctx.manifest["config"] = p.to_json();
  ctx.manifest["config"]["seed"] = seed;
  ctx.manifest["config"]["threads"] = threads;
  ctx.manifest["timestamp_utc"] = timestamp();
  ctx.manifest["conventions"] = {
      {"kernel", "u(t,x) = sum_k A_k exp(i(x-k)^2/(4t))/sqrt(t)"},
      {"coefficient_system", "i dA_k/dt = -(1/t)[sum_NR exp(-i om/4t) A A* A + A_k(2M-|A_k|^2)]"},
      {"filament_scale", "frames driven by sqrt(2) * u"},
      {"rational_time", "t = p/(2 pi q)"}};
  return ctx;
}

void dump_coeff_trajectory(const RunContext& ctx, const EvolveResult& res,
                           double t0, double tol, int band) {
  CsvWriter csv(ctx.dir / "coefficients.csv");
  std::vector<std::string> names{"t"};
  for (int k = -band; k <= band; ++k) {
    names.push_back("ReA_" + std::to_string(k));
    names.push_back("ImA_" + std::to_string(k));
  }
  names.push_back("mass");
  csv.header(names);
  for (const auto& st : res.states) {
    std::vector<double> row{st.t};
    for (int k = -band; k <= band; ++k) {
      row.push_back(st.A[k].real());
      row.push_back(st.A[k].imag());
    }
    row.push_back(st.mass);
    csv.row(row);
  }
  json side;
  side["K"] = band;
  side["c0"] = -1.0;
  side["t0"] = t0;
  side["tol"] = tol;
  side["steps_accepted"] = res.steps_accepted;
  side["steps_rejected"] = res.steps_rejected;
  write_json(ctx.dir / "coefficients.meta.json", side);
}

void dump_curve(const RunContext& ctx, const CurveTrajectory& curve, bool binary) {
  for (size_t i = 0; i < curve.states.size(); ++i) {
    const auto& st = curve.states[i];
    char name[64];
    std::snprintf(name, sizeof(name), "curve_%03zu.csv", i);
    CsvWriter csv(ctx.dir / name);
    csv.raw_row("# t = " + format_full(st.t));
    csv.header({"x", "chi1", "chi2", "chi3", "T1", "T2", "T3"});
    for (size_t j = 0; j < st.x.size(); ++j)
      csv.row({st.x[j], st.chi[j].x, st.chi[j].y, st.chi[j].z, st.frames[j].T.x,
               st.frames[j].T.y, st.frames[j].T.z});
    if (binary) {
      std::vector<double> flat;
      flat.reserve(st.x.size() * 7);
      for (size_t j = 0; j < st.x.size(); ++j)
        for (double v : {st.x[j], st.chi[j].x, st.chi[j].y, st.chi[j].z,
                         st.frames[j].T.x, st.frames[j].T.y, st.frames[j].T.z})
          flat.push_back(v);
      std::snprintf(name, sizeof(name), "curve_%03zu.f64", i);
      write_f64(ctx.dir / name, flat);
    }
  }
}

int run_selfsim(const Params& p, RunContext& ctx) {
  auto prof = integrate_profile(p.at("a"), p.at("S"), p.at("ds"));
  CsvWriter csv(ctx.dir / "profile.csv");
  csv.header({"s", "G1", "G2", "G3", "T1", "T2", "T3"});
  for (size_t i = 0; i < prof.s.size(); ++i)
    csv.row({prof.s[i], prof.G[i].x, prof.G[i].y, prof.G[i].z, prof.frames[i].T.x,
             prof.frames[i].T.y, prof.frames[i].T.z});

  std::vector<double> agrid;
  for (double a = 0.2; a <= 1.2 + 1e-12; a += 0.2) agrid.push_back(a);
  auto cal = calibrate_angle_law(agrid, p.at("S_over_a"), p.at("ds"));
  json rep;
  rep["a"] = cal.a;
  rep["theta"] = cal.theta;
  rep["cstar"] = cal.cstar;
  rep["r2"] = cal.r2;
  rep["theta_of_requested_a"] = prof.theta;
  rep["saturated"] = prof.saturated;
  write_json(ctx.dir / "calibration.json", rep);
  ctx.manifest["results"] = rep;
  std::printf("selfsim: theta(%.3f) = %.6f, cstar = %.6f (r2 = %.6f)\n", p.at("a"),
              prof.theta, cal.cstar, cal.r2);
  return prof.saturated ? 0 : 1;
}

int run_simulate(const Params& p, RunContext& ctx, bool binary) {
  const int n = (int)p.at("corners");
  PolygonSpec spec = PolygonSpec::uniform(n, p.at("theta"));
  for (auto& g : spec.gamma) g = p.at("gamma");

  PolygonRunOptions opts;
  opts.t0 = p.at("t0");
  opts.tol = p.at("tol");
  opts.band = (int)p.at("band");
  opts.dx = p.at("dx");
  opts.x_min = p.at("xmin");
  opts.x_max = p.at("xmax");
  const int saves = (int)p.at("saves");
  for (int i = 1; i <= saves; ++i)
    opts.save_times.push_back(opts.t0 + (p.at("tmax") - opts.t0) * i / saves);

  auto run = simulate_polygon(spec, opts);
  dump_coeff_trajectory(ctx, run.coeffs, opts.t0, opts.tol,
                        run.coeffs.states[0].A.band());
  dump_curve(ctx, run.curve, binary);

  auto res = binormal_residual(run.curve);
  json rep;
  rep["max_curve_residual"] = res.max_curve;
  rep["max_tangent_residual"] = res.max_tangent;
  double worst_ortho = 0;
  for (const auto& st : run.curve.states)
    worst_ortho = std::max(worst_ortho, st.ortho_defect);
  rep["max_orthonormality_defect"] = worst_ortho;
  ctx.manifest["results"] = rep;
  std::printf("simulate: %zu states, residual %.3e, ortho %.3e\n",
              run.curve.states.size(), res.max_curve, worst_ortho);
  return worst_ortho < 1e-8 ? 0 : 1;
}

int run_talbot(const Params& p, RunContext& ctx, const std::string& mode) {
  const long long q = (long long)p.at("q"), pp = (long long)p.at("p");
  if (mode == "comb") {
    auto atoms = dirac_comb_evolution(RationalTime(pp, q));
    CsvWriter csv(ctx.dir / "comb_atoms.csv");
    csv.header({"m", "location", "Re_w", "Im_w", "abs_w"});
    for (const auto& a : atoms)
      csv.row({(double)a.m, a.location, a.weight.real(), a.weight.imag(),
               std::abs(a.weight)});
    return 0;
  }
  if (mode == "linear" || mode == "nonlinear") {
    auto prof = bump_profile(p.at("eta") * M_PI / (double)pp, p.at("s"), p.at("eps"));
    if (mode == "linear") {
      RationalTime rt(pp, q);
      CsvWriter csv(ctx.dir / "linear_talbot.csv");
      csv.header({"x", "abs_closed", "abs_direct", "deviation"});
      double worst = 0;
      const int grid = (int)p.at("grid");
      for (int i = 0; i < grid; ++i) {
        const double x = (i + 0.5) / grid;
        const cplx c = linear_talbot_eval(prof, rt, x);
        const cplx d = free_evolution_direct(prof.coefficients(), rt.value(), x);
        worst = std::max(worst, std::abs(c - d));
        csv.row({x, std::abs(c), std::abs(d), std::abs(c - d)});
      }
      ctx.manifest["results"]["max_deviation"] = worst;
      std::printf("talbot linear: closed-vs-direct max %.3e\n", worst);
      return worst < 1e-8 ? 0 : 1;
    }
    auto res = nonlinear_talbot_profile(prof, RationalTime(pp, q), p.at("eta"),
                                        p.at("t0"), p.at("tol"), (int)p.at("grid"));
    CsvWriter csv(ctx.dir / "nonlinear_talbot.csv");
    csv.header({"x", "abs_u"});
    for (size_t i = 0; i < res.xs.size(); ++i) csv.row({res.xs[i], res.abs_u[i]});
    json rep;
    rep["eps"] = res.eps;
    rep["smallness"] = res.smallness;
    rep["off_lattice_max"] = res.off_lattice_max;
    rep["linear_off_lattice_max"] = res.linear_off_lattice_max;
    ctx.manifest["results"] = rep;
    std::printf("talbot nonlinear: off-lattice max %.4e (eps = %.3f)\n",
                res.off_lattice_max, res.eps);
    return res.off_lattice_max <= 2 * res.eps ? 0 : 1;
  }
  if (mode == "carpet") {
    auto prof = bump_profile(0.5 * M_PI, p.at("s"), p.at("eps"));
    CsvWriter csv(ctx.dir / "carpet.csv");
    const int grid = (int)p.at("grid");
    for (long long qq = 1; qq <= q; ++qq)
      for (long long pq = 1; pq <= std::min(qq, (long long)p.at("p")); ++pq) {
        if (std::gcd(pq, qq) != 1) continue;
        RationalTime rt(pq, qq);
        std::string line = "p=" + std::to_string(pq) + ";q=" + std::to_string(qq);
        for (int i = 0; i < grid; ++i) {
          const double x = (i + 0.5) / grid;
          line += "," + format_full(std::abs(
                            free_evolution_direct(prof.coefficients(), rt.value(), x)));
        }
        csv.raw_row(line);
      }
    return 0;
  }
  throw CLI::ValidationError("mode", "unknown talbot mode: " + mode);
}

int run_riemann(const Params& p, RunContext& ctx, const std::string& mode) {
  RiemannSeries s;
  s.x0 = p.at("x0");
  s.omega0 = p.at("omega0");
  s.truncation = (int)p.at("N");
  if (mode == "trajectory") {
    CsvWriter csv(ctx.dir / "trajectory.csv");
    csv.header({"t", "ReR", "ImR"});
    const int grid = (int)p.at("grid");
    for (int i = 0; i <= grid; ++i) {
      const double t = p.at("tmax") * i / grid;
      const cplx v = eval_R(s, t);
      csv.row({t, v.real(), v.imag()});
    }
    ctx.manifest["results"]["tail_bound"] = s.tail_bound();
    return 0;
  }
  if (mode == "flatness") {
    CsvWriter csv(ctx.dir / "flatness.csv");
    csv.header({"N", "flatness", "l2", "l4"});
    double prev = 0;
    bool monotone = true;
    for (double N = 16; N <= p.at("Nmax"); N *= 2) {
      auto f = flatness(s, N);
      csv.row({N, f.flatness, f.l2, f.l4});
      if (f.flatness <= prev) monotone = false;
      prev = f.flatness;
    }
    ctx.manifest["results"]["monotone"] = monotone;
    std::printf("riemann flatness: monotone = %d\n", (int)monotone);
    return monotone ? 0 : 1;
  }
  if (mode == "holder") {
    std::vector<double> scales;
    for (int k = 0; k <= (int)p.at("n_scales"); ++k)
      scales.push_back(p.at("delta_max") * std::pow(0.5, k));
    auto est = holder_estimate(s, p.at("t"), scales, (uint64_t)p.at("seed_local"));
    json rep;
    rep["t"] = est.t;
    rep["alpha"] = est.alpha;
    rep["r2"] = est.r2;
    rep["mu"] = std::isinf(est.mu) ? -1.0 : est.mu;
    rep["poor_fit"] = est.poor_fit;
    rep["truncation"] = s.truncation;
    rep["tail_bound"] = s.tail_bound();
    write_json(ctx.dir / "holder.json", rep);
    ctx.manifest["results"] = rep;
    std::printf("riemann holder: alpha = %.4f (r2 = %.4f)\n", est.alpha, est.r2);
    return est.poor_fit ? 1 : 0;
  }
  if (mode == "blocks") {
    CsvWriter csv(ctx.dir / "blocks.csv");
    csv.header({"p", "eta", "r2"});
    double prev = -1e9;
    bool monotone = true;
    for (double pe = 1; pe <= p.at("pmax"); pe += 1) {
      auto be = block_exponent(s, pe, 4, (int)p.at("Mmax"));
      csv.row({pe, be.eta, be.r2});
      if (be.eta < prev - 0.02) monotone = false;
      prev = be.eta;
    }
    ctx.manifest["results"]["monotone_eta"] = monotone;
    return monotone ? 0 : 1;
  }
  if (mode == "near-rational") {
    auto ex = near_rational_expansion(s, (long long)p.at("p"), (long long)p.at("q"),
                                      p.at("hstep"));
    json rep;
    rep["predicted_re"] = ex.predicted.real();
    rep["predicted_im"] = ex.predicted.imag();
    rep["actual_re"] = ex.actual.real();
    rep["actual_im"] = ex.actual.imag();
    rep["discrepancy"] = ex.discrepancy;
    rep["lattice_dist"] = ex.lattice_dist;
    write_json(ctx.dir / "near_rational.json", rep);
    ctx.manifest["results"] = rep;
    return 0;
  }
  throw CLI::ValidationError("mode", "unknown riemann mode: " + mode);
}

int run_growth(const Params& p, RunContext& ctx) {
  std::vector<double> ts;
  for (int k = 4; k <= (int)p.at("kmax"); ++k) ts.push_back(std::pow(2.0, -k));
  auto res = tangent_fourier_growth(p.at("theta"), ts, p.at("L"), p.at("L_alt"),
                                    p.at("t0"), p.at("tol"));
  CsvWriter csv(ctx.dir / "growth.csv");
  csv.header({"t", "sup_window", "sup_window_alt", "outside_max"});
  for (const auto& pt : res.points)
    csv.row({pt.t, pt.sup_window, pt.sup_window_alt, pt.outside_max});

  auto spec = PolygonSpec::two_corner(p.at("theta"));
  auto energy = energy_density_t0(spec, {8, 12, 16, 20});
  json rep;
  rep["slope"] = res.slope;
  rep["r2"] = res.r2;
  rep["window_sensitivity"] = res.window_sensitivity;
  rep["window_flagged"] = res.window_flagged;
  rep["outside_spread"] = res.outside_spread;
  rep["energy_closed_form"] = energy.closed_form;
  rep["energy_upper"] = energy.upper_value;
  rep["energy_bands"] = energy.bands;
  ctx.manifest["results"] = rep;
  std::printf("growth: slope %.4f (r2 = %.4f), energy %.6f vs %.6f\n", res.slope,
              res.r2, energy.closed_form, energy.upper_value);
  return (res.r2 >= 0.9 && !res.window_flagged) ? 0 : 1;
}

int run_validate(RunContext& ctx, uint64_t seed) {
  auto checks = run_validation_suite(seed);
  json rep = json::array();
  bool all = true;
  std::string first_fail;
  for (const auto& c : checks) {
    std::printf("%-36s %s  (%.3e < %.3e)\n", c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.value, c.threshold);
    rep.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"value", c.value},
                   {"threshold", c.threshold}});
    if (!c.pass && all) {
      all = false;
      first_fail = c.name;
    }
  }
  write_json(ctx.dir / "validate.json", rep);
  ctx.manifest["results"]["all_pass"] = all;
  if (!all) std::printf("validate: FAILED at invariant '%s'\n", first_fail.c_str());
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vflab: a numerical laboratory for vortex filament dynamics and "
               "the associated cubic Schrodinger coefficient systems"};
  app.require_subcommand(1);

  std::string out_dir, config_file;
  int threads = 0;
  uint64_t seed = 1234;
  app.add_option("--out", out_dir, "output directory (default runs/<timestamp>)");
  app.add_option("--config", config_file, "JSON config file (flags override)");
  app.add_option("--threads", threads, "worker count (default: VFLAB_THREADS or OpenMP)");
  app.add_option("--seed", seed, "seed for randomized sweeps");

  Params ps;  // selfsim
  ps["a"] = 0.5;
  ps["S"] = 60.0;
  ps["ds"] = 0.005;
  ps["S_over_a"] = 30.0;
  auto* sub_selfsim = app.add_subcommand("selfsim", "profile + angle calibration");
  sub_selfsim->fallthrough();
  for (auto& [k, v] : ps.v) sub_selfsim->add_option("--" + k, v);

  Params pm;  // simulate
  pm["corners"] = 1;
  pm["theta"] = M_PI / 2;
  pm["gamma"] = 0.0;
  pm["t0"] = 1e-3;
  pm["tmax"] = 0.25;
  pm["saves"] = 4;
  pm["band"] = -1;
  pm["tol"] = 1e-10;
  pm["dx"] = 1.0 / 128;
  pm["xmin"] = -8.0;
  pm["xmax"] = 8.0;
  bool binary = false;
  auto* sub_sim = app.add_subcommand("simulate", "polygon evolution");
  sub_sim->fallthrough();
  for (auto& [k, v] : pm.v) sub_sim->add_option("--" + k, v);
  sub_sim->add_flag("--binary", binary, "also dump float64 columns");

  Params pt;  // talbot
  pt["p"] = 1;
  pt["q"] = 3;
  pt["eta"] = 0.25;
  pt["eps"] = 0.05;
  pt["s"] = 1.0;
  pt["t0"] = 1e-3;
  pt["tol"] = 1e-10;
  pt["grid"] = 1024;
  std::string talbot_mode = "linear";
  auto* sub_talbot = app.add_subcommand("talbot", "linear/nonlinear revival scans");
  sub_talbot->fallthrough();
  for (auto& [k, v] : pt.v) sub_talbot->add_option("--" + k, v);
  sub_talbot->add_option("--mode", talbot_mode, "comb|linear|nonlinear|carpet");

  Params pr;  // riemann
  pr["x0"] = 0.0;
  pr["omega0"] = 0.0;
  pr["N"] = 10000;
  pr["tmax"] = 2 * M_PI;
  pr["grid"] = 2048;
  pr["t"] = 0.0;
  pr["delta_max"] = 1e-2;
  pr["n_scales"] = 13;
  pr["seed_local"] = 12345;
  pr["Nmax"] = 256;
  pr["pmax"] = 6;
  pr["Mmax"] = 9;
  pr["p"] = 1;
  pr["q"] = 3;
  pr["hstep"] = 1e-4;
  std::string riemann_mode = "trajectory";
  auto* sub_riemann = app.add_subcommand("riemann", "trajectory/flatness/holder/blocks");
  sub_riemann->fallthrough();
  for (auto& [k, v] : pr.v) sub_riemann->add_option("--" + k, v);
  sub_riemann->add_option("--mode", riemann_mode,
                          "trajectory|flatness|holder|blocks|near-rational");

  Params pg;  // growth
  pg["theta"] = M_PI / 2;
  pg["kmax"] = 10;
  pg["L"] = 8.0;
  pg["L_alt"] = 6.0;
  pg["t0"] = -1.0;
  pg["tol"] = 1e-9;
  auto* sub_growth = app.add_subcommand("growth", "transform growth + energy density");
  sub_growth->fallthrough();
  for (auto& [k, v] : pg.v) sub_growth->add_option("--" + k, v);

  auto* sub_validate = app.add_subcommand("validate", "full invariant suite");
  sub_validate->fallthrough();

  // config file pass: parse --config/--out early, apply, then reparse flags
  try {
    app.allow_extras();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (!config_file.empty()) {
      json cfg = read_json(config_file);
      if (cfg.contains("config")) cfg = cfg["config"];  // accept a manifest
      std::string sub = cfg.value("subcommand", "");
      cfg.erase("subcommand");
      if (cfg.contains("seed")) { seed = cfg["seed"].get<uint64_t>(); cfg.erase("seed"); }
      if (cfg.contains("threads")) { threads = cfg["threads"].get<int>(); cfg.erase("threads"); }
      if (cfg.contains("mode")) {
        const std::string m = cfg["mode"].get<std::string>();
        talbot_mode = m;
        riemann_mode = m;
        cfg.erase("mode");
      }
      if (sub_selfsim->parsed() || sub == "selfsim") ps.apply_config(cfg);
      else if (sub_sim->parsed() || sub == "simulate") pm.apply_config(cfg);
      else if (sub_talbot->parsed() || sub == "talbot") pt.apply_config(cfg);
      else if (sub_riemann->parsed() || sub == "riemann") pr.apply_config(cfg);
      else if (sub_growth->parsed() || sub == "growth") pg.apply_config(cfg);
      // flags win: reparse
      app.clear();
      app.parse(argc, argv);
    }

    if (const char* env = std::getenv("VFLAB_THREADS"); env && threads == 0)
      threads = std::atoi(env);
    if (threads > 0) set_threads(threads);

    int rc = 0;
    if (sub_selfsim->parsed()) {
      auto ctx = make_context(out_dir, "selfsim", ps, seed, threads);
      rc = run_selfsim(ps, ctx);
      ctx.finish();
    } else if (sub_sim->parsed()) {
      auto ctx = make_context(out_dir, "simulate", pm, seed, threads);
      rc = run_simulate(pm, ctx, binary);
      ctx.finish();
    } else if (sub_talbot->parsed()) {
      auto ctx = make_context(out_dir, "talbot", pt, seed, threads);
      ctx.manifest["config"]["mode"] = talbot_mode;
      rc = run_talbot(pt, ctx, talbot_mode);
      ctx.finish();
    } else if (sub_riemann->parsed()) {
      auto ctx = make_context(out_dir, "riemann", pr, seed, threads);
      ctx.manifest["config"]["mode"] = riemann_mode;
      rc = run_riemann(pr, ctx, riemann_mode);
      ctx.finish();
    } else if (sub_growth->parsed()) {
      auto ctx = make_context(out_dir, "growth", pg, seed, threads);
      rc = run_growth(pg, ctx);
      ctx.finish();
    } else if (sub_validate->parsed()) {
      Params empty;
      auto ctx = make_context(out_dir, "validate", empty, seed, threads);
      rc = run_validate(ctx, seed);
      ctx.finish();
    }
    return rc;
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
}
