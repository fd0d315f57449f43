// Acceptance suite: runs the laminar backward-facing-step benchmarks and the
// verification studies, printing one PASS/FAIL line per criterion. Exit code
// is nonzero when any selected criterion fails.
//
//   qhd_acceptance [--group all|benchmarks|tau|grid|gradient|poiseuille|
//                           operators|oracle|properties] [--out DIR]

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "qhd/boundary.hpp"
#include "qhd/diagnostics.hpp"
#include "qhd/grid.hpp"
#include "qhd/io.hpp"
#include "qhd/operators.hpp"
#include "qhd/poisson.hpp"
#include "qhd/timestepper.hpp"
#include "qhd/verification.hpp"

using namespace qhd;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("[%s] %-3s %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

struct BenchRun {
  Config cfg;
  RunSummary sum;
  std::vector<double> dp_history;
  State state{VectorField{}, ScalarField{}, 0.0, 0};
  bool failed = false;
  std::string error;
};

Config bench_config(double re, double length) {
  Config cfg;
  cfg.re = re;
  cfg.h_ratio = 0.5;
  cfg.length = length;
  cfg.dx = cfg.dy = 0.025;
  cfg.dt = 1e-4;
  cfg.preconditioner = Preconditioner::IncompleteCholesky;
  cfg.snapshot_every = 0;
  return cfg;
}

BenchRun run_case(const Config& cfg, const fs::path& out_dir,
                  const std::string& label) {
  BenchRun r;
  r.cfg = cfg;
  std::printf("  ... running %s (re=%g, %gx%g cells, dt=%g)\n", label.c_str(),
              cfg.re, cfg.length / cfg.dx, 1.0 / cfg.dy, cfg.dt);
  std::fflush(stdout);
  try {
    TimeStepper stepper(cfg);
    r.state = stepper.initial_state();
    RunObservers obs;
    obs.on_step = [&](const State&, const StepStats& st) {
      r.dp_history.push_back(st.delta_p);
    };
    r.sum = stepper.run(r.state, obs);
    std::ofstream f(out_dir / (label + "_summary.json"));
    write_summary_json(f, r.sum, cfg);
    std::printf("  ... %s: converged=%d steps=%ld L_s/h=%.3f (%.0f s)\n",
                label.c_str(), r.sum.converged ? 1 : 0, r.sum.n_steps,
                r.sum.separation_over_h, r.sum.wall_seconds);
    std::fflush(stdout);
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
    std::printf("  ... %s failed: %s\n", label.c_str(), e.what());
  }
  return r;
}

int negative_regions_on_row1(const State& s, const Config& cfg) {
  const GridSpec g = build_grid(cfg);
  const WField w = compute_w(s.u, s.p, resolved_tau(cfg), g);
  const ScalarField psi = stream_function(s.u, w, g);
  int regions = 0;
  bool in_region = false;
  for (int i = 0; i < g.nx; ++i) {
    const bool neg = psi(i, 1) < 0.0;
    if (neg && !in_region) ++regions;
    in_region = neg;
  }
  return regions;
}

bool late_stage_band_ok(const std::vector<double>& dp, double& worst) {
  // over the final 10% of the run the residual stays within a factor-2
  // band of its value at the start of the tail
  if (dp.size() < 20) return false;
  const std::size_t start = dp.size() - dp.size() / 10;
  const double ref = dp[start];
  worst = 0.0;
  for (std::size_t k = start; k < dp.size(); ++k)
    worst = std::max(worst, dp[k] / ref);
  return worst <= 2.0;
}

// ---------------------------------------------------------------- benchmarks

void group_benchmarks(const fs::path& out) {
  const BenchRun r100 = run_case(bench_config(100.0, 7.5), out, "re100");
  const BenchRun r200 = run_case(bench_config(200.0, 5.0), out, "re200");
  const BenchRun r300 = run_case(bench_config(300.0, 7.5), out, "re300");
  const BenchRun r400 = run_case(bench_config(400.0, 10.0), out, "re400");

  // C1: Re(h) = 100 reference case
  {
    const bool ok = !r100.failed && r100.sum.converged &&
                    std::abs(r100.sum.separation_over_h - 5.0) <= 0.5 &&
                    r100.sum.n_steps >= 9900 && r100.sum.n_steps <= 39600;
    report("C1", ok,
           fmt("Re=100: L_s/h=%.3f (expect 5.0+-0.5), steps=%ld (expect "
               "19800 within 2x), delta_p=%.2e, converged=%d",
               r100.sum.separation_over_h, r100.sum.n_steps,
               r100.sum.final_delta_p, r100.sum.converged ? 1 : 0));

    report("C1a", !r100.failed && r100.sum.psi_top_error <= 0.01,
           fmt("Re=100: max |psi(top) - J| = %.4f (expect <= 0.01)",
               r100.sum.psi_top_error));
    report("C1b", !r100.failed && r100.sum.mass_flux_error <= 0.01,
           fmt("Re=100: max column |flux - J| = %.4f (expect <= 0.01 J)",
               r100.sum.mass_flux_error));
    double worst = 0.0;
    report("C1c", !r100.failed && late_stage_band_ok(r100.dp_history, worst),
           fmt("Re=100: late-stage delta_p within factor-2 band (worst %.2f)",
               worst));
  }

  // C2: Re(h) = 200
  {
    const bool ok = !r200.failed && r200.sum.converged &&
                    std::abs(r200.sum.separation_over_h - 8.2) <= 0.8 &&
                    r200.sum.n_steps >= 20000 / 3 && r200.sum.n_steps <= 60000;
    report("C2", ok,
           fmt("Re=200: L_s/h=%.3f (expect 8.2+-0.8), steps=%ld (expect "
               "~2e4), converged=%d",
               r200.sum.separation_over_h, r200.sum.n_steps,
               r200.sum.converged ? 1 : 0));
  }

  // C3 (extended): Re = 300, 400 with fading oscillations
  {
    const int regions300 =
        r300.failed ? -1 : negative_regions_on_row1(r300.state, r300.cfg);
    const bool ok300 = !r300.failed && r300.sum.converged &&
                       std::abs(r300.sum.separation_over_h - 10.1) <= 1.0 &&
                       r300.sum.n_steps >= 60000 / 3 &&
                       r300.sum.n_steps <= 180000 && regions300 == 1;
    const int regions400 =
        r400.failed ? -1 : negative_regions_on_row1(r400.state, r400.cfg);
    const bool ok400 = !r400.failed && r400.sum.converged &&
                       std::abs(r400.sum.separation_over_h - 14.8) <= 1.5 &&
                       r400.sum.n_steps >= 110000 / 3 &&
                       r400.sum.n_steps <= 330000 && regions400 == 1;
    report("C3", ok300 && ok400,
           fmt("Re=300: L_s/h=%.3f (10.1+-1.0), steps=%ld, bubbles=%d; "
               "Re=400: L_s/h=%.3f (14.8+-1.5), steps=%ld, bubbles=%d",
               r300.sum.separation_over_h, r300.sum.n_steps, regions300,
               r400.sum.separation_over_h, r400.sum.n_steps, regions400));
  }

  // C4: near-linear growth of L_s/h with Re
  {
    const double xs[4] = {100, 200, 300, 400};
    const double ys[4] = {r100.sum.separation_over_h, r200.sum.separation_over_h,
                          r300.sum.separation_over_h, r400.sum.separation_over_h};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 4; ++k) {
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / 4;
    double ss_res = 0, ss_tot = 0;
    for (int k = 0; k < 4; ++k) {
      const double pred = slope * xs[k] + intercept;
      ss_res += (ys[k] - pred) * (ys[k] - pred);
      ss_tot += (ys[k] - sy / 4) * (ys[k] - sy / 4);
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    const bool any_failed = r100.failed || r200.failed || r300.failed || r400.failed;
    report("C4", !any_failed && r2 >= 0.97,
           fmt("L_s/h vs Re linear fit: R^2=%.4f (expect >= 0.97), slope=%.4f",
               r2, slope));
    std::ofstream csv(out / "sweep_table.csv");
    csv << "re,separation_over_h,n_steps\n";
    csv << "100," << ys[0] << ',' << r100.sum.n_steps << '\n';
    csv << "200," << ys[1] << ',' << r200.sum.n_steps << '\n';
    csv << "300," << ys[2] << ',' << r300.sum.n_steps << '\n';
    csv << "400," << ys[3] << ',' << r400.sum.n_steps << '\n';
  }
}

// ----------------------------------------------------------------------- tau

void group_tau(const fs::path& out) {
  // dt scales with the largest tau, as in the robustness study
  Config lo = bench_config(100.0, 7.5);
  lo.tau0 = 5e-4;
  Config mid = bench_config(100.0, 7.5);
  mid.tau0 = 5e-3;
  Config hi = bench_config(100.0, 7.5);
  hi.tau0 = 5e-2;
  hi.dt = 1e-3;

  const BenchRun a = run_case(lo, out, "tau_5e-4");
  const BenchRun b = run_case(mid, out, "tau_5e-3");
  const BenchRun c = run_case(hi, out, "tau_5e-2");

  const bool all_ok = !a.failed && !b.failed && !c.failed &&
                      a.sum.converged && b.sum.converged && c.sum.converged;
  double spread = 0.0;
  if (all_ok) {
    const double v[3] = {a.sum.separation_over_h, b.sum.separation_over_h,
                         c.sum.separation_over_h};
    spread = std::max({v[0], v[1], v[2]}) - std::min({v[0], v[1], v[2]});
  }
  report("C5", all_ok && spread <= 0.3,
         fmt("tau robustness: L_s/h = %.3f / %.3f / %.3f for tau = 5e-4 / "
             "5e-3 / 5e-2, spread %.3f (expect <= 0.3)",
             a.sum.separation_over_h, b.sum.separation_over_h,
             c.sum.separation_over_h, spread));
}

// ---------------------------------------------------------------------- grid

void group_grid(const fs::path& out) {
  const BenchRun coarse = run_case(bench_config(100.0, 7.5), out, "grid_300x40");
  Config fine_cfg = bench_config(100.0, 7.5);
  fine_cfg.dx = fine_cfg.dy = 0.0125;
  fine_cfg.dt = 2.5e-5;
  const BenchRun fine = run_case(fine_cfg, out, "grid_600x80");

  const bool ok = !coarse.failed && !fine.failed && coarse.sum.converged &&
                  fine.sum.converged &&
                  std::abs(fine.sum.separation_over_h -
                           coarse.sum.separation_over_h) <= 0.2;
  report("C6", ok,
         fmt("grid refinement: L_s/h = %.3f (300x40) vs %.3f (600x80), "
             "|delta| = %.3f (expect <= 0.2)",
             coarse.sum.separation_over_h, fine.sum.separation_over_h,
             std::abs(fine.sum.separation_over_h -
                      coarse.sum.separation_over_h)));
}

// ------------------------------------------------------------------ gradient

void group_gradient(const fs::path& out) {
  Config steep = bench_config(100.0, 7.5);
  steep.inlet_gradient = -96.0 / 100.0;
  Config shallow = bench_config(100.0, 7.5);
  shallow.inlet_gradient = -12.0 / 100.0;

  const BenchRun a = run_case(steep, out, "gradient_96");
  const BenchRun b = run_case(shallow, out, "gradient_12");

  bool ok = !a.failed && !b.failed && a.sum.converged && b.sum.converged;
  double worst = 0.0;
  std::string worst_field = "none";
  if (ok) {
    const GridSpec g = build_grid(steep.operator=(steep), 0 ? throw 0 : 0);
  }
  (void)out;
}

} // namespace
