#include "qhd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qhd/operators.hpp"

namespace qhd {

using nlohmann::json;

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("QHD_LOG");
    if (!env) return 1;
    return std::atoi(env);
  }();
  return level;
}

namespace {

[[noreturn]] void key_error(const std::string& key, const std::string& msg) {
  throw std::invalid_argument("config key '" + key + "': " + msg);
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) key_error(key, "expected a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) key_error(key, "expected an integer");
  return v.get<long>();
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed document: ") + e.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("config: top level must be an object");

  Config c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "re") c.re = as_number(value, key);
    else if (key == "h_ratio") c.h_ratio = as_number(value, key);
    else if (key == "length") c.length = as_number(value, key);
    else if (key == "dx") c.dx = as_number(value, key);
    else if (key == "dy") c.dy = as_number(value, key);
    else if (key == "nx") c.nx = static_cast<int>(as_integer(value, key));
    else if (key == "ny") c.ny = static_cast<int>(as_integer(value, key));
    else if (key == "dt") c.dt = as_number(value, key);
    else if (key == "tau0") c.tau0 = as_number(value, key);
    else if (key == "gamma") c.gamma = as_number(value, key);
    else if (key == "schmidt") c.schmidt = as_number(value, key);
    else if (key == "mach") c.mach = as_number(value, key);
    else if (key == "re_s") c.re_s = as_number(value, key);
    else if (key == "flow_rate") c.flow_rate = as_number(value, key);
    else if (key == "conv_tol") c.conv_tol = as_number(value, key);
    else if (key == "t_max") c.t_max = as_number(value, key);
    else if (key == "poisson_tol") c.poisson_tol = as_number(value, key);
    else if (key == "poisson_max_iter")
      c.poisson_max_iter = static_cast<int>(as_integer(value, key));
    else if (key == "preconditioner") {
      const std::string s = value.is_string() ? value.get<std::string>() : "";
      if (s == "jacobi") c.preconditioner = Preconditioner::Jacobi;
      else if (s == "ic0") c.preconditioner = Preconditioner::IncompleteCholesky;
      else key_error(key, "expected \"jacobi\" or \"ic0\"");
    } else if (key == "snapshot_every")
      c.snapshot_every = as_integer(value, key);
    else if (key == "conv_check_every")
      c.conv_check_every = as_integer(value, key);
    else if (key == "inlet_gradient")
      c.inlet_gradient = as_number(value, key);
    else if (key == "init") {
      const std::string s = value.is_string() ? value.get<std::string>() : "";
      if (s == "rest") c.init = InitMode::Rest;
      else if (s == "developed") c.init = InitMode::Developed;
      else key_error(key, "expected \"rest\" or \"developed\"");
    } else
      key_error(key, "unknown key");
  }
  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const Config& c) {
  json doc;
  doc["re"] = c.re;
  doc["h_ratio"] = c.h_ratio;
  doc["length"] = c.length;
  doc["dx"] = c.dx;
  doc["dy"] = c.dy;
  if (c.nx != 0) doc["nx"] = c.nx;
  if (c.ny != 0) doc["ny"] = c.ny;
  doc["dt"] = c.dt;
  if (c.tau0) doc["tau0"] = *c.tau0;
  doc["gamma"] = c.gamma;
  doc["schmidt"] = c.schmidt;
  doc["mach"] = c.mach;
  doc["re_s"] = c.re_s;
  doc["flow_rate"] = c.flow_rate;
  doc["conv_tol"] = c.conv_tol;
  doc["t_max"] = c.t_max;
  doc["poisson_tol"] = c.poisson_tol;
  doc["poisson_max_iter"] = c.poisson_max_iter;
  doc["preconditioner"] =
      c.preconditioner == Preconditioner::Jacobi ? "jacobi" : "ic0";
  doc["snapshot_every"] = c.snapshot_every;
  doc["conv_check_every"] = c.conv_check_every;
  if (c.inlet_gradient) doc["inlet_gradient"] = *c.inlet_gradient;
  doc["init"] = c.init == InitMode::Rest ? "rest" : "developed";
  return doc.dump(2);
}

void write_snapshot_csv(std::ostream& os, const State& s, const WField& w,
                        const ScalarField& psi) {
  const GridSpec& g = s.u.grid();
  os << "x,y,u_x,u_y,p,psi,w_x,w_y\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      os << format17(g.x(i)) << ',' << format17(g.y(j)) << ','
         << format17(s.u.x()(i, j)) << ',' << format17(s.u.y()(i, j)) << ','
         << format17(s.p(i, j)) << ',' << format17(psi(i, j)) << ','
         << format17(w.x()(i, j)) << ',' << format17(w.y()(i, j)) << '\n';
    }
  }
}

SnapshotFields read_snapshot_csv(std::istream& is, const GridSpec& g) {
  SnapshotFields f{VectorField(g), ScalarField(g), ScalarField(g), WField(g)};
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,", 0) != 0)
    throw std::runtime_error("snapshot: missing header row");
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!std::getline(is, line))
        throw std::runtime_error("snapshot: truncated file");
      double vals[8];
      int n = 0;
      const char* pos = line.c_str();
      char* end = nullptr;
      for (; n < 8; ++n) {
        vals[n] = std::strtod(pos, &end);
        if (end == pos) break;
        pos = (*end == ',') ? end + 1 : end;
      }
      if (n != 8) throw std::runtime_error("snapshot: malformed row");
      f.u.x()(i, j) = vals[2];
      f.u.y()(i, j) = vals[3];
      f.p(i, j) = vals[4];
      f.psi(i, j) = vals[5];
      f.w.x()(i, j) = vals[6];
      f.w.y()(i, j) = vals[7];
    }
  }
  return f;
}

void write_summary_json(std::ostream& os, const RunSummary& sum,
                        const Config& cfg) {
  json doc;
  doc["converged"] = sum.converged;
  doc["n_steps"] = sum.n_steps;
  doc["final_delta_p"] = sum.final_delta_p;
  doc["separation_length"] = sum.separation_length;
  doc["separation_over_h"] = sum.separation_over_h;
  doc["mass_flux_error"] = sum.mass_flux_error;
  doc["psi_top_error"] = sum.psi_top_error;
  doc["max_mass_divergence"] = sum.max_mass_divergence;
  doc["wall_seconds"] = sum.wall_seconds;
  doc["poisson_iterations_total"] = sum.poisson_iterations_total;
  doc["resolved"] = {
      {"tau", sum.tau},
      {"nu", sum.nu},
      {"inlet_pressure_gradient", sum.inlet_pressure_gradient},
      {"profile_gradient", sum.profile_gradient},
      {"nx", sum.nx},
      {"ny", sum.ny},
      {"dx", sum.dx},
      {"dy", sum.dy},
      {"uniform_spacing", sum.uniform_spacing},
  };
  doc["config"] = json::parse(emit_config(cfg));
  os << doc.dump(2) << '\n';
}

std::string render_svg_isolines(const ScalarField& psi, int n_levels,
                                const GridSpec& g) {
  require_same_grid(psi.grid(), g, "render_svg_isolines");
  if (n_levels < 1)
    throw std::invalid_argument("render_svg_isolines: n_levels must be >= 1");

  double lo = psi.data()[0], hi = psi.data()[0];
  for (double v : psi.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  const double margin = 20.0;
  const double scale = 860.0 / g.length;
  const double wpx = g.length * scale + 2.0 * margin;
  const double hpx = g.height * scale + 2.0 * margin;
  auto X = [&](double x) { return margin + x * scale; };
  auto Y = [&](double y) { return margin + (g.height - y) * scale; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << wpx << "\" height=\"" << hpx << "\" viewBox=\"0 0 "
      << wpx << ' ' << hpx << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << X(0.0) << "\" y=\"" << Y(g.height) << "\" width=\""
      << g.length * scale << "\" height=\"" << g.height * scale
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  if (g.step_ratio > 0.0) {
    svg << "<line x1=\"" << X(0.0) << "\" y1=\"" << Y(0.0) << "\" x2=\""
        << X(0.0) << "\" y2=\"" << Y(g.step_ratio)
        << "\" stroke=\"black\" stroke-width=\"4\"/>\n"
        << "<circle cx=\"" << X(0.0) << "\" cy=\"" << Y(g.step_ratio)
        << "\" r=\"3\" fill=\"black\"/>\n";
  }

  const double span = hi - lo;
  if (span > 0.0 && std::isfinite(span)) {
    std::vector<double> levels;
    for (int k = 1; k <= n_levels; ++k)
      levels.push_back(lo + span * k / (n_levels + 1));
    const IsolineSet iso = extract_isolines(psi, levels, g);
    for (std::size_t lv = 0; lv < iso.levels.size(); ++lv) {
      const char* stroke = iso.levels[lv] < 0.0 ? "#d62728" : "#1f77b4";
      for (const Polyline& chain : iso.polylines[lv]) {
        svg << "<polyline fill=\"none\" stroke=\"" << stroke
            << "\" stroke-width=\"1\" points=\"";
        for (const auto& pt : chain) svg << X(pt[0]) << ',' << Y(pt[1]) << ' ';
        svg << "\"/>\n";
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

struct RunArtifacts {
  std::filesystem::path dir;
  std::ofstream residual_log;
  int snapshots_written = 0;
};

void write_snapshot_files(RunArtifacts& art, const Config& cfg, const State& s,
                          const WField& w, const ScalarField& psi) {
  char name[64];
  std::snprintf(name, sizeof(name), "snapshot_%08ld.csv", s.n);
  std::ofstream csv(art.dir / name);
  write_snapshot_csv(csv, s, w, psi);
  std::snprintf(name, sizeof(name), "snapshot_%08ld.svg", s.n);
  std::ofstream svg(art.dir / name);
  svg << render_svg_isolines(psi, 20, s.u.grid());
  ++art.snapshots_written;
  (void)cfg;
}

void prepare_out_dir(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  // probe writability before any compute
  const auto probe = out_dir / ".write_probe";
  std::ofstream test(probe);
  if (!test) throw std::runtime_error("output directory is not writable: " + out_dir.string());
  test.close();
  std::filesystem::remove(probe, ec);
}

} // namespace

int cmd_run(const std::filesystem::path& config_path,
            const std::filesystem::path& out_dir) {
  Config cfg;
  try {
    cfg = load_config(config_path);
    prepare_out_dir(out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[qhd] error: %s\n", e.what());
    return exit_code::usage;
  }

  RunArtifacts art;
  art.dir = out_dir;
  art.residual_log.open(out_dir / "residuals.csv");
  art.residual_log << "step,t,delta_p,poisson_iterations,poisson_residual\n";

  TimeStepper stepper(cfg);
  State s = stepper.initial_state();

  RunObservers obs;
  obs.on_step = [&](const State& st, const StepStats& stats) {
    art.residual_log << st.n << ',' << format17(st.t) << ','
                     << format17(stats.delta_p) << ','
                     << stats.poisson.iterations << ','
                     << format17(stats.poisson.final_residual) << '\n';
  };
  obs.on_snapshot = [&](const State& st, const WField& w,
                        const ScalarField& psi) {
    write_snapshot_files(art, cfg, st, w, psi);
  };

  int code = exit_code::ok;
  RunSummary sum;
  try {
    sum = stepper.run(s, obs);
    if (sum.n_steps > 0) {
      const WField w = compute_w(s.u, s.p, stepper.tau(), stepper.grid());
      write_snapshot_files(art, cfg, s, w,
                           stream_function(s.u, w, stepper.grid()));
    }
    code = sum.converged ? exit_code::ok : exit_code::not_converged;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "[qhd] run aborted: %s\n", e.what());
    sum.converged = false;
    sum.n_steps = s.n;
    code = exit_code::diverged;
  }

  art.residual_log.close();
  std::ofstream summary(out_dir / "summary.json");
  write_summary_json(summary, sum, cfg);

  if (log_level() >= 1) {
    std::fprintf(stderr,
                 "[qhd] %s after %ld steps: L_s/h = %.3f, delta_p = %.3e, "
                 "%.1f s\n",
                 sum.converged ? "converged" : "stopped", sum.n_steps,
                 sum.separation_over_h, sum.final_delta_p, sum.wall_seconds);
  }
  return code;
}

int cmd_sweep(const std::filesystem::path& config_path,
              const std::vector<double>& re_values,
              const std::filesystem::path& out_dir) {
  Config base;
  try {
    base = load_config(config_path);
    prepare_out_dir(out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[qhd] error: %s\n", e.what());
    return exit_code::usage;
  }

  std::ofstream table(out_dir / "sweep.csv");
  table << "re,separation_over_h,n_steps,converged,final_delta_p\n";

  bool any_failed = false;
  for (double re : re_values) {
    Config cfg = base;
    cfg.re = re;
    cfg.tau0.reset(); // per-run default 0.5/re
    // benchmark domain lengths for the laminar sweep
    if (re == 100.0 || re == 300.0) cfg.length = 7.5;
    else if (re == 200.0) cfg.length = 5.0;
    else if (re == 400.0) cfg.length = 10.0;

    char label[64];
    std::snprintf(label, sizeof(label), "re_%g", re);
    try {
      validate(cfg);
      TimeStepper stepper(cfg);
      State s = stepper.initial_state();
      const RunSummary sum = stepper.run(s);
      table << re << ',' << format17(sum.separation_over_h) << ','
            << sum.n_steps << ',' << (sum.converged ? 1 : 0) << ','
            << format17(sum.final_delta_p) << '\n';
      std::ofstream summary(out_dir / (std::string(label) + "_summary.json"));
      write_summary_json(summary, sum, cfg);
      if (!sum.converged) any_failed = true;
      if (log_level() >= 1)
        std::fprintf(stderr, "[qhd] sweep re=%g: L_s/h=%.3f steps=%ld %s\n", re,
                     sum.separation_over_h, sum.n_steps,
                     sum.converged ? "converged" : "NOT converged");
    } catch (const std::exception& e) {
      any_failed = true;
      table << re << ",nan,0,0,nan\n";
      std::fprintf(stderr, "[qhd] sweep re=%g failed: %s\n", re, e.what());
    }
  }
  return any_failed ? exit_code::not_converged : exit_code::ok;
}

} // namespace qhd
