#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qhd/io.hpp"
#include "qhd/operators.hpp"

using namespace qhd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("qhd_io_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

} // namespace

TEST_CASE("parse applies benchmark defaults") {
  const Config c = parse_config(R"({"re":100, "h_ratio":0.5, "length":7.5})");
  CHECK(c.dt == 1e-4);
  CHECK(resolved_tau(c) == doctest::Approx(0.005));
  CHECK(c.dx == 0.025);
  CHECK(c.dy == 0.025);
  CHECK(c.conv_tol == 1e-3);
  const GridSpec g = build_grid(c);
  CHECK(g.nx == 301);
  CHECK(g.ny == 41);
}

TEST_CASE("explicit tau0 wins over the 0.5/Re default") {
  const Config c = parse_config(R"({"re":100, "tau0":0.05})");
  CHECK(resolved_tau(c) == doctest::Approx(0.05));
}

TEST_CASE("range errors name the key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"re":-1})"),
                       doctest::Contains("config key 're'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(R"({"dt":0})"),
                       doctest::Contains("config key 'dt'"),
                       std::invalid_argument);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"re":100, "reynolds":100})"),
                       doctest::Contains("reynolds"), std::invalid_argument);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_config("{re:100}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1,2,3]"), std::invalid_argument);
}

TEST_CASE("config round-trips through emit/parse") {
  Config c;
  c.re = 237.5;
  c.h_ratio = 0.25;
  c.length = 6.25;
  c.dt = 3.3e-5;
  c.preconditioner = Preconditioner::IncompleteCholesky;
  c.init = InitMode::Developed;
  CHECK(parse_config(emit_config(c)) == c);

  c.tau0 = 0.0123;
  c.inlet_gradient = -0.456;
  c.poisson_tol = 1e-9;
  c.snapshot_every = 123;
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("snapshot CSV reloads bit-identically") {
  Config cfg;
  cfg.length = 1.0;
  cfg.nx = 9;
  cfg.ny = 9;
  const GridSpec g = build_grid(cfg);

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  State s{VectorField(g), ScalarField(g), 0.123, 42};
  for (double& v : s.u.x().data()) v = dist(rng) * 1e3;
  for (double& v : s.u.y().data()) v = dist(rng) * 1e-7;
  for (double& v : s.p.data()) v = dist(rng);
  WField w(g);
  for (double& v : w.x().data()) v = dist(rng) * 1e-3;
  ScalarField psi(g);
  for (double& v : psi.data()) v = dist(rng);

  std::stringstream ss;
  write_snapshot_csv(ss, s, w, psi);
  const SnapshotFields back = read_snapshot_csv(ss, g);
  for (int k = 0; k < g.size(); ++k) {
    CHECK(back.u.x().data()[k] == s.u.x().data()[k]);
    CHECK(back.u.y().data()[k] == s.u.y().data()[k]);
    CHECK(back.p.data()[k] == s.p.data()[k]);
    CHECK(back.psi.data()[k] == psi.data()[k]);
    CHECK(back.w.x().data()[k] == w.x().data()[k]);
    CHECK(back.w.y().data()[k] == w.y().data()[k]);
  }
}

TEST_CASE("svg renderer draws the requested level count") {
  Config cfg;
  cfg.length = 2.0;
  cfg.nx = 41;
  cfg.ny = 21;
  const GridSpec g = build_grid(cfg);
  ScalarField psi(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) psi(i, j) = g.y(j);

  const std::string svg = render_svg_isolines(psi, 3, g);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++count;
    pos += 9;
  }
  CHECK(count == 3);

  // a constant field degenerates to the outline only
  ScalarField flat(g, 1.0);
  const std::string outline = render_svg_isolines(flat, 5, g);
  CHECK(outline.find("<svg") != std::string::npos);
  CHECK(outline.find("<polyline") == std::string::npos);

  CHECK_THROWS_AS(render_svg_isolines(psi, 0, g), std::invalid_argument);
}

TEST_CASE("negative recirculation levels use a distinct stroke") {
  Config cfg;
  cfg.length = 1.0;
  cfg.nx = 21;
  cfg.ny = 21;
  const GridSpec g = build_grid(cfg);
  ScalarField psi(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) psi(i, j) = g.y(j) - 0.5;
  const std::string svg = render_svg_isolines(psi, 5, g);
  CHECK(svg.find("#d62728") != std::string::npos); // negative levels
  CHECK(svg.find("#1f77b4") != std::string::npos); // positive levels
}

TEST_CASE("cmd_run honours the exit-code contract") {
  const fs::path dir = temp_dir("run");
  // tiny grid, t_max = 0: valid summary, no snapshots, not converged
  {
    std::ofstream f(dir / "cfg.json");
    f << R"({"re":100, "h_ratio":0.5, "length":1.0, "dx":0.125, "dy":0.125,
             "t_max":0.0})";
  }
  const int code = cmd_run(dir / "cfg.json", dir / "out");
  CHECK(code == exit_code::not_converged);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "residuals.csv"));
  std::size_t snapshots = 0;
  for (const auto& e : fs::directory_iterator(dir / "out"))
    if (e.path().extension() == ".csv" &&
        e.path().filename().string().rfind("snapshot_", 0) == 0)
      ++snapshots;
  CHECK(snapshots == 0);

  // loose tolerance: converges quickly, exit 0, final snapshot written
  {
    std::ofstream f(dir / "cfg2.json");
    f << R"({"re":100, "h_ratio":0.5, "length":1.0, "dx":0.125, "dy":0.125,
             "dt":1e-4, "conv_tol":1e9, "t_max":1.0})";
  }
  CHECK(cmd_run(dir / "cfg2.json", dir / "out2") == exit_code::ok);
  CHECK(fs::exists(dir / "out2" / "snapshot_00000001.csv"));
  CHECK(fs::exists(dir / "out2" / "snapshot_00000001.svg"));

  // a blow-up maps to the diverged code and still writes the summary
  {
    std::ofstream f(dir / "cfg3.json");
    f << R"({"re":100, "h_ratio":0.5, "length":1.0, "dx":0.125, "dy":0.125,
             "dt":0.5, "t_max":5.0})";
  }
  CHECK(cmd_run(dir / "cfg3.json", dir / "out3") == exit_code::diverged);
  CHECK(fs::exists(dir / "out3" / "summary.json"));

  // unreadable config and unwritable output map to the usage code
  CHECK(cmd_run(dir / "missing.json", dir / "out4") == exit_code::usage);
  std::ofstream(dir / "blocker") << "x";
  CHECK(cmd_run(dir / "cfg2.json", dir / "blocker" / "sub") == exit_code::usage);
  fs::remove_all(dir);
}

TEST_CASE("cmd_sweep records failing rows and carries on") {
  const fs::path dir = temp_dir("sweep");
  {
    std::ofstream f(dir / "base.json");
    f << R"({"h_ratio":0.5, "length":1.0, "dx":0.125, "dy":0.125,
             "conv_tol":1e9, "t_max":1.0})";
  }
  // one invalid Reynolds number, one fine
  const int code = cmd_sweep(dir / "base.json", {-5.0, 150.0}, dir / "out");
  CHECK(code == exit_code::not_converged);
  std::ifstream table(dir / "out" / "sweep.csv");
  std::string line;
  std::getline(table, line);
  CHECK(line == "re,separation_over_h,n_steps,converged,final_delta_p");
  std::getline(table, line);
  CHECK(line.rfind("-5,nan", 0) == 0);
  std::getline(table, line);
  CHECK(line.rfind("150,", 0) == 0);
  CHECK(line.find(",1,") != std::string::npos); // converged flag

  // empty list: empty table, success
  CHECK(cmd_sweep(dir / "base.json", {}, dir / "out2") == exit_code::ok);
  std::ifstream t2(dir / "out2" / "sweep.csv");
  std::getline(t2, line);
  CHECK(line.rfind("re,", 0) == 0);
  CHECK(!std::getline(t2, line));
  fs::remove_all(dir);
}

TEST_CASE("summary json carries the resolved configuration") {
  Config cfg;
  cfg.re = 100.0;
  RunSummary sum;
  sum.converged = true;
  sum.n_steps = 42;
  sum.separation_over_h = 5.0;
  sum.tau = 0.005;
  std::stringstream ss;
  write_summary_json(ss, sum, cfg);
  const std::string text = ss.str();
  CHECK(text.find("\"separation_over_h\": 5.0") != std::string::npos);
  CHECK(text.find("\"config\"") != std::string::npos);
  CHECK(text.find("\"resolved\"") != std::string::npos);
  CHECK(text.find("\"tau\": 0.005") != std::string::npos);
}
