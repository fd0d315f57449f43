#include "qhd/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qhd {

namespace {

int derive_count(double extent, double spacing, const char* what) {
  const double intervals = extent / spacing;
  const int n = static_cast<int>(std::lround(intervals));
  if (n < 1 || std::abs(n * spacing - extent) > 1e-12 * std::max(1.0, extent)) {
    throw std::invalid_argument(std::string("build_grid: ") + what +
                                " is not an integer multiple of the spacing");
  }
  return n + 1;
}

} // namespace

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Interior: return "interior";
    case NodeClass::LowerWall: return "lower_wall";
    case NodeClass::UpperWall: return "upper_wall";
    case NodeClass::LeftSolidWall: return "left_solid_wall";
    case NodeClass::Inlet: return "inlet";
    case NodeClass::Outlet: return "outlet";
    case NodeClass::StepCorner: return "step_corner";
  }
  return "unknown";
}

bool GridSpec::uniform_spacing() const {
  return std::abs(dx - dy) <= 1e-12 * std::max(dx, dy);
}

GridSpec build_grid(const Config& cfg) {
  if (!(cfg.length > 0.0))
    throw std::invalid_argument("build_grid: length must be positive");
  if (!(cfg.h_ratio >= 0.0 && cfg.h_ratio < 1.0))
    throw std::invalid_argument("build_grid: h_ratio must lie in [0, 1)");

  GridSpec g;
  g.length = cfg.length;
  g.height = 1.0;
  g.step_ratio = cfg.h_ratio;

  if (cfg.nx != 0 || cfg.ny != 0) {
    if (cfg.nx < 4 || cfg.ny < 4)
      throw std::invalid_argument("build_grid: node counts must be >= 4");
    g.nx = cfg.nx;
    g.ny = cfg.ny;
    g.dx = cfg.length / (g.nx - 1);
    g.dy = 1.0 / (g.ny - 1);
  } else {
    if (!(cfg.dx > 0.0) || !(cfg.dy > 0.0))
      throw std::invalid_argument("build_grid: spacings must be positive");
    g.dx = cfg.dx;
    g.dy = cfg.dy;
    g.nx = derive_count(cfg.length, cfg.dx, "length");
    g.ny = derive_count(1.0, cfg.dy, "height");
    if (g.nx < 4 || g.ny < 4)
      throw std::invalid_argument("build_grid: grid too coarse (need >= 4 nodes per direction)");
  }

  if (g.step_ratio > 0.0) {
    const double steps = g.step_ratio / g.dy;
    g.step_index = static_cast<int>(std::lround(steps));
    if (std::abs(g.step_index * g.dy - g.step_ratio) > 1e-9)
      throw std::invalid_argument("build_grid: h_ratio does not coincide with a grid line");
    if (g.step_index < 1 || g.step_index > g.ny - 3)
      throw std::invalid_argument("build_grid: step corner leaves no room for the inlet");
  } else {
    g.step_index = 0;
  }
  return g;
}

NodeClass classify(const GridSpec& g, int i, int j) {
  if (i < 0 || i >= g.nx || j < 0 || j >= g.ny)
    throw std::out_of_range("classify: node index out of range");
  const bool has_step = g.step_ratio > 0.0;
  if (has_step && i == 0 && j == g.step_index) return NodeClass::StepCorner;
  if (j == 0) return NodeClass::LowerWall;
  if (j == g.ny - 1) return NodeClass::UpperWall;
  if (i == 0)
    return (has_step && j < g.step_index) ? NodeClass::LeftSolidWall
                                          : NodeClass::Inlet;
  if (i == g.nx - 1) return NodeClass::Outlet;
  return NodeClass::Interior;
}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b))
    throw std::invalid_argument(std::string(what) + ": fields use different grids");
}

} // namespace qhd
