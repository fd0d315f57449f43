#pragma once

#include <cstddef>
#include <vector>

#include "qhd/config.hpp"

namespace qhd {

/// Node roles on the backward-facing-step channel [0, L/H] x [0, 1].
/// The left boundary is solid wall below y = h/H and inflow above it;
/// the single node at (0, h/H) is the step corner and is treated as wall.
enum class NodeClass {
  Interior,
  LowerWall,
  UpperWall,
  LeftSolidWall,
  Inlet,
  Outlet,
  StepCorner
};

const char* to_string(NodeClass c);

/// Uniform colocated grid: velocity and pressure share the same nodes.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double length = 0.0;     // L/H
  double height = 1.0;     // fixed by the nondimensionalization
  double step_ratio = 0.0; // h/H; 0 means no step (straight channel)
  int step_index = 0;      // j index of the step corner; 0 when no step

  double x(int i) const { return i * dx; }
  double y(int j) const { return j * dy; }
  int size() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  bool uniform_spacing() const;

  bool operator==(const GridSpec&) const = default;
};

/// Derives node counts from the requested spacing (or explicit counts) and
/// checks that the step corner falls on a grid line.
GridSpec build_grid(const Config& cfg);

/// Total classification of node (i, j); throws std::out_of_range.
NodeClass classify(const GridSpec& g, int i, int j);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double value = 0.0)
      : grid_(grid), values_(static_cast<std::size_t>(grid.size()), value) {}

  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(grid_.index(i, j))]; }
  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(grid_.index(i, j))]; }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& data() const { return values_; }
  std::vector<double>& data() { return values_; }

  bool all_finite() const;
  double max_abs() const;

 private:
  GridSpec grid_{};
  std::vector<double> values_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const GridSpec& grid, double vx = 0.0, double vy = 0.0)
      : x_(grid, vx), y_(grid, vy) {}

  ScalarField& x() { return x_; }
  const ScalarField& x() const { return x_; }
  ScalarField& y() { return y_; }
  const ScalarField& y() const { return y_; }
  const GridSpec& grid() const { return x_.grid(); }
  bool all_finite() const { return x_.all_finite() && y_.all_finite(); }

 private:
  ScalarField x_;
  ScalarField y_;
};

/// The QHD correction velocity (w_x, w_y).
using WField = VectorField;

/// Throws std::invalid_argument when two fields do not share a grid.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

} // namespace qhd
