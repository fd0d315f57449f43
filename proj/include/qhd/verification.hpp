#pragma once

#include <string>
#include <vector>

#include "qhd/config.hpp"
#include "qhd/grid.hpp"

namespace qhd::verification {

/// Max-norm errors of one operator against a closed-form field on a ladder
/// of grids, plus the error ratios between successive refinements.
struct OrderStudy {
  std::string name;
  std::vector<double> h;
  std::vector<double> error;
  std::vector<double> ratio;

  bool ratios_within(double lo, double hi) const;
};

// Each study halves the spacing between entries of node_counts
// (e.g. {17, 33, 65}) on the unit square.
OrderStudy momentum_rhs_order(const std::vector<int>& node_counts, double nu);
OrderStudy divergence_order(const std::vector<int>& node_counts);
OrderStudy assemble_rhs_order(const std::vector<int>& node_counts, double tau);
OrderStudy poisson_order(const std::vector<int>& node_counts);

struct PoiseuilleReport {
  double max_velocity_error = 0.0; // max |u - u0| after the run
  double final_delta_p = 0.0;
  long n_steps = 0;
};

/// Advances the exact developed channel state n_steps times; a faithful
/// discretization leaves it unchanged to round-off.
PoiseuilleReport poiseuille_fixed_point(double re, double length,
                                        double spacing, long n_steps);

} // namespace qhd::verification
