#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inflap/dpp.hpp"
#include "inflap/field.hpp"
#include "inflap/grid.hpp"

namespace inflap {

/// Cone offset - slope * |x - apex| sampled at every grid node.
ScalarField cone(const GridDomain& grid, const Eigen::Vector2d& apex, double slope,
                 double offset = 0.0);

/// Distance from each node to the nearest strip node. Zero on the strip
/// itself. Throws std::runtime_error if the grid has no strip nodes.
ScalarField dist_to_boundary(const GridDomain& grid, int threads = 0);

/// Candidate solution built from a slope-alpha lower cone envelope of the
/// boundary payoff: envelope values are held fixed on d_closure (interior
/// nodes only) and the averaging dynamic programming principle fills the
/// rest. alpha_in_range, when given, is set to false if alpha lies outside
/// [Lip(payoff), 1].
ScalarField v_alpha(const GridDomain& grid, const ScalarField& payoff, double alpha,
                    const Mask& d_closure, double tol, bool* alpha_in_range = nullptr,
                    int threads = 0);

/// A ready-made test problem: grid, step size, boundary payoff, and the
/// facts that are known about its solutions.
struct ExampleProblem {
  std::string name;
  GridDomain grid;
  /// Walk step the problem is calibrated for.
  double eps = 0.0;
  /// Boundary values on strip nodes (full node field).
  ScalarField payoff;
  /// Source weights for the p-energy route; empty when that route is not
  /// part of the example.
  ScalarField g_weights;
  /// Limit of the constrained walk values, when known in closed form.
  std::function<double(const Eigen::Vector2d&)> exact;
  /// Limit of the p-energy route when it differs from `exact`.
  std::function<double(const Eigen::Vector2d&)> variational_exact;
  /// Multiplies (eps + spacing) to get the comparison tolerance.
  double exact_tol_scale = 1.5;
  /// Bracket for the solved value at the node nearest the domain center.
  std::optional<std::pair<double, double>> origin_window;
  /// When set, solving with the constraint set as-is and with its interior
  /// closure must give values at probe_node differing by at least this gap.
  std::optional<double> nonuniqueness_gap;
  int probe_node = -1;
};

/// Names accepted by example_library, in catalog order.
std::vector<std::string> example_names();

/// Builds the named example. Throws std::invalid_argument for unknown names.
ExampleProblem example_library(const std::string& name);

}  // namespace inflap
