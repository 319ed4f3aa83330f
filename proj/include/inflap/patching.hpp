#pragma once

#include <utility>
#include <vector>

#include "inflap/dpp.hpp"
#include "inflap/field.hpp"
#include "inflap/grid.hpp"

namespace inflap {

/// Split of the interior into a steep part that is kept and flat pockets
/// that get rebuilt as slope-eps cone extensions of the surrounding values.
struct RegionDecomposition {
  /// Pointwise slope estimate the split was computed from.
  ScalarField lip_field;
  /// Interior nodes whose slope estimate lies strictly below the threshold.
  Mask v_eps_mask;
  /// Connected pockets of v_eps_mask under axis and diagonal adjacency.
  /// Each pocket lists node indices in ascending order; pockets are ordered
  /// by their smallest node index.
  std::vector<std::vector<int>> components;
  /// Interior nodes outside every pocket.
  Mask a_mask;
  /// Nodes that border a pocket from outside (interior or strip).
  Mask b_mask;
  /// Interior nodes whose slope estimate lies within 1e-9 of the threshold.
  /// The split uses a strict comparison, so these could land on either side
  /// under a different rounding of the slope estimate.
  long long borderline_nodes = 0;
};

/// Solves the averaging dynamic programming principle with step equal to the
/// grid's strip width and the given boundary payoff. Returns the solved field
/// together with the solve report.
std::pair<ScalarField, SolveReport> solve_infinity_harmonic(const GridDomain& grid,
                                                            const ScalarField& payoff,
                                                            double tol,
                                                            long long max_iter = 1000000,
                                                            int threads = 0);

/// Largest difference quotient |u(x) - u(y)| / |x - y| over nodes y within
/// the given radius of each interior node. Strip nodes count as neighbors.
/// radius <= 0 selects the default of twice the grid spacing. Entries at
/// non-interior nodes are zero.
ScalarField pointwise_lipschitz(const GridDomain& grid, const ScalarField& u,
                                double radius = 0.0, int threads = 0);

/// Thresholds the slope field at eps (strict) and collects the connected
/// pockets of sub-threshold interior nodes.
RegionDecomposition decompose(const GridDomain& grid, const ScalarField& lip_field,
                              double eps);

/// Replaces h inside every pocket by the largest function that matches h on
/// the pocket's border and decreases at rate eps per unit geodesic distance
/// inside the pocket. Values outside the pockets are copied from h.
/// Throws std::runtime_error if a pocket has no border nodes.
ScalarField patch(const GridDomain& grid, const ScalarField& h,
                  const RegionDecomposition& dec, double eps);

}  // namespace inflap
