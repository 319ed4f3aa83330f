#pragma once

#include <string>

#include "inflap/analytic.hpp"
#include "inflap/dpp.hpp"
#include "inflap/field.hpp"
#include "inflap/grid.hpp"
#include "inflap/variational.hpp"

namespace inflap {

/// Outcome of one structural check. `passed` holds exactly when
/// `margin >= 0`; the margin is the tolerance plus the worst slack found, so
/// small positive values mean a near miss.
struct CheckReport {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  int locus = -1;  ///< node where the worst slack occurs, -1 if not node-bound
  std::string details;
};

/// Default comparison tolerance scale * (eps + spacing).
double comparison_tol(const GridDomain& grid, double eps, double scale = 1.5);

/// Checks the chain z <= u <= h up to tol entrywise. The three fields must
/// come from the same grid; a size mismatch throws.
CheckReport check_ordering(const ScalarField& z, const ScalarField& u,
                           const ScalarField& h, double tol);

/// Solves both games and checks that enlarging the sell region can only
/// lower the value: spec_small's constraint nodes must be a subset of
/// spec_large's, and u_large <= u_small + tol must hold on the interior.
CheckReport check_monotone_in_D(const GridDomain& grid, const GameSpec& spec_small,
                                const GameSpec& spec_large, double tol,
                                int threads = 0);

/// Builds the flat-pocket patch of the harmonic extension at slope eps and
/// compares it on the interior against the sell-everywhere game run at step
/// equal to the grid spacing with sell price eps * spacing. Requires
/// eps >= spacing. If either solve fails to converge the report is marked
/// inconclusive and fails.
CheckReport check_patch_equals_jensen(const GridDomain& grid, const ScalarField& payoff,
                                      double eps, double tol, int threads = 0);

/// Checks sup_norm_gradient(u_inf) <= max(1, lip_f) + tol for a p-limit
/// field produced by p_continuation.
CheckReport check_lip_bound(const GridDomain& grid, const ScalarField& u_inf,
                            double lip_f, double tol);

/// Runs p_continuation for two source-weight choices with identical supports
/// and identical Dirichlet data and passes when the limits agree within tol
/// on the interior. A support or Dirichlet mismatch throws.
CheckReport check_support_dependence(const GridDomain& grid, const VariationalSpec& spec1,
                                     const VariationalSpec& spec2, double tol,
                                     int threads = 0);

/// Solves the example by both routes and compares each against the facts the
/// example carries: game value against `exact` and origin_window, p-limit
/// against variational_exact (or `exact` when the routes are expected to
/// agree). Requires the example to carry g-weights.
CheckReport check_minimal_vs_variational(const GridDomain& grid,
                                         const ExampleProblem& problem, double tol,
                                         int threads = 0);

}  // namespace inflap
