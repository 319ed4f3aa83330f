#pragma once

#include <utility>
#include <vector>

#include "inflap/dpp.hpp"
#include "inflap/field.hpp"
#include "inflap/grid.hpp"

namespace inflap {

/// Data for the p-energy minimization
///   F_p(u) = sum_cells |Du_cell|^p / p * s^dim + sum_interior g(x) u(x) * s^dim.
///
/// Cells are grid squares (segments in 1d) anchored at a node; a cell counts
/// if every corner is a node and at least one corner is interior. The cell
/// gradient uses forward differences from the anchor. Boundary values are
/// read from the field itself; the minimizers pin non-interior entries to
/// `dirichlet` before iterating.
struct VariationalSpec {
  /// Per-node source weights. Empty means zero weights.
  ScalarField g_weights;
  /// Values held fixed on non-interior nodes. Empty means zero.
  ScalarField dirichlet;
  /// Exponents for warm-started continuation, strictly increasing, each > 2.
  std::vector<double> p_schedule = {4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  /// Sup-norm gradient target for each continuation stage.
  double inner_tol = 1e-6;
};

/// Evaluates F_p(u). Requires p >= 2. Deterministic for fixed inputs
/// regardless of thread count.
double functional_value(const GridDomain& grid, double p, const VariationalSpec& spec,
                        const ScalarField& u, int threads = 0);

/// Partial derivatives of F_p with respect to the interior entries of u.
/// Entries at non-interior nodes are zero.
ScalarField functional_gradient(const GridDomain& grid, double p,
                                const VariationalSpec& spec, const ScalarField& u,
                                int threads = 0);

/// Largest forward-difference gradient magnitude over cells.
double sup_norm_gradient(const GridDomain& grid, const ScalarField& u);

/// Minimizes F_p from the given start by gradient descent with
/// Barzilai-Borwein step sizes and Armijo backtracking. Stops when the
/// sup-norm of the gradient drops to tol. Non-interior entries of the start
/// are replaced by the Dirichlet values.
std::pair<ScalarField, SolveReport> minimize_p(const GridDomain& grid, double p,
                                               const VariationalSpec& spec,
                                               const ScalarField& init, double tol,
                                               long long max_steps = 200000,
                                               int threads = 0);

/// Runs minimize_p across spec.p_schedule, warm starting each exponent from
/// the previous minimizer. The report accumulates step counts and wall time;
/// converged means every stage met spec.inner_tol.
std::pair<ScalarField, SolveReport> p_continuation(const GridDomain& grid,
                                                   const VariationalSpec& spec,
                                                   int threads = 0);

}  // namespace inflap
