#pragma once

#include "inflap/field.hpp"
#include "inflap/grid.hpp"

#include <span>
#include <utility>
#include <vector>

namespace inflap {

/**
 * Game variants, distinguished by where the minimizing player may sell a
 * turn instead of tossing the coin:
 *   TugOfWar   never sells; the update is the plain midrange average.
 *   DGame      sells only on constraint nodes (the grid's d_mask).
 *   OmegaGame  sells everywhere in the interior.
 */
enum class GameVariant { TugOfWar, DGame, OmegaGame };

struct GameSpec {
  GameVariant variant = GameVariant::TugOfWar;
  double eps = 0.0;        // step: radius of the move ball; must be >= spacing
  ScalarField payoff;      // boundary values, read on strip nodes
  double sell_price = -1;  // deduction per sold turn; negative means "use eps"
  Mask d_override;         // optional replacement for grid.d_mask (empty: use grid's)

  double price() const { return sell_price < 0 ? eps : sell_price; }
  const Mask& constraint_nodes(const GridDomain& grid) const {
    return d_override.size() > 0 ? d_override : grid.d_mask;
  }
};

struct SolveReport {
  long long iterations = 0;       // total sweeps across both bracket runs
  double residual = 0.0;          // max-norm of (T u - u) for the returned field
  bool converged = false;
  double lower_upper_gap = 0.0;   // max-norm gap between the two bracket limits
  double wall_time_seconds = 0.0;
};

// Knobs that do not affect the computed values: thread count (results are
// bitwise identical for any value), stagnation window, and an optional set
// of interior nodes pinned as extra Dirichlet data.
struct SolveControls {
  int threads = 0;
  long long stall_window = 5000;
  const Mask* frozen = nullptr;
  const ScalarField* frozen_values = nullptr;
};

/**
 * Precomputed move stencils: for every interior node, the indices of all
 * stored nodes within the given Euclidean radius (the node itself included).
 * Shared, immutable, and cheap to query; built once per solve.
 */
class BallTable {
 public:
  BallTable(const GridDomain& grid, double radius);

  std::span<const int> neighbors(int node) const {
    int r = rank_[node];
    return {flat_.data() + starts_[r], static_cast<std::size_t>(starts_[r + 1] - starts_[r])};
  }
  bool covers(int node) const { return rank_[node] >= 0; }
  double radius() const { return radius_; }

 private:
  std::vector<int> rank_;     // node -> interior rank, -1 for strip nodes
  std::vector<long> starts_;  // CSR offsets per interior rank
  std::vector<int> flat_;
  double radius_;
};

enum class EnvelopeSide { Lower, Upper };

/**
 * Cone envelope of the strip payoff: for Lower,
 *   sup over strip nodes y of (F(y) - slope |x - y|),
 * for Upper the inf of (F(y) + slope |x - y|).  Equals the payoff on the
 * strip whenever slope >= Lip(F).
 */
ScalarField cone_envelope(const GridDomain& grid, const ScalarField& payoff, double slope,
                          EnvelopeSide side, int threads = 0);

/** Largest difference quotient of the payoff between pairs of strip nodes. */
double payoff_lipschitz(const GridDomain& grid, const ScalarField& payoff);

/** Default stopping tolerance: 1e-9 * (1 + max |payoff| on the strip). */
double default_tol(const GridDomain& grid, const ScalarField& payoff);

/**
 * One application of the dynamic-programming operator: at every interior
 * node x,
 *   TugOfWar:   (T u)(x) = 1/2 sup u + 1/2 inf u            over ball(x, eps)
 *   DGame:      min of the average and (sup u - price) on constraint nodes
 *   OmegaGame:  min of the average and (sup u - price) everywhere,
 * with strip values copied through unchanged.  The operator is monotone and
 * nonexpansive in the sup norm, and these properties hold exactly in
 * floating point (all ingredients are monotone under rounding).
 */
ScalarField dpp_apply(const GridDomain& grid, const GameSpec& spec, const ScalarField& u,
                      int threads = 0);

/** Max-norm of dpp_apply(u) - u over interior nodes. */
double residual(const GridDomain& grid, const GameSpec& spec, const ScalarField& u);

/**
 * Fixed-point solve by bracketing value iteration.
 *
 * Runs Jacobi iteration twice: once from the lower cone envelope with slope
 * max{1, Lip(payoff)} and once from the upper envelope.  The lower limit
 * field is returned.  The report carries the exact residual of that field
 * and the max-norm gap between the two limits; converged requires
 * residual <= tol and gap <= 10 tol.  Hitting max_iter (per run) or a
 * stagnating delta ends the run with whatever was reached.
 *
 * Updates are full-field (double buffered), so results are deterministic
 * and bitwise independent of the thread count.
 */
std::pair<ScalarField, SolveReport> dpp_solve(const GridDomain& grid, const GameSpec& spec,
                                              double tol, long long max_iter,
                                              const SolveControls& controls = {});

}  // namespace inflap
