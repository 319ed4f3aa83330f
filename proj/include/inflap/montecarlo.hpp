#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "inflap/dpp.hpp"
#include "inflap/field.hpp"
#include "inflap/grid.hpp"

namespace inflap {

/// One player's policy. `mover` picks the next node from the ball of
/// reachable nodes. `sell_rule` is consulted for the minimizing player at
/// nodes where selling is allowed; returning true trades a free move for the
/// opponent against one unit of the sell price.
struct Strategy {
  std::function<int(int state, std::span<const int> ball)> mover;
  std::function<bool(int state, std::span<const int> ball)> sell_rule;
};

/// Policy that always moves to the largest guide value, ties broken toward
/// the lowest node index. The guide field is copied into the policy.
Strategy greedy_max_strategy(const ScalarField& guide);

/// Policy that moves to the smallest guide value and sells whenever the
/// sell branch of the one-step value is strictly below the coin-flip branch.
Strategy greedy_min_strategy(const ScalarField& guide, double price);

/// Policy that moves to the ball node closest to a fixed target point, ties
/// broken toward the lowest node index. Never sells. The policy borrows the
/// grid, which must outlive it.
Strategy pull_toward_strategy(const GridDomain& grid, const Eigen::Vector2d& target);

/// Record of one simulated game.
struct GameTrace {
  std::vector<int> states;  ///< visited nodes, starting at x0
  long long sells = 0;      ///< rounds the minimizing player sold
  double payoff = 0.0;      ///< boundary value minus price * sells; NaN if capped
  long long steps = 0;      ///< rounds played
  bool capped = false;      ///< true if the step cap ended the game
};

/// Simulates one game from x0 with the given policies. Coin flips and the
/// trace are fully determined by the seed. A game still running after
/// step_cap rounds is cut off with capped = true and NaN payoff.
GameTrace play(const GridDomain& grid, const GameSpec& spec, const Strategy& s1,
               const Strategy& s2, int x0, std::uint64_t seed,
               long long step_cap = 100000, const BallTable* table = nullptr);

/// Sample statistics from repeated games.
struct ValueEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;  ///< normal-theory 95% confidence half width
  long long samples = 0;
  long long capped_traces = 0;
  bool reliable = true;  ///< false when more than 1% of traces hit the cap
};

/// Runs n games with both players playing greedily against the guide field
/// and returns the mean compensated payoff. Capped traces substitute the
/// guide value at the cutoff state. Results are bitwise reproducible for a
/// fixed seed regardless of thread count. Requires n >= 100.
ValueEstimate estimate_value(const GridDomain& grid, const GameSpec& spec,
                             const ScalarField& guide, int x0, long long n,
                             std::uint64_t seed, long long step_cap = 100000,
                             int threads = 0);

}  // namespace inflap
