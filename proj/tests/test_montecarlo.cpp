#include "doctest.h"

#include "inflap/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace inflap;

namespace {

GridDomain five_nodes() { return build_grid(ShapeSpec::segment(-1.0, 1.0), 0.5, 0.5); }

ScalarField make_field(std::vector<double> v) {
  return Eigen::Map<ScalarField>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GameSpec omega_spec(const GridDomain& g) {
  GameSpec spec;
  spec.variant = GameVariant::OmegaGame;
  spec.eps = 0.5;
  spec.payoff = ScalarField::Zero(g.node_count());
  return spec;
}

}  // namespace

TEST_CASE("every trace balances payoff, price, and sells exactly") {
  const GridDomain g = five_nodes();
  GameSpec spec = omega_spec(g);
  // Dyadic data keeps the balance identity exact in floating point.
  spec.payoff = make_field({0.25, 0.0, 0.0, 0.0, -0.75});
  const ScalarField guide = make_field({0.25, -0.25, -0.75, -0.5, -0.75});

  const Strategy s1 = greedy_max_strategy(guide);
  const Strategy s2 = greedy_min_strategy(guide, spec.price());
  for (std::uint64_t seed = 1; seed <= 32; ++seed) {
    const GameTrace tr = play(g, spec, s1, s2, 2, seed);
    REQUIRE_FALSE(tr.capped);
    CHECK(g.strip_mask[tr.states.back()]);
    CHECK(tr.states.front() == 2);
    CHECK(static_cast<long long>(tr.states.size()) == tr.steps + 1);
    CHECK(tr.payoff + spec.price() * static_cast<double>(tr.sells) ==
          spec.payoff[tr.states.back()]);
  }
}

TEST_CASE("identical seeds replay identical traces") {
  const GridDomain g = five_nodes();
  const GameSpec spec = omega_spec(g);
  const ScalarField guide = make_field({0.0, -0.5, -1.0, -0.5, 0.0});
  const Strategy s1 = greedy_max_strategy(guide);
  const Strategy s2 = greedy_min_strategy(guide, spec.price());

  const GameTrace a = play(g, spec, s1, s2, 2, 12345);
  const GameTrace b = play(g, spec, s1, s2, 2, 12345);
  CHECK(a.states == b.states);
  CHECK(a.sells == b.sells);
  CHECK(a.payoff == b.payoff);
}

TEST_CASE("pull strategies walk straight to their target") {
  const GridDomain g = five_nodes();
  GameSpec spec = omega_spec(g);
  spec.variant = GameVariant::TugOfWar;
  const Strategy pull = pull_toward_strategy(g, {2.0, 0.0});

  // Both players drag toward the right strip from the adjacent node, so the
  // game ends after a single round whatever the coin does.
  const GameTrace tr = play(g, spec, pull, pull, 3, 99);
  CHECK(tr.steps == 1);
  CHECK(tr.states == std::vector<int>{3, 4});
  CHECK(tr.sells == 0);
  CHECK(tr.payoff == spec.payoff[4]);

  // Equidistant candidates resolve to the lowest node index.
  const Strategy mid = pull_toward_strategy(g, {0.25, 0.0});
  const std::vector<int> ball_nodes = ball(g, 2, 0.5);
  CHECK(mid.mover(2, {ball_nodes.data(), ball_nodes.size()}) == 2);
}

TEST_CASE("opposed pulls can loop forever and hit the step cap") {
  const GridDomain g = five_nodes();
  GameSpec spec = omega_spec(g);
  spec.variant = GameVariant::TugOfWar;
  const Strategy pull = pull_toward_strategy(g, {0.0, 0.0});

  const GameTrace tr = play(g, spec, pull, pull, 2, 7, 3);
  CHECK(tr.capped);
  CHECK(tr.steps == 3);
  CHECK(std::isnan(tr.payoff));
  CHECK(tr.states == std::vector<int>{2, 2, 2, 2});
}

TEST_CASE("a zero-payoff tug of war estimates an exact zero") {
  const GridDomain g = five_nodes();
  GameSpec spec = omega_spec(g);
  spec.variant = GameVariant::TugOfWar;
  const ScalarField guide = ScalarField::Zero(g.node_count());

  const ValueEstimate est = estimate_value(g, spec, guide, 2, 500, 42);
  CHECK(est.mean == 0.0);
  CHECK(est.half_width_95 == 0.0);
  CHECK(est.samples == 500);
  CHECK(est.reliable);
}

TEST_CASE("guided sampling reproduces the sell-everywhere value at the centre") {
  const GridDomain g = five_nodes();
  const GameSpec spec = omega_spec(g);
  const ScalarField guide = make_field({0.0, -0.5, -1.0, -0.5, 0.0});

  const ValueEstimate est = estimate_value(g, spec, guide, 2, 10000, 1);
  CHECK(est.reliable);
  CHECK(est.capped_traces == 0);
  CHECK(est.half_width_95 <= 0.05);
  CHECK(std::abs(est.mean - -1.0) <= 3.0 * est.half_width_95);
}

TEST_CASE("estimates are bitwise stable across seeds reruns and threads") {
  const GridDomain g = five_nodes();
  const GameSpec spec = omega_spec(g);
  const ScalarField guide = make_field({0.0, -0.5, -1.0, -0.5, 0.0});

  const ValueEstimate a = estimate_value(g, spec, guide, 2, 6000, 9, 100000, 1);
  const ValueEstimate b = estimate_value(g, spec, guide, 2, 6000, 9, 100000, 2);
  const ValueEstimate c = estimate_value(g, spec, guide, 2, 6000, 9, 100000, 0);
  CHECK(a.mean == b.mean);
  CHECK(a.half_width_95 == b.half_width_95);
  CHECK(a.mean == c.mean);
  CHECK(a.capped_traces == b.capped_traces);

  const ValueEstimate d = estimate_value(g, spec, guide, 2, 6000, 10, 100000, 1);
  CHECK(d.mean != a.mean);  // a new seed draws new coins
}

TEST_CASE("capped traces fall back to the guide and clear the reliable flag") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.25, 0.25);
  GameSpec spec;
  spec.variant = GameVariant::TugOfWar;
  spec.eps = 0.25;
  spec.payoff = ScalarField::Zero(g.node_count());
  const ScalarField guide = ScalarField::Constant(g.node_count(), -0.25);

  // One step from the centre can never reach the strip.
  const ValueEstimate est =
      estimate_value(g, spec, guide, g.nearest_node({0.0, 0.0}), 100, 5, 1);
  CHECK(est.capped_traces == 100);
  CHECK_FALSE(est.reliable);
  CHECK(est.mean == -0.25);
}

TEST_CASE("simulation inputs are validated") {
  const GridDomain g = five_nodes();
  const GameSpec spec = omega_spec(g);
  const ScalarField guide = ScalarField::Zero(g.node_count());
  const Strategy s = greedy_max_strategy(guide);

  CHECK_THROWS_AS(play(g, spec, s, s, 17, 1), std::invalid_argument);
  CHECK_THROWS_AS(play(g, spec, s, s, 2, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_value(g, spec, guide, 2, 99, 1), std::invalid_argument);
  Strategy hollow;
  CHECK_THROWS_AS(play(g, spec, hollow, hollow, 2, 1), std::invalid_argument);
}
