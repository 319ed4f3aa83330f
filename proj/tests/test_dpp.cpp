#include "doctest.h"

#include "inflap/dpp.hpp"
#include "inflap/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace inflap;

namespace {

// Segment (-1, 1) at spacing 1/2 with a one-step strip: nodes at
// -1, -1/2, 0, 1/2, 1, the outer two being strip nodes.
GridDomain five_nodes() { return build_grid(ShapeSpec::segment(-1.0, 1.0), 0.5, 0.5); }

ScalarField make_field(std::vector<double> v) {
  return Eigen::Map<ScalarField>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GameSpec zero_payoff_spec(const GridDomain& g, GameVariant variant, double eps) {
  GameSpec spec;
  spec.variant = variant;
  spec.eps = eps;
  spec.payoff = ScalarField::Zero(g.node_count());
  return spec;
}

}  // namespace

TEST_CASE("sell-everywhere update from zero caps each interior node at -eps") {
  const GridDomain g = five_nodes();
  const GameSpec spec = zero_payoff_spec(g, GameVariant::OmegaGame, 0.5);
  const ScalarField u = ScalarField::Zero(g.node_count());
  const ScalarField t = dpp_apply(g, spec, u);
  CHECK(t[0] == 0.0);
  CHECK(t[1] == -0.5);
  CHECK(t[2] == -0.5);
  CHECK(t[3] == -0.5);
  CHECK(t[4] == 0.0);
}

TEST_CASE("the discrete cone is the sell-everywhere fixed point on five nodes") {
  const GridDomain g = five_nodes();
  const GameSpec spec = zero_payoff_spec(g, GameVariant::OmegaGame, 0.5);
  const ScalarField star = make_field({0.0, -0.5, -1.0, -0.5, 0.0});

  CHECK(residual(g, spec, star) <= 1e-12);

  auto [u, rep] = dpp_solve(g, spec, 1e-12, 100000);
  CHECK(rep.converged);
  CHECK(rep.residual <= 1e-12);
  CHECK(rep.lower_upper_gap <= 1e-9);
  CHECK((u - star).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("selling only at the centre node reproduces the same fixed point") {
  const GridDomain g = build_grid(ShapeSpec::segment(-1.0, 1.0), 0.5, 0.5,
                                  ShapeSpec::point({0.0, 0.0}));
  REQUIRE(g.d_mask.count() == 1);
  const GameSpec spec = zero_payoff_spec(g, GameVariant::DGame, 0.5);
  const ScalarField star = make_field({0.0, -0.5, -1.0, -0.5, 0.0});

  CHECK(residual(g, spec, star) <= 1e-12);

  auto [u, rep] = dpp_solve(g, spec, 1e-12, 100000);
  CHECK(rep.converged);
  CHECK(rep.lower_upper_gap <= 1e-9);
  CHECK((u - star).abs().maxCoeff() <= 1e-9);

  // The same constraint set handed in as an override gives the same solve.
  const GridDomain plain = five_nodes();
  GameSpec over = zero_payoff_spec(plain, GameVariant::DGame, 0.5);
  over.d_override = Mask::Constant(plain.node_count(), false);
  over.d_override[2] = true;
  auto [u2, rep2] = dpp_solve(plain, over, 1e-12, 100000);
  CHECK((u2 == u).all());
  CHECK(rep2.converged);
}

TEST_CASE("plain tug of war with zero payoff settles at zero") {
  const GridDomain g = five_nodes();
  const GameSpec spec = zero_payoff_spec(g, GameVariant::TugOfWar, 0.5);
  const ScalarField zero = ScalarField::Zero(g.node_count());

  CHECK(residual(g, spec, zero) <= 1e-12);

  auto [u, rep] = dpp_solve(g, spec, 1e-12, 100000);
  CHECK(rep.converged);
  CHECK(rep.residual <= 1e-12);
  CHECK(rep.lower_upper_gap <= 1e-9);
  CHECK(u.abs().maxCoeff() <= 1e-9);
}

TEST_CASE("an empty constraint set degrades the constrained game to tug of war") {
  const GridDomain g = five_nodes();
  REQUIRE(g.d_mask.count() == 0);
  GameSpec tow = zero_payoff_spec(g, GameVariant::TugOfWar, 0.5);
  GameSpec dgame = zero_payoff_spec(g, GameVariant::DGame, 0.5);
  tow.payoff = dgame.payoff = make_field({0.3, 0.0, 0.0, 0.0, -0.8});

  const ScalarField u = make_field({0.3, 0.1, -0.2, -0.4, -0.8});
  CHECK((dpp_apply(g, tow, u) == dpp_apply(g, dgame, u)).all());

  auto [ut, rt] = dpp_solve(g, tow, 1e-11, 100000);
  auto [ud, rd] = dpp_solve(g, dgame, 1e-11, 100000);
  CHECK(rt.converged);
  CHECK(rd.converged);
  CHECK((ut == ud).all());
}

TEST_CASE("the update is monotone and the variants are ordered") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.25, 0.4);
  ScalarField u(g.node_count());
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    u[i] = std::sin(3.0 * g.coords(i, 0)) * std::cos(2.0 * g.coords(i, 1));
  const ScalarField v = u + 0.25 * (u.abs() + 0.1);  // v >= u with varying gap

  GameSpec spec = zero_payoff_spec(g, GameVariant::OmegaGame, 0.4);
  spec.payoff = u;

  SUBCASE("u <= v implies T u <= T v entrywise") {
    const ScalarField tu = dpp_apply(g, spec, u);
    const ScalarField tv = dpp_apply(g, spec, v);
    CHECK((tu <= tv).all());
  }

  SUBCASE("more selling opportunities can only lower the update") {
    GameSpec tow = spec, dgame = spec;
    tow.variant = GameVariant::TugOfWar;
    dgame.variant = GameVariant::DGame;
    Mask half = Mask::Constant(g.node_count(), false);
    for (int i : g.interior_nodes) half[i] = g.coords(i, 0) > 0.0;
    dgame.d_override = half;

    const ScalarField t_omega = dpp_apply(g, spec, u);
    const ScalarField t_d = dpp_apply(g, dgame, u);
    const ScalarField t_tow = dpp_apply(g, tow, u);
    CHECK((t_omega <= t_d).all());
    CHECK((t_d <= t_tow).all());
  }

  SUBCASE("the update contracts no pair of fields apart") {
    const ScalarField tu = dpp_apply(g, spec, u);
    const ScalarField tv = dpp_apply(g, spec, v);
    CHECK((tu - tv).abs().maxCoeff() <= (u - v).abs().maxCoeff() + 1e-15);
  }
}

TEST_CASE("a cone is a plain tug-of-war fixed point away from its apex") {
  const GridDomain g = build_grid(ShapeSpec::segment(-1.0, 1.0), 0.25, 0.5);
  GameSpec spec = zero_payoff_spec(g, GameVariant::TugOfWar, 0.5);
  const ScalarField u = cone(g, {0.0, 0.0}, 1.0);
  spec.payoff = u;

  const ScalarField t = dpp_apply(g, spec, u);
  for (int i : g.interior_nodes) {
    if (std::abs(g.coords(i, 0)) < spec.eps - 1e-12) continue;
    CHECK(t[i] == u[i]);
  }
}

TEST_CASE("cone_envelope reproduces hand-computed envelopes") {
  const GridDomain g = five_nodes();

  SUBCASE("zero payoff at slope one gives minus the strip distance") {
    const ScalarField env =
        cone_envelope(g, ScalarField::Zero(g.node_count()), 1.0, EnvelopeSide::Lower);
    CHECK(env[0] == 0.0);
    CHECK(env[1] == -0.5);
    CHECK(env[2] == -1.0);
    CHECK(env[3] == -0.5);
    CHECK(env[4] == 0.0);
  }

  SUBCASE("slope zero flattens the lower envelope to the payoff maximum") {
    const ScalarField env = cone_envelope(
        g, ScalarField::Constant(g.node_count(), 0.7), 0.0, EnvelopeSide::Lower);
    CHECK((env == 0.7).all());
  }

  SUBCASE("two-sided boundary data meets in the middle") {
    const ScalarField f = make_field({0.0, 0.0, 0.0, 0.0, 1.0});
    const ScalarField lower = cone_envelope(g, f, 1.0, EnvelopeSide::Lower);
    CHECK(lower[2] == 0.0);   // max(0 - 1, 1 - 1)
    CHECK(lower[3] == 0.5);   // max(0 - 1.5, 1 - 0.5)
    CHECK(lower[0] == 0.0);   // envelope matches payoff on the strip
    CHECK(lower[4] == 1.0);

    const ScalarField upper = cone_envelope(g, f, 1.0, EnvelopeSide::Upper);
    CHECK(upper[2] == 1.0);   // min(0 + 1, 1 + 1)
    CHECK(upper[1] == 0.5);
    CHECK((lower <= upper).all());
  }
}

TEST_CASE("payoff_lipschitz measures strip-to-strip difference quotients") {
  const GridDomain g = five_nodes();
  CHECK(payoff_lipschitz(g, make_field({0.0, 9.0, 9.0, 9.0, 1.0})) ==
        doctest::Approx(0.5));  // interior entries are ignored
  CHECK(payoff_lipschitz(g, ScalarField::Zero(g.node_count())) == 0.0);
}

TEST_CASE("default_tol scales with the strip payoff magnitude") {
  const GridDomain g = five_nodes();
  CHECK(default_tol(g, make_field({-3.0, 99.0, 0.0, 0.0, 1.0})) ==
        doctest::Approx(4e-9));
  CHECK(default_tol(g, ScalarField::Zero(g.node_count())) == doctest::Approx(1e-9));
}

TEST_CASE("ball table agrees with per-node ball queries") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.25, 0.4);
  const BallTable table(g, 0.4);
  CHECK(table.radius() == 0.4);
  for (int i : g.interior_nodes) {
    CHECK(table.covers(i));
    const auto want = ball(g, i, 0.4);
    const auto got = table.neighbors(i);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(got[k] == want[k]);
  }
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    if (g.strip_mask[i]) CHECK_FALSE(table.covers(static_cast<int>(i)));
}

TEST_CASE("updates and solves are bitwise independent of the thread count") {
  // Large enough that the parallel path actually splits the index range.
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.025, 0.1);
  REQUIRE(g.node_count() >= 4096);

  GameSpec spec;
  spec.variant = GameVariant::OmegaGame;
  spec.eps = 0.1;
  spec.payoff = cone(g, {0.3, -0.2}, 0.7, 0.1);

  const ScalarField u = cone(g, {-0.4, 0.1}, 0.4);
  const ScalarField t1 = dpp_apply(g, spec, u, 1);
  const ScalarField t3 = dpp_apply(g, spec, u, 3);
  CHECK((t1 == t3).all());

  const ScalarField e1 = cone_envelope(g, spec.payoff, 1.0, EnvelopeSide::Lower, 1);
  const ScalarField e3 = cone_envelope(g, spec.payoff, 1.0, EnvelopeSide::Lower, 3);
  CHECK((e1 == e3).all());
}

TEST_CASE("interior nodes pinned by the controls stay put") {
  const GridDomain g = five_nodes();
  GameSpec spec = zero_payoff_spec(g, GameVariant::TugOfWar, 0.5);

  Mask frozen = Mask::Constant(g.node_count(), false);
  frozen[2] = true;
  ScalarField frozen_values = ScalarField::Zero(g.node_count());
  frozen_values[2] = -1.0;
  SolveControls controls;
  controls.frozen = &frozen;
  controls.frozen_values = &frozen_values;

  auto [u, rep] = dpp_solve(g, spec, 1e-12, 100000, controls);
  CHECK(rep.converged);
  CHECK(u[2] == -1.0);
  CHECK(u[1] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(u[3] == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("game spec validation rejects unusable inputs") {
  const GridDomain g = five_nodes();
  GameSpec spec = zero_payoff_spec(g, GameVariant::TugOfWar, 0.25);
  // Step below the spacing leaves every ball empty of moves.
  CHECK_THROWS_AS(dpp_solve(g, spec, 1e-9, 1000), std::invalid_argument);

  GameSpec short_payoff = zero_payoff_spec(g, GameVariant::TugOfWar, 0.5);
  short_payoff.payoff = ScalarField::Zero(2);
  CHECK_THROWS_AS(dpp_apply(g, short_payoff, ScalarField::Zero(g.node_count())),
                  std::invalid_argument);

  GameSpec ok = zero_payoff_spec(g, GameVariant::OmegaGame, 0.5);
  CHECK(ok.price() == 0.5);
  ok.sell_price = 0.125;
  CHECK(ok.price() == 0.125);
}
