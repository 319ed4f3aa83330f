#include "doctest.h"

#include "inflap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace inflap;

namespace {

GridDomain five_node_segment() {
  return build_grid(ShapeSpec::segment(-1.0, 1.0), 0.5, 0.5);
}

int node_near(const GridDomain& g, double x, double y = 0.0) {
  const int i = g.nearest_node({x, y});
  REQUIRE(i >= 0);
  REQUIRE(g.node_distance(i, i) == 0.0);
  REQUIRE((g.coords.row(i).transpose() - Eigen::Vector2d(x, y)).norm() < 1e-12);
  return i;
}

}  // namespace

TEST_CASE("segment grid stores interior plus one strip node per side") {
  const GridDomain g = five_node_segment();
  CHECK(g.node_count() == 5);
  CHECK(g.dim == 1);
  CHECK(g.spacing == 0.5);

  const std::vector<double> xs = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const int i = node_near(g, xs[k]);
    CHECK(i == static_cast<int>(k));  // row-major order is ascending x
    const bool inside = std::abs(xs[k]) < 1.0;
    CHECK(g.interior_mask[i] == inside);
    CHECK(g.strip_mask[i] == !inside);
    CHECK(g.coords(i, 1) == 0.0);
  }
  CHECK(g.interior_nodes == std::vector<int>{1, 2, 3});
  CHECK(g.d_mask.count() == 0);
}

TEST_CASE("build_grid rejects degenerate inputs") {
  CHECK_THROWS_AS(build_grid(ShapeSpec::segment(-1.0, 1.0), 0.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(ShapeSpec::segment(-1.0, 1.0), -0.25, 0.5),
                  std::invalid_argument);
  // Strip thinner than one lattice step cannot hold any strip node.
  CHECK_THROWS_AS(build_grid(ShapeSpec::segment(-1.0, 1.0), 0.5, 0.25),
                  std::invalid_argument);
  // A segment shorter than one lattice step holds no interior node: the
  // lattice is anchored at the left endpoint, which is not in the open set.
  CHECK_THROWS_AS(build_grid(ShapeSpec::segment(0.0, 0.1), 0.5, 0.5),
                  std::invalid_argument);
}

TEST_CASE("constraint shape marks closed membership among interior nodes") {
  const GridDomain g = build_grid(ShapeSpec::segment(-1.0, 1.0), 0.5, 0.5,
                                  ShapeSpec::segment(-0.5, 0.5));
  // Closed membership keeps the end points +-0.5.
  CHECK(g.d_mask[node_near(g, -0.5)]);
  CHECK(g.d_mask[node_near(g, 0.0)]);
  CHECK(g.d_mask[node_near(g, 0.5)]);
  // Strip nodes never carry the constraint flag.
  CHECK_FALSE(g.d_mask[node_near(g, -1.0)]);
  CHECK_FALSE(g.d_mask[node_near(g, 1.0)]);
}

TEST_CASE("ball collects every stored node within the radius") {
  const GridDomain g = five_node_segment();

  SUBCASE("center node sees itself and both neighbours") {
    const auto b = ball(g, node_near(g, 0.0), 0.5);
    CHECK(b == std::vector<int>{1, 2, 3});
  }
  SUBCASE("node next to the strip reaches across it") {
    const auto b = ball(g, node_near(g, 0.5), 0.5);
    CHECK(b == std::vector<int>{2, 3, 4});
    CHECK(g.strip_mask[b.back()]);
  }
  SUBCASE("radius below the spacing would stall any iteration") {
    CHECK_THROWS_AS(ball(g, node_near(g, 0.0), 0.25), std::invalid_argument);
  }
  SUBCASE("strip nodes have no move ball") {
    CHECK_THROWS_AS(ball(g, node_near(g, 1.0), 0.5), std::invalid_argument);
  }
}

TEST_CASE("unit ball on a unit 2d lattice is the axis cross") {
  const GridDomain g = build_grid(ShapeSpec::rectangle({-3.0, -3.0}, {3.0, 3.0}),
                                  1.0, 1.0);
  const int c = node_near(g, 0.0, 0.0);
  const auto b = ball(g, c, 1.0);
  CHECK(b.size() == 5);  // self plus four axis neighbours; diagonals sit at sqrt 2
  CHECK(std::find(b.begin(), b.end(), c) != b.end());
  for (int j : b) CHECK(g.node_distance(c, j) <= 1.0 + 1e-12);
}

TEST_CASE("ball membership is symmetric between interior nodes") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.25, 0.4);
  const double r = 0.4;
  for (int i : g.interior_nodes) {
    const auto bi = ball(g, i, r);
    CHECK(std::is_sorted(bi.begin(), bi.end()));
    CHECK(std::find(bi.begin(), bi.end(), i) != bi.end());
    for (int j : bi) {
      if (!g.interior_mask[j]) continue;
      const auto bj = ball(g, j, r);
      CHECK(std::find(bj.begin(), bj.end(), i) != bj.end());
    }
  }
}

TEST_CASE("dilate_mask matches a brute-force distance scan") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.25, 0.4);
  Mask seed = Mask::Constant(g.node_count(), false);
  seed[node_near(g, 0.25, 0.0)] = true;
  seed[node_near(g, -0.5, 0.25)] = true;

  for (double r : {0.0, 0.25, 0.3, 0.55}) {
    const Mask got = dilate_mask(g, seed, r);
    for (Eigen::Index i = 0; i < g.node_count(); ++i) {
      bool want = false;
      for (Eigen::Index j = 0; j < g.node_count(); ++j)
        if (seed[j] && g.node_distance(i, j) <= r + 1e-12) want = true;
      want = want && g.interior_mask[i];
      CHECK(got[i] == want);
    }
  }

  // Growing the radius never removes nodes.
  const Mask small = dilate_mask(g, seed, 0.25);
  const Mask large = dilate_mask(g, seed, 0.5);
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    CHECK((!small[i] || large[i]));
}

TEST_CASE("interior_closure_mask drops isolated nodes and is idempotent") {
  const GridDomain g = build_grid(ShapeSpec::rectangle({-3.0, -3.0}, {3.0, 3.0}),
                                  1.0, 1.0);

  SUBCASE("a single node has empty interior") {
    Mask m = Mask::Constant(g.node_count(), false);
    m[node_near(g, 0.0, 0.0)] = true;
    CHECK(interior_closure_mask(g, m).count() == 0);
  }

  SUBCASE("a 3x3 block closes to the axis cross of its centre") {
    Mask m = Mask::Constant(g.node_count(), false);
    for (double x : {-1.0, 0.0, 1.0})
      for (double y : {-1.0, 0.0, 1.0}) m[node_near(g, x, y)] = true;

    const Mask c = interior_closure_mask(g, m);
    CHECK(c.count() == 5);
    CHECK(c[node_near(g, 0.0, 0.0)]);
    CHECK(c[node_near(g, 1.0, 0.0)]);
    CHECK(c[node_near(g, 0.0, 1.0)]);
    CHECK_FALSE(c[node_near(g, 1.0, 1.0)]);

    const Mask cc = interior_closure_mask(g, c);
    CHECK((cc == c).all());
  }
}

TEST_CASE("geodesic_distance walks the segment at unit speed") {
  const GridDomain g = five_node_segment();
  bool all_reached = false;
  const ScalarField d = geodesic_distance(
      g, g.interior_mask, {{node_near(g, -1.0), 0.0}}, 1, &all_reached);
  CHECK(all_reached);
  CHECK(d[node_near(g, -1.0)] == 0.0);
  CHECK(d[node_near(g, -0.5)] == doctest::Approx(0.5));
  CHECK(d[node_near(g, 0.0)] == doctest::Approx(1.0));
  CHECK(d[node_near(g, 0.5)] == doctest::Approx(1.5));
}

TEST_CASE("geodesic_distance flags unreachable region nodes") {
  const GridDomain g = five_node_segment();
  Mask region = Mask::Constant(g.node_count(), false);
  region[node_near(g, -0.5)] = true;
  region[node_near(g, 0.5)] = true;  // not adjacent: gap at the centre node
  bool all_reached = true;
  const ScalarField d =
      geodesic_distance(g, region, {{node_near(g, -0.5), 0.0}}, 1, &all_reached);
  CHECK_FALSE(all_reached);
  CHECK(std::isinf(d[node_near(g, 0.5)]));
}

TEST_CASE("geodesic_distance approximates euclidean distance on a disk") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 2.0), 0.1, 0.15);
  Mask region = g.interior_mask || g.strip_mask;
  const int c = node_near(g, 0.0, 0.0);
  const ScalarField d = geodesic_distance(g, region, {{c, 0.0}}, 2);
  // The radius-2 stencil overshoots straight-line distance by under 3 percent.
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double euclid = g.node_distance(c, static_cast<int>(i));
    CHECK(d[i] >= euclid - 1e-9);
    CHECK(d[i] <= 1.03 * euclid + 2.0 * g.spacing);
  }
}

TEST_CASE("node lookups invert the stored coordinates") {
  const GridDomain g = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.25, 0.4);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    CHECK(g.node_at(g.lattice(i, 0), g.lattice(i, 1)) == static_cast<int>(i));
    CHECK(g.nearest_node(g.coords.row(i).transpose()) == static_cast<int>(i));
  }
  CHECK(g.node_at(1000, 1000) == -1);
}

TEST_CASE("stencil_directions enumerates primitive offsets") {
  CHECK(stencil_directions(1, 1).size() == 2);
  CHECK(stencil_directions(1, 3).size() == 2);  // 1d multiples are never primitive
  CHECK(stencil_directions(2, 1).size() == 8);
  CHECK(stencil_directions(2, 2).size() == 16);
  CHECK_THROWS_AS(stencil_directions(2, 0), std::invalid_argument);
  for (const auto& [off, len] : stencil_directions(2, 2))
    CHECK(len == doctest::Approx(std::hypot(static_cast<double>(off[0]),
                                            static_cast<double>(off[1]))));
}
