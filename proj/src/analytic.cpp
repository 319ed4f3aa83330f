#include "inflap/analytic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace inflap {

ScalarField cone(const GridDomain& grid, const Eigen::Vector2d& apex, double slope,
                 double offset) {
  const int n = grid.node_count();
  ScalarField out(n);
  for (int i = 0; i < n; ++i) {
    const double dx = grid.coords(i, 0) - apex[0];
    const double dy = grid.coords(i, 1) - apex[1];
    out[i] = offset - slope * std::hypot(dx, dy);
  }
  return out;
}

ScalarField dist_to_boundary(const GridDomain& grid, int threads) {
  const int n = grid.node_count();
  std::vector<int> strip_nodes;
  for (int i = 0; i < n; ++i)
    if (grid.strip_mask[i]) strip_nodes.push_back(i);
  if (strip_nodes.empty())
    throw std::runtime_error("grid has no strip nodes to measure distance to");

  ScalarField out(n);
  parallel_for(n, threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index i = b; i < e; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j : strip_nodes) {
        const double d = grid.node_distance(static_cast<int>(i), j);
        if (d < best) best = d;
      }
      out[i] = best;
    }
  });
  return out;
}

ScalarField v_alpha(const GridDomain& grid, const ScalarField& payoff, double alpha,
                    const Mask& d_closure, double tol, bool* alpha_in_range,
                    int threads) {
  if (payoff.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument("payoff must have one entry per grid node");
  if (d_closure.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument("d_closure mask must have one entry per grid node");
  if (alpha < 0.0) throw std::invalid_argument("cone slope alpha must be nonnegative");

  if (alpha_in_range) {
    const double lip = payoff_lipschitz(grid, payoff);
    *alpha_in_range = alpha >= lip - 1e-12 && alpha <= 1.0 + 1e-12;
  }

  const ScalarField envelope = cone_envelope(grid, payoff, alpha, EnvelopeSide::Lower, threads);

  GameSpec spec;
  spec.variant = GameVariant::TugOfWar;
  spec.eps = grid.strip_width;
  spec.payoff = payoff;

  Mask frozen = Mask::Constant(grid.node_count(), false);
  for (Eigen::Index i = 0; i < frozen.size(); ++i)
    frozen[i] = d_closure[i] && grid.interior_mask[i];

  SolveControls controls;
  controls.threads = threads;
  if (frozen.any()) {
    controls.frozen = &frozen;
    controls.frozen_values = &envelope;
  }
  return dpp_solve(grid, spec, tol, 1000000, controls).first;
}

namespace {

ScalarField zeros(const GridDomain& grid) {
  return ScalarField::Zero(grid.node_count());
}

ExampleProblem make_disk2() {
  ExampleProblem ex;
  ex.name = "disk2_annulusD";
  ex.grid = build_grid(ShapeSpec::disk({0.0, 0.0}, 2.0), 0.025, 0.1,
                       ShapeSpec::disk({0.0, 0.0}, 1.0));
  ex.eps = 0.1;
  ex.payoff = zeros(ex.grid);
  ex.g_weights = ex.grid.d_mask.cast<double>();
  ex.exact = [](const Eigen::Vector2d& x) { return x.norm() - 2.0; };
  return ex;
}

ExampleProblem make_ball1() {
  ExampleProblem ex;
  ex.name = "ball1_pointD";
  ex.grid = build_grid(ShapeSpec::disk({0.0, 0.0}, 1.0), 0.025, 0.1,
                       ShapeSpec::point({0.0, 0.0}));
  ex.eps = 0.1;
  ex.payoff = zeros(ex.grid);
  // The constraint set has no area, so the source weights vanish and the
  // p-energy route returns the plain harmonic extension instead.
  ex.g_weights = zeros(ex.grid);
  ex.exact = [](const Eigen::Vector2d& x) { return x.norm() - 1.0; };
  ex.variational_exact = [](const Eigen::Vector2d&) { return 0.0; };
  ex.origin_window = std::make_pair(-1.1, -0.8);
  return ex;
}

ExampleProblem make_segment() {
  ExampleProblem ex;
  ex.name = "segment_jensen";
  ex.grid = build_grid(ShapeSpec::segment(-1.0, 1.0), 0.025, 0.1, ShapeSpec::all());
  ex.eps = 0.1;
  ex.payoff = zeros(ex.grid);
  ex.g_weights = ScalarField::Ones(ex.grid.node_count());
  ex.exact = [](const Eigen::Vector2d& x) { return std::abs(x[0]) - 1.0; };
  return ex;
}

ExampleProblem make_square() {
  ExampleProblem ex;
  ex.name = "square_twopatch";
  const double s = 0.05;
  // Constraint set: the closed disk of radius 1/2 plus one extra lattice
  // point on the diagonal, outside the disk. The extra point is isolated, so
  // taking the interior closure of the set removes it, which moves the
  // solved value at that point.
  std::vector<std::array<long, 2>> cells;
  const long reach = static_cast<long>(std::lround(0.5 / s));
  for (long iy = 20 - reach; iy <= 20 + reach; ++iy) {
    for (long ix = 20 - reach; ix <= 20 + reach; ++ix) {
      const double x = -1.0 + s * static_cast<double>(ix);
      const double y = -1.0 + s * static_cast<double>(iy);
      if (x * x + y * y <= 0.25 * (1.0 + 1e-12)) cells.push_back({ix, iy});
    }
  }
  cells.push_back({32, 32});

  ex.grid = build_grid(ShapeSpec::rectangle({-1.0, -1.0}, {1.0, 1.0}), s, 0.1,
                       ShapeSpec::explicit_mask(std::move(cells), 2));
  ex.eps = 0.1;
  ex.payoff = zeros(ex.grid);
  ex.probe_node = ex.grid.node_at(32, 32);
  if (ex.probe_node < 0)
    throw std::logic_error("square example probe node missing from lattice");
  ex.nonuniqueness_gap = 0.02;
  return ex;
}

}  // namespace

std::vector<std::string> example_names() {
  return {"disk2_annulusD", "ball1_pointD", "segment_jensen", "square_twopatch"};
}

ExampleProblem example_library(const std::string& name) {
  if (name == "disk2_annulusD") return make_disk2();
  if (name == "ball1_pointD") return make_ball1();
  if (name == "segment_jensen") return make_segment();
  if (name == "square_twopatch") return make_square();
  throw std::invalid_argument("unknown example name: " + name);
}

}  // namespace inflap
