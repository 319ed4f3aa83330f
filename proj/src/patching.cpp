#include "inflap/patching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace inflap {

namespace {

void require_node_field(const GridDomain& grid, const ScalarField& u, const char* what) {
  if (u.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument(std::string(what) + " must have one entry per grid node");
}

}  // namespace

std::pair<ScalarField, SolveReport> solve_infinity_harmonic(const GridDomain& grid,
                                                            const ScalarField& payoff,
                                                            double tol,
                                                            long long max_iter,
                                                            int threads) {
  GameSpec spec;
  spec.variant = GameVariant::TugOfWar;
  spec.eps = grid.strip_width;
  spec.payoff = payoff;
  SolveControls controls;
  controls.threads = threads;
  return dpp_solve(grid, spec, tol, max_iter, controls);
}

ScalarField pointwise_lipschitz(const GridDomain& grid, const ScalarField& u,
                                double radius, int threads) {
  require_node_field(grid, u, "field");
  const double s = grid.spacing;
  const double r = radius > 0.0 ? radius : 2.0 * s;
  if (r < s * (1.0 - 1e-12))
    throw std::invalid_argument("lipschitz radius must reach at least one neighbor");

  const long reach_x = static_cast<long>(std::floor(r / s + 1e-9));
  const long reach_y = grid.dim == 2 ? reach_x : 0;
  const double r2 = (r / s) * (r / s) * (1.0 + 1e-12);

  ScalarField out = ScalarField::Zero(u.size());
  const Eigen::Index n = static_cast<Eigen::Index>(grid.interior_nodes.size());
  parallel_for(n, threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index k = b; k < e; ++k) {
      const int i = grid.interior_nodes[static_cast<std::size_t>(k)];
      const long ix = grid.lattice(i, 0);
      const long iy = grid.lattice(i, 1);
      double best = 0.0;
      for (long dy = -reach_y; dy <= reach_y; ++dy) {
        for (long dx = -reach_x; dx <= reach_x; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const double d2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
          if (d2 > r2) continue;
          const int j = grid.node_at(ix + dx, iy + dy);
          if (j < 0) continue;
          const double slope = std::abs(u[i] - u[j]) / (s * std::sqrt(d2));
          if (slope > best) best = slope;
        }
      }
      out[i] = best;
    }
  });
  return out;
}

RegionDecomposition decompose(const GridDomain& grid, const ScalarField& lip_field,
                              double eps) {
  require_node_field(grid, lip_field, "slope field");
  if (!(eps > 0.0)) throw std::invalid_argument("threshold eps must be positive");

  const int n = grid.node_count();
  RegionDecomposition dec;
  dec.lip_field = lip_field;
  dec.v_eps_mask = Mask::Constant(n, false);
  dec.a_mask = Mask::Constant(n, false);
  dec.b_mask = Mask::Constant(n, false);
  for (int i = 0; i < n; ++i) {
    if (!grid.interior_mask[i]) continue;
    if (lip_field[i] < eps)
      dec.v_eps_mask[i] = true;
    else
      dec.a_mask[i] = true;
    if (std::abs(lip_field[i] - eps) <= 1e-9) ++dec.borderline_nodes;
  }

  const auto dirs = stencil_directions(grid.dim, 1);

  // Flood fill in ascending node order, so pockets come out ordered by their
  // smallest member and each pocket's node list is sorted after the final sort.
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (!dec.v_eps_mask[start] || seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> comp;
    stack.assign(1, start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      for (const auto& d : dirs) {
        const int j = grid.node_at(grid.lattice(i, 0) + d.first[0],
                                   grid.lattice(i, 1) + d.first[1]);
        if (j < 0 || seen[static_cast<std::size_t>(j)] || !dec.v_eps_mask[j]) continue;
        seen[static_cast<std::size_t>(j)] = 1;
        stack.push_back(j);
      }
    }
    std::sort(comp.begin(), comp.end());
    dec.components.push_back(std::move(comp));
  }

  for (int i = 0; i < n; ++i) {
    if (!dec.v_eps_mask[i]) continue;
    for (const auto& d : dirs) {
      const int j = grid.node_at(grid.lattice(i, 0) + d.first[0],
                                 grid.lattice(i, 1) + d.first[1]);
      if (j >= 0 && !dec.v_eps_mask[j]) dec.b_mask[j] = true;
    }
  }
  return dec;
}

ScalarField patch(const GridDomain& grid, const ScalarField& h,
                  const RegionDecomposition& dec, double eps) {
  require_node_field(grid, h, "field");
  if (!(eps > 0.0)) throw std::invalid_argument("patch slope eps must be positive");
  const int n = grid.node_count();
  if (dec.v_eps_mask.size() != static_cast<Eigen::Index>(n))
    throw std::invalid_argument("decomposition does not match the grid");

  const auto dirs = stencil_directions(grid.dim, 1);
  ScalarField out = h;

  for (const auto& comp : dec.components) {
    Mask region = Mask::Constant(n, false);
    for (int i : comp) {
      if (i < 0 || i >= n) throw std::invalid_argument("component node out of range");
      region[i] = true;
    }

    // Border nodes carry their h values into the pocket; the patched value is
    // the best border value minus eps times the geodesic distance, computed as
    // a shortest path on -h/eps and rescaled.
    std::vector<std::pair<int, double>> sources;
    for (int i : comp) {
      for (const auto& d : dirs) {
        const int j = grid.node_at(grid.lattice(i, 0) + d.first[0],
                                   grid.lattice(i, 1) + d.first[1]);
        if (j >= 0 && !region[j]) sources.emplace_back(j, -h[j] / eps);
      }
    }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    if (sources.empty())
      throw std::runtime_error("patch pocket has no border nodes to extend from");

    bool all_reached = false;
    const ScalarField g = geodesic_distance(grid, region, sources, 1, &all_reached);
    if (!all_reached)
      throw std::runtime_error("patch pocket is not reachable from its border");
    for (int i : comp) out[i] = -eps * g[i];
  }
  return out;
}

}  // namespace inflap
