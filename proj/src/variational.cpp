#include "inflap/variational.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace inflap {

namespace {

struct CellList {
  // Corner node indices per cell: anchor, anchor+e1, anchor+e2 (-1 in 1d).
  std::vector<std::array<int, 3>> corners;
  // Cell index anchored at each node, -1 if none.
  std::vector<int> anchored_at;
};

CellList collect_cells(const GridDomain& grid) {
  const int n = grid.node_count();
  CellList list;
  list.anchored_at.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const long ix = grid.lattice(i, 0);
    const long iy = grid.lattice(i, 1);
    const int right = grid.node_at(ix + 1, iy);
    if (right < 0) continue;
    int up = -1, diag = -1;
    if (grid.dim == 2) {
      up = grid.node_at(ix, iy + 1);
      diag = grid.node_at(ix + 1, iy + 1);
      if (up < 0 || diag < 0) continue;
      if (!grid.interior_mask[i] && !grid.interior_mask[right] &&
          !grid.interior_mask[up] && !grid.interior_mask[diag])
        continue;
    } else {
      if (!grid.interior_mask[i] && !grid.interior_mask[right]) continue;
    }
    list.anchored_at[static_cast<std::size_t>(i)] = static_cast<int>(list.corners.size());
    list.corners.push_back({i, right, up});
  }
  return list;
}

void validate_inputs(const GridDomain& grid, double p, const VariationalSpec& spec,
                     const ScalarField& u) {
  if (!(p >= 2.0)) throw std::invalid_argument("exponent p below 2 is not supported");
  const auto n = static_cast<Eigen::Index>(grid.node_count());
  if (u.size() != n) throw std::invalid_argument("field must have one entry per grid node");
  if (spec.g_weights.size() != 0 && spec.g_weights.size() != n)
    throw std::invalid_argument("g_weights must be empty or one entry per grid node");
  if (spec.dirichlet.size() != 0 && spec.dirichlet.size() != n)
    throw std::invalid_argument("dirichlet must be empty or one entry per grid node");
}

// |Du|^(p-2) evaluated from q = |Du|^2, with the q -> 0 limit handled so the
// gradient stays finite for every p >= 2.
double slope_factor(double q, double p) {
  if (p == 2.0) return 1.0;
  if (q <= 0.0) return 0.0;
  return std::exp(0.5 * (p - 2.0) * std::log(q));
}

}  // namespace

double functional_value(const GridDomain& grid, double p, const VariationalSpec& spec,
                        const ScalarField& u, int threads) {
  validate_inputs(grid, p, spec, u);
  const CellList cells = collect_cells(grid);
  const double s = grid.spacing;
  const double vol = grid.dim == 2 ? s * s : s;
  const Eigen::Index ncells = static_cast<Eigen::Index>(cells.corners.size());

  std::vector<double> cell_terms(static_cast<std::size_t>(ncells), 0.0);
  parallel_for(ncells, threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index c = b; c < e; ++c) {
      const auto& cn = cells.corners[static_cast<std::size_t>(c)];
      const double gx = (u[cn[1]] - u[cn[0]]) / s;
      const double gy = cn[2] >= 0 ? (u[cn[2]] - u[cn[0]]) / s : 0.0;
      const double q = gx * gx + gy * gy;
      cell_terms[static_cast<std::size_t>(c)] =
          q > 0.0 ? std::exp(0.5 * p * std::log(q)) / p * vol : 0.0;
    }
  });

  std::vector<double> source_terms;
  source_terms.reserve(grid.interior_nodes.size());
  if (spec.g_weights.size() != 0) {
    for (int i : grid.interior_nodes) source_terms.push_back(spec.g_weights[i] * u[i] * vol);
  }

  return pairwise_sum<double>(cell_terms) + pairwise_sum<double>(source_terms);
}

ScalarField functional_gradient(const GridDomain& grid, double p,
                                const VariationalSpec& spec, const ScalarField& u,
                                int threads) {
  validate_inputs(grid, p, spec, u);
  const CellList cells = collect_cells(grid);
  const double s = grid.spacing;
  const double vol = grid.dim == 2 ? s * s : s;
  const Eigen::Index ncells = static_cast<Eigen::Index>(cells.corners.size());

  // Per-cell flux contributions, gathered per node afterwards so the result
  // does not depend on thread scheduling.
  ScalarField fx = ScalarField::Zero(ncells);
  ScalarField fy = ScalarField::Zero(ncells);
  parallel_for(ncells, threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index c = b; c < e; ++c) {
      const auto& cn = cells.corners[static_cast<std::size_t>(c)];
      const double gx = (u[cn[1]] - u[cn[0]]) / s;
      const double gy = cn[2] >= 0 ? (u[cn[2]] - u[cn[0]]) / s : 0.0;
      const double factor = slope_factor(gx * gx + gy * gy, p);
      fx[c] = factor * gx / s * vol;
      fy[c] = factor * gy / s * vol;
    }
  });

  ScalarField grad = ScalarField::Zero(u.size());
  const Eigen::Index nint = static_cast<Eigen::Index>(grid.interior_nodes.size());
  parallel_for(nint, threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index k = b; k < e; ++k) {
      const int i = grid.interior_nodes[static_cast<std::size_t>(k)];
      const long ix = grid.lattice(i, 0);
      const long iy = grid.lattice(i, 1);
      double gsum = spec.g_weights.size() != 0 ? spec.g_weights[i] * vol : 0.0;
      const int ca = cells.anchored_at[static_cast<std::size_t>(i)];
      if (ca >= 0) gsum -= fx[ca] + fy[ca];
      const int left = grid.node_at(ix - 1, iy);
      if (left >= 0) {
        const int cl = cells.anchored_at[static_cast<std::size_t>(left)];
        if (cl >= 0) gsum += fx[cl];
      }
      if (grid.dim == 2) {
        const int down = grid.node_at(ix, iy - 1);
        if (down >= 0) {
          const int cd = cells.anchored_at[static_cast<std::size_t>(down)];
          if (cd >= 0) gsum += fy[cd];
        }
      }
      grad[i] = gsum;
    }
  });
  return grad;
}

double sup_norm_gradient(const GridDomain& grid, const ScalarField& u) {
  if (u.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument("field must have one entry per grid node");
  const CellList cells = collect_cells(grid);
  const double s = grid.spacing;
  double best = 0.0;
  for (const auto& cn : cells.corners) {
    const double gx = (u[cn[1]] - u[cn[0]]) / s;
    const double gy = cn[2] >= 0 ? (u[cn[2]] - u[cn[0]]) / s : 0.0;
    best = std::max(best, std::hypot(gx, gy));
  }
  return best;
}

std::pair<ScalarField, SolveReport> minimize_p(const GridDomain& grid, double p,
                                               const VariationalSpec& spec,
                                               const ScalarField& init, double tol,
                                               long long max_steps, int threads) {
  validate_inputs(grid, p, spec, init);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  ScalarField u = init;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!grid.interior_mask[i]) u[i] = spec.dirichlet.size() != 0 ? spec.dirichlet[i] : 0.0;

  auto sup_norm = [&](const ScalarField& grad) {
    double best = 0.0;
    for (int i : grid.interior_nodes) best = std::max(best, std::abs(grad[i]));
    return best;
  };

  double fval = functional_value(grid, p, spec, u, threads);
  ScalarField grad = functional_gradient(grid, p, spec, u, threads);
  double gnorm = sup_norm(grad);

  SolveReport report{};
  double step = 1.0;
  bool have_prev = false;
  ScalarField prev_u, prev_grad;
  long long k = 0;
  bool stalled = false;

  while (gnorm > tol && k < max_steps && !stalled) {
    if (have_prev) {
      const ScalarField du = u - prev_u;
      const ScalarField dg = grad - prev_grad;
      const double dudg = du.matrix().dot(dg.matrix());
      const double dudu = du.matrix().dot(du.matrix());
      step = dudg > 0.0 ? dudu / dudg : 1.0;
      step = std::min(std::max(step, 1e-16), 1e16);
    }

    const double gtg = grad.matrix().dot(grad.matrix());
    double t = step;
    ScalarField trial;
    double ftrial = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      trial = u - t * grad;
      ftrial = functional_value(grid, p, spec, trial, threads);
      if (ftrial <= fval - 1e-4 * t * gtg) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }

    prev_u = std::move(u);
    prev_grad = std::move(grad);
    u = std::move(trial);
    fval = ftrial;
    grad = functional_gradient(grid, p, spec, u, threads);
    gnorm = sup_norm(grad);
    have_prev = true;
    ++k;
  }

  report.iterations = k;
  report.residual = gnorm;
  report.converged = gnorm <= tol;
  report.lower_upper_gap = 0.0;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), report};
}

std::pair<ScalarField, SolveReport> p_continuation(const GridDomain& grid,
                                                   const VariationalSpec& spec,
                                                   int threads) {
  if (spec.p_schedule.empty())
    throw std::invalid_argument("p_schedule must not be empty");
  double prev = 2.0;
  for (double p : spec.p_schedule) {
    if (!(p > 2.0)) throw std::invalid_argument("every schedule exponent must exceed 2");
    if (!(p > prev)) throw std::invalid_argument("p_schedule must be strictly increasing");
    prev = p;
  }
  if (!(spec.inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be positive");

  ScalarField u = ScalarField::Zero(grid.node_count());
  SolveReport total{};
  total.converged = true;
  for (double p : spec.p_schedule) {
    auto [next, rep] = minimize_p(grid, p, spec, u, spec.inner_tol, 200000, threads);
    u = std::move(next);
    total.iterations += rep.iterations;
    total.residual = rep.residual;
    total.converged = total.converged && rep.converged;
    total.lower_upper_gap = rep.lower_upper_gap;
    total.wall_time_seconds += rep.wall_time_seconds;
    // A failed stage leaves later exponents without a usable warm start, so
    // stop and hand back the failing stage's state.
    if (!rep.converged) break;
  }
  return {std::move(u), total};
}

}  // namespace inflap
