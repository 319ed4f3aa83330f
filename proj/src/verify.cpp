#include "inflap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "inflap/patching.hpp"

namespace inflap {

namespace {

std::string describe(double margin, const std::string& what) {
  std::ostringstream os;
  os << std::setprecision(6) << what << "; margin " << margin;
  return os.str();
}

double inner_solver_tol(double tol) { return std::max(1e-13, 1e-4 * tol); }

void require_field(const GridDomain& grid, const ScalarField& f, const char* what) {
  if (f.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument(std::string(what) + " must have one entry per grid node");
}

}  // namespace

double comparison_tol(const GridDomain& grid, double eps, double scale) {
  return scale * (eps + grid.spacing);
}

CheckReport check_ordering(const ScalarField& z, const ScalarField& u,
                           const ScalarField& h, double tol) {
  if (z.size() != u.size() || u.size() != h.size())
    throw std::invalid_argument("ordering fields must come from the same grid");

  CheckReport rep;
  rep.name = "ordering";
  double worst = std::numeric_limits<double>::infinity();
  int worst_node = -1;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double slack = std::min(u[i] - z[i], h[i] - u[i]);
    if (slack < worst) {
      worst = slack;
      worst_node = static_cast<int>(i);
    }
  }
  rep.margin = tol + worst;
  rep.passed = rep.margin >= 0.0;
  rep.locus = worst_node;
  rep.details = describe(rep.margin, "smallest slack in z <= u <= h is " +
                                         std::to_string(worst));
  return rep;
}

CheckReport check_monotone_in_D(const GridDomain& grid, const GameSpec& spec_small,
                                const GameSpec& spec_large, double tol, int threads) {
  const Mask& small = spec_small.constraint_nodes(grid);
  const Mask& large = spec_large.constraint_nodes(grid);
  for (Eigen::Index i = 0; i < small.size(); ++i)
    if (small[i] && !large[i])
      throw std::invalid_argument(
          "spec_small's constraint nodes must be contained in spec_large's");

  SolveControls controls;
  controls.threads = threads;
  const double stol = inner_solver_tol(tol);
  const ScalarField u_small = dpp_solve(grid, spec_small, stol, 1000000, controls).first;
  const ScalarField u_large = dpp_solve(grid, spec_large, stol, 1000000, controls).first;

  CheckReport rep;
  rep.name = "monotone_in_D";
  double worst = std::numeric_limits<double>::infinity();
  int worst_node = -1;
  for (int i : grid.interior_nodes) {
    const double slack = u_small[i] - u_large[i];
    if (slack < worst) {
      worst = slack;
      worst_node = i;
    }
  }
  rep.margin = tol + worst;
  rep.passed = rep.margin >= 0.0;
  rep.locus = worst_node;
  rep.details = describe(rep.margin, "largest increase when enlarging the sell region is " +
                                         std::to_string(-worst));
  return rep;
}

CheckReport check_patch_equals_jensen(const GridDomain& grid, const ScalarField& payoff,
                                      double eps, double tol, int threads) {
  require_field(grid, payoff, "payoff");
  if (!(eps >= grid.spacing))
    throw std::invalid_argument("patch slope eps must be at least the grid spacing");

  const double stol = inner_solver_tol(tol);
  const auto [h, hrep] = solve_infinity_harmonic(grid, payoff, stol, 1000000, threads);
  const ScalarField lip = pointwise_lipschitz(grid, h, 0.0, threads);
  const RegionDecomposition dec = decompose(grid, lip, eps);
  const ScalarField patched = patch(grid, h, dec, eps);

  GameSpec jensen;
  jensen.variant = GameVariant::OmegaGame;
  jensen.eps = grid.spacing;
  jensen.sell_price = eps * grid.spacing;
  jensen.payoff = payoff;
  SolveControls controls;
  controls.threads = threads;
  const auto [z, zrep] = dpp_solve(grid, jensen, stol, 1000000, controls);

  CheckReport rep;
  rep.name = "patch_equals_jensen";
  double worst = 0.0;
  int worst_node = -1;
  for (int i : grid.interior_nodes) {
    const double diff = std::abs(patched[i] - z[i]);
    if (diff > worst) {
      worst = diff;
      worst_node = i;
    }
  }
  rep.locus = worst_node;
  if (!hrep.converged || !zrep.converged) {
    rep.margin = -1.0;
    rep.passed = false;
    rep.details = std::string("inconclusive: the ") +
                  (!hrep.converged ? "harmonic" : "sell-everywhere") +
                  " solve did not converge; largest difference seen is " +
                  std::to_string(worst);
    return rep;
  }
  rep.margin = tol - worst;
  rep.passed = rep.margin >= 0.0;
  rep.details =
      describe(rep.margin, "largest patched-vs-game difference is " + std::to_string(worst));
  return rep;
}

CheckReport check_lip_bound(const GridDomain& grid, const ScalarField& u_inf,
                            double lip_f, double tol) {
  require_field(grid, u_inf, "field");
  const double slope = sup_norm_gradient(grid, u_inf);
  const double bound = std::max(1.0, lip_f);

  CheckReport rep;
  rep.name = "lip_bound";
  rep.margin = tol + bound - slope;
  rep.passed = rep.margin >= 0.0;
  rep.locus = -1;
  rep.details = describe(rep.margin, "largest cell slope is " + std::to_string(slope) +
                                         " against bound " + std::to_string(bound));
  return rep;
}

CheckReport check_support_dependence(const GridDomain& grid, const VariationalSpec& spec1,
                                     const VariationalSpec& spec2, double tol, int threads) {
  const auto n = static_cast<Eigen::Index>(grid.node_count());
  auto weight = [n](const VariationalSpec& s, Eigen::Index i) {
    if (s.g_weights.size() == 0) return 0.0;
    if (s.g_weights.size() != n)
      throw std::invalid_argument("g_weights must be empty or one entry per grid node");
    return s.g_weights[i];
  };
  auto pinned = [n](const VariationalSpec& s, Eigen::Index i) {
    if (s.dirichlet.size() == 0) return 0.0;
    if (s.dirichlet.size() != n)
      throw std::invalid_argument("dirichlet must be empty or one entry per grid node");
    return s.dirichlet[i];
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((weight(spec1, i) != 0.0) != (weight(spec2, i) != 0.0))
      throw std::invalid_argument("the two source weight fields must share one support");
    if (pinned(spec1, i) != pinned(spec2, i))
      throw std::invalid_argument("the two specs must share one set of Dirichlet values");
  }

  const auto [u1, rep1] = p_continuation(grid, spec1, threads);
  const auto [u2, rep2] = p_continuation(grid, spec2, threads);

  CheckReport rep;
  rep.name = "support_dependence";
  double worst = 0.0;
  int worst_node = -1;
  for (int i : grid.interior_nodes) {
    const double diff = std::abs(u1[i] - u2[i]);
    if (diff > worst) {
      worst = diff;
      worst_node = i;
    }
  }
  rep.margin = tol - worst;
  rep.passed = rep.margin >= 0.0;
  rep.locus = worst_node;
  std::string what =
      "largest p-limit difference between the two weightings is " + std::to_string(worst);
  if (!rep1.converged || !rep2.converged) what += " (a continuation stage did not converge)";
  rep.details = describe(rep.margin, what);
  return rep;
}

CheckReport check_minimal_vs_variational(const GridDomain& grid,
                                         const ExampleProblem& problem, double tol,
                                         int threads) {
  if (problem.g_weights.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument("example does not carry source weights for the energy route");

  GameSpec game;
  game.variant = GameVariant::DGame;
  game.eps = problem.eps;
  game.payoff = problem.payoff;
  SolveControls controls;
  controls.threads = threads;
  const double stol = inner_solver_tol(tol);
  const ScalarField u_game = dpp_solve(grid, game, stol, 1000000, controls).first;

  VariationalSpec vspec;
  vspec.g_weights = problem.g_weights;
  vspec.dirichlet = problem.payoff;
  const ScalarField u_var = p_continuation(grid, vspec, threads).first;

  CheckReport rep;
  rep.name = "minimal_vs_variational";
  double margin = tol;
  int locus = -1;
  std::ostringstream what;
  what << std::setprecision(6);

  const int center = grid.nearest_node({0.0, 0.0});
  what << "game origin " << u_game[center] << ", energy origin " << u_var[center];

  if (problem.exact) {
    double worst = 0.0;
    int node = -1;
    for (int i : grid.interior_nodes) {
      const Eigen::Vector2d x = grid.coords.row(i).transpose();
      const double d = std::abs(u_game[i] - problem.exact(x));
      if (d > worst) {
        worst = d;
        node = i;
      }
    }
    if (tol - worst < margin) {
      margin = tol - worst;
      locus = node;
    }
    what << "; game vs limit worst " << worst;
  }

  const auto& venue = problem.variational_exact ? problem.variational_exact : problem.exact;
  if (venue) {
    double worst = 0.0;
    int node = -1;
    for (int i : grid.interior_nodes) {
      const Eigen::Vector2d x = grid.coords.row(i).transpose();
      const double d = std::abs(u_var[i] - venue(x));
      if (d > worst) {
        worst = d;
        node = i;
      }
    }
    if (tol - worst < margin) {
      margin = tol - worst;
      locus = node;
    }
    what << "; energy vs its limit worst " << worst;
  }

  if (problem.origin_window) {
    const auto [lo, hi] = *problem.origin_window;
    const double v = u_game[center];
    const double m = std::min(v - lo, hi - v);
    if (m < margin) {
      margin = m;
      locus = center;
    }
    what << "; origin window [" << lo << ", " << hi << "]";
  }

  rep.margin = margin;
  rep.passed = rep.margin >= 0.0;
  rep.locus = locus;
  rep.details = describe(rep.margin, what.str());
  return rep;
}

}  // namespace inflap
