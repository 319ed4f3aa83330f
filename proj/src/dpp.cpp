#include "inflap/dpp.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inflap {

namespace {

void validate_spec(const GridDomain& grid, const GameSpec& spec) {
  if (spec.payoff.size() != grid.node_count())
    throw std::invalid_argument("payoff field size does not match grid");
  if (spec.eps < grid.spacing * (1.0 - 1e-12))
    throw std::invalid_argument("game step eps must be at least the grid spacing");
  for (Eigen::Index i = 0; i < grid.node_count(); ++i)
    if (grid.strip_mask[i] && !std::isfinite(spec.payoff[i]))
      throw std::invalid_argument("payoff must be finite on every strip node");
  const Mask& d = spec.constraint_nodes(grid);
  if (d.size() != grid.node_count())
    throw std::invalid_argument("constraint mask size does not match grid");
}

// Per-node sell deduction: price on nodes where selling is allowed, zero
// elsewhere.  Subtracting an exact 0.0 keeps the no-sell branch bitwise
// equal to the plain sup, which in turn keeps the variant ordering
// T_Omega <= T_D <= T_TugOfWar exact in floating point.
ScalarField price_per_node(const GridDomain& grid, const GameSpec& spec) {
  ScalarField price = ScalarField::Zero(grid.node_count());
  if (spec.variant == GameVariant::OmegaGame) {
    for (int i : grid.interior_nodes) price[i] = spec.price();
  } else if (spec.variant == GameVariant::DGame) {
    const Mask& d = spec.constraint_nodes(grid);
    for (int i : grid.interior_nodes)
      if (d[i]) price[i] = spec.price();
  }
  return price;
}

struct SweepContext {
  const GridDomain& grid;
  const BallTable& balls;
  bool with_min_branch;
  const ScalarField& price;
  std::vector<int> update_nodes;  // interior nodes that are actually iterated
};

SweepContext make_context(const GridDomain& grid, const BallTable& balls, const GameSpec& spec,
                          const ScalarField& price, const Mask* frozen) {
  SweepContext ctx{grid, balls, spec.variant != GameVariant::TugOfWar, price, {}};
  ctx.update_nodes.reserve(grid.interior_nodes.size());
  for (int i : grid.interior_nodes)
    if (!frozen || !(*frozen)[i]) ctx.update_nodes.push_back(i);
  return ctx;
}

// One Jacobi sweep: out[i] = (T in)(i) on the update nodes.  Returns the
// max-norm of the change.  Thread-count independent: each node's value is a
// pure function of `in`, and the delta reduction is an exact max.
double sweep(const SweepContext& ctx, const ScalarField& in, ScalarField& out, int threads) {
  const Eigen::Index n = static_cast<Eigen::Index>(ctx.update_nodes.size());
  // Exact max over disjoint chunks: commutative, so the combined value is
  // independent of thread scheduling.
  std::atomic<double> delta{0.0};

  parallel_for(n, threads, [&](Eigen::Index b, Eigen::Index e) {
    double local = 0.0;
    for (Eigen::Index k = b; k < e; ++k) {
      const int i = ctx.update_nodes[static_cast<std::size_t>(k)];
      auto nb = ctx.balls.neighbors(i);
      double mn = in[nb[0]], mx = in[nb[0]];
      for (std::size_t t = 1; t < nb.size(); ++t) {
        double v = in[nb[t]];
        if (v < mn) mn = v;
        if (v > mx) mx = v;
      }
      double value = 0.5 * mx + 0.5 * mn;
      if (ctx.with_min_branch) {
        double sell = mx - ctx.price[i];
        if (sell < value) value = sell;
      }
      double d = std::abs(value - in[i]);
      if (d > local) local = d;
      out[i] = value;
    }
    double cur = delta.load(std::memory_order_relaxed);
    while (local > cur &&
           !delta.compare_exchange_weak(cur, local, std::memory_order_relaxed)) {
    }
  });

  return delta.load(std::memory_order_relaxed);
}

struct RunResult {
  long long sweeps = 0;
  double last_delta = std::numeric_limits<double>::infinity();
};

// Iterate from `field` (modified in place) until the sweep delta drops to
// tol, the delta stagnates, or max_iter sweeps have run.
RunResult run_iteration(const SweepContext& ctx, ScalarField& field, double tol,
                        long long max_iter, const SolveControls& controls) {
  ScalarField work = field;
  RunResult res;
  double best = std::numeric_limits<double>::infinity();
  long long best_sweep = 0;
  ScalarField* in = &field;
  ScalarField* out = &work;
  for (long long k = 0; k < max_iter; ++k) {
    double delta = sweep(ctx, *in, *out, controls.threads);
    std::swap(in, out);
    res.sweeps = k + 1;
    res.last_delta = delta;
    if (delta <= tol) break;
    if (delta < best) {
      best = delta;
      best_sweep = k;
    } else if (k - best_sweep >= controls.stall_window) {
      break;
    }
  }
  if (in != &field) field = *in;
  return res;
}

}  // namespace

BallTable::BallTable(const GridDomain& grid, double radius) : radius_(radius) {
  rank_.assign(static_cast<std::size_t>(grid.node_count()), -1);
  starts_.reserve(grid.interior_nodes.size() + 1);
  starts_.push_back(0);
  int r = 0;
  for (int i : grid.interior_nodes) {
    rank_[static_cast<std::size_t>(i)] = r++;
    auto b = ball(grid, i, radius);
    flat_.insert(flat_.end(), b.begin(), b.end());
    starts_.push_back(static_cast<long>(flat_.size()));
  }
}

ScalarField cone_envelope(const GridDomain& grid, const ScalarField& payoff, double slope,
                          EnvelopeSide side, int threads) {
  if (payoff.size() != grid.node_count())
    throw std::invalid_argument("payoff field size does not match grid");
  if (slope < 0.0) throw std::invalid_argument("cone slope must be nonnegative");

  std::vector<int> strip_nodes;
  for (Eigen::Index i = 0; i < grid.node_count(); ++i)
    if (grid.strip_mask[i]) strip_nodes.push_back(static_cast<int>(i));
  if (strip_nodes.empty()) throw std::invalid_argument("grid has no strip nodes");

  const bool lower = side == EnvelopeSide::Lower;
  ScalarField env(grid.node_count());
  parallel_for(grid.node_count(), threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index i = b; i < e; ++i) {
      double best = lower ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
      for (int y : strip_nodes) {
        double d = grid.node_distance(static_cast<int>(i), y);
        double v = lower ? payoff[y] - slope * d : payoff[y] + slope * d;
        best = lower ? std::max(best, v) : std::min(best, v);
      }
      env[i] = best;
    }
  });
  return env;
}

double payoff_lipschitz(const GridDomain& grid, const ScalarField& payoff) {
  std::vector<int> strip_nodes;
  for (Eigen::Index i = 0; i < grid.node_count(); ++i)
    if (grid.strip_mask[i]) strip_nodes.push_back(static_cast<int>(i));
  double lip = 0.0;
  for (std::size_t a = 0; a < strip_nodes.size(); ++a)
    for (std::size_t b = a + 1; b < strip_nodes.size(); ++b) {
      double d = grid.node_distance(strip_nodes[a], strip_nodes[b]);
      if (d <= 0.0) continue;
      lip = std::max(lip, std::abs(payoff[strip_nodes[a]] - payoff[strip_nodes[b]]) / d);
    }
  return lip;
}

double default_tol(const GridDomain& grid, const ScalarField& payoff) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < grid.node_count(); ++i)
    if (grid.strip_mask[i]) m = std::max(m, std::abs(payoff[i]));
  return 1e-9 * (1.0 + m);
}

ScalarField dpp_apply(const GridDomain& grid, const GameSpec& spec, const ScalarField& u,
                      int threads) {
  validate_spec(grid, spec);
  if (u.size() != grid.node_count())
    throw std::invalid_argument("field size does not match grid");
  BallTable balls(grid, spec.eps);
  ScalarField price = price_per_node(grid, spec);
  SweepContext ctx = make_context(grid, balls, spec, price, nullptr);
  ScalarField out = u;
  sweep(ctx, u, out, threads);
  return out;
}

double residual(const GridDomain& grid, const GameSpec& spec, const ScalarField& u) {
  ScalarField tu = dpp_apply(grid, spec, u);
  double r = 0.0;
  for (int i : grid.interior_nodes) r = std::max(r, std::abs(tu[i] - u[i]));
  return r;
}

std::pair<ScalarField, SolveReport> dpp_solve(const GridDomain& grid, const GameSpec& spec,
                                              double tol, long long max_iter,
                                              const SolveControls& controls) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
  validate_spec(grid, spec);
  if (controls.frozen &&
      (!controls.frozen_values || controls.frozen->size() != grid.node_count() ||
       controls.frozen_values->size() != grid.node_count()))
    throw std::invalid_argument("frozen mask and values must both be given on the full grid");

  const auto t0 = std::chrono::steady_clock::now();

  BallTable balls(grid, spec.eps);
  ScalarField price = price_per_node(grid, spec);
  SweepContext ctx = make_context(grid, balls, spec, price, controls.frozen);

  const double slope = std::max(1.0, payoff_lipschitz(grid, spec.payoff));
  ScalarField lower = cone_envelope(grid, spec.payoff, slope, EnvelopeSide::Lower, controls.threads);
  ScalarField upper = cone_envelope(grid, spec.payoff, slope, EnvelopeSide::Upper, controls.threads);

  // Boundary data is exact: strip nodes carry the payoff, pinned interior
  // nodes carry their prescribed values, in both bracket fields.
  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    if (grid.strip_mask[i]) lower[i] = upper[i] = spec.payoff[i];
    if (controls.frozen && (*controls.frozen)[i] && grid.interior_mask[i])
      lower[i] = upper[i] = (*controls.frozen_values)[i];
  }

  // A sweep delta below the target does not bound the distance to the fixed
  // point, but the bracket width does. Tighten the per-sweep target until the
  // width certifies 10 * tol; each factor of ten costs only a geometric tail
  // of extra sweeps.
  SolveReport rep;
  auto bracket_gap = [&]() {
    double g = 0.0;
    for (int i : grid.interior_nodes) g = std::max(g, std::abs(upper[i] - lower[i]));
    return g;
  };
  double target = tol;
  RunResult lo = run_iteration(ctx, lower, target, max_iter, controls);
  RunResult hi = run_iteration(ctx, upper, target, max_iter - lo.sweeps, controls);
  rep.iterations = lo.sweeps + hi.sweeps;
  rep.lower_upper_gap = bracket_gap();
  while (rep.lower_upper_gap > 10.0 * tol && rep.iterations < max_iter &&
         target > 1e-17) {
    target *= 0.1;
    lo = run_iteration(ctx, lower, target, max_iter - rep.iterations, controls);
    rep.iterations += lo.sweeps;
    hi = run_iteration(ctx, upper, target, max_iter - rep.iterations, controls);
    rep.iterations += hi.sweeps;
    rep.lower_upper_gap = bracket_gap();
    if (lo.sweeps == 0 && hi.sweeps == 0) break;
  }

  // Exact residual of the returned (lower) field, one extra operator
  // application.
  {
    ScalarField check = lower;
    sweep(ctx, lower, check, controls.threads);
    double r = 0.0;
    for (int i : ctx.update_nodes) r = std::max(r, std::abs(check[i] - lower[i]));
    rep.residual = r;
  }
  rep.converged = rep.residual <= tol && rep.lower_upper_gap <= 10.0 * tol;
  rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(lower), rep};
}

}  // namespace inflap
