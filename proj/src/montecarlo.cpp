#include "inflap/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace inflap {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t trace_seed(std::uint64_t seed, long long index) {
  std::uint64_t s = seed + kGolden * static_cast<std::uint64_t>(index);
  return splitmix64_next(s);
}

}  // namespace

Strategy greedy_max_strategy(const ScalarField& guide) {
  Strategy s;
  s.mover = [guide](int, std::span<const int> ball) {
    int best = ball[0];
    double bv = guide[best];
    for (int j : ball)
      if (guide[j] > bv) {
        bv = guide[j];
        best = j;
      }
    return best;
  };
  s.sell_rule = [](int, std::span<const int>) { return false; };
  return s;
}

Strategy greedy_min_strategy(const ScalarField& guide, double price) {
  Strategy s;
  s.mover = [guide](int, std::span<const int> ball) {
    int best = ball[0];
    double bv = guide[best];
    for (int j : ball)
      if (guide[j] < bv) {
        bv = guide[j];
        best = j;
      }
    return best;
  };
  s.sell_rule = [guide, price](int, std::span<const int> ball) {
    double mn = guide[ball[0]], mx = guide[ball[0]];
    for (int j : ball) {
      mn = std::min(mn, guide[j]);
      mx = std::max(mx, guide[j]);
    }
    return mx - price < 0.5 * mx + 0.5 * mn;
  };
  return s;
}

Strategy pull_toward_strategy(const GridDomain& grid, const Eigen::Vector2d& target) {
  Strategy s;
  s.mover = [&grid, target](int, std::span<const int> ball) {
    int best = ball[0];
    double bd = (grid.coords.row(best).transpose() - target).norm();
    for (int j : ball) {
      const double d = (grid.coords.row(j).transpose() - target).norm();
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    return best;
  };
  s.sell_rule = [](int, std::span<const int>) { return false; };
  return s;
}

GameTrace play(const GridDomain& grid, const GameSpec& spec, const Strategy& s1,
               const Strategy& s2, int x0, std::uint64_t seed, long long step_cap,
               const BallTable* table) {
  if (x0 < 0 || x0 >= grid.node_count())
    throw std::invalid_argument("start node out of range");
  if (step_cap <= 0) throw std::invalid_argument("step_cap must be positive");
  if (!s1.mover || !s2.mover) throw std::invalid_argument("both policies need a mover");
  if (spec.payoff.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument("payoff must have one entry per grid node");

  std::optional<BallTable> own;
  const BallTable* balls = table;
  if (!balls) {
    own.emplace(grid, spec.eps);
    balls = &*own;
  }

  const double price = spec.price();
  const bool sells_everywhere = spec.variant == GameVariant::OmegaGame;
  const bool sells_on_mask = spec.variant == GameVariant::DGame;
  const Mask& d = spec.constraint_nodes(grid);

  GameTrace trace;
  trace.states.push_back(x0);
  int state = x0;
  std::uint64_t rng = seed;

  while (grid.interior_mask[state]) {
    if (trace.steps >= step_cap) {
      trace.capped = true;
      trace.payoff = std::numeric_limits<double>::quiet_NaN();
      return trace;
    }
    const auto ball = balls->neighbors(state);

    bool sold = false;
    if ((sells_everywhere || (sells_on_mask && d[state])) && s2.sell_rule &&
        s2.sell_rule(state, ball)) {
      state = s1.mover(state, ball);
      ++trace.sells;
      sold = true;
    }
    if (!sold) {
      const bool heads = (splitmix64_next(rng) >> 63) != 0;
      state = heads ? s1.mover(state, ball) : s2.mover(state, ball);
    }
    ++trace.steps;
    trace.states.push_back(state);
  }

  trace.payoff = spec.payoff[state] - price * static_cast<double>(trace.sells);
  return trace;
}

ValueEstimate estimate_value(const GridDomain& grid, const GameSpec& spec,
                             const ScalarField& guide, int x0, long long n,
                             std::uint64_t seed, long long step_cap, int threads) {
  if (n < 100) throw std::invalid_argument("need at least 100 traces");
  if (guide.size() != static_cast<Eigen::Index>(grid.node_count()))
    throw std::invalid_argument("guide must have one entry per grid node");

  const BallTable table(grid, spec.eps);
  const Strategy s1 = greedy_max_strategy(guide);
  const Strategy s2 = greedy_min_strategy(guide, spec.price());
  const double price = spec.price();

  std::vector<double> payoffs(static_cast<std::size_t>(n), 0.0);
  std::vector<char> capped(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<Eigen::Index>(n), threads, [&](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index t = b; t < e; ++t) {
      const GameTrace tr =
          play(grid, spec, s1, s2, x0, trace_seed(seed, t), step_cap, &table);
      if (tr.capped) {
        capped[static_cast<std::size_t>(t)] = 1;
        payoffs[static_cast<std::size_t>(t)] =
            guide[tr.states.back()] - price * static_cast<double>(tr.sells);
      } else {
        payoffs[static_cast<std::size_t>(t)] = tr.payoff;
      }
    }
  });

  ValueEstimate est;
  est.samples = n;
  for (char c : capped) est.capped_traces += c;
  est.reliable = est.capped_traces * 100 <= n;

  est.mean = pairwise_sum<double>(payoffs) / static_cast<double>(n);
  std::vector<double> sq(payoffs.size());
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    const double d = payoffs[i] - est.mean;
    sq[i] = d * d;
  }
  const double var =
      n > 1 ? pairwise_sum<double>(sq) / static_cast<double>(n - 1) : 0.0;
  est.half_width_95 = 1.959963984540054 * std::sqrt(var / static_cast<double>(n));
  return est;
}

}  // namespace inflap
