#include "inflap/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inflap/analytic.hpp"
#include "inflap/dpp.hpp"
#include "inflap/field.hpp"
#include "inflap/grid.hpp"
#include "inflap/montecarlo.hpp"
#include "inflap/patching.hpp"
#include "inflap/variational.hpp"
#include "inflap/verify.hpp"

namespace inflap {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::Vector2d vec2(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    throw std::invalid_argument(what + " must be an array of one or two numbers");
  Eigen::Vector2d v{0.0, 0.0};
  v[0] = j.at(0).get<double>();
  if (j.size() == 2) v[1] = j.at(1).get<double>();
  return v;
}

ShapeSpec parse_shape(const json& j, const std::string& what) {
  const std::string kind = j.value("shape", "");
  if (kind == "none") return ShapeSpec::none();
  if (kind == "all") return ShapeSpec::all();
  if (kind == "segment")
    return ShapeSpec::segment(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "rectangle")
    return ShapeSpec::rectangle(vec2(j.at("lo"), what + ".lo"), vec2(j.at("hi"), what + ".hi"));
  if (kind == "disk")
    return ShapeSpec::disk(vec2(j.at("center"), what + ".center"), j.at("radius").get<double>());
  if (kind == "point") return ShapeSpec::point(vec2(j.at("point"), what + ".point"));
  if (kind == "explicit") {
    std::vector<std::array<long, 2>> cells;
    for (const auto& c : j.at("cells")) {
      if (!c.is_array() || c.size() != 2)
        throw std::invalid_argument(what + ".cells entries must be [ix, iy] pairs");
      cells.push_back({c.at(0).get<long>(), c.at(1).get<long>()});
    }
    return ShapeSpec::explicit_mask(std::move(cells), j.value("dim", 2));
  }
  throw std::invalid_argument(what + ".shape must be one of none, all, segment, "
                              "rectangle, disk, point, explicit");
}

Eigen::Vector2d shape_center(const ShapeSpec& s) {
  switch (s.kind) {
    case ShapeSpec::Kind::Segment:
      return {0.5 * (s.seg_a + s.seg_b), 0.0};
    case ShapeSpec::Kind::Rectangle:
      return 0.5 * (s.lo + s.hi);
    case ShapeSpec::Kind::Disk:
      return s.center;
    default:
      return {0.0, 0.0};
  }
}

Eigen::Vector2d project_to_boundary(const ShapeSpec& s, const Eigen::Vector2d& x) {
  switch (s.kind) {
    case ShapeSpec::Kind::Segment:
      return {std::clamp(x[0], s.seg_a, s.seg_b), 0.0};
    case ShapeSpec::Kind::Rectangle:
      return {std::clamp(x[0], s.lo[0], s.hi[0]), std::clamp(x[1], s.lo[1], s.hi[1])};
    case ShapeSpec::Kind::Disk: {
      const Eigen::Vector2d d = x - s.center;
      const double len = d.norm();
      return len > 0.0 ? Eigen::Vector2d(s.center + d * (s.radius / len)) : x;
    }
    default:
      return x;
  }
}

double payoff_at(const json& p, const Eigen::Vector2d& x) {
  const std::string type = p.value("type", "zero");
  if (type == "zero") return 0.0;
  if (type == "cone") {
    const Eigen::Vector2d apex =
        p.contains("apex") ? vec2(p.at("apex"), "payoff.apex") : Eigen::Vector2d{0.0, 0.0};
    return p.value("offset", 0.0) - p.value("slope", 1.0) * (x - apex).norm();
  }
  if (type == "linear") {
    const auto& c = p.at("coeffs");
    if (!c.is_array() || c.size() != 3)
      throw std::invalid_argument("payoff.coeffs must be [a, b, c] for a*x + b*y + c");
    return c.at(0).get<double>() * x[0] + c.at(1).get<double>() * x[1] +
           c.at(2).get<double>();
  }
  throw std::invalid_argument("payoff.type must be one of zero, cone, linear");
}

GameVariant parse_variant(const std::string& name) {
  if (name == "tug_of_war") return GameVariant::TugOfWar;
  if (name == "d_game") return GameVariant::DGame;
  if (name == "omega_game") return GameVariant::OmegaGame;
  throw std::invalid_argument(
      "game.variant must be one of tug_of_war, d_game, omega_game");
}

// Problem assembled from the JSON description (or a named example).
struct Setup {
  GridDomain grid;
  ShapeSpec domain_shape;
  double eps = 0.0;
  ScalarField payoff;
  ScalarField g_weights;  // empty unless the setup provides source weights
  std::optional<ExampleProblem> example;
};

Setup make_setup(const json& cfg) {
  Setup setup;
  if (cfg.contains("example")) {
    ExampleProblem ex = example_library(cfg.at("example").get<std::string>());
    setup.grid = ex.grid;
    setup.eps = cfg.value("game", json::object()).value("eps", ex.eps);
    setup.payoff = ex.payoff;
    setup.g_weights = ex.g_weights;
    setup.example = std::move(ex);
    return setup;
  }

  if (!cfg.contains("domain"))
    throw std::invalid_argument("config needs a domain section or an example name");
  const json& dom = cfg.at("domain");
  setup.domain_shape = parse_shape(dom, "domain");
  const double spacing = dom.at("spacing").get<double>();
  setup.eps = cfg.value("game", json::object()).value("eps", 0.1);
  const double strip_width = dom.value("strip_width", setup.eps);

  ShapeSpec constraint = ShapeSpec::none();
  if (cfg.contains("constraint")) constraint = parse_shape(cfg.at("constraint"), "constraint");

  setup.grid = build_grid(setup.domain_shape, spacing, strip_width, constraint);

  const json pj = cfg.value("payoff", json::object());
  const std::string strip_fill = cfg.value("strip_fill", "node");
  if (strip_fill != "node" && strip_fill != "projected")
    throw std::invalid_argument("strip_fill must be node or projected");

  const int n = setup.grid.node_count();
  setup.payoff = ScalarField::Zero(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d x{setup.grid.coords(i, 0), setup.grid.coords(i, 1)};
    if (strip_fill == "projected" && setup.grid.strip_mask[i])
      x = project_to_boundary(setup.domain_shape, x);
    setup.payoff[i] = payoff_at(pj, x);
  }
  return setup;
}

GameSpec make_game_spec(const Setup& setup, const json& cfg, GameVariant variant) {
  GameSpec spec;
  spec.variant = variant;
  spec.eps = setup.eps;
  spec.payoff = setup.payoff;
  const json gj = cfg.value("game", json::object());
  spec.sell_price = gj.value("sell_price", -1.0);
  return spec;
}

struct SolverOptions {
  double tol = 0.0;  // 0 picks default_tol(grid, payoff)
  long long max_iter = 1000000;
  long long stall_window = 5000;
};

SolverOptions solver_options(const json& cfg) {
  const json sj = cfg.value("solver", json::object());
  SolverOptions opt;
  opt.tol = sj.value("tol", 0.0);
  opt.max_iter = sj.value("max_iter", static_cast<long long>(1000000));
  opt.stall_window = sj.value("stall_window", static_cast<long long>(5000));
  return opt;
}

void write_csv(const fs::path& path, const GridDomain& grid,
               const std::vector<std::pair<std::string, const ScalarField*>>& cols) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << "index,x,y,interior,strip,d";
  for (const auto& [name, field] : cols) f << ',' << name;
  f << '\n';
  for (int i = 0; i < grid.node_count(); ++i) {
    f << i << ',' << fmt17(grid.coords(i, 0)) << ',' << fmt17(grid.coords(i, 1)) << ','
      << (grid.interior_mask[i] ? 1 : 0) << ',' << (grid.strip_mask[i] ? 1 : 0) << ','
      << (grid.d_mask[i] ? 1 : 0);
    for (const auto& [name, field] : cols) f << ',' << fmt17((*field)[i]);
    f << '\n';
  }
  if (!f) throw std::runtime_error("failed while writing " + path.string());
}

void write_summary(const fs::path& path, const json& summary) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << summary.dump(2) << '\n';
}

json report_json(const SolveReport& rep) {
  return json{{"iterations", rep.iterations},
              {"residual", rep.residual},
              {"converged", rep.converged},
              {"lower_upper_gap", rep.lower_upper_gap},
              {"wall_time_seconds", rep.wall_time_seconds}};
}

json grid_json(const GridDomain& grid) {
  return json{{"nodes", grid.node_count()},
              {"interior_nodes", static_cast<long long>(grid.interior_nodes.size())},
              {"spacing", grid.spacing},
              {"strip_width", grid.strip_width},
              {"dim", grid.dim}};
}

json check_json(const std::string& example, const CheckReport& rep) {
  return json{{"example", example}, {"name", rep.name},     {"passed", rep.passed},
              {"margin", rep.margin}, {"locus", rep.locus}, {"details", rep.details}};
}

std::pair<double, double> field_range(const GridDomain& grid, const ScalarField& u) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i : grid.interior_nodes) {
    lo = std::min(lo, u[i]);
    hi = std::max(hi, u[i]);
  }
  return {lo, hi};
}

int cmd_solve(const RunConfig& rc, const json& cfg, const fs::path& out,
              GameVariant fallback_variant, bool variant_from_config) {
  Setup setup = make_setup(cfg);
  GameVariant variant = fallback_variant;
  if (variant_from_config) {
    const json gj = cfg.value("game", json::object());
    if (gj.contains("variant")) variant = parse_variant(gj.at("variant").get<std::string>());
  }
  GameSpec spec = make_game_spec(setup, cfg, variant);

  const SolverOptions opt = solver_options(cfg);
  const double tol = opt.tol > 0.0 ? opt.tol : default_tol(setup.grid, spec.payoff);
  SolveControls controls;
  controls.threads = rc.threads;
  controls.stall_window = opt.stall_window;
  const auto [u, rep] = dpp_solve(setup.grid, spec, tol, opt.max_iter, controls);

  write_csv(out / "solution.csv", setup.grid, {{"value", &u}});
  const auto [vmin, vmax] = field_range(setup.grid, u);
  json summary{{"command", rc.command},
               {"grid", grid_json(setup.grid)},
               {"eps", spec.eps},
               {"sell_price", spec.price()},
               {"tol", tol},
               {"report", report_json(rep)},
               {"value_min", vmin},
               {"value_max", vmax},
               {"threads", rc.threads},
               {"outputs", json::array({"solution.csv"})}};
  write_summary(out / "summary.json", summary);
  return rep.converged ? 0 : 1;
}

int cmd_patch(const RunConfig& rc, const json& cfg, const fs::path& out) {
  Setup setup = make_setup(cfg);
  const json pj = cfg.value("patch", json::object());
  const double eps = pj.value("eps", 1.0);
  const double lip_radius = pj.value("lip_radius", 0.0);

  const SolverOptions opt = solver_options(cfg);
  const double tol = opt.tol > 0.0 ? opt.tol : default_tol(setup.grid, setup.payoff);
  const auto [h, rep] =
      solve_infinity_harmonic(setup.grid, setup.payoff, tol, opt.max_iter, rc.threads);
  const ScalarField lip = pointwise_lipschitz(setup.grid, h, lip_radius, rc.threads);
  const RegionDecomposition dec = decompose(setup.grid, lip, eps);
  const ScalarField patched = patch(setup.grid, h, dec, eps);

  write_csv(out / "solution.csv", setup.grid,
            {{"harmonic", &h}, {"lipschitz", &lip}, {"patched", &patched}});
  long long pocket_nodes = 0;
  for (const auto& c : dec.components) pocket_nodes += static_cast<long long>(c.size());
  json summary{{"command", rc.command},
               {"grid", grid_json(setup.grid)},
               {"patch_eps", eps},
               {"pockets", static_cast<long long>(dec.components.size())},
               {"pocket_nodes", pocket_nodes},
               {"threshold_borderline", dec.borderline_nodes},
               {"report", report_json(rep)},
               {"threads", rc.threads},
               {"outputs", json::array({"solution.csv"})}};
  write_summary(out / "summary.json", summary);
  return rep.converged ? 0 : 1;
}

int cmd_plap(const RunConfig& rc, const json& cfg, const fs::path& out) {
  Setup setup = make_setup(cfg);
  const json vj = cfg.value("variational", json::object());

  VariationalSpec vspec;
  if (vj.contains("p_schedule")) vspec.p_schedule = vj.at("p_schedule").get<std::vector<double>>();
  vspec.inner_tol = vj.value("inner_tol", 1e-6);
  vspec.dirichlet = setup.payoff;

  const std::string g_kind = vj.value("g", setup.g_weights.size() != 0 ? "setup" : "constraint");
  if (g_kind == "setup") {
    vspec.g_weights = setup.g_weights;
  } else if (g_kind == "constraint") {
    vspec.g_weights = setup.grid.d_mask.cast<double>() * vj.value("g_value", 1.0);
  } else if (g_kind == "constant") {
    vspec.g_weights =
        ScalarField::Constant(setup.grid.node_count(), vj.value("g_value", 1.0));
  } else if (g_kind == "none") {
    vspec.g_weights = ScalarField::Zero(setup.grid.node_count());
  } else {
    throw std::invalid_argument("variational.g must be one of constraint, constant, none");
  }

  const auto [u, rep] = p_continuation(setup.grid, vspec, rc.threads);

  write_csv(out / "solution.csv", setup.grid, {{"value", &u}});
  const auto [vmin, vmax] = field_range(setup.grid, u);
  json summary{{"command", rc.command},
               {"grid", grid_json(setup.grid)},
               {"p_schedule", vspec.p_schedule},
               {"inner_tol", vspec.inner_tol},
               {"report", report_json(rep)},
               {"value_min", vmin},
               {"value_max", vmax},
               {"threads", rc.threads},
               {"outputs", json::array({"solution.csv"})}};
  write_summary(out / "summary.json", summary);
  return rep.converged ? 0 : 1;
}

int cmd_montecarlo(const RunConfig& rc, const json& cfg, const fs::path& out) {
  Setup setup = make_setup(cfg);
  const json gj = cfg.value("game", json::object());
  GameVariant variant = GameVariant::DGame;
  if (gj.contains("variant")) variant = parse_variant(gj.at("variant").get<std::string>());
  GameSpec spec = make_game_spec(setup, cfg, variant);

  const SolverOptions opt = solver_options(cfg);
  const double tol = opt.tol > 0.0 ? opt.tol : default_tol(setup.grid, spec.payoff);
  SolveControls controls;
  controls.threads = rc.threads;
  controls.stall_window = opt.stall_window;
  const auto [guide, rep] = dpp_solve(setup.grid, spec, tol, opt.max_iter, controls);

  const json mj = cfg.value("montecarlo", json::object());
  const long long samples = mj.value("samples", static_cast<long long>(10000));
  const long long step_cap = mj.value("step_cap", static_cast<long long>(100000));
  Eigen::Vector2d start_pos = setup.example ? Eigen::Vector2d{0.0, 0.0}
                                            : shape_center(setup.domain_shape);
  if (mj.contains("start")) start_pos = vec2(mj.at("start"), "montecarlo.start");
  const int start = setup.grid.nearest_node(start_pos);
  if (start < 0) throw std::invalid_argument("montecarlo start is outside the grid");

  const ValueEstimate est =
      estimate_value(setup.grid, spec, guide, start, samples, rc.seed, step_cap, rc.threads);

  json summary{{"command", rc.command},
               {"grid", grid_json(setup.grid)},
               {"eps", spec.eps},
               {"sell_price", spec.price()},
               {"guide_report", report_json(rep)},
               {"start_node", start},
               {"start_x", setup.grid.coords(start, 0)},
               {"start_y", setup.grid.coords(start, 1)},
               {"guide_value", guide[start]},
               {"samples", est.samples},
               {"mean", est.mean},
               {"half_width_95", est.half_width_95},
               {"capped_traces", est.capped_traces},
               {"reliable", est.reliable},
               {"seed", rc.seed},
               {"threads", rc.threads},
               {"outputs", json::array()}};
  write_summary(out / "summary.json", summary);
  return rep.converged && est.reliable ? 0 : 1;
}

int cmd_verify(const RunConfig& rc, const json& cfg, const fs::path& out) {
  const json vj = cfg.value("verify", json::object());
  std::vector<std::string> names = example_names();
  if (vj.contains("examples")) names = vj.at("examples").get<std::vector<std::string>>();
  const double tol_scale = vj.value("tol_scale", 1.5);
  const double solver_tol = vj.value("solver_tol", 1e-10);
  const double ordering_tol = vj.value("ordering_tol", 1e-9);
  const double lip_tol = vj.value("lip_tol", 0.1);
  const double support_tol = vj.value("support_tol", 0.1);
  const double patch_eps = vj.value("patch_eps", 1.0);

  json checks = json::array();
  bool all_passed = true;
  auto push = [&](const std::string& example, const CheckReport& rep) {
    checks.push_back(check_json(example, rep));
    all_passed = all_passed && rep.passed;
  };

  for (const std::string& name : names) {
    const ExampleProblem ex = example_library(name);
    SolveControls controls;
    controls.threads = rc.threads;
    auto solve = [&](GameVariant variant, const Mask& d_override = Mask()) {
      GameSpec spec;
      spec.variant = variant;
      spec.eps = ex.eps;
      spec.payoff = ex.payoff;
      spec.d_override = d_override;
      return dpp_solve(ex.grid, spec, solver_tol, 1000000, controls).first;
    };
    const ScalarField z = solve(GameVariant::OmegaGame);
    const ScalarField u = solve(GameVariant::DGame);
    const ScalarField h = solve(GameVariant::TugOfWar);

    push(name, check_ordering(z, u, h, ordering_tol));

    if (ex.exact) {
      const double tol = comparison_tol(ex.grid, ex.eps, tol_scale * ex.exact_tol_scale / 1.5);
      CheckReport rep;
      rep.name = "exact_match";
      double worst = 0.0;
      for (int i : ex.grid.interior_nodes) {
        const Eigen::Vector2d x{ex.grid.coords(i, 0), ex.grid.coords(i, 1)};
        const double diff = std::abs(u[i] - ex.exact(x));
        if (diff > worst) {
          worst = diff;
          rep.locus = i;
        }
      }
      rep.margin = tol - worst;
      rep.passed = rep.margin >= 0.0;
      rep.details = "largest deviation from the closed form is " + std::to_string(worst);
      push(name, rep);
    }

    if (ex.origin_window) {
      const int node = ex.grid.nearest_node({0.0, 0.0});
      CheckReport rep;
      rep.name = "origin_window";
      rep.locus = node;
      const double v = u[node];
      rep.margin = std::min(v - ex.origin_window->first, ex.origin_window->second - v);
      rep.passed = rep.margin >= 0.0;
      rep.details = "value at the center node is " + std::to_string(v);
      push(name, rep);
    }

    if (ex.g_weights.size() != 0) {
      VariationalSpec vspec;
      vspec.g_weights = ex.g_weights;
      vspec.dirichlet = ex.payoff;
      const ScalarField u_var = p_continuation(ex.grid, vspec, rc.threads).first;
      push(name, check_lip_bound(ex.grid, u_var, payoff_lipschitz(ex.grid, ex.payoff),
                                 lip_tol));
      push(name, check_minimal_vs_variational(
                     ex.grid, ex, comparison_tol(ex.grid, ex.eps, tol_scale), rc.threads));
      if (ex.g_weights.abs().maxCoeff() > 0.0) {
        VariationalSpec scaled = vspec;
        scaled.g_weights = 5.0 * vspec.g_weights;
        push(name, check_support_dependence(ex.grid, vspec, scaled, support_tol,
                                            rc.threads));
      }
    }

    if (ex.grid.dim == 1 || name == "square_twopatch")
      push(name, check_patch_equals_jensen(
                     ex.grid, ex.payoff, patch_eps,
                     comparison_tol(ex.grid, patch_eps * ex.grid.spacing, tol_scale),
                     rc.threads));

    if (name == "segment_jensen") {
      GameSpec none_spec;
      none_spec.variant = GameVariant::DGame;
      none_spec.eps = ex.eps;
      none_spec.payoff = ex.payoff;
      none_spec.d_override = Mask::Constant(ex.grid.node_count(), false);
      GameSpec all_spec = none_spec;
      all_spec.d_override = ex.grid.interior_mask;
      push(name, check_monotone_in_D(ex.grid, none_spec, all_spec, ordering_tol,
                                     rc.threads));
    }

    if (ex.nonuniqueness_gap) {
      const Mask closure = interior_closure_mask(ex.grid, ex.grid.d_mask);
      const ScalarField u_clo = solve(GameVariant::DGame, closure);

      CheckReport rep;
      rep.name = "closure_probe_gap";
      rep.locus = ex.probe_node;
      const double gap = std::abs(u[ex.probe_node] - u_clo[ex.probe_node]);
      rep.margin = gap - *ex.nonuniqueness_gap;
      rep.passed = rep.margin >= 0.0;
      rep.details = "solved values at the probe node differ by " + std::to_string(gap) +
                    " between the constraint set as given and its interior closure";
      push(name, rep);

      GameSpec full;
      full.variant = GameVariant::DGame;
      full.eps = ex.eps;
      full.payoff = ex.payoff;
      GameSpec clo = full;
      clo.d_override = closure;
      push(name, check_monotone_in_D(ex.grid, clo, full, ordering_tol, rc.threads));
    }
  }

  json summary{{"command", rc.command},
               {"examples", names},
               {"checks", checks},
               {"all_passed", all_passed},
               {"threads", rc.threads},
               {"outputs", json::array()}};
  write_summary(out / "summary.json", summary);
  return all_passed ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    const bool needs_config = config.command != "verify";
    if (needs_config && config.config_path.empty()) {
      std::cerr << "error: " << config.command << " requires --config\n";
      return 2;
    }
    json cfg = json::object();
    if (!config.config_path.empty()) {
      std::ifstream in(config.config_path);
      if (!in) {
        std::cerr << "error: cannot read config file " << config.config_path << '\n';
        return 2;
      }
      cfg = json::parse(in, nullptr, true, true);
    }

    const fs::path out{config.out_dir.empty() ? "." : config.out_dir};
    fs::create_directories(out);

    if (config.command == "solve-game")
      return cmd_solve(config, cfg, out, GameVariant::DGame, true);
    if (config.command == "solve-jensen")
      return cmd_solve(config, cfg, out, GameVariant::OmegaGame, false);
    if (config.command == "solve-harmonic")
      return cmd_solve(config, cfg, out, GameVariant::TugOfWar, false);
    if (config.command == "patch") return cmd_patch(config, cfg, out);
    if (config.command == "solve-plap") return cmd_plap(config, cfg, out);
    if (config.command == "montecarlo") return cmd_montecarlo(config, cfg, out);
    if (config.command == "verify") return cmd_verify(config, cfg, out);

    std::cerr << "error: unknown command " << config.command << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"grid solvers for gradient-constrained infinity-harmonic problems"};
  app.require_subcommand(1);

  RunConfig cfg;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-game", "value of the coin-flip walk with selling on the constraint set"},
      {"solve-jensen", "value of the coin-flip walk with selling allowed everywhere"},
      {"solve-harmonic", "value of the plain coin-flip walk"},
      {"patch", "harmonic solve plus cone patching of its flat pockets"},
      {"solve-plap", "p-energy minimization with increasing exponents"},
      {"montecarlo", "simulate games guided by the solved value"},
      {"verify", "structural checks on the example catalog"}};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", cfg.config_path, "JSON problem description");
    sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads, 0 = auto")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg);
}

}  // namespace inflap
