#include "inflap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace inflap {

namespace {

// Relative slack used when classifying lattice points against shape
// boundaries, so that nodes meant to sit exactly on a boundary are not
// flipped to the wrong side by rounding in coordinate arithmetic.
constexpr double kGeomTol = 1e-9;

int dim_of(const ShapeSpec& s) {
  switch (s.kind) {
    case ShapeSpec::Kind::Segment:
      return 1;
    case ShapeSpec::Kind::ExplicitMask:
      return s.explicit_dim;
    default:
      return 2;
  }
}

// Strictly-inside test for the domain shape.
bool inside_domain(const ShapeSpec& s, const Eigen::Vector2d& x, double tol) {
  switch (s.kind) {
    case ShapeSpec::Kind::Segment:
      return x[0] > s.seg_a + tol && x[0] < s.seg_b - tol;
    case ShapeSpec::Kind::Rectangle:
      return x[0] > s.lo[0] + tol && x[0] < s.hi[0] - tol && x[1] > s.lo[1] + tol &&
             x[1] < s.hi[1] - tol;
    case ShapeSpec::Kind::Disk:
      return (x - s.center).norm() < s.radius - tol;
    default:
      return false;
  }
}

// Distance from an outside point to the shape boundary.
double boundary_distance(const ShapeSpec& s, const Eigen::Vector2d& x) {
  switch (s.kind) {
    case ShapeSpec::Kind::Segment:
      return std::max(s.seg_a - x[0], x[0] - s.seg_b);
    case ShapeSpec::Kind::Rectangle: {
      double dx = std::max({s.lo[0] - x[0], 0.0, x[0] - s.hi[0]});
      double dy = std::max({s.lo[1] - x[1], 0.0, x[1] - s.hi[1]});
      return std::hypot(dx, dy);
    }
    case ShapeSpec::Kind::Disk:
      return (x - s.center).norm() - s.radius;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

// Closed membership test used for constraint shapes.
bool inside_closed(const ShapeSpec& s, const Eigen::Vector2d& x, double tol) {
  switch (s.kind) {
    case ShapeSpec::Kind::None:
      return false;
    case ShapeSpec::Kind::All:
      return true;
    case ShapeSpec::Kind::Segment:
      return x[0] >= s.seg_a - tol && x[0] <= s.seg_b + tol;
    case ShapeSpec::Kind::Rectangle:
      return x[0] >= s.lo[0] - tol && x[0] <= s.hi[0] + tol && x[1] >= s.lo[1] - tol &&
             x[1] <= s.hi[1] + tol;
    case ShapeSpec::Kind::Disk:
      return (x - s.center).norm() <= s.radius + tol;
    default:
      return false;
  }
}

struct LatticeBox {
  long lo_x, hi_x, lo_y, hi_y;
};

LatticeBox candidate_box(const ShapeSpec& s, const Eigen::Vector2d& origin, double spacing,
                         double margin) {
  auto lo_idx = [&](double v, double o) {
    return static_cast<long>(std::floor((v - margin - o) / spacing)) - 1;
  };
  auto hi_idx = [&](double v, double o) {
    return static_cast<long>(std::ceil((v + margin - o) / spacing)) + 1;
  };
  switch (s.kind) {
    case ShapeSpec::Kind::Segment:
      return {lo_idx(s.seg_a, origin[0]), hi_idx(s.seg_b, origin[0]), 0, 0};
    case ShapeSpec::Kind::Rectangle:
      return {lo_idx(s.lo[0], origin[0]), hi_idx(s.hi[0], origin[0]), lo_idx(s.lo[1], origin[1]),
              hi_idx(s.hi[1], origin[1])};
    case ShapeSpec::Kind::Disk:
      return {lo_idx(s.center[0] - s.radius, origin[0]), hi_idx(s.center[0] + s.radius, origin[0]),
              lo_idx(s.center[1] - s.radius, origin[1]), hi_idx(s.center[1] + s.radius, origin[1])};
    case ShapeSpec::Kind::ExplicitMask: {
      long lx = 0, hx = 0, ly = 0, hy = 0;
      bool first = true;
      for (const auto& c : s.cells) {
        if (first || c[0] < lx) lx = c[0];
        if (first || c[0] > hx) hx = c[0];
        if (first || c[1] < ly) ly = c[1];
        if (first || c[1] > hy) hy = c[1];
        first = false;
      }
      long pad = static_cast<long>(std::ceil(margin / spacing)) + 1;
      return {lx - pad, hx + pad, dim_of(s) == 1 ? 0 : ly - pad, dim_of(s) == 1 ? 0 : hy + pad};
    }
    default:
      throw std::invalid_argument("domain shape must be a segment, rectangle, disk or explicit mask");
  }
}

}  // namespace

ShapeSpec ShapeSpec::all() {
  ShapeSpec s;
  s.kind = Kind::All;
  return s;
}

ShapeSpec ShapeSpec::segment(double a, double b) {
  ShapeSpec s;
  s.kind = Kind::Segment;
  s.seg_a = a;
  s.seg_b = b;
  return s;
}

ShapeSpec ShapeSpec::rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  ShapeSpec s;
  s.kind = Kind::Rectangle;
  s.lo = lo;
  s.hi = hi;
  return s;
}

ShapeSpec ShapeSpec::disk(const Eigen::Vector2d& center, double radius) {
  ShapeSpec s;
  s.kind = Kind::Disk;
  s.center = center;
  s.radius = radius;
  return s;
}

ShapeSpec ShapeSpec::point(const Eigen::Vector2d& p) {
  ShapeSpec s;
  s.kind = Kind::Point;
  s.center = p;
  return s;
}

ShapeSpec ShapeSpec::explicit_mask(std::vector<std::array<long, 2>> cells, int dim) {
  ShapeSpec s;
  s.kind = Kind::ExplicitMask;
  s.cells = std::move(cells);
  s.explicit_dim = dim;
  return s;
}

int GridDomain::nearest_node(const Eigen::Vector2d& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < node_count(); ++i) {
    double d = (coords.row(i).transpose() - p).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

GridDomain build_grid(const ShapeSpec& shape, double spacing, double strip_width,
                      const ShapeSpec& d_shape) {
  if (spacing <= 0.0) throw std::invalid_argument("spacing must be positive");
  if (strip_width < spacing - kGeomTol * spacing)
    throw std::invalid_argument("strip_width must be at least the grid spacing");

  GridDomain g;
  g.spacing = spacing;
  g.dim = dim_of(shape);
  g.strip_width = strip_width;

  // Anchor the lattice so that shape-relevant points are lattice points:
  // segment end / rectangle corner / disk center.
  switch (shape.kind) {
    case ShapeSpec::Kind::Segment:
      g.origin = {shape.seg_a, 0.0};
      break;
    case ShapeSpec::Kind::Rectangle:
      g.origin = shape.lo;
      break;
    case ShapeSpec::Kind::Disk:
      g.origin = shape.center;
      break;
    default:
      g.origin = {0.0, 0.0};
      break;
  }

  const double tol = kGeomTol * spacing;
  const bool explicit_shape = shape.kind == ShapeSpec::Kind::ExplicitMask;
  LatticeBox box = candidate_box(shape, g.origin, spacing, strip_width + spacing);

  auto coord_of = [&](long ix, long iy) {
    return Eigen::Vector2d(g.origin[0] + ix * spacing,
                           g.dim == 1 ? 0.0 : g.origin[1] + iy * spacing);
  };

  std::vector<std::array<long, 2>> interior;
  if (explicit_shape) {
    interior.assign(shape.cells.begin(), shape.cells.end());
    std::sort(interior.begin(), interior.end(),
              [](const auto& a, const auto& b) { return std::tie(a[1], a[0]) < std::tie(b[1], b[0]); });
    interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  } else {
    for (long iy = box.lo_y; iy <= box.hi_y; ++iy)
      for (long ix = box.lo_x; ix <= box.hi_x; ++ix)
        if (inside_domain(shape, coord_of(ix, iy), tol)) interior.push_back({ix, iy});
  }
  if (interior.empty()) throw std::invalid_argument("domain interior is empty at this spacing");

  // Strip candidates: lattice points outside the domain, within strip_width
  // of the boundary (strict, mirroring the continuum strip), and within
  // strip_width of some interior node (non-strict, mirroring the closed
  // balls that have to reach them).
  std::unordered_map<std::uint64_t, int> interior_set;
  for (const auto& c : interior) interior_set.emplace(GridDomain::key(c[0], c[1]), 1);

  const long reach = static_cast<long>(std::floor(strip_width / spacing + kGeomTol));
  const double reach2 = (strip_width / spacing) * (strip_width / spacing) * (1.0 + kGeomTol);

  std::vector<std::array<long, 2>> strip;
  {
    std::unordered_map<std::uint64_t, int> seen;
    for (const auto& c : interior) {
      for (long dy = (g.dim == 1 ? 0 : -reach); dy <= (g.dim == 1 ? 0 : reach); ++dy) {
        for (long dx = -reach; dx <= reach; ++dx) {
          if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy > reach2) continue;
          long ix = c[0] + dx, iy = c[1] + dy;
          auto k = GridDomain::key(ix, iy);
          if (interior_set.count(k) || seen.count(k)) continue;
          seen.emplace(k, 1);
          Eigen::Vector2d x = coord_of(ix, iy);
          bool outside_ok;
          if (explicit_shape) {
            outside_ok = true;  // no analytic boundary; node reach is the criterion
          } else {
            outside_ok =
                !inside_domain(shape, x, tol) && boundary_distance(shape, x) < strip_width - tol;
          }
          if (outside_ok) strip.push_back({ix, iy});
        }
      }
    }
  }

  std::vector<std::array<long, 2>> all;
  all.reserve(interior.size() + strip.size());
  all.insert(all.end(), interior.begin(), interior.end());
  all.insert(all.end(), strip.begin(), strip.end());
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return std::tie(a[1], a[0]) < std::tie(b[1], b[0]); });

  const Eigen::Index n = static_cast<Eigen::Index>(all.size());
  g.coords.resize(n, 2);
  g.lattice.resize(n, 2);
  g.interior_mask = Mask::Constant(n, false);
  g.strip_mask = Mask::Constant(n, false);
  g.d_mask = Mask::Constant(n, false);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = all[i];
    g.lattice(i, 0) = c[0];
    g.lattice(i, 1) = c[1];
    Eigen::Vector2d x = coord_of(c[0], c[1]);
    g.coords(i, 0) = x[0];
    g.coords(i, 1) = x[1];
    g.index_.emplace(GridDomain::key(c[0], c[1]), static_cast<int>(i));
    if (interior_set.count(GridDomain::key(c[0], c[1]))) {
      g.interior_mask[i] = true;
      g.interior_nodes.push_back(static_cast<int>(i));
    } else {
      g.strip_mask[i] = true;
    }
  }

  // Constraint mask over interior nodes.
  if (d_shape.kind == ShapeSpec::Kind::Point) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i : g.interior_nodes) {
      double d = (g.coords.row(i).transpose() - d_shape.center).norm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best >= 0) g.d_mask[best] = true;
  } else if (d_shape.kind == ShapeSpec::Kind::ExplicitMask) {
    for (const auto& c : d_shape.cells) {
      int i = g.node_at(c[0], c[1]);
      if (i >= 0 && g.interior_mask[i]) g.d_mask[i] = true;
    }
  } else if (d_shape.kind != ShapeSpec::Kind::None) {
    for (int i : g.interior_nodes)
      if (inside_closed(d_shape, g.coords.row(i).transpose(), tol)) g.d_mask[i] = true;
  }

  return g;
}

std::vector<int> ball(const GridDomain& grid, int node, double radius) {
  if (node < 0 || node >= grid.node_count() || !grid.interior_mask[node])
    throw std::invalid_argument("ball center must be an interior node");
  if (radius < grid.spacing * (1.0 - kGeomTol))
    throw std::invalid_argument("ball radius must be at least the grid spacing");

  const long reach = static_cast<long>(std::floor(radius / grid.spacing + kGeomTol));
  const double r_units = radius / grid.spacing;
  const double reach2 = r_units * r_units * (1.0 + kGeomTol);
  const long cx = grid.lattice(node, 0), cy = grid.lattice(node, 1);

  std::vector<int> out;
  for (long dy = (grid.dim == 1 ? 0 : -reach); dy <= (grid.dim == 1 ? 0 : reach); ++dy) {
    for (long dx = -reach; dx <= reach; ++dx) {
      if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy > reach2) continue;
      int j = grid.node_at(cx + dx, cy + dy);
      if (j >= 0) out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mask dilate_mask(const GridDomain& grid, const Mask& mask, double r) {
  if (mask.size() != grid.node_count())
    throw std::invalid_argument("mask size does not match grid");
  if (r < 0.0) throw std::invalid_argument("dilation radius must be nonnegative");

  Mask out = Mask::Constant(grid.node_count(), false);
  const long reach = static_cast<long>(std::floor(r / grid.spacing + kGeomTol));
  const double r_units = r / grid.spacing;
  const double reach2 = r_units * r_units * (1.0 + kGeomTol);

  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    if (!mask[i]) continue;
    const long cx = grid.lattice(i, 0), cy = grid.lattice(i, 1);
    for (long dy = (grid.dim == 1 ? 0 : -reach); dy <= (grid.dim == 1 ? 0 : reach); ++dy) {
      for (long dx = -reach; dx <= reach; ++dx) {
        if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy > reach2) continue;
        int j = grid.node_at(cx + dx, cy + dy);
        if (j >= 0 && grid.interior_mask[j]) out[j] = true;
      }
    }
  }
  return out;
}

Mask interior_closure_mask(const GridDomain& grid, const Mask& mask) {
  if (mask.size() != grid.node_count())
    throw std::invalid_argument("mask size does not match grid");

  auto axis_neighbors = [&](Eigen::Index i) {
    std::vector<int> nb;
    const long cx = grid.lattice(i, 0), cy = grid.lattice(i, 1);
    nb.push_back(grid.node_at(cx - 1, cy));
    nb.push_back(grid.node_at(cx + 1, cy));
    if (grid.dim == 2) {
      nb.push_back(grid.node_at(cx, cy - 1));
      nb.push_back(grid.node_at(cx, cy + 1));
    }
    return nb;
  };

  // Grid-scale interior: nodes whose full axis-neighbour set exists and
  // lies in the mask.
  Mask inner = Mask::Constant(grid.node_count(), false);
  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    if (!mask[i]) continue;
    bool all_in = true;
    for (int j : axis_neighbors(i))
      if (j < 0 || !mask[j]) {
        all_in = false;
        break;
      }
    inner[i] = all_in;
  }

  // Closure: the interior nodes plus their axis neighbours.
  Mask out = inner;
  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    if (!inner[i]) continue;
    for (int j : axis_neighbors(i))
      if (j >= 0) out[j] = true;
  }
  return out;
}

std::vector<std::pair<std::array<long, 2>, double>> stencil_directions(int dim, int radius) {
  if (radius < 1) throw std::invalid_argument("stencil radius must be at least 1");
  std::vector<std::pair<std::array<long, 2>, double>> dirs;
  for (long dy = (dim == 1 ? 0 : -radius); dy <= (dim == 1 ? 0 : radius); ++dy) {
    for (long dx = -radius; dx <= radius; ++dx) {
      if (dx == 0 && dy == 0) continue;
      // Keep only primitive directions; longer multiples decompose into
      // repeated primitive steps of identical total weight.
      long gx = std::abs(dx), gy = std::abs(dy);
      if (std::gcd(gx, gy) != 1) continue;
      dirs.push_back({{dx, dy}, std::hypot(static_cast<double>(dx), static_cast<double>(dy))});
    }
  }
  return dirs;
}

ScalarField geodesic_distance(const GridDomain& grid, const Mask& region,
                              const std::vector<std::pair<int, double>>& sources,
                              int stencil_radius, bool* all_reached) {
  if (region.size() != grid.node_count())
    throw std::invalid_argument("region mask size does not match grid");

  const double inf = std::numeric_limits<double>::infinity();
  ScalarField dist = ScalarField::Constant(grid.node_count(), inf);
  const auto dirs = stencil_directions(grid.dim, stencil_radius);

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (const auto& [node, value] : sources) {
    if (node < 0 || node >= grid.node_count())
      throw std::invalid_argument("geodesic source is not a grid node");
    if (value < dist[node]) {
      dist[node] = value;
      heap.emplace(value, node);
    }
  }

  while (!heap.empty()) {
    auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[i]) continue;
    const long cx = grid.lattice(i, 0), cy = grid.lattice(i, 1);
    for (const auto& [off, len] : dirs) {
      int j = grid.node_at(cx + off[0], cy + off[1]);
      if (j < 0 || !region[j]) continue;
      double nd = d + len * grid.spacing;
      if (nd < dist[j]) {
        dist[j] = nd;
        heap.emplace(nd, j);
      }
    }
  }

  if (all_reached) {
    bool ok = true;
    for (Eigen::Index i = 0; i < grid.node_count(); ++i)
      if (region[i] && !std::isfinite(dist[i])) {
        ok = false;
        break;
      }
    *all_reached = ok;
  }
  return dist;
}

}  // namespace inflap
