#pragma once

#include "inflap/field.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace inflap {

/**
 * Geometric descriptor used both for the domain itself and for the
 * constraint region D.  Segment is one-dimensional; the other shapes are
 * two-dimensional.  Point/All/None only make sense as constraint shapes.
 */
struct ShapeSpec {
  enum class Kind { None, All, Segment, Rectangle, Disk, Point, ExplicitMask };

  Kind kind = Kind::None;
  double seg_a = 0.0, seg_b = 0.0;                 // Segment end points
  Eigen::Vector2d lo{0.0, 0.0}, hi{0.0, 0.0};      // Rectangle corners
  Eigen::Vector2d center{0.0, 0.0};                // Disk center / Point
  double radius = 0.0;                             // Disk radius
  std::vector<std::array<long, 2>> cells;          // ExplicitMask lattice coords
  int explicit_dim = 2;                            // dimension of ExplicitMask

  static ShapeSpec none() { return {}; }
  static ShapeSpec all();
  static ShapeSpec segment(double a, double b);
  static ShapeSpec rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);
  static ShapeSpec disk(const Eigen::Vector2d& center, double radius);
  static ShapeSpec point(const Eigen::Vector2d& p);
  static ShapeSpec explicit_mask(std::vector<std::array<long, 2>> cells, int dim);
};

/**
 * Discretization of a bounded domain on a uniform lattice.
 *
 * Every stored node is either interior (inside the domain) or part of the
 * boundary strip: the lattice points just outside the domain, within
 * strip_width of its boundary, where boundary payoffs are prescribed and
 * games terminate.  Nodes that are neither are not stored at all.
 *
 * Node indices are assigned in row-major lattice order (ascending y, then
 * ascending x) and are the indexing convention for every ScalarField and
 * Mask attached to this grid.  All members are immutable after build_grid,
 * so a GridDomain can be shared freely across threads.
 */
class GridDomain {
 public:
  double spacing = 0.0;
  int dim = 0;
  double strip_width = 0.0;
  Eigen::Vector2d origin{0.0, 0.0};  // coordinates of lattice point (0, 0)

  Eigen::Matrix<double, Eigen::Dynamic, 2> coords;  // column 1 is zero in 1D
  Eigen::Matrix<long, Eigen::Dynamic, 2> lattice;
  Mask interior_mask;
  Mask strip_mask;
  Mask d_mask;

  std::vector<int> interior_nodes;  // ascending node indices

  Eigen::Index node_count() const { return coords.rows(); }

  // Index of the node at the given lattice coordinates, or -1.
  int node_at(long ix, long iy) const {
    auto it = index_.find(key(ix, iy));
    return it == index_.end() ? -1 : it->second;
  }

  // Index of the stored node nearest to p (Euclidean), or -1 if none.
  int nearest_node(const Eigen::Vector2d& p) const;

  // Euclidean distance between two stored nodes.
  double node_distance(int a, int b) const {
    return (coords.row(a) - coords.row(b)).norm();
  }

  friend GridDomain build_grid(const ShapeSpec& shape, double spacing,
                               double strip_width, const ShapeSpec& d_shape);

 private:
  static std::uint64_t key(long ix, long iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
  }
  std::unordered_map<std::uint64_t, int> index_;
};

/**
 * Build the lattice discretization of the domain described by `shape`.
 *
 * Interior nodes are the lattice points strictly inside the shape.  Strip
 * nodes are lattice points outside the shape whose distance to the shape
 * boundary is < strip_width and that lie within strip_width of some
 * interior node (so a ball of radius strip_width centred at an interior
 * node can actually reach them).  d_shape selects the constraint nodes
 * among the interior ones; membership there is closed (boundary included).
 *
 * Throws std::invalid_argument when spacing <= 0, strip_width < spacing,
 * or the interior comes out empty.
 */
GridDomain build_grid(const ShapeSpec& shape, double spacing, double strip_width,
                      const ShapeSpec& d_shape = ShapeSpec::none());

/**
 * All stored nodes y (interior or strip) with |y - x| <= radius, including
 * x itself.  Throws when `node` is not interior or radius < spacing (such a
 * ball would contain only x and stall any iteration on it).  Indices are
 * returned in ascending order.
 */
std::vector<int> ball(const GridDomain& grid, int node, double radius);

/** Interior nodes within Euclidean distance r of some node of `mask`. */
Mask dilate_mask(const GridDomain& grid, const Mask& mask, double r);

/**
 * Grid realization of "closure of the interior" of a node set: a node is
 * kept iff it belongs to the closure (node plus axis neighbours) of the set
 * of mask nodes whose full axis-neighbour set lies inside the mask.
 * Isolated nodes vanish; solid regions survive.  Idempotent.
 */
Mask interior_closure_mask(const GridDomain& grid, const Mask& mask);

/**
 * Multi-source shortest-path distance over the nodes of `region`.
 *
 * The graph joins region nodes whose lattice offset has Chebyshev norm
 * <= stencil_radius (reduced to primitive directions), with Euclidean edge
 * weights; stencil_radius 1 gives axis plus diagonal neighbours.  Sources
 * are (node, initial value) pairs; source nodes may sit outside the region
 * and then act as one-way entry points.  Unreachable region nodes get
 * +infinity; if any exist and `all_reached` is non-null it is set false.
 */
ScalarField geodesic_distance(const GridDomain& grid, const Mask& region,
                              const std::vector<std::pair<int, double>>& sources,
                              int stencil_radius = 1, bool* all_reached = nullptr);

// Primitive lattice directions with Chebyshev norm <= radius (in the grid's
// dimension), each paired with its Euclidean length in lattice units.
std::vector<std::pair<std::array<long, 2>, double>> stencil_directions(int dim, int radius);

}  // namespace inflap
