#pragma once

#include <array>
#include <vector>

#include "twophase/vec.hpp"

namespace twophase {

/// Computational domain: an interval (a,b) or an axis-aligned rectangle.
struct Domain {
  enum class Kind { Interval, Rectangle };

  Kind kind = Kind::Interval;
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 0.0;

  static Domain interval(double a, double b);
  static Domain rectangle(double x0, double x1, double y0, double y1);

  int dim() const { return kind == Kind::Interval ? 1 : 2; }
  double measure() const;
  double diameter() const;
  bool contains(Vec2 p, double tol = 1e-12) const;
};

/// Nodal field: one value per mesh node.
using ScalarField = std::vector<double>;

/// Uniform simplicial mesh: segments on an interval, right triangles on a
/// rectangle (every cell split along the same diagonal, so all triangles are
/// nonobtuse). Node ordering is row-major and deterministic. Immutable after
/// construction.
struct Mesh {
  Domain domain;
  int nx = 0;  // cells along x
  int ny = 0;  // cells along y (0 in 1D)
  double hx = 0.0;
  double hy = 0.0;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> elems;  // {a, b, -1} for segments
  std::vector<bool> boundary;             // true exactly on boundary nodes

  int dim() const { return ny > 0 ? 2 : 1; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int elem_count() const { return static_cast<int>(elems.size()); }
  int nodes_per_elem() const { return dim() + 1; }
  double spacing() const { return dim() == 1 ? hx : (hx < hy ? hx : hy); }

  double elem_measure(int e) const;
  /// Gradient of the hat function of local vertex v (0..dim) on element e.
  Vec2 shape_gradient(int e, int v) const;
};

/// Builds the uniform mesh; resolution is the cell count per axis (>= 2).
Mesh build_mesh(const Domain& domain, int nx, int ny = 0);

/// Constant gradient of the piecewise-linear interpolant on one element.
Vec2 element_gradient(const Mesh& mesh, const ScalarField& u, int e);

/// Sum over elements of measure(e) * values[e], in fixed element order.
double integrate(const Mesh& mesh, const std::vector<double>& elem_values);

/// Piecewise-linear interpolation at a point of the closed domain.
/// Throws OutOfDomainError outside.
double interpolate(const Mesh& mesh, const ScalarField& u, Vec2 p);

/// Mass-lumped nodal weights: sum of measure/(dim+1) over incident elements.
std::vector<double> lumped_node_weights(const Mesh& mesh);

/// Uniform refinement halving the spacing. Coarse node i keeps its exact
/// coordinates at fine index node_map[i].
Mesh refine(const Mesh& mesh, std::vector<int>* node_map = nullptr);

}  // namespace twophase
