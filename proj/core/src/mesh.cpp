#include "twophase/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "twophase/errors.hpp"

namespace twophase {

Domain Domain::interval(double a, double b) {
  if (!(a < b)) throw DomainError("Domain::interval: requires a < b");
  Domain d;
  d.kind = Kind::Interval;
  d.x0 = a;
  d.x1 = b;
  return d;
}

Domain Domain::rectangle(double x0, double x1, double y0, double y1) {
  if (!(x0 < x1) || !(y0 < y1))
    throw DomainError("Domain::rectangle: requires x0 < x1 and y0 < y1");
  Domain d;
  d.kind = Kind::Rectangle;
  d.x0 = x0;
  d.x1 = x1;
  d.y0 = y0;
  d.y1 = y1;
  return d;
}

double Domain::measure() const {
  return kind == Kind::Interval ? (x1 - x0) : (x1 - x0) * (y1 - y0);
}

double Domain::diameter() const {
  if (kind == Kind::Interval) return x1 - x0;
  return std::hypot(x1 - x0, y1 - y0);
}

bool Domain::contains(Vec2 p, double tol) const {
  const double sx = tol * (x1 - x0);
  if (p.x < x0 - sx || p.x > x1 + sx) return false;
  if (kind == Kind::Rectangle) {
    const double sy = tol * (y1 - y0);
    if (p.y < y0 - sy || p.y > y1 + sy) return false;
  }
  return true;
}

Mesh build_mesh(const Domain& domain, int nx, int ny) {
  Mesh m;
  m.domain = domain;
  if (domain.kind == Domain::Kind::Interval) {
    if (nx < 2) throw DomainError("build_mesh: resolution must be >= 2 per axis");
    m.nx = nx;
    m.ny = 0;
    m.hx = (domain.x1 - domain.x0) / nx;
    m.hy = 0.0;
    m.nodes.resize(nx + 1);
    m.boundary.assign(nx + 1, false);
    for (int i = 0; i <= nx; ++i) m.nodes[i] = {domain.x0 + i * m.hx, 0.0};
    m.nodes[nx].x = domain.x1;  // exact right endpoint
    m.boundary[0] = m.boundary[nx] = true;
    m.elems.reserve(nx);
    for (int i = 0; i < nx; ++i) m.elems.push_back({i, i + 1, -1});
    return m;
  }
  if (nx < 2 || ny < 2) throw DomainError("build_mesh: resolution must be >= 2 per axis");
  m.nx = nx;
  m.ny = ny;
  m.hx = (domain.x1 - domain.x0) / nx;
  m.hy = (domain.y1 - domain.y0) / ny;
  const int nnx = nx + 1, nny = ny + 1;
  m.nodes.resize(static_cast<size_t>(nnx) * nny);
  m.boundary.assign(m.nodes.size(), false);
  for (int iy = 0; iy < nny; ++iy) {
    const double y = (iy == ny) ? domain.y1 : domain.y0 + iy * m.hy;
    for (int ix = 0; ix < nnx; ++ix) {
      const double x = (ix == nx) ? domain.x1 : domain.x0 + ix * m.hx;
      const int id = iy * nnx + ix;
      m.nodes[id] = {x, y};
      m.boundary[id] = (ix == 0 || ix == nx || iy == 0 || iy == ny);
    }
  }
  m.elems.reserve(static_cast<size_t>(2) * nx * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int n00 = iy * nnx + ix;
      const int n10 = n00 + 1;
      const int n01 = n00 + nnx;
      const int n11 = n01 + 1;
      // Both triangles share the cell diagonal n00-n11 (same orientation in
      // every cell); each is a right triangle with legs along the axes.
      m.elems.push_back({n00, n10, n11});
      m.elems.push_back({n00, n11, n01});
    }
  }
  return m;
}

double Mesh::elem_measure(int e) const {
  const auto& el = elems[e];
  if (dim() == 1) return nodes[el[1]].x - nodes[el[0]].x;
  const Vec2 a = nodes[el[0]], b = nodes[el[1]], c = nodes[el[2]];
  return 0.5 * cross(b - a, c - a);
}

Vec2 Mesh::shape_gradient(int e, int v) const {
  const auto& el = elems[e];
  if (dim() == 1) {
    const double h = nodes[el[1]].x - nodes[el[0]].x;
    return {v == 0 ? -1.0 / h : 1.0 / h, 0.0};
  }
  const Vec2 a = nodes[el[0]], b = nodes[el[1]], c = nodes[el[2]];
  const double inv2A = 1.0 / cross(b - a, c - a);
  switch (v) {
    case 0: return inv2A * perp(c - b);
    case 1: return inv2A * perp(a - c);
    default: return inv2A * perp(b - a);
  }
}

Vec2 element_gradient(const Mesh& mesh, const ScalarField& u, int e) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("element_gradient: field length != node count");
  const auto& el = mesh.elems[e];
  if (mesh.dim() == 1) {
    const double h = mesh.nodes[el[1]].x - mesh.nodes[el[0]].x;
    return {(u[el[1]] - u[el[0]]) / h, 0.0};
  }
  Vec2 g{0.0, 0.0};
  for (int v = 0; v < 3; ++v) g = g + u[el[v]] * mesh.shape_gradient(e, v);
  return g;
}

double integrate(const Mesh& mesh, const std::vector<double>& elem_values) {
  if (static_cast<int>(elem_values.size()) != mesh.elem_count())
    throw DimensionMismatch("integrate: values length != element count");
  double sum = 0.0;
  for (int e = 0; e < mesh.elem_count(); ++e) sum += mesh.elem_measure(e) * elem_values[e];
  return sum;
}

double interpolate(const Mesh& mesh, const ScalarField& u, Vec2 p) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("interpolate: field length != node count");
  if (!mesh.domain.contains(p)) throw OutOfDomainError("interpolate: point outside domain");
  const Domain& d = mesh.domain;
  const double rx = (p.x - d.x0) / mesh.hx;
  int ix = std::clamp(static_cast<int>(std::floor(rx)), 0, mesh.nx - 1);
  const double xi = std::clamp(rx - ix, 0.0, 1.0);
  if (mesh.dim() == 1) {
    return u[ix] * (1.0 - xi) + u[ix + 1] * xi;
  }
  const double ry = (p.y - d.y0) / mesh.hy;
  int iy = std::clamp(static_cast<int>(std::floor(ry)), 0, mesh.ny - 1);
  const double eta = std::clamp(ry - iy, 0.0, 1.0);
  const int nnx = mesh.nx + 1;
  const int n00 = iy * nnx + ix;
  const int n10 = n00 + 1;
  const int n01 = n00 + nnx;
  const int n11 = n01 + 1;
  if (eta <= xi) {
    // lower triangle (n00, n10, n11): barycentric (1-xi, xi-eta, eta)
    return u[n00] * (1.0 - xi) + u[n10] * (xi - eta) + u[n11] * eta;
  }
  // upper triangle (n00, n11, n01): barycentric (1-eta, xi, eta-xi)
  return u[n00] * (1.0 - eta) + u[n11] * xi + u[n01] * (eta - xi);
}

std::vector<double> lumped_node_weights(const Mesh& mesh) {
  std::vector<double> w(mesh.node_count(), 0.0);
  const int npe = mesh.nodes_per_elem();
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const double share = mesh.elem_measure(e) / npe;
    for (int v = 0; v < npe; ++v) w[mesh.elems[e][v]] += share;
  }
  return w;
}

Mesh refine(const Mesh& mesh, std::vector<int>* node_map) {
  Mesh fine = (mesh.dim() == 1) ? build_mesh(mesh.domain, 2 * mesh.nx)
                                : build_mesh(mesh.domain, 2 * mesh.nx, 2 * mesh.ny);
  if (node_map) {
    node_map->assign(mesh.node_count(), -1);
    if (mesh.dim() == 1) {
      for (int i = 0; i <= mesh.nx; ++i) (*node_map)[i] = 2 * i;
    } else {
      const int nnx = mesh.nx + 1, fnnx = fine.nx + 1;
      for (int iy = 0; iy <= mesh.ny; ++iy)
        for (int ix = 0; ix <= mesh.nx; ++ix)
          (*node_map)[iy * nnx + ix] = (2 * iy) * fnnx + 2 * ix;
    }
  }
  return fine;
}

}  // namespace twophase
