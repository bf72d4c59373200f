#include "twophase/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

// Area of the part of a convex polygon (with per-vertex linear values) where
// the value is <= c. Sutherland-Hodgman clip followed by the shoelace formula.
double clipped_area(const Vec2* pts, const double* vals, int n, double c) {
  Vec2 poly[8];
  int m = 0;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double ui = vals[i], uj = vals[j];
    if (ui <= c) poly[m++] = pts[i];
    if ((ui < c && uj > c) || (ui > c && uj < c)) {
      const double tau = (c - ui) / (uj - ui);
      poly[m++] = pts[i] + tau * (pts[j] - pts[i]);
    }
  }
  double area = 0.0;
  for (int i = 1; i + 1 < m; ++i)
    area += 0.5 * cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
  return std::abs(area);
}

double segment_sublevel_length(double xa, double xb, double ua, double ub, double c) {
  const double len = xb - xa;
  if (ua <= c && ub <= c) return len;
  if (ua > c && ub > c) return 0.0;
  const double tau = (c - ua) / (ub - ua);
  return ua <= c ? tau * len : (1.0 - tau) * len;
}

// Measure of {alpha < u <= beta} within element e; plateaus resolved by their
// constant value.
double band_measure(const Mesh& mesh, const ScalarField& u, int e, double alpha, double beta) {
  const auto& el = mesh.elems[e];
  if (mesh.dim() == 1) {
    const double xa = mesh.nodes[el[0]].x, xb = mesh.nodes[el[1]].x;
    return segment_sublevel_length(xa, xb, u[el[0]], u[el[1]], beta) -
           segment_sublevel_length(xa, xb, u[el[0]], u[el[1]], alpha);
  }
  const Vec2 pts[3] = {mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]]};
  const double vals[3] = {u[el[0]], u[el[1]], u[el[2]]};
  if (vals[0] == vals[1] && vals[1] == vals[2])
    return (vals[0] > alpha && vals[0] <= beta) ? mesh.elem_measure(e) : 0.0;
  return clipped_area(pts, vals, 3, beta) - clipped_area(pts, vals, 3, alpha);
}

// Endpoint identity for stitching: either a crossing on a mesh edge or a mesh
// vertex (plateau edges). Crossing points on a shared edge coincide exactly
// because they are computed once per canonical edge orientation.
struct PointKey {
  std::int64_t a = 0, b = 0;  // edge (a<b) crossing, or (v, -1) vertex
  bool operator<(const PointKey& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
  bool operator==(const PointKey& o) const { return a == o.a && b == o.b; }
};

struct RawSegment {
  PointKey ka, kb;
  Vec2 pa, pb;
};

Vec2 edge_crossing(const Mesh& mesh, const ScalarField& u, int i, int j, double t) {
  if (i > j) std::swap(i, j);
  const double tau = (t - u[i]) / (u[j] - u[i]);
  return mesh.nodes[i] + tau * (mesh.nodes[j] - mesh.nodes[i]);
}

}  // namespace

double element_sublevel_measure(const Mesh& mesh, const ScalarField& u, int e, double c) {
  const auto& el = mesh.elems[e];
  if (mesh.dim() == 1) {
    return segment_sublevel_length(mesh.nodes[el[0]].x, mesh.nodes[el[1]].x, u[el[0]], u[el[1]],
                                   c);
  }
  const Vec2 pts[3] = {mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]]};
  const double vals[3] = {u[el[0]], u[el[1]], u[el[2]]};
  if (vals[0] == vals[1] && vals[1] == vals[2])
    return vals[0] <= c ? mesh.elem_measure(e) : 0.0;
  return clipped_area(pts, vals, 3, c);
}

std::vector<Polyline> level_set(const Mesh& mesh, const ScalarField& u, double t,
                                bool* plateau_flag) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("level_set: field length != node count");
  if (plateau_flag) *plateau_flag = false;

  if (mesh.dim() == 1) {
    // Crossing points, reported as single-vertex polylines.
    std::vector<Polyline> out;
    for (int e = 0; e < mesh.elem_count(); ++e) {
      const auto& el = mesh.elems[e];
      const double ua = u[el[0]], ub = u[el[1]];
      if (ua == t && ub == t) {
        if (plateau_flag) *plateau_flag = true;
        continue;
      }
      const bool ca = ua > t, cb = ub > t;
      if (ca == cb) continue;
      out.push_back({edge_crossing(mesh, u, el[0], el[1], t)});
    }
    return out;
  }

  std::vector<RawSegment> segments;
  std::vector<int> plateau_elems;
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const auto& el = mesh.elems[e];
    const double v0 = u[el[0]], v1 = u[el[1]], v2 = u[el[2]];
    if (v0 == t && v1 == t && v2 == t) {
      plateau_elems.push_back(e);
      continue;
    }
    const bool c0 = v0 > t, c1 = v1 > t, c2 = v2 > t;
    const int above = int(c0) + int(c1) + int(c2);
    if (above == 0 || above == 3) continue;
    // The lone vertex on one side determines the two crossed edges.
    int lone;
    if (above == 1)
      lone = c0 ? 0 : (c1 ? 1 : 2);
    else
      lone = !c0 ? 0 : (!c1 ? 1 : 2);
    const int i = el[lone], j = el[(lone + 1) % 3], k = el[(lone + 2) % 3];
    RawSegment s;
    s.ka = {std::min(i, j), std::max(i, j)};
    s.kb = {std::min(i, k), std::max(i, k)};
    s.pa = edge_crossing(mesh, u, i, j, t);
    s.pb = edge_crossing(mesh, u, i, k, t);
    segments.push_back(s);
  }

  if (!plateau_elems.empty()) {
    if (plateau_flag) *plateau_flag = true;
    // A plateau edge belongs to the boundary when its neighbor's opposite
    // vertex leaves the level. Edge -> opposite-vertex values map.
    std::map<std::pair<int, int>, std::vector<double>> opposite;
    for (int e = 0; e < mesh.elem_count(); ++e) {
      const auto& el = mesh.elems[e];
      for (int v = 0; v < 3; ++v) {
        int i = el[(v + 1) % 3], j = el[(v + 2) % 3];
        if (i > j) std::swap(i, j);
        opposite[{i, j}].push_back(u[el[v]]);
      }
    }
    std::set<std::pair<int, int>> emitted;
    for (int e : plateau_elems) {
      const auto& el = mesh.elems[e];
      for (int v = 0; v < 3; ++v) {
        int i = el[(v + 1) % 3], j = el[(v + 2) % 3];
        if (i > j) std::swap(i, j);
        if (emitted.count({i, j})) continue;
        const auto& opp = opposite[{i, j}];
        bool separating = false;
        for (double val : opp)
          if (val != t) separating = true;
        if (!separating) continue;
        emitted.insert({i, j});
        RawSegment s;
        s.ka = {i, -1};
        s.kb = {j, -1};
        s.pa = mesh.nodes[i];
        s.pb = mesh.nodes[j];
        segments.push_back(s);
      }
    }
  }

  // Stitch segments into chains: walk from endpoints of odd degree first
  // (open curves), then the remaining cycles, always taking the lowest
  // unvisited segment id.
  std::map<PointKey, std::vector<int>> incident;
  for (size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].ka].push_back(static_cast<int>(s));
    incident[segments[s].kb].push_back(static_cast<int>(s));
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> polylines;

  auto walk = [&](int start_seg, bool from_a) {
    Polyline line;
    int seg = start_seg;
    PointKey cur = from_a ? segments[seg].ka : segments[seg].kb;
    line.push_back(from_a ? segments[seg].pa : segments[seg].pb);
    while (true) {
      used[seg] = true;
      const bool cur_is_a = segments[seg].ka == cur;
      const PointKey next = cur_is_a ? segments[seg].kb : segments[seg].ka;
      line.push_back(cur_is_a ? segments[seg].pb : segments[seg].pa);
      cur = next;
      int candidate = -1;
      for (int cand : incident[cur])
        if (!used[cand]) {
          candidate = cand;
          break;
        }
      if (candidate < 0) break;
      seg = candidate;
    }
    return line;
  };

  for (size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    const bool a_open = incident[segments[s].ka].size() == 1;
    const bool b_open = incident[segments[s].kb].size() == 1;
    if (a_open || b_open)
      polylines.push_back(walk(static_cast<int>(s), a_open));
  }
  for (size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) polylines.push_back(walk(static_cast<int>(s), true));
  }
  return polylines;
}

double polyline_length(const Polyline& p) {
  double len = 0.0;
  for (size_t i = 1; i < p.size(); ++i) len += norm(p[i] - p[i - 1]);
  return len;
}

double total_length(const std::vector<Polyline>& ps) {
  double len = 0.0;
  for (const auto& p : ps) len += polyline_length(p);
  return len;
}

double coarea_perimeter(const Mesh& mesh, const ScalarField& u, double epsilon, Side side) {
  if (!(epsilon > 0.0)) throw DomainError("coarea_perimeter: epsilon must be positive");
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("coarea_perimeter: field length != node count");
  const double lo = side == Side::Plus ? 0.0 : -epsilon;
  const double hi = side == Side::Plus ? epsilon : 0.0;
  double sum = 0.0;
  for (int e = 0; e < mesh.elem_count(); ++e) {
    const double overlap = band_measure(mesh, u, e, lo, hi);
    if (overlap > 0.0) sum += overlap * norm(element_gradient(mesh, u, e));
  }
  return sum / epsilon;
}

std::vector<BandRow> thin_band_stats(const Mesh& mesh, const ScalarField& u,
                                     std::vector<double> epsilons) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("thin_band_stats: field length != node count");
  for (double e : epsilons)
    if (!(e > 0.0)) throw DomainError("thin_band_stats: epsilons must be positive");
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<BandRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    BandRow row;
    row.epsilon = eps;
    for (int e = 0; e < mesh.elem_count(); ++e) {
      const auto& el = mesh.elems[e];
      double overlap;
      const bool plateau = mesh.dim() == 2 && u[el[0]] == u[el[1]] && u[el[1]] == u[el[2]];
      if (plateau) {
        overlap = std::abs(u[el[0]]) <= eps ? mesh.elem_measure(e) : 0.0;
      } else {
        overlap = band_measure(mesh, u, e, -eps, eps);
      }
      if (overlap > 0.0) {
        row.band_measure += overlap;
        row.band_dirichlet += overlap * norm2(element_gradient(mesh, u, e));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

DimensionFit box_counting_dimension(const std::vector<Polyline>& polylines,
                                    const std::vector<double>& scales) {
  size_t total_vertices = 0;
  for (const auto& p : polylines) total_vertices += p.size();
  if (total_vertices == 0) throw DegenerateInput("box_counting_dimension: empty polylines");
  if (scales.size() < 3) throw DomainError("box_counting_dimension: needs >= 3 scales");
  for (double s : scales)
    if (!(s > 0.0)) throw DomainError("box_counting_dimension: scales must be positive");

  std::vector<double> xs, ys;
  for (double s : scales) {
    std::set<std::pair<std::int64_t, std::int64_t>> cells;
    auto mark = [&](Vec2 p) {
      cells.insert({static_cast<std::int64_t>(std::floor(p.x / s)),
                    static_cast<std::int64_t>(std::floor(p.y / s))});
    };
    for (const auto& line : polylines) {
      if (line.size() == 1) mark(line[0]);
      for (size_t i = 1; i < line.size(); ++i) {
        const Vec2 a = line[i - 1], b = line[i];
        // Sample the segment finer than the cell size; cheap and exact enough
        // for occupancy counting.
        const int steps = std::max(1, static_cast<int>(std::ceil(norm(b - a) / (0.25 * s))));
        for (int q = 0; q <= steps; ++q) mark(a + (static_cast<double>(q) / steps) * (b - a));
      }
    }
    xs.push_back(std::log(1.0 / s));
    ys.push_back(std::log(static_cast<double>(cells.size())));
  }

  const size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DimensionFit fit;
  fit.dimension = sxy / sxx;
  // All counts equal (a point set smaller than every scale) is a perfect
  // zero-dimensional fit.
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

FreeBoundarySet extract_free_boundary(const Mesh& mesh, const ScalarField& u, Side side,
                                      double epsilon) {
  FreeBoundarySet fb;
  fb.level = 0.0;
  fb.side = side;
  fb.epsilon = epsilon;
  fb.polylines = level_set(mesh, u, 0.0, &fb.plateau_flagged);
  fb.length_marching = total_length(fb.polylines);
  fb.perimeter_coarea = coarea_perimeter(mesh, u, epsilon, side);
  return fb;
}

}  // namespace twophase
