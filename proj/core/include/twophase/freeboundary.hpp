#pragma once

#include <vector>

#include "twophase/mesh.hpp"

namespace twophase {

using Polyline = std::vector<Vec2>;

enum class Side { Plus, Minus };

/// A measured discrete free boundary: the zero level set of the field with
/// its marching length and the band-averaged (coarea) perimeter of one side.
struct FreeBoundarySet {
  std::vector<Polyline> polylines;
  double level = 0.0;
  Side side = Side::Plus;
  double length_marching = 0.0;
  double perimeter_coarea = 0.0;
  double epsilon = 0.0;
  bool plateau_flagged = false;  // some elements sit entirely on the level
};

/// Marching extraction of the level set {u = t}: one segment per crossed
/// triangle (a point per crossed 1D cell), stitched into polylines with
/// deterministic ordering. Elements whose nodal values all equal t are
/// plateaus; their edges bordering off-level neighbors are emitted and the
/// plateau flag (optional out-parameter) is raised.
std::vector<Polyline> level_set(const Mesh& mesh, const ScalarField& u, double t,
                                bool* plateau_flag = nullptr);

double polyline_length(const Polyline& p);
double total_length(const std::vector<Polyline>& ps);

/// Band-averaged perimeter from the coarea identity: (1/eps) times the
/// integral of |grad u| over {0 < u < eps} (side Plus) or {-eps < u < 0}
/// (side Minus), with the band overlap computed exactly per element from the
/// linear interpolant.
double coarea_perimeter(const Mesh& mesh, const ScalarField& u, double epsilon, Side side);

struct BandRow {
  double epsilon = 0.0;
  double band_measure = 0.0;    // measure of {|u| <= eps}
  double band_dirichlet = 0.0;  // integral of |grad u|^2 over the band
};

/// Exact band statistics per epsilon, sorted ascending; both columns are
/// nondecreasing in epsilon.
std::vector<BandRow> thin_band_stats(const Mesh& mesh, const ScalarField& u,
                                     std::vector<double> epsilons);

struct DimensionFit {
  double dimension = 0.0;
  double r2 = 0.0;
};

/// Least-squares slope of log N(s) against log(1/s), where N counts grid
/// cells of size s touched by the polylines. Needs >= 3 scales.
DimensionFit box_counting_dimension(const std::vector<Polyline>& polylines,
                                    const std::vector<double>& scales);

/// Zero-level extraction plus the side's coarea perimeter at the given band
/// width, bundled for reporting.
FreeBoundarySet extract_free_boundary(const Mesh& mesh, const ScalarField& u, Side side,
                                      double epsilon);

/// Area (length in 1D) of {x in element e : u(x) <= c} for the linear
/// interpolant. Exposed for tests and exact-quadrature oracles.
double element_sublevel_measure(const Mesh& mesh, const ScalarField& u, int e, double c);

}  // namespace twophase
