#include <cmath>

#include "doctest.h"
#include "twophase/errors.hpp"
#include "twophase/freeboundary.hpp"
#include "twophase/problem.hpp"

using namespace twophase;

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField planar_field(const Mesh& mesh, double offset) {
  ScalarField u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) u[i] = mesh.nodes[i].x - offset;
  return u;
}

ScalarField cone_field(const Mesh& mesh) {
  return sample(Coefficient::radial(0.5, 0.5, 0.25), mesh);
}

}  // namespace

TEST_CASE("level set of a planar field is one straight polyline") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 16, 16);
  const ScalarField u = planar_field(mesh, 0.5);
  bool plateau = false;
  const auto lines = level_set(mesh, u, 0.0, &plateau);
  CHECK_FALSE(plateau);
  CHECK(lines.size() == 1);
  CHECK(total_length(lines) == doctest::Approx(1.0).epsilon(1e-12));
  for (const Vec2& p : lines[0]) CHECK(p.x == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("level set of the cone converges to the circle length") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 96, 96);
  const auto lines = level_set(mesh, cone_field(mesh), 0.0);
  // Closed polyline around the circle of radius 1/4.
  CHECK(lines.size() == 1);
  CHECK(total_length(lines) == doctest::Approx(2.0 * kPi * 0.25).epsilon(5e-3));
  // Closed: first and last stitched point coincide.
  const Vec2 a = lines[0].front(), b = lines[0].back();
  CHECK(norm(a - b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("level set above a constant field is empty") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 8, 8);
  const ScalarField u(mesh.node_count(), 1.0);
  CHECK(level_set(mesh, u, 2.0).empty());
}

TEST_CASE("plateau elements are flagged and contribute separating edges") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 4, 4);
  ScalarField u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i)
    u[i] = std::max(0.0, mesh.nodes[i].x - 0.5);  // dead zone left of x = 0.5
  bool plateau = false;
  const auto lines = level_set(mesh, u, 0.0, &plateau);
  CHECK(plateau);
  CHECK_FALSE(lines.empty());
}

TEST_CASE("1D level set returns crossing points") {
  const Mesh mesh = build_mesh(Domain::interval(0.0, 1.0), 10);
  const ScalarField u = planar_field(mesh, 0.55);
  const auto pts = level_set(mesh, u, 0.0);
  CHECK(pts.size() == 1);
  CHECK(pts[0].size() == 1);
  CHECK(pts[0][0].x == doctest::Approx(0.55).epsilon(1e-13));
}

TEST_CASE("coarea perimeter") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 32, 32);
  SUBCASE("exact on the planar interface") {
    const ScalarField u = planar_field(mesh, 0.5);
    for (double eps : {0.01, 0.1, 0.25})
      CHECK(coarea_perimeter(mesh, u, eps, Side::Plus) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coarea_perimeter(mesh, u, 0.1, Side::Minus) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("strictly negative fields have an empty plus band") {
    const ScalarField u(mesh.node_count(), -2.0);
    CHECK(coarea_perimeter(mesh, u, 0.1, Side::Plus) == 0.0);
  }
  SUBCASE("epsilon must be positive") {
    const ScalarField u = planar_field(mesh, 0.5);
    CHECK_THROWS_AS(coarea_perimeter(mesh, u, 0.0, Side::Plus), DomainError);
  }
  SUBCASE("cone bands agree with the marching length at the half level") {
    const Mesh fine = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 128, 128);
    const ScalarField u = cone_field(fine);
    const double eps = 0.05;
    const double band = coarea_perimeter(fine, u, eps, Side::Plus);
    const double marching = total_length(level_set(fine, u, eps / 2.0));
    CHECK(band == doctest::Approx(marching).epsilon(0.02));
  }
}

TEST_CASE("thin band statistics") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 20, 20);
  SUBCASE("planar slab") {
    const ScalarField u = planar_field(mesh, 0.5);
    const auto rows = thin_band_stats(mesh, u, {0.1});
    CHECK(rows[0].band_measure == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rows[0].band_dirichlet == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("constant one field has empty bands below one") {
    const ScalarField u(mesh.node_count(), 1.0);
    const auto rows = thin_band_stats(mesh, u, {0.5, 0.99});
    for (const auto& r : rows) {
      CHECK(r.band_measure == 0.0);
      CHECK(r.band_dirichlet == 0.0);
    }
  }
  SUBCASE("columns are nondecreasing in epsilon") {
    const ScalarField u = cone_field(mesh);
    const auto rows = thin_band_stats(mesh, u, {0.1, 0.02, 0.06, 0.04, 0.08});
    for (size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].epsilon > rows[i - 1].epsilon);  // sorted ascending
      CHECK(rows[i].band_measure >= rows[i - 1].band_measure);
      CHECK(rows[i].band_dirichlet >= rows[i - 1].band_dirichlet);
    }
  }
}

TEST_CASE("sublevel measures are exact for linear interpolants") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 8, 8);
  const ScalarField u = planar_field(mesh, 0.0);  // u = x
  double below_half = 0.0;
  for (int e = 0; e < mesh.elem_count(); ++e)
    below_half += element_sublevel_measure(mesh, u, e, 0.5);
  CHECK(below_half == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("box counting dimension") {
  SUBCASE("a straight segment is one dimensional") {
    // Irrational slope: rational directions graze lattice corners and
    // systematically undercount boxes.
    const double th = 0.6;
    Polyline seg{{0.08, 0.13}, {0.08 + std::cos(th), 0.13 + std::sin(th)}};
    const auto fit =
        box_counting_dimension({seg}, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(std::abs(fit.dimension - 1.0) <= 0.05);
    CHECK(fit.r2 >= 0.98);
  }
  SUBCASE("a single point is zero dimensional") {
    Polyline pt{{0.37, 0.21}};
    const auto fit = box_counting_dimension({pt}, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(std::abs(fit.dimension) <= 0.05);
  }
  SUBCASE("a circle is one dimensional") {
    Polyline circle;
    for (int i = 0; i <= 720; ++i) {
      const double a = 2.0 * kPi * i / 720.0;
      circle.push_back({0.5 + 0.3 * std::cos(a), 0.5 + 0.3 * std::sin(a)});
    }
    const auto fit =
        box_counting_dimension({circle}, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    CHECK(std::abs(fit.dimension - 1.0) <= 0.1);
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(box_counting_dimension({}, {0.1, 0.05, 0.025}), DegenerateInput);
    Polyline seg{{0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(box_counting_dimension({seg}, {0.1, 0.05}), DomainError);
  }
}

TEST_CASE("free boundary extraction bundles the measurements") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 32, 32);
  const ScalarField u = planar_field(mesh, 0.5);
  const FreeBoundarySet fb = extract_free_boundary(mesh, u, Side::Plus, 0.1);
  CHECK(fb.length_marching == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fb.perimeter_coarea == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fb.epsilon == 0.1);
  CHECK_FALSE(fb.plateau_flagged);
}

TEST_CASE("coarea identity: band average equals the level average of lengths") {
  const Mesh mesh = build_mesh(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 96, 96);
  const ScalarField u = cone_field(mesh);
  const double eps = 0.08;
  const double band = coarea_perimeter(mesh, u, eps, Side::Plus);
  // Midpoint quadrature of (1/eps) int_0^eps length(level t) dt.
  const int quad = 16;
  double avg = 0.0;
  for (int j = 0; j < quad; ++j)
    avg += total_length(level_set(mesh, u, eps * (j + 0.5) / quad));
  avg /= quad;
  CHECK(band == doctest::Approx(avg).epsilon(0.01));
}
