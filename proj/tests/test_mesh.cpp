#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "test_support.hpp"

using namespace splinepde;

TEST_CASE("two-triangle square topology") {
  const Triangulation t = testsup::square_mesh();
  CHECK(t.num_triangles() == 2);
  CHECK(t.num_vertices() == 4);
  CHECK(t.edges.size() == 5);
  CHECK(t.boundary_edges.size() == 4);
  CHECK(mesh_metrics(t).h == Catch::Approx(std::sqrt(2.0)));
  // Euler relation for a simply connected domain
  CHECK(t.num_vertices() - static_cast<int>(t.edges.size()) + t.num_triangles() == 1);
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}}, {{0, 0, 1}}), DegenerateTriangle);
  CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}),
                  DegenerateTriangle);
  CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}),
                  IndexOutOfRange);
  CHECK_THROWS_AS(
      build_triangulation({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.4, 0.4}},
                          {{0, 1, 2}, {1, 3, 2}, {0, 1, 4}}),
      NonManifoldEdge);
}

TEST_CASE("clockwise input is reoriented") {
  const Triangulation t = build_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(signed_area(t.triangle(0)) > 0.0);
}

TEST_CASE("uniform refinement") {
  Triangulation t = testsup::square_mesh();
  const double area0 = area(t.triangle(0)) + area(t.triangle(1));
  Triangulation r = uniform_refine(t);
  CHECK(r.num_triangles() == 8);
  CHECK(r.num_vertices() == 9);
  CHECK(r.level == 1);
  CHECK(mesh_metrics(r).h == Catch::Approx(mesh_metrics(t).h / 2.0));

  // children stay inside the parent
  for (int child = 0; child < 4; ++child) {
    const Triangle c = r.triangle(child);
    for (const auto& v : c.v) {
      const auto b = barycentric(t.triangle(0), v);
      CHECK(b[0] >= -1e-14);
      CHECK(b[1] >= -1e-14);
      CHECK(b[2] >= -1e-14);
    }
  }

  for (int i = 0; i < 4; ++i) r = uniform_refine(r);
  CHECK(r.num_triangles() == 2048);
  double total = 0.0;
  for (int ti = 0; ti < r.num_triangles(); ++ti) total += area(r.triangle(ti));
  CHECK(total == Catch::Approx(area0).epsilon(1e-12));
  CHECK(r.num_vertices() - static_cast<int>(r.edges.size()) + r.num_triangles() == 1);
}

TEST_CASE("mesh metrics") {
  const Triangulation t = build_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const MeshMetrics m = mesh_metrics(t);
  CHECK(m.rho_T[0] == Catch::Approx((2.0 - std::sqrt(2.0)) / 2.0));
  CHECK(m.shape_parameter >= 2.0);

  const double s3 = std::sqrt(3.0);
  const Triangulation eq =
      build_triangulation({{0, 0}, {1, 0}, {0.5, s3 / 2.0}}, {{0, 1, 2}});
  const MeshMetrics me = mesh_metrics(eq);
  CHECK(me.h_T[0] / me.rho_T[0] == Catch::Approx(2.0 * s3).epsilon(1e-12));
}

TEST_CASE("point location") {
  const Triangulation t = testsup::square_mesh();
  const Point c = (1.0 / 3.0) * (t.triangle(0).v[0] + t.triangle(0).v[1] + t.triangle(0).v[2]);
  auto [ti, bary] = t.locate_point(c);
  CHECK(ti == 0);
  for (int l = 0; l < 3; ++l) CHECK(bary[l] == Catch::Approx(1.0 / 3.0).margin(1e-12));

  // diagonal midpoint: lowest index wins
  CHECK(t.locate_point({0.5, 0.5}).first == 0);
  CHECK_THROWS_AS(t.locate_point({2.0, 2.0}), PointOutsideDomain);

  testsup::Rng rng(7);
  const Triangulation r = uniform_refine(uniform_refine(t));
  for (int i = 0; i < 200; ++i) {
    const Point p{rng.next(), rng.next()};
    auto [tj, b] = r.locate_point(p);
    const Triangle g = r.triangle(tj);
    const Point rec = b[0] * g.v[0] + b[1] * g.v[1] + b[2] * g.v[2];
    CHECK(dist(rec, p) < 1e-12);
  }
}

TEST_CASE("mesh file round-trip") {
  const Triangulation t = uniform_refine(testsup::square_mesh());
  std::stringstream ss;
  write_mesh(ss, t);
  const Triangulation u = read_mesh(ss);
  REQUIRE(u.num_triangles() == t.num_triangles());
  REQUIRE(u.num_vertices() == t.num_vertices());
  for (int i = 0; i < t.num_vertices(); ++i)
    CHECK(dist(u.vertices[i], t.vertices[i]) == 0.0);

  std::stringstream bad("not a mesh");
  CHECK_THROWS_AS(read_mesh(bad), IoError);
}
