#include <cmath>

#include "curvlab/catalog.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/sample_grid.hpp"
#include "doctest.h"

using namespace curvlab;

namespace {

std::vector<Point> seeded_points(const Chart& chart, std::size_t count, std::uint64_t seed = 43) {
  return SampleGrid::random(chart, count, seed).points();
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

// Sign changes of V on a uniform grid of (0, 1], refined by linear interpolation.
std::vector<double> scan_roots(int n, double m, int samples) {
  std::vector<double> roots;
  double t0 = 1.0 / samples, v0 = schwarzschild_lapse_squared(n, m, t0);
  for (int k = 2; k <= samples; ++k) {
    const double t1 = static_cast<double>(k) / samples;
    const double v1 = schwarzschild_lapse_squared(n, m, t1);
    if ((v0 < 0.0) != (v1 < 0.0)) roots.push_back(t0 + (t1 - t0) * v0 / (v0 - v1));
    t0 = t1;
    v0 = v1;
  }
  return roots;
}

double max_diff(const Tensor& a, const Tensor& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("admissible Schwarzschild masses") {
  CHECK(schwarzschild_mass_bound(3) == doctest::Approx(std::sqrt(1.0 / 27.0)).epsilon(1e-15));
  CHECK(schwarzschild_mass_bound(3) == doctest::Approx(0.19245).epsilon(1e-5));
  CHECK(schwarzschild_mass_bound(4) == doctest::Approx(0.125).epsilon(1e-15));
  for (double m : {0.2, 0.25, 0.0, -0.1}) {
    CHECK(kind_of([m] { build("schwarzschild", 3, {{"m", m}}); }) == ErrorKind::InadmissibleMass);
  }
  CHECK(kind_of([] { schwarzschild_roots(3, 0.2); }) == ErrorKind::InadmissibleMass);
  CHECK_NOTHROW(build("schwarzschild", 3, {{"m", 0.19}}, LoadCheck::None));
}

TEST_CASE("Schwarzschild roots against a dense sign scan") {
  const auto [r1, r2] = schwarzschild_roots(3, 0.1);
  CHECK(r1 < r2);
  CHECK(r1 > 0.2);
  CHECK(r1 < 0.3);
  CHECK(r2 > 0.85);
  CHECK(r2 < 0.95);
  CHECK(std::abs(schwarzschild_lapse_squared(3, 0.1, r1)) <= 1e-12);
  CHECK(std::abs(schwarzschild_lapse_squared(3, 0.1, r2)) <= 1e-12);
  const std::vector<double> scan = scan_roots(3, 0.1, 1000000);
  REQUIRE(scan.size() == 2);
  CHECK(std::abs(scan[0] - r1) <= 1e-6);
  CHECK(std::abs(scan[1] - r2) <= 1e-6);

  const auto [s1, s2] = schwarzschild_roots(4, 0.05);
  CHECK(std::abs(schwarzschild_lapse_squared(4, 0.05, s1)) <= 1e-12);
  CHECK(std::abs(schwarzschild_lapse_squared(4, 0.05, s2)) <= 1e-12);
  const std::vector<double> scan4 = scan_roots(4, 0.05, 1000000);
  REQUIRE(scan4.size() == 2);
  CHECK(std::abs(scan4[0] - s1) <= 1e-6);
  CHECK(std::abs(scan4[1] - s2) <= 1e-6);
}

TEST_CASE("roots approach the double root at the extremal mass") {
  const double bound = schwarzschild_mass_bound(3);
  const auto [r1, r2] = schwarzschild_roots(3, bound * (1.0 - 1e-8));
  const double star = 1.0 / std::sqrt(3.0);
  CHECK(std::abs(r1 - star) <= 1e-3);
  CHECK(std::abs(r2 - star) <= 1e-3);
  CHECK(r1 < star);
  CHECK(r2 > star);
}

TEST_CASE("roots are monotone in the mass") {
  double prev1 = 0.0, prev2 = 1.0;
  for (int k = 0; k < 9; ++k) {
    const double m = 0.02 + 0.02 * k;
    const auto [r1, r2] = schwarzschild_roots(3, m);
    CHECK(r1 > prev1);
    CHECK(r2 < prev2);
    prev1 = r1;
    prev2 = r2;
  }
}

TEST_CASE("catalog charts and declared constants") {
  const CatalogSpace c = build("cylinder", 3);
  CHECK(c.chart.domain()[0].hi - c.chart.domain()[0].lo == doctest::Approx(M_PI / std::sqrt(3.0)));
  for (int n : {3, 4, 5}) {
    const CatalogSpace h = build("hemisphere", n);
    for (const Point& p : seeded_points(h.chart, 4)) CHECK(std::abs(scalar_curvature(h.chart, p) - n * (n - 1.0)) <= 1e-7);
    const CatalogSpace cyl = build("cylinder", n);
    const Point p = seeded_points(cyl.chart, 1).front();
    const Tensor g = cyl.chart.metric(p);
    // Fiber block is (n-2)/n times the round sphere; the first fiber angle has unit round coefficient.
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(g(1, 1) == doctest::Approx((n - 2.0) / n));
  }
  CHECK(build("euclidean_ball", 3).declared.kappa == 1.0);
  CHECK(build("spherical_ball", 3).declared.kappa == 1.0);
  CHECK(build("schwarzschild", 3).declared.kappa == 0.0);
  CHECK(build("hemisphere", 3).declared.f_nonnegative);

  const CatalogSpace ps = build("product_spheres", 4);
  CHECK_FALSE(ps.triple.has_value());
  CHECK_THROWS_AS(ps.require_triple(), Error);
  CHECK(kind_of([] { build("product_spheres", 3); }) == ErrorKind::UnsupportedDimension);
  CHECK(kind_of([] { build("perturbed_flat", 7); }) == ErrorKind::UnsupportedDimension);
  CHECK(kind_of([] { build("hemisphere", 2); }) == ErrorKind::UnsupportedDimension);
  CHECK(kind_of([] { build("nariai", 3); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build("hemisphere", 3, {{"margin", -0.1}}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("potential is positive inside and vanishes at the boundary") {
  for (const char* id : {"hemisphere", "cylinder", "schwarzschild", "euclidean_ball", "spherical_ball"}) {
    const CatalogSpace s = build(id, 3);
    const SampleGrid grid = SampleGrid::uniform(s.chart, 16, 2);
    for (const Point& p : grid.points()) CHECK(s.triple->potential.f(p) > 0.0);
    // The outer radial end is the boundary f = 0 for every triple.
    Point q = grid.points().front();
    q[0] = s.chart.domain()[0].hi;
    CHECK(std::abs(s.triple->potential.f(q)) <= 1e-7);
    q[0] = s.chart.domain()[0].hi - s.chart.margin()[0];
    CHECK(s.triple->potential.f(q) > 0.0);
  }
}

TEST_CASE("sectional curvature is nonnegative on the hemisphere and the cylinder") {
  for (const char* id : {"hemisphere", "cylinder"}) {
    const CatalogSpace s = build(id, 3);
    const SampleGrid grid = SampleGrid::uniform(s.chart, 8, 3);
    for (const Point& p : grid.points()) {
      const Geometry geo = geometry_at(s.chart, p);
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          std::vector<double> u(3, 0.0), v(3, 0.0);
          u[static_cast<std::size_t>(a)] = 1.0;
          v[static_cast<std::size_t>(b)] = 1.0;
          CHECK(sectional_curvature(geo, u, v) >= -1e-8);
        }
    }
  }
}

TEST_CASE("warped closed form agrees with the chart engine") {
  for (int n : {3, 4}) {
    for (const char* id : {"hemisphere", "cylinder", "schwarzschild", "euclidean_ball", "spherical_ball"}) {
      const CatalogSpace s = build(id, n);
      REQUIRE(s.chart.warped().has_value());
      for (const Point& p : seeded_points(s.chart, 20)) {
        const WarpedCurvature w = warped_curvature(*s.chart.warped(), p, n);
        const Geometry geo = geometry_at(s.chart, p);
        CHECK(max_diff(w.riemann, geo.riemann) <= 1e-6);
        CHECK(max_diff(w.ricci, geo.ricci) <= 1e-6);
        CHECK(std::abs(w.scalar - geo.scalar) <= 1e-6);
      }
    }
  }
}

TEST_CASE("warped closed-form sectional curvatures") {
  const CatalogSpace h = build("hemisphere", 4);
  for (const Point& p : seeded_points(h.chart, 3)) {
    const WarpedCurvature w = warped_curvature(*h.chart.warped(), p, 4);
    CHECK(w.radial_sectional == doctest::Approx(1.0));
    CHECK(w.fiber_sectional == doctest::Approx(1.0));
  }
  const CatalogSpace c = build("cylinder", 4);
  for (const Point& p : seeded_points(c.chart, 3)) {
    const WarpedCurvature w = warped_curvature(*c.chart.warped(), p, 4);
    CHECK(std::abs(w.radial_sectional) <= 1e-12);
    CHECK(w.fiber_sectional == doctest::Approx(2.0));
  }
  const WarpedProfile bad{[](double) { return Jet1{1.0, 0.0, 0.0}; },
                          [](double) { return Jet1{-1.0, 0.0, 0.0}; }};
  const Point p{0.5, 1.0, 1.0};
  CHECK(kind_of([&] { warped_curvature(bad, p, 3); }) == ErrorKind::NonpositiveWarp);
}

TEST_CASE("warped closed form beyond the general chart cap") {
  const WarpedProfile sphere{[](double) { return Jet1{1.0, 0.0, 0.0}; },
                             [](double t) {
                               return Jet1{std::sin(t) * std::sin(t), std::sin(2.0 * t), 2.0 * std::cos(2.0 * t)};
                             }};
  Point p(7, M_PI / 2.0);
  p[0] = 0.7;
  p.back() = 1.0;
  const WarpedCurvature w = warped_curvature(sphere, p, 7);
  CHECK(w.scalar == doctest::Approx(42.0));
  CHECK(w.fiber_sectional == doctest::Approx(1.0));
}
