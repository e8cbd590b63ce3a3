#include <cmath>
#include <numbers>

#include "curvlab/catalog.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/fd.hpp"
#include "curvlab/sample_grid.hpp"
#include "doctest.h"

using namespace curvlab;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Flat chart whose first coordinate spans [lo, hi]; test functions depend on x only.
Chart line_chart(double lo, double hi) {
  return Chart("line", {"x", "y", "z"}, {{lo, hi}, {-1.0, 1.0}, {-1.0, 1.0}}, {0.0, 0.0, 0.0},
               [](std::span<const double>) { return identity(3); });
}

// Unit S³ from its metric alone, so every derivative goes through FD.
Chart fd_sphere_chart() {
  const Chart analytic = round_sphere_chart(3);
  return Chart("s3_fd", analytic.coords(), analytic.domain(), analytic.margin(),
               [analytic](std::span<const double> p) { return analytic.metric(p); });
}

ScalarField value_only(std::function<double(std::span<const double>)> f) {
  ScalarField s;
  s.value = std::move(f);
  return s;
}

}  // namespace

TEST_CASE("metric components of the round sphere, flat box and cylinder") {
  const Chart sphere = round_sphere_chart(3);
  const Point p{0.7, 1.1, 2.0};
  const Tensor g = metric_at(sphere, p);
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(std::sin(0.7) * std::sin(0.7)));
  CHECK(g(2, 2) == doctest::Approx(std::pow(std::sin(0.7) * std::sin(1.1), 2)));
  CHECK(g(0, 1) == 0.0);

  const Chart box = euclidean_box_chart(4);
  CHECK((metric_at(box, Point{0.1, -0.2, 0.3, 0.0}) - identity(4)).max_abs() == 0.0);

  for (int n : {3, 4, 5}) {
    const CatalogSpace cyl = build("cylinder", n);
    const Chart round = round_sphere_chart(n);
    Point q(static_cast<std::size_t>(n), 1.0);
    const Tensor gc = metric_at(cyl.chart, q);
    const Tensor gr = metric_at(round, q);
    const double c = (n - 2.0) / n;
    CHECK(gc(0, 0) == doctest::Approx(1.0));
    // Fiber components of a round S^{n-1} do not depend on t beyond sin²t;
    // divide it out to compare against the unit-fiber factors.
    const double s2 = std::sin(q[0]) * std::sin(q[0]);
    for (int a = 1; a < n; ++a) CHECK(gc(a, a) == doctest::Approx(c * gr(a, a) / s2));
  }
}

TEST_CASE("points outside the sampling region are rejected") {
  const Chart sphere = round_sphere_chart(3);
  try {
    metric_at(sphere, Point{0.01, 1.0, 1.0});
    FAIL("expected PointOutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointOutOfDomain);
  }
}

TEST_CASE("finite-difference partials of closed-form functions") {
  const Chart line = line_chart(-10.0, 10.0);
  const auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const std::array<int, 1> d1{0};
  const std::array<int, 2> d2{0, 0};
  const std::array<int, 3> d3{0, 0, 0};
  CHECK(std::abs(fd::derivative(sq, line, Point{3.0, 0.0, 0.0}, d1, line.fd()) - 6.0) <= 1e-9);

  const auto wave = [](std::span<const double> x) { return std::sin(kSqrt3 * x[0]); };
  const double want = -3.0 * std::sin(kSqrt3 * 0.5);
  CHECK(std::abs(fd::derivative(wave, line, Point{0.5, 0.0, 0.0}, d2, line.fd()) - want) <= 1e-7);

  const auto flat = [](std::span<const double>) { return 2.5; };
  for (std::span<const int> m : {std::span<const int>(d1), std::span<const int>(d2), std::span<const int>(d3)}) {
    CHECK(std::abs(fd::derivative(flat, line, Point{0.0, 0.0, 0.0}, m, line.fd())) <= 1e-10);
  }
}

TEST_CASE("stencils that leave the chart box are rejected") {
  const Chart line = line_chart(0.0, 1.0);
  const auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const std::array<int, 1> d1{0};
  try {
    fd::derivative(sq, line, Point{0.0005, 0.0, 0.0}, d1, line.fd());
    FAIL("expected StencilOutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StencilOutOfDomain);
  }
}

TEST_CASE("plain central differences converge at second order") {
  const Chart line = line_chart(-10.0, 10.0);
  const auto f = [](std::span<const double> x) { return std::exp(std::sin(x[0])); };
  const std::array<int, 1> d1{0};
  const double x0 = 0.4;
  const double exact = std::cos(x0) * std::exp(std::sin(x0));
  const double e1 = std::abs(fd::difference(f, line, Point{x0, 0.0, 0.0}, d1, 0.02) - exact);
  const double e2 = std::abs(fd::difference(f, line, Point{x0, 0.0, 0.0}, d1, 0.01) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("Christoffel symbols") {
  const Chart box = euclidean_box_chart(3);
  CHECK(christoffel(box, Point{0.1, 0.2, 0.3}).max_abs() == 0.0);

  // Γ^t_θθ = -sin t cos t and Γ^θ_tθ = cot t, as on the unit S² polar chart.
  const Chart s3 = fd_sphere_chart();
  CHECK_FALSE(s3.has_analytic_partials());
  for (double t : {0.3, 1.0, 2.2}) {
    const Tensor gam = christoffel(s3, Point{t, 1.0, 2.0});
    CHECK(std::abs(gam(0, 1, 1) + std::sin(t) * std::cos(t)) <= 1e-8);
    CHECK(std::abs(gam(1, 0, 1) - std::cos(t) / std::sin(t)) <= 1e-8);
  }

  const CatalogSpace cyl = build("cylinder", 4);
  const Tensor gam = christoffel(cyl.chart, Point{0.9, 1.0, 1.3, 2.0});
  for (int a = 1; a < 4; ++a)
    for (int b = 1; b < 4; ++b) CHECK(std::abs(gam(0, a, b)) <= 1e-8);
}

TEST_CASE("Riemann tensor: flat, constant curvature and the cylinder fiber") {
  const Chart box = euclidean_box_chart(3);
  CHECK(riemann(box, Point{0.1, 0.2, 0.3}).max_abs() <= 1e-9);

  const Chart s3 = round_sphere_chart(3);
  const Point p{1.2, 0.8, 2.5};
  const Geometry geo = geometry_at(s3, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double want = geo.g(i, i) * geo.g(j, j) - geo.g(i, j) * geo.g(i, j);
      CHECK(std::abs(geo.riemann(i, j, i, j) - want) <= 1e-7);
    }
  // R_jl = g^ik R_ijkl = (n-1) g_jl on the unit sphere.
  CHECK((geo.ricci - 2.0 * geo.g).max_abs() <= 1e-7);

  const CatalogSpace cyl = build("cylinder", 3);
  const Geometry gc = geometry_at(cyl.chart, Point{0.5, 1.0, 2.0});
  const std::array<double, 3> u{0, 1, 0}, v{0, 0, 1};
  CHECK(std::abs(sectional_curvature(gc, u, v) - 3.0) <= 1e-7);
}

TEST_CASE("Riemann symmetries hold on catalog and perturbed metrics") {
  for (const char* id : {"hemisphere", "cylinder", "schwarzschild", "euclidean_ball", "spherical_ball"}) {
    const CatalogSpace s = build(id, 4);
    const SampleGrid grid = SampleGrid::random(s.chart, 5, 11);
    for (const Point& p : grid.points()) CHECK(riemann_symmetry_defect(riemann(s.chart, p)) <= 1e-9);
  }
  for (int n : {3, 4}) {
    const CatalogSpace s = build("perturbed_flat", n);
    const SampleGrid grid = SampleGrid::random(s.chart, 5, 11);
    for (const Point& p : grid.points()) CHECK(riemann_symmetry_defect(riemann(s.chart, p)) <= 1e-9);
  }
}

TEST_CASE("Ricci and scalar curvature") {
  for (int n : {3, 4, 5, 6}) {
    const CatalogSpace h = build("hemisphere", n);
    const SampleGrid grid = SampleGrid::random(h.chart, 4, 3);
    for (const Point& p : grid.points()) CHECK(std::abs(scalar_curvature(h.chart, p) - n * (n - 1.0)) <= 1e-7);
  }
  const Chart box = euclidean_box_chart(3);
  CHECK(ricci(box, Point{0.0, 0.0, 0.0}).max_abs() == 0.0);
  CHECK(scalar_curvature(box, Point{0.0, 0.0, 0.0}) == 0.0);

  const CatalogSpace pf = build("perturbed_flat", 4);
  const Point p{0.2, -0.3, 0.1, 0.4};
  const Geometry geo = geometry_at(pf.chart, p);
  CHECK(geo.ricci.symmetry_defect() <= 1e-12);
  CHECK(std::abs(trace(traceless_ricci(geo), 0, 1, geo.ginv).value()) <= 1e-10);
  CHECK(std::abs(trace(geo.ricci, 0, 1, geo.ginv).value() - geo.scalar) <= 1e-12);
}

TEST_CASE("cylinder traceless Ricci saturates the pinching bound") {
  for (int n : {3, 4, 5}) {
    const CatalogSpace cyl = build("cylinder", n);
    Point p(static_cast<std::size_t>(n), 1.0);
    const Geometry geo = geometry_at(cyl.chart, p);
    const double r = n * (n - 1.0);
    const double t = norm_squared(traceless_ricci(geo), geo.ginv);
    CHECK(std::abs(t - r) <= 1e-6);
    CHECK(std::abs(t - r * r / (n * (n - 1.0))) <= 1e-6);
  }
}

TEST_CASE("sectional curvature") {
  const Chart s3 = round_sphere_chart(3);
  const Point p{1.0, 1.4, 0.6};
  const std::array<double, 3> u{1.0, 0.3, -0.2}, v{0.1, -0.5, 2.0};
  CHECK(std::abs(sectional_curvature(s3, p, u, v) - 1.0) <= 1e-7);

  const CatalogSpace cyl = build("cylinder", 3);
  const std::array<double, 3> dt{1.0, 0.0, 0.0}, w{0.0, 0.7, -0.4};
  CHECK(std::abs(sectional_curvature(cyl.chart, Point{0.5, 1.2, 2.0}, dt, w)) <= 1e-7);

  const Chart box = euclidean_box_chart(3);
  CHECK(sectional_curvature(box, Point{0.0, 0.0, 0.0}, u, v) == 0.0);

  const std::array<double, 3> u2{2.0, 0.6, -0.4};
  try {
    sectional_curvature(s3, p, u, u2);
    FAIL("expected DegeneratePlane");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegeneratePlane);
  }
}

TEST_CASE("covariant derivatives") {
  for (int n : {3, 4}) {
    const CatalogSpace pf = build("perturbed_flat", n);
    const SampleGrid grid = SampleGrid::random(pf.chart, 5, 2);
    for (const Point& p : grid.points()) {
      CHECK(covariant_derivative(metric_field(pf.chart), pf.chart, p).max_abs() <= 1e-7);
      CHECK(contracted_bianchi_residual(pf.chart, p) <= 1e-5);
    }
  }
  const CatalogSpace cyl = build("cylinder", 4);
  CHECK(covariant_derivative(ricci_field(cyl.chart), cyl.chart, Point{0.8, 1.0, 2.0, 3.0}).max_abs() <= 1e-6);

  // On a scalar field the covariant derivative is the gradient.
  const Chart s3 = round_sphere_chart(3);
  const ScalarField f = value_only([](std::span<const double> q) { return std::cos(q[0]) * std::sin(q[1]); });
  const TensorField as_tensor = [&f](std::span<const double> q) { return Tensor::scalar(f(q)); };
  const Point p{1.0, 0.9, 2.0};
  const Tensor d = covariant_derivative(as_tensor, s3, p);
  const std::vector<double> grad = gradient(f, s3, p);
  for (int i = 0; i < 3; ++i) CHECK(d[static_cast<std::size_t>(i)] == doctest::Approx(grad[static_cast<std::size_t>(i)]));
  CHECK(grad[0] == doctest::Approx(-std::sin(1.0) * std::sin(0.9)).epsilon(1e-9));
}

TEST_CASE("Hessian and Laplacian") {
  const Chart s3 = round_sphere_chart(3);
  const ScalarField f = value_only([](std::span<const double> q) { return std::cos(q[0]); });
  for (const Point& p : {Point{0.4, 1.0, 1.0}, Point{1.3, 2.0, 4.0}, Point{2.5, 0.5, 0.2}}) {
    const Tensor hess = hessian(f, s3, p);
    const Tensor g = metric_at(s3, p);
    CHECK((hess + std::cos(p[0]) * g).max_abs() <= 1e-7);
    CHECK(hess.symmetry_defect() <= 1e-9);
    CHECK(std::abs(laplacian(f, s3, p) + 3.0 * std::cos(p[0])) <= 1e-7);
  }

  const Chart box = euclidean_box_chart(3);
  const ScalarField lin = value_only([](std::span<const double> q) { return 2.0 * q[0] - q[1] + 0.5 * q[2]; });
  CHECK(hessian(lin, box, Point{0.1, 0.2, 0.3}).max_abs() <= 1e-9);

  for (int n : {3, 4}) {
    const CatalogSpace cyl = build("cylinder", n);
    const double k = std::sqrt(static_cast<double>(n));
    const ScalarField w = value_only([k](std::span<const double> q) { return std::sin(k * q[0]); });
    Point p(static_cast<std::size_t>(n), 1.0);
    p[0] = 0.3;
    CHECK(std::abs(laplacian(w, cyl.chart, p) + n * w(p)) <= 1e-7);
  }
}

TEST_CASE("Ricci identity and divergence of Riemann") {
  const Chart box = euclidean_box_chart(3);
  CHECK(ricci_identity_residual(box, Point{0.1, 0.0, -0.2}) <= 1e-9);
  CHECK(bianchi_residual(box, Point{0.1, 0.0, -0.2}) <= 1e-9);

  const Chart s3 = round_sphere_chart(3);
  CHECK(ricci_identity_residual(s3, Point{1.0, 1.2, 2.0}) <= 1e-5);
  CHECK(bianchi_residual(s3, Point{1.0, 1.2, 2.0}) <= 1e-5);

  const CatalogSpace pf = build("perturbed_flat", 4, {{"seed", 42}, {"amplitude", 0.05}});
  const SampleGrid grid = SampleGrid::random(pf.chart, 4, 5);
  for (const Point& p : grid.points()) {
    CHECK(ricci_identity_residual(pf.chart, p) <= 1e-4);
    CHECK(bianchi_residual(pf.chart, p) <= 1e-5);
  }
}

TEST_CASE("analytic and finite-difference metric jets agree") {
  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  const Point p = SampleGrid::random(s.chart, 1, 9).points().front();
  const MetricJet a = s.chart.jet(p);
  const MetricJet f = s.chart.fd_jet(p);
  CHECK((a.dg - f.dg).max_abs() <= 1e-6);
  CHECK((a.ddg - f.ddg).max_abs() <= 1e-4);
}

TEST_CASE("sample grids are interior, cell-centred and reproducible") {
  const Chart s3 = round_sphere_chart(3);
  const SampleGrid g = SampleGrid::uniform(s3, 6, 3);
  CHECK(g.size() == 6 * 3 * 3);
  for (const Point& p : g.points()) CHECK(s3.in_sampling_region(p));
  const SampleGrid r1 = SampleGrid::random(s3, 20, 123);
  const SampleGrid r2 = SampleGrid::random(s3, 20, 123);
  CHECK(r1.points() == r2.points());
  for (const Point& p : r1.points()) CHECK(s3.in_sampling_region(p));
  CHECK(SampleGrid::random(s3, 20, 124).points() != r1.points());
  CHECK(unit_uniform(0) == 0.0);
  CHECK(unit_uniform(~std::uint64_t{0}) < 1.0);
}
