#include <cmath>

#include "curvlab/bochner.hpp"
#include "curvlab/catalog.hpp"
#include "curvlab/conformal.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/sample_grid.hpp"
#include "doctest.h"

using namespace curvlab;

namespace {

std::vector<Point> seeded_points(const Chart& chart, std::size_t count, std::uint64_t seed = 31) {
  return SampleGrid::random(chart, count, seed).points();
}

ScalarField value_only(std::function<double(std::span<const double>)> f) {
  ScalarField s;
  s.value = std::move(f);
  return s;
}

VStaticTriple with_step(const VStaticTriple& t, double h, int levels) {
  VStaticTriple out = t;
  out.chart.with_fd({h, levels});
  return out;
}

// tr(A^k) for A = g^{-1} T by plain matrix products.
double power_trace(const Tensor& t, const Tensor& ginv, int k) {
  const Tensor a = matmul(ginv, t);
  Tensor m = a;
  for (int i = 1; i < k; ++i) m = matmul(m, a);
  double s = 0.0;
  for (int i = 0; i < t.dim(); ++i) s += m(i, i);
  return s;
}

}  // namespace

TEST_CASE("divergence of f grad |Ric|² vanishes where |Ric|² is constant") {
  const CatalogSpace h = build("hemisphere", 3);
  for (const Point& p : seeded_points(h.chart, 6)) CHECK(std::abs(div_f_grad_ricnorm(*h.triple, p)) <= 1e-6);
  const CatalogSpace c = build("cylinder", 3);
  for (const Point& p : seeded_points(c.chart, 6)) CHECK(std::abs(div_f_grad_ricnorm(*c.triple, p)) <= 1e-6);
}

TEST_CASE("divergence formula at constant scalar curvature with an arbitrary f") {
  const CatalogSpace ps = build("product_spheres", 4);
  const ScalarField f = value_only([](std::span<const double> p) { return std::sin(p[0]) * std::cos(p[2]); });
  for (const Point& p : seeded_points(ps.chart, 4)) CHECK(lemma2_residual(ps.chart, f, p).rel() <= 1e-4);

  const CatalogSpace h = build("hemisphere", 3);
  const ScalarField t2 = value_only([](std::span<const double> p) { return p[0] * p[0]; });
  for (const Point& p : seeded_points(h.chart, 4)) CHECK(lemma2_residual(h.chart, t2, p).abs <= 1e-5);

  const Chart box = euclidean_box_chart(3);
  const ScalarField xy = value_only([](std::span<const double> p) { return p[0] * p[1]; });
  CHECK(lemma2_residual(box, xy, Point{0.2, -0.1, 0.3}).abs <= 1e-9);

  const CatalogSpace pf = build("perturbed_flat", 3);
  try {
    lemma2_residual(pf.chart, xy, seeded_points(pf.chart, 1).front());
    FAIL("expected NonConstantScalarCurvature");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConstantScalarCurvature);
  }
}

TEST_CASE("divergence formula on V-static triples") {
  const CatalogSpace e = build("euclidean_ball", 3);
  for (const Point& p : seeded_points(e.chart, 4)) CHECK(lemma3_residual(*e.triple, p).abs <= 1e-9);
  const CatalogSpace b = build("spherical_ball", 3);
  for (const Point& p : seeded_points(b.chart, 4)) CHECK(lemma3_residual(*b.triple, p).abs <= 1e-6);
  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  for (const Point& p : seeded_points(s.chart, 6)) {
    CHECK(lemma3_residual(*s.triple, p).rel() <= 1e-4);
    // Both divergence formulas hold independently on the same triple.
    CHECK(lemma2_residual(s.chart, s.triple->potential.f, p).rel() <= 1e-4);
  }
}

TEST_CASE("Bochner formula term by term") {
  const CatalogSpace h = build("hemisphere", 3);
  for (const Point& p : seeded_points(h.chart, 6)) {
    const BochnerBreakdown b = theorem2_breakdown(*h.triple, p);
    for (double t : {b.term_cotton, b.term_gradric, b.term_kappa, b.term_cubic, b.term_weyl_cotton,
                     b.term_weyl_ricci}) {
      CHECK(std::abs(t) <= 1e-7);
    }
    CHECK(std::abs(b.residual) <= 1e-6);
  }

  const CatalogSpace c = build("cylinder", 3);
  for (const Point& p : seeded_points(c.chart, 6)) {
    const BochnerBreakdown b = theorem2_breakdown(*c.triple, p);
    CHECK(std::abs(b.lhs) <= 1e-6);
    CHECK(std::abs(b.term_cubic) <= 1e-6);
    CHECK(std::abs(b.residual) <= 1e-6);
    // Traceless Ricci eigenvalues (-2, 1, 1): |R̊ic|² = 6, tr R̊ic³ = -6.
    const Geometry geo = geometry_at(c.chart, p);
    const Tensor tr = traceless_ricci(geo);
    CHECK(power_trace(tr, geo.ginv, 2) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(power_trace(tr, geo.ginv, 3) == doctest::Approx(-6.0).epsilon(1e-9));
  }

  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  for (const Point& p : seeded_points(s.chart, 6)) {
    const BochnerBreakdown b = theorem2_breakdown(*s.triple, p);
    CHECK(b.as_residual().rel() <= 1e-4);
    CHECK(b.term_gradric > 0.0);
    CHECK(b.residual == b.lhs - b.terms_sum());
  }
}

TEST_CASE("zero radial Weyl form of the Bochner formula") {
  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  for (const Point& p : seeded_points(s.chart, 4)) CHECK(radial_weyl_specialization_residual(*s.triple, p).rel() <= 1e-4);
  for (int n : {3, 4}) {
    const CatalogSpace c = build("cylinder", n);
    for (const Point& p : seeded_points(c.chart, 3)) CHECK(radial_weyl_specialization_residual(*c.triple, p).abs <= 1e-5);
  }
  const CatalogSpace h = build("hemisphere", 3);
  for (const Point& p : seeded_points(h.chart, 4)) CHECK(radial_weyl_specialization_residual(*h.triple, p).abs <= 1e-6);
}

TEST_CASE("zero radial Weyl ties the Weyl-Ricci contraction to |C|²") {
  const CatalogSpace h = build("hemisphere", 4);
  for (const Point& p : seeded_points(h.chart, 2)) CHECK(eq312_residual(*h.triple, p).abs <= 1e-7);
  const CatalogSpace s = build("schwarzschild", 4, {{"m", 0.05}});
  for (const Point& p : seeded_points(s.chart, 3)) CHECK(eq312_residual(*s.triple, p).abs <= 1e-5);
  const CatalogSpace c = build("cylinder", 5);
  for (const Point& p : seeded_points(c.chart, 2)) CHECK(eq312_residual(*c.triple, p).abs <= 1e-6);

  const CatalogSpace h3 = build("hemisphere", 3);
  try {
    eq312_residual(*h3.triple, seeded_points(h3.chart, 1).front());
    FAIL("expected DimensionUnsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionUnsupported);
  }
}

TEST_CASE("zero radial Weyl formulas refuse a Weyl-curved potential direction") {
  // A V-static triple on the product chart does not exist, so build a
  // hemisphere-shaped triple whose chart is the product of spheres.
  const CatalogSpace ps = build("product_spheres", 4);
  VStaticTriple fake{ps.chart, Potential{value_only([](std::span<const double> p) { return p[0]; }), 0.0, false},
                     std::nullopt};
  const Point p = seeded_points(ps.chart, 1).front();
  CHECK_THROWS_AS(radial_weyl_specialization_residual(fake, p), Error);
}

TEST_CASE("Okumura inequality") {
  for (int n : {3, 4, 5}) {
    const CatalogSpace c = build("cylinder", n);
    for (const Point& p : seeded_points(c.chart, 3)) CHECK(std::abs(okumura_gap(c.chart, p)) <= 1e-8);
    const CatalogSpace h = build("hemisphere", n);
    for (const Point& p : seeded_points(h.chart, 3)) CHECK(std::abs(okumura_gap(h.chart, p)) <= 1e-9);
  }
  const CatalogSpace pf = build("perturbed_flat", 4);
  const double c4 = 2.0 / std::sqrt(12.0);
  for (const Point& p : seeded_points(pf.chart, 20)) {
    const Geometry geo = geometry_at(pf.chart, p);
    const Tensor tr = traceless_ricci(geo);
    const double oracle = power_trace(tr, geo.ginv, 3) + c4 * std::pow(power_trace(tr, geo.ginv, 2), 1.5);
    const double gap = okumura_gap(geo);
    CHECK(gap >= -1e-9);
    CHECK(gap == doctest::Approx(oracle).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("pinching gap") {
  for (int n : {3, 4}) {
    const CatalogSpace c = build("cylinder", n);
    for (const Point& p : seeded_points(c.chart, 3)) CHECK(std::abs(pinching_gap(c.chart, p)) <= 1e-6);
    const CatalogSpace h = build("hemisphere", n);
    for (const Point& p : seeded_points(h.chart, 3))
      CHECK(std::abs(pinching_gap(h.chart, p) - n * (n - 1.0)) <= 1e-6);
  }
  // Schwarzschild: the same sign profile at two resolutions.
  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  const auto profile = [&s](int radial) {
    double lo = 1e300, hi = -1e300;
    const SampleGrid grid = SampleGrid::uniform(s.chart, radial, 2);
    for (const Point& p : grid.points()) {
      const double g = pinching_gap(s.chart, p);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    return std::pair{lo, hi};
  };
  const auto [lo1, hi1] = profile(16);
  const auto [lo2, hi2] = profile(32);
  CHECK((lo1 < 0.0) == (lo2 < 0.0));
  CHECK((hi1 < 0.0) == (hi2 < 0.0));
}

TEST_CASE("cubic Ricci identity") {
  for (int n : {3, 4, 5}) {
    const CatalogSpace pf = build("perturbed_flat", n);
    for (const Point& p : seeded_points(pf.chart, 5)) CHECK(lemma4_residual(pf.chart, p).abs <= 1e-6);
  }
  const CatalogSpace c = build("cylinder", 3);
  for (const Point& p : seeded_points(c.chart, 3)) {
    const Geometry geo = geometry_at(c.chart, p);
    const Tensor tr = traceless_ricci(geo);
    // R|R̊ic|²/(n-1) + n tr R̊ic³/(n-2) = 6·6/2 + 3·(-6) = 0.
    CHECK(std::abs(geo.scalar * power_trace(tr, geo.ginv, 2) / 2.0 + 3.0 * power_trace(tr, geo.ginv, 3)) <= 1e-8);
    CHECK(lemma4_residual(geo).abs <= 1e-6);
  }
  CHECK(lemma4_residual(euclidean_box_chart(3), Point{0.0, 0.0, 0.0}).abs == 0.0);
}

TEST_CASE("spectral decomposition against the metric") {
  const CatalogSpace pf = build("perturbed_flat", 4);
  for (const Point& p : seeded_points(pf.chart, 5)) {
    const Geometry geo = geometry_at(pf.chart, p);
    const SpectralData sd = spectral_decomposition(geo.ricci, geo.g);
    CHECK(sd.reconstruction_defect(geo.ricci, geo.g) <= 1e-9);
    CHECK(sd.orthonormality_defect(geo.g) <= 1e-10);
    for (std::size_t a = 1; a < sd.eigenvalues.size(); ++a) CHECK(sd.eigenvalues[a - 1] <= sd.eigenvalues[a]);
  }
  // Repeated eigenvalues still give an orthonormal frame.
  const CatalogSpace c = build("cylinder", 4);
  const Point p = seeded_points(c.chart, 1).front();
  const Geometry geo = geometry_at(c.chart, p);
  const SpectralData sd = spectral_decomposition(geo.ricci, geo.g);
  CHECK(sd.orthonormality_defect(geo.g) <= 1e-10);
  CHECK(sd.eigenvalues.front() == doctest::Approx(0.0).scale(1.0));
  CHECK(sd.eigenvalues.back() == doctest::Approx(4.0));
}

TEST_CASE("Berger commutator identity") {
  const CatalogSpace pf = build("perturbed_flat", 3);
  for (const Point& p : seeded_points(pf.chart, 4)) {
    const BergerResult g = berger_check(pf.chart, p, metric_field(pf.chart));
    CHECK(std::abs(g.commutator) <= 1e-8);
    CHECK(std::abs(g.eigen_sum) <= 1e-8);
    const BergerResult r = berger_check(pf.chart, p, ricci_field(pf.chart));
    CHECK(std::abs(r.difference()) <= 1e-4);
  }
  const CatalogSpace c = build("cylinder", 3);
  for (const Point& p : seeded_points(c.chart, 3)) {
    const BergerResult r = berger_check(c.chart, p, ricci_field(c.chart));
    CHECK(std::abs(r.commutator) <= 1e-6);
    CHECK(std::abs(r.eigen_sum) <= 1e-6);
  }
  for (const char* id : {"hemisphere", "spherical_ball", "euclidean_ball"}) {
    const CatalogSpace s = build(id, 3);
    for (const Point& p : seeded_points(s.chart, 3)) {
      const BergerResult r = berger_check(s.chart, p, ricci_field(s.chart));
      CHECK(r.commutator >= -1e-6);
      CHECK(r.eigen_sum >= -1e-6);
    }
  }
}

TEST_CASE("identity residuals converge at second order without Richardson") {
  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  const std::vector<Point> pts = seeded_points(s.chart, 3);
  for (const Point& p : pts) {
    const double l1a = lemma1_residual(with_step(*s.triple, 2e-3, 0), p).abs;
    const double l1b = lemma1_residual(with_step(*s.triple, 1e-3, 0), p).abs;
    CHECK(l1a / l1b >= 4.0 * 0.95);
    const double l3a = lemma3_residual(with_step(*s.triple, 2e-3, 0), p).abs;
    const double l3b = lemma3_residual(with_step(*s.triple, 1e-3, 0), p).abs;
    CHECK(l3a / l3b >= 4.0 * 0.95);
    const double t2a = theorem2_breakdown(with_step(*s.triple, 2e-3, 0), p).as_residual().abs;
    const double t2b = theorem2_breakdown(with_step(*s.triple, 1e-3, 0), p).as_residual().abs;
    CHECK(t2a / t2b >= 4.0 * 0.95);
  }
}

TEST_CASE("Gauss-Legendre rule") {
  for (int m : {1, 2, 5, 16, 32, 64}) {
    const GaussRule r = gauss_legendre(m);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(m));
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for polynomials up to degree 2m - 1.
    double moment = 0.0;
    const int deg = 2 * m - 2;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) moment += r.weights[i] * std::pow(r.nodes[i], deg);
    CHECK(moment == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
  CHECK(sphere_volume(1) == doctest::Approx(2.0 * M_PI));
  CHECK(sphere_volume(2) == doctest::Approx(4.0 * M_PI));
  CHECK(sphere_volume(3) == doctest::Approx(2.0 * M_PI * M_PI));
}

TEST_CASE("radial integral of the divergence vanishes") {
  const CatalogSpace s = build("schwarzschild", 3, {{"m", 0.1}});
  const RadialIntegral r32 = integrate_radial(*s.triple, RadialIntegrand::DivFGradRicnorm);
  CHECK(std::abs(r32.value) <= 1e-4 * r32.abs_integral);
  RadialQuadratureOptions o48;
  o48.order = 48;
  const RadialIntegral r48 = integrate_radial(*s.triple, RadialIntegrand::DivFGradRicnorm, o48);
  CHECK(std::abs(r48.value) <= 1e-4 * r48.abs_integral);
  CHECK(r32.abs_integral == doctest::Approx(r48.abs_integral).epsilon(1e-2));

  const CatalogSpace h = build("hemisphere", 3);
  CHECK(std::abs(integrate_radial(*h.triple, RadialIntegrand::DivFGradRicnorm).value) <= 1e-8);
}

TEST_CASE("radial integrals of the zero radial Weyl right side") {
  const CatalogSpace c = build("cylinder", 3);
  CHECK(std::abs(integrate_radial(*c.triple, RadialIntegrand::RadialWeylRhs).value) <= 1e-6);
  CHECK(std::abs(integrate_radial(*c.triple, RadialIntegrand::OkumuraBoundIntegrand).value) <= 1e-6);
  const CatalogSpace h = build("hemisphere", 3);
  CHECK(std::abs(integrate_radial(*h.triple, RadialIntegrand::OkumuraBoundIntegrand).value) <= 1e-6);

  const CatalogSpace pf = build("perturbed_flat", 3);
  VStaticTriple fake{pf.chart, Potential{value_only([](std::span<const double>) { return 1.0; }), 0.0, false},
                     std::nullopt};
  try {
    integrate_radial(fake, RadialIntegrand::DivFGradRicnorm);
    FAIL("expected NotWarpedProduct");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotWarpedProduct);
  }
}
