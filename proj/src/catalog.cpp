#include "curvlab/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "curvlab/conformal.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/sample_grid.hpp"

namespace curvlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Fiber factor s_a = Π_{b<a} sin²(x_b) of the round metric in hyperspherical
// coordinates, with partials. Fiber slots are 0..k-1 (chart coordinates 1..k).
struct FiberFactors {
  std::vector<double> s;    // s[a]
  std::vector<double> ds;   // ds[a * k + b] = ∂_b s_a
  std::vector<double> dds;  // dds[(a * k + b) * k + c] = ∂_b ∂_c s_a
};

FiberFactors fiber_factors(std::span<const double> angles) {
  const std::size_t k = angles.size();
  std::vector<double> q(k), dq(k), ddq(k);
  for (std::size_t b = 0; b < k; ++b) {
    const double x = angles[b];
    q[b] = std::sin(x) * std::sin(x);
    dq[b] = std::sin(2.0 * x);
    ddq[b] = 2.0 * std::cos(2.0 * x);
  }
  FiberFactors out{std::vector<double>(k, 1.0), std::vector<double>(k * k, 0.0),
                   std::vector<double>(k * k * k, 0.0)};
  for (std::size_t a = 0; a < k; ++a) {
    double prod = 1.0;
    for (std::size_t b = 0; b < a; ++b) prod *= q[b];
    out.s[a] = prod;
    for (std::size_t b = 0; b < a; ++b) {
      double others = 1.0;
      for (std::size_t c = 0; c < a; ++c)
        if (c != b) others *= q[c];
      out.ds[a * k + b] = dq[b] * others;
      for (std::size_t c = 0; c < a; ++c) {
        double rest = 1.0;
        for (std::size_t e = 0; e < a; ++e)
          if (e != b && e != c) rest *= q[e];
        out.dds[(a * k + b) * k + c] = (b == c) ? ddq[b] * others : dq[b] * dq[c] * rest;
      }
    }
  }
  return out;
}

std::vector<std::string> warped_coord_names(int n) {
  std::vector<std::string> names{"t"};
  for (int a = 1; a < n - 1; ++a) names.push_back("theta" + std::to_string(a));
  names.push_back("phi");
  return names;
}

double param_or(const CatalogParams& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const CatalogParams& params, std::initializer_list<std::string_view> allowed, CatalogId id) {
  for (const auto& [key, value] : params) {
    if (key == "margin") continue;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::InvalidArgument,
                  "parameter '" + key + "' is not used by " + std::string(to_string(id)));
    }
  }
}

Jet1 constant(double c) { return {c, 0.0, 0.0}; }

ScalarField constant_field(int n, double c) {
  ScalarField f;
  f.value = [c](std::span<const double>) { return c; };
  f.jet = [n, c](std::span<const double>) {
    ScalarJet j;
    j.value = c;
    j.grad.assign(static_cast<std::size_t>(n), 0.0);
    j.hess = Tensor(n, 2);
    return j;
  };
  return f;
}

}  // namespace

std::string_view to_string(CatalogId id) {
  switch (id) {
    case CatalogId::Hemisphere: return "hemisphere";
    case CatalogId::Cylinder: return "cylinder";
    case CatalogId::Schwarzschild: return "schwarzschild";
    case CatalogId::EuclideanBall: return "euclidean_ball";
    case CatalogId::SphericalBall: return "spherical_ball";
    case CatalogId::ProductSpheres: return "product_spheres";
    case CatalogId::PerturbedFlat: return "perturbed_flat";
  }
  return "unknown";
}

const std::vector<CatalogId>& all_catalog_ids() {
  static const std::vector<CatalogId> ids{CatalogId::Hemisphere,    CatalogId::Cylinder,      CatalogId::Schwarzschild,
                                          CatalogId::EuclideanBall, CatalogId::SphericalBall, CatalogId::ProductSpheres,
                                          CatalogId::PerturbedFlat};
  return ids;
}

CatalogId parse_catalog_id(std::string_view name) {
  for (CatalogId id : all_catalog_ids()) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown catalog space '" + std::string(name) + "'");
}

const VStaticTriple& CatalogSpace::require_triple() const {
  if (!triple) {
    throw Error(ErrorKind::InvalidArgument, std::string(to_string(id)) + " carries no V-static triple");
  }
  return *triple;
}

Chart warped_chart(std::string name, int n, Interval radial, double margin, RadialFn radial_coefficient,
                   RadialFn fiber_coefficient) {
  if (n < 3) throw Error(ErrorKind::UnsupportedDimension, "warped charts need n >= 3");
  std::vector<Interval> domain{radial};
  for (int a = 1; a < n - 1; ++a) domain.push_back({0.0, kPi});
  domain.push_back({0.0, 2.0 * kPi});
  std::vector<double> margins(static_cast<std::size_t>(n), margin);

  auto metric = [n, radial_coefficient, fiber_coefficient](std::span<const double> p) {
    Tensor g(n, 2);
    const double a = radial_coefficient(p[0]).value;
    const double b = fiber_coefficient(p[0]).value;
    g(0, 0) = a;
    const FiberFactors ff = fiber_factors(p.subspan(1));
    for (int k = 1; k < n; ++k) g(k, k) = b * ff.s[static_cast<std::size_t>(k - 1)];
    return g;
  };

  auto jet = [n, radial_coefficient, fiber_coefficient](std::span<const double> p) {
    const Jet1 a = radial_coefficient(p[0]);
    const Jet1 b = fiber_coefficient(p[0]);
    // Angles 1..n-2 enter the factors; φ (last coordinate) never does.
    const auto k = static_cast<std::size_t>(n - 1);
    std::vector<double> angles(p.begin() + 1, p.end());
    const FiberFactors ff = fiber_factors(angles);
    MetricJet out{Tensor(n, 2), Tensor(n, 3), Tensor(n, 4)};
    out.g(0, 0) = a.value;
    out.dg(0, 0, 0) = a.d1;
    out.ddg(0, 0, 0, 0) = a.d2;
    for (std::size_t fa = 0; fa < k; ++fa) {
      const int i = static_cast<int>(fa) + 1;
      const double s = ff.s[fa];
      out.g(i, i) = b.value * s;
      out.dg(0, i, i) = b.d1 * s;
      out.ddg(0, 0, i, i) = b.d2 * s;
      for (std::size_t fb = 0; fb < k; ++fb) {
        const int bi = static_cast<int>(fb) + 1;
        const double dsb = ff.ds[fa * k + fb];
        out.dg(bi, i, i) = b.value * dsb;
        out.ddg(0, bi, i, i) = b.d1 * dsb;
        out.ddg(bi, 0, i, i) = b.d1 * dsb;
        for (std::size_t fc = 0; fc < k; ++fc) {
          const int ci = static_cast<int>(fc) + 1;
          out.ddg(bi, ci, i, i) = b.value * ff.dds[(fa * k + fb) * k + fc];
        }
      }
    }
    return out;
  };

  Chart chart(std::move(name), warped_coord_names(n), std::move(domain), std::move(margins), metric);
  chart.with_analytic_partials(jet);
  chart.with_warped_profile({std::move(radial_coefficient), std::move(fiber_coefficient)});
  return chart;
}

Chart round_sphere_chart(int n, double radius) {
  const double r = radius;
  return warped_chart("round_sphere", n, {0.0, kPi * r}, kDefaultMargin, [](double) { return constant(1.0); },
                      [r](double t) {
                        const double s = std::sin(t / r), c = std::cos(t / r);
                        return Jet1{r * r * s * s, 2.0 * r * s * c, 2.0 * (c * c - s * s)};
                      });
}

Chart euclidean_box_chart(int n, double half_width) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  std::vector<Interval> domain(static_cast<std::size_t>(n), Interval{-half_width, half_width});
  std::vector<double> margins(static_cast<std::size_t>(n), kDefaultMargin);
  Chart chart("euclidean_box", std::move(names), std::move(domain), std::move(margins),
              [n](std::span<const double>) { return identity(n); });
  chart.with_analytic_partials([n](std::span<const double>) {
    return MetricJet{identity(n), Tensor(n, 3), Tensor(n, 4)};
  });
  return chart;
}

Chart product_spheres_chart(double radius1, double radius2) {
  const double a = radius1 * radius1, b = radius2 * radius2;
  std::vector<Interval> domain{{0.0, kPi}, {0.0, 2.0 * kPi}, {0.0, kPi}, {0.0, 2.0 * kPi}};
  std::vector<double> margins(4, kDefaultMargin);
  auto metric = [a, b](std::span<const double> p) {
    Tensor g(4, 2);
    g(0, 0) = a;
    g(1, 1) = a * std::sin(p[0]) * std::sin(p[0]);
    g(2, 2) = b;
    g(3, 3) = b * std::sin(p[2]) * std::sin(p[2]);
    return g;
  };
  Chart chart("product_spheres", {"t", "phi1", "u", "phi2"}, std::move(domain), std::move(margins), metric);
  chart.with_analytic_partials([a, b, metric](std::span<const double> p) {
    MetricJet out{metric(p), Tensor(4, 3), Tensor(4, 4)};
    out.dg(0, 1, 1) = a * std::sin(2.0 * p[0]);
    out.ddg(0, 0, 1, 1) = 2.0 * a * std::cos(2.0 * p[0]);
    out.dg(2, 3, 3) = b * std::sin(2.0 * p[2]);
    out.ddg(2, 2, 3, 3) = 2.0 * b * std::cos(2.0 * p[2]);
    return out;
  });
  return chart;
}

Chart perturbed_flat_chart(int n, std::uint64_t seed, double amplitude) {
  if (n < 3 || n > kMaxGeneralChartDim) {
    throw Error(ErrorKind::UnsupportedDimension, "perturbed metrics are defined for 3 <= n <= 6");
  }
  const auto un = static_cast<std::size_t>(n);
  // coeff[(i * n + j) * n + k], phase likewise; mirrored for i > j.
  std::vector<double> coeff(un * un * un, 0.0), phase(un * un * un, 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = i; j < un; ++j)
      for (std::size_t k = 0; k < un; ++k) {
        const double c = 2.0 * unit_uniform(rng()) - 1.0;
        const double ph = 2.0 * kPi * unit_uniform(rng());
        coeff[(i * un + j) * un + k] = coeff[(j * un + i) * un + k] = c;
        phase[(i * un + j) * un + k] = phase[(j * un + i) * un + k] = ph;
      }

  auto jet = [n, un, coeff, phase, amplitude](std::span<const double> p) {
    MetricJet out{identity(n), Tensor(n, 3), Tensor(n, 4)};
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j)
        for (std::size_t k = 0; k < un; ++k) {
          const double c = amplitude * coeff[(i * un + j) * un + k];
          const double arg = p[k] + phase[(i * un + j) * un + k];
          const int ii = static_cast<int>(i), jj = static_cast<int>(j), kk = static_cast<int>(k);
          out.g(ii, jj) += c * std::sin(arg);
          out.dg(kk, ii, jj) += c * std::cos(arg);
          out.ddg(kk, kk, ii, jj) -= c * std::sin(arg);
        }
    return out;
  };
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  Chart chart("perturbed_flat", std::move(names), std::vector<Interval>(un, Interval{-1.0, 1.0}),
              std::vector<double>(un, kDefaultMargin), [jet](std::span<const double> p) { return jet(p).g; });
  chart.with_analytic_partials(jet);
  return chart;
}

ScalarField radial_scalar_field(int n, RadialFn f) {
  ScalarField field;
  field.value = [f](std::span<const double> p) { return f(p[0]).value; };
  field.jet = [n, f](std::span<const double> p) {
    const Jet1 v = f(p[0]);
    ScalarJet j;
    j.value = v.value;
    j.grad.assign(static_cast<std::size_t>(n), 0.0);
    j.grad[0] = v.d1;
    j.hess = Tensor(n, 2);
    j.hess(0, 0) = v.d2;
    return j;
  };
  return field;
}

double schwarzschild_mass_bound(int n) {
  return std::sqrt(std::pow(n - 2.0, n - 2.0) / std::pow(static_cast<double>(n), n));
}

double schwarzschild_lapse_squared(int n, double m, double t) {
  return 1.0 - 2.0 * m * std::pow(t, 2.0 - n) - t * t;
}

namespace {

void require_admissible_mass(int n, double m) {
  const double bound = schwarzschild_mass_bound(n);
  if (!(m > 0.0 && m < bound)) {
    std::ostringstream os;
    os.precision(17);
    os << "mass " << m << " outside the admissible interval (0, " << bound << ") for n = " << n;
    throw Error(ErrorKind::InadmissibleMass, os.str());
  }
}

template <typename F>
double bisect(const F& f, double lo, double hi) {
  double flo = f(lo);
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
}

}  // namespace

std::pair<double, double> schwarzschild_roots(int n, double m) {
  if (n < 3) throw Error(ErrorKind::UnsupportedDimension, "Schwarzschild band needs n >= 3");
  require_admissible_mass(n, m);
  auto v = [n, m](double t) { return schwarzschild_lapse_squared(n, m, t); };

  constexpr int kScan = 4096;
  std::vector<std::pair<double, double>> brackets;
  double prev_t = 1.0 / kScan;
  double prev_v = v(prev_t);
  for (int i = 2; i <= kScan; ++i) {
    const double t = static_cast<double>(i) / kScan;
    const double vt = v(t);
    if ((vt > 0.0) != (prev_v > 0.0)) brackets.emplace_back(prev_t, t);
    prev_t = t;
    prev_v = vt;
  }
  if (brackets.size() != 2) {
    // Near the extremal mass the positive lobe can fall between scan points;
    // V is unimodal with its maximum at t* = (m (n-2))^{1/n}.
    const double peak = std::pow(m * (n - 2.0), 1.0 / n);
    if (!(v(peak) > 0.0)) throw Error(ErrorKind::InadmissibleMass, "V has no positive lobe on (0, 1]");
    brackets = {{std::min(peak, 1.0 / kScan) * 0.5, peak}, {peak, 1.0}};
  }
  const double r1 = bisect(v, brackets[0].first, brackets[0].second);
  const double r2 = bisect(v, brackets[1].first, brackets[1].second);
  return {r1, r2};
}

WarpedCurvature warped_curvature(const WarpedProfile& profile, std::span<const double> p, int n) {
  const Jet1 a = profile.radial_coefficient(p[0]);
  const Jet1 b = profile.fiber_coefficient(p[0]);
  if (!(a.value > 0.0) || !(b.value > 0.0)) throw Error(ErrorKind::NonpositiveWarp, "warp coefficients must be positive");
  // h = √B as a function of t, then converted to arclength s with ds = √A dt.
  const double h = std::sqrt(b.value);
  const double h_t = b.d1 / (2.0 * h);
  const double h_tt = b.d2 / (2.0 * h) - b.d1 * b.d1 / (4.0 * b.value * h);
  const double inv_sqrt_a = 1.0 / std::sqrt(a.value);
  const double h_s = inv_sqrt_a * h_t;
  const double h_ss = inv_sqrt_a * (inv_sqrt_a * h_tt - 0.5 * a.d1 / (a.value * std::sqrt(a.value)) * h_t);

  WarpedCurvature out;
  out.radial_sectional = -h_ss / h;
  out.fiber_sectional = (1.0 - h_s * h_s) / (h * h);

  std::vector<double> fiber(p.begin() + 1, p.end());
  const FiberFactors ff = fiber_factors(fiber);
  Tensor g(n, 2);
  g(0, 0) = a.value;
  for (int i = 1; i < n; ++i) g(i, i) = b.value * ff.s[static_cast<std::size_t>(i - 1)];

  const double kr = out.radial_sectional;
  const double kf = out.fiber_sectional;
  out.riemann = Tensor(n, 4);
  Tensor& r = out.riemann;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          // Constant-curvature form with K depending on whether the plane is
          // radial; g is diagonal with t orthogonal to the fiber.
          const bool radial = (i == 0 || j == 0 || k == 0 || l == 0);
          const double kk = radial ? kr : kf;
          r(i, j, k, l) = kk * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
        }
  out.ricci = Tensor(n, 2);
  out.ricci(0, 0) = (n - 1) * kr * a.value;
  for (int i = 1; i < n; ++i) out.ricci(i, i) = (kr + (n - 2) * kf) * g(i, i);
  out.scalar = 2.0 * (n - 1) * kr + (n - 1.0) * (n - 2.0) * kf;
  return out;
}

namespace {

void fail_declared(const CatalogSpace& s, const std::string& what, double value, std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(s.id) << " n=" << s.n << ": declared " << what << " not reproduced (value " << value << " at t = "
     << p[0] << ")";
  throw Error(ErrorKind::HypothesisViolated, os.str());
}

void verify_declared(const CatalogSpace& s) {
  const SampleGrid grid = SampleGrid::random(s.chart, 32, 0x5eedULL);
  std::size_t bach_budget = 2;
  for (const Point& p : grid.points()) {
    const Geometry geo = geometry_at(s.chart, p);
    if (s.declared.scalar_curvature && std::abs(geo.scalar - *s.declared.scalar_curvature) > 1e-6) {
      fail_declared(s, "scalar curvature", geo.scalar, p);
    }
    if (s.triple) {
      const double res = vstatic_residual(*s.triple, p).abs;
      if (res > 1e-6) fail_declared(s, "V-static equation", res, p);
      if (s.declared.f_nonnegative) {
        const double f = s.triple->potential.f(p);
        if (f < -1e-12) fail_declared(s, "f >= 0", f, p);
      }
    }
    if (s.declared.conformally_flat) {
      const double w = weyl(geo).max_abs();
      if (w > 1e-6) fail_declared(s, "conformal flatness", w, p);
    }
    if (s.declared.bach_flat && bach_budget > 0) {
      --bach_budget;
      const double b = bach(s.chart, p).max_abs();
      if (b > 1e-4) fail_declared(s, "Bach flatness", b, p);
    }
  }
}

}  // namespace

CatalogSpace build(CatalogId id, int n, const CatalogParams& params, LoadCheck check) {
  if (n < 3) throw Error(ErrorKind::UnsupportedDimension, "catalog spaces need n >= 3");
  if (n > kMaxGeneralChartDim) {
    throw Error(ErrorKind::UnsupportedDimension, "general chart supports n <= 6 (use warped_curvature beyond)");
  }
  const double margin = param_or(params, "margin", kDefaultMargin);
  if (!(margin > 0.0 && margin < 0.25)) throw Error(ErrorKind::InvalidArgument, "margin must lie in (0, 0.25)");
  const double nn = n;
  CatalogParams resolved{{"margin", margin}};
  auto unit = [](double) { return constant(1.0); };

  auto make = [&](Chart chart, std::optional<VStaticTriple> triple, DeclaredConstants declared) {
    return CatalogSpace{id, n, resolved, std::move(chart), std::move(triple), std::nullopt, declared, std::nullopt};
  };
  auto triple_of = [&](const Chart& chart, RadialFn f, double kappa, std::optional<double> r) {
    return VStaticTriple{chart, Potential{radial_scalar_field(n, std::move(f)), kappa, true}, r};
  };

  CatalogSpace space = [&]() -> CatalogSpace {
    switch (id) {
      case CatalogId::Hemisphere: {
        reject_unknown(params, {}, id);
        Chart chart = warped_chart("hemisphere", n, {0.0, kPi / 2.0}, margin, unit, [](double t) {
          const double s = std::sin(t), c = std::cos(t);
          return Jet1{s * s, 2.0 * s * c, 2.0 * (c * c - s * s)};
        });
        auto f = [](double t) { return Jet1{std::cos(t), -std::sin(t), -std::cos(t)}; };
        const double r = nn * (nn - 1.0);
        return make(chart, triple_of(chart, f, 0.0, r), {r, 0.0, true, true, true});
      }
      case CatalogId::Cylinder: {
        reject_unknown(params, {}, id);
        const double h2 = (nn - 2.0) / nn;
        const double w = std::sqrt(nn);
        Chart chart = warped_chart("cylinder", n, {0.0, kPi / w}, margin, unit, [h2](double) { return constant(h2); });
        auto f = [w](double t) { return Jet1{std::sin(w * t), w * std::cos(w * t), -w * w * std::sin(w * t)}; };
        const double r = nn * (nn - 1.0);
        return make(chart, triple_of(chart, f, 0.0, r), {r, 0.0, true, true, true});
      }
      case CatalogId::Schwarzschild: {
        reject_unknown(params, {"m"}, id);
        const double m = param_or(params, "m", 0.5 * schwarzschild_mass_bound(n));
        resolved["m"] = m;
        const auto [r1, r2] = schwarzschild_roots(n, m);
        auto lapse = [n, m](double t) {
          const double v = 1.0 - 2.0 * m * std::pow(t, 2.0 - n) - t * t;
          const double v1 = 2.0 * m * (n - 2.0) * std::pow(t, 1.0 - n) - 2.0 * t;
          const double v2 = 2.0 * m * (n - 2.0) * (1.0 - n) * std::pow(t, -1.0 * n) - 2.0;
          return Jet1{v, v1, v2};
        };
        auto radial = [lapse](double t) {
          const Jet1 v = lapse(t);
          return Jet1{1.0 / v.value, -v.d1 / (v.value * v.value),
                      -v.d2 / (v.value * v.value) + 2.0 * v.d1 * v.d1 / (v.value * v.value * v.value)};
        };
        auto fiber = [](double t) { return Jet1{t * t, 2.0 * t, 2.0}; };
        auto f = [lapse](double t) {
          const Jet1 v = lapse(t);
          const double s = std::sqrt(std::max(v.value, 0.0));
          return Jet1{s, v.d1 / (2.0 * s), v.d2 / (2.0 * s) - v.d1 * v.d1 / (4.0 * s * s * s)};
        };
        Chart chart = warped_chart("schwarzschild", n, {r1, r2}, margin, radial, fiber);
        const double r = nn * (nn - 1.0);
        CatalogSpace s = make(chart, triple_of(chart, f, 0.0, r), {r, 0.0, true, true, true});
        s.roots = std::make_pair(r1, r2);
        return s;
      }
      case CatalogId::EuclideanBall: {
        reject_unknown(params, {"r0"}, id);
        const double r0 = param_or(params, "r0", 1.0);
        if (!(r0 > 2.0 * margin)) throw Error(ErrorKind::InvalidArgument, "r0 must exceed twice the margin");
        resolved["r0"] = r0;
        Chart chart = warped_chart("euclidean_ball", n, {0.0, r0}, margin, unit,
                                   [](double t) { return Jet1{t * t, 2.0 * t, 2.0}; });
        const double c = 1.0 / (2.0 * (nn - 1.0));
        auto f = [r0, c](double t) { return Jet1{c * (r0 * r0 - t * t), -2.0 * c * t, -2.0 * c}; };
        return make(chart, triple_of(chart, f, 1.0, 0.0), {0.0, 1.0, true, true, true});
      }
      case CatalogId::SphericalBall: {
        reject_unknown(params, {"r0"}, id);
        const double r0 = param_or(params, "r0", 1.0);
        if (!(r0 > 2.0 * margin && r0 < kPi / 2.0)) {
          throw Error(ErrorKind::InvalidArgument, "spherical ball radius must lie in (2 margin, pi/2)");
        }
        resolved["r0"] = r0;
        Chart chart = warped_chart("spherical_ball", n, {0.0, r0}, margin, unit, [](double t) {
          const double s = std::sin(t), c = std::cos(t);
          return Jet1{s * s, 2.0 * s * c, 2.0 * (c * c - s * s)};
        });
        const double denom = (nn - 1.0) * std::cos(r0);
        const double cr0 = std::cos(r0);
        auto f = [denom, cr0](double t) {
          return Jet1{(std::cos(t) - cr0) / denom, -std::sin(t) / denom, -std::cos(t) / denom};
        };
        const double r = nn * (nn - 1.0);
        return make(chart, triple_of(chart, f, 1.0, r), {r, 1.0, true, true, true});
      }
      case CatalogId::ProductSpheres: {
        reject_unknown(params, {"radius1", "radius2"}, id);
        if (n != 4) throw Error(ErrorKind::UnsupportedDimension, "product_spheres is the 4-dimensional S2 x S2");
        const double ra = param_or(params, "radius1", 1.0);
        const double rb = param_or(params, "radius2", 1.0 / std::sqrt(2.0));
        resolved["radius1"] = ra;
        resolved["radius2"] = rb;
        CatalogSpace s = make(product_spheres_chart(ra, rb), std::nullopt,
                              {2.0 / (ra * ra) + 2.0 / (rb * rb), std::nullopt, false, false, false});
        // f = sin t cos u
        ScalarField f;
        f.value = [](std::span<const double> p) { return std::sin(p[0]) * std::cos(p[2]); };
        f.jet = [](std::span<const double> p) {
          const double st = std::sin(p[0]), ct = std::cos(p[0]), su = std::sin(p[2]), cu = std::cos(p[2]);
          ScalarJet j;
          j.value = st * cu;
          j.grad = {ct * cu, 0.0, -st * su, 0.0};
          j.hess = Tensor(4, 2);
          j.hess(0, 0) = -st * cu;
          j.hess(2, 2) = -st * cu;
          j.hess(0, 2) = j.hess(2, 0) = -ct * su;
          return j;
        };
        s.test_function = std::move(f);
        return s;
      }
      case CatalogId::PerturbedFlat: {
        reject_unknown(params, {"seed", "amplitude"}, id);
        const double seed = param_or(params, "seed", 42.0);
        const double amp = param_or(params, "amplitude", 0.05);
        if (!(seed >= 0.0) || seed != std::floor(seed)) {
          throw Error(ErrorKind::InvalidArgument, "seed must be a non-negative integer");
        }
        resolved["seed"] = seed;
        resolved["amplitude"] = amp;
        CatalogSpace s = make(perturbed_flat_chart(n, static_cast<std::uint64_t>(seed), amp), std::nullopt, {});
        s.test_function = constant_field(n, 1.0);
        return s;
      }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown catalog id");
  }();
  space.params = resolved;
  if (check == LoadCheck::Sampled) verify_declared(space);
  return space;
}

CatalogSpace build(std::string_view id, int n, const CatalogParams& params, LoadCheck check) {
  return build(parse_catalog_id(id), n, params, check);
}

}  // namespace curvlab
