#include "curvlab/vstatic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvlab/conformal.hpp"
#include "curvlab/error.hpp"
#include "curvlab/fd.hpp"

namespace curvlab {

namespace {

double max_of(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> raise_vector(std::span<const double> v, const Tensor& ginv) {
  const int n = ginv.dim();
  std::vector<double> up(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) up[static_cast<std::size_t>(i)] += ginv(i, a) * v[static_cast<std::size_t>(a)];
  return up;
}

}  // namespace

PotentialData potential_data(const Potential& potential, const Chart& chart, const Geometry& geo,
                             std::span<const double> p) {
  const ScalarJet jet = potential.f.has_analytic_partials() ? potential.f.jet(p)
                                                            : fd::scalar_jet(potential.f.value, chart, p, chart.fd());
  const int n = chart.dim();
  PotentialData d;
  d.f = jet.value;
  d.grad = jet.grad;
  d.hess = Tensor(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0.5 * (jet.hess(i, j) + jet.hess(j, i));
      for (int k = 0; k < n; ++k) v -= geo.christoffel(k, i, j) * jet.grad[static_cast<std::size_t>(k)];
      d.hess(i, j) = v;
      d.hess(j, i) = v;
    }
  d.hess.declare(Symmetry::symmetric(2, 0, 1));
  for (std::size_t e = 0; e < d.hess.size(); ++e) d.laplacian += geo.ginv[e] * d.hess[e];
  return d;
}

Residual vstatic_residual(const VStaticTriple& triple, std::span<const double> p) {
  const Chart& chart = triple.chart;
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const PotentialData pd = potential_data(triple.potential, chart, geo, p);
  const double kappa = triple.potential.kappa;
  Residual r;
  for (std::size_t e = 0; e < geo.g.size(); ++e) {
    const double a = -pd.laplacian * geo.g[e];
    const double b = pd.hess[e];
    const double c = -pd.f * geo.ricci[e];
    const double d = -kappa * geo.g[e];
    r.abs = std::max(r.abs, std::abs(a + b + c + d));
    r.scale = std::max(r.scale, max_of({a, b, c, d}));
  }
  return r;
}

void require_vstatic(const VStaticTriple& triple, std::span<const double> p) {
  const Residual r = vstatic_residual(triple, p);
  if (r.abs > kVStaticHypothesisTolerance) {
    std::ostringstream os;
    os << "V-static residual " << r.abs << " exceeds " << kVStaticHypothesisTolerance;
    throw Error(ErrorKind::HypothesisViolated, os.str());
  }
}

Residual trace_residual(const VStaticTriple& triple, std::span<const double> p) {
  const Chart& chart = triple.chart;
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const PotentialData pd = potential_data(triple.potential, chart, geo, p);
  const double a = pd.laplacian;
  const double b = geo.scalar * pd.f / (n - 1);
  const double c = n * triple.potential.kappa / (n - 1);
  return {std::abs(a + b + c), max_of({a, b, c})};
}

Residual traceless_residual(const VStaticTriple& triple, std::span<const double> p) {
  const Chart& chart = triple.chart;
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const PotentialData pd = potential_data(triple.potential, chart, geo, p);
  const Tensor ric0 = traceless_ricci(geo);
  Residual r;
  for (std::size_t e = 0; e < geo.g.size(); ++e) {
    const double lhs = pd.f * ric0[e];
    const double rhs = pd.hess[e] - pd.laplacian / n * geo.g[e];
    r.abs = std::max(r.abs, std::abs(lhs - rhs));
    r.scale = std::max(r.scale, max_of({lhs, rhs}));
  }
  return r;
}

Residual lemma1_residual(const VStaticTriple& triple, std::span<const double> p) {
  const Chart& chart = triple.chart;
  chart.require_interior(p);
  require_vstatic(triple, p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const PotentialData pd = potential_data(triple.potential, chart, geo, p);
  const Tensor dric = covariant_derivative(ricci_field(chart), chart, p, geo.christoffel);
  const auto up = raise_vector(pd.grad, geo.ginv);
  const auto& df = pd.grad;
  const double rn = geo.scalar / (n - 1);
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        const double lhs = pd.f * (dric(i, j, k) - dric(j, i, k));
        double rm = 0.0;
        for (int l = 0; l < n; ++l) rm += geo.riemann(i, j, k, l) * up[static_cast<std::size_t>(l)];
        const double sc = rn * (df[ui] * geo.g(j, k) - df[uj] * geo.g(i, k));
        const double rc = -(df[ui] * geo.ricci(j, k) - df[uj] * geo.ricci(i, k));
        r.abs = std::max(r.abs, std::abs(lhs - rm - sc - rc));
        r.scale = std::max(r.scale, max_of({lhs, rm, sc, rc}));
      }
  return r;
}

Tensor tensor_T(const Geometry& geo, std::span<const double> df) {
  const int n = geo.g.dim();
  const auto up = raise_vector(df, geo.ginv);
  std::vector<double> ric_df(static_cast<std::size_t>(n), 0.0);  // R_is ∇^s f
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s) ric_df[static_cast<std::size_t>(i)] += geo.ricci(i, s) * up[static_cast<std::size_t>(s)];
  const double a = (n - 1.0) / (n - 2.0);
  const double b = 1.0 / (n - 2.0);
  const double c = geo.scalar / (n - 2.0);
  Tensor t(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        const double v = a * (geo.ricci(i, k) * df[uj] - geo.ricci(j, k) * df[ui]) +
                         b * (geo.g(i, k) * ric_df[uj] - geo.g(j, k) * ric_df[ui]) -
                         c * (geo.g(i, k) * df[uj] - geo.g(j, k) * df[ui]);
        t(i, j, k) = v;
        t(j, i, k) = -v;
      }
  t.declare(Symmetry::antisymmetric(3, 0, 1));
  return t;
}

Tensor tensor_T(const VStaticTriple& triple, std::span<const double> p) {
  triple.chart.require_interior(p);
  const Geometry geo = geometry_at(triple.chart, p);
  return tensor_T(geo, gradient(triple.potential.f, triple.chart, p));
}

Residual decomposition_residual(const VStaticTriple& triple, std::span<const double> p) {
  const Chart& chart = triple.chart;
  chart.require_interior(p);
  require_vstatic(triple, p);
  const Geometry geo = geometry_at(chart, p);
  const PotentialData pd = potential_data(triple.potential, chart, geo, p);
  const Tensor c = cotton_from(covariant_derivative(ricci_field(chart), chart, p, geo.christoffel), geo);
  const Tensor t = tensor_T(geo, pd.grad);
  const Tensor wf = radial_weyl(weyl(geo), pd.grad, geo.ginv);
  Residual r;
  for (std::size_t e = 0; e < c.size(); ++e) {
    const double fc = pd.f * c[e];
    r.abs = std::max(r.abs, std::abs(fc - t[e] - wf[e]));
    r.scale = std::max(r.scale, max_of({fc, t[e], wf[e]}));
  }
  return r;
}

}  // namespace curvlab
