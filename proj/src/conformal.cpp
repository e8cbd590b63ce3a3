#include "curvlab/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/error.hpp"
#include "curvlab/vstatic.hpp"

namespace curvlab {

Tensor schouten_part(const Geometry& geo) {
  const int n = geo.g.dim();
  const double a = 1.0 / (n - 2);
  const double b = geo.scalar / ((n - 1.0) * (n - 2.0));
  const Tensor& g = geo.g;
  const Tensor& ric = geo.ricci;
  Tensor out(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          out(i, j, k, l) = a * (ric(i, k) * g(j, l) + ric(j, l) * g(i, k) - ric(i, l) * g(j, k) - ric(j, k) * g(i, l)) -
                            b * (g(j, l) * g(i, k) - g(i, l) * g(j, k));
        }
  return out;
}

Tensor weyl(const Geometry& geo) {
  if (geo.g.dim() < 3) throw Error(ErrorKind::DimensionUnsupported, "Weyl tensor needs n >= 3");
  Tensor w = geo.riemann - schouten_part(geo);
  w.declare(Symmetry::antisymmetric(4, 0, 1));
  w.declare(Symmetry::antisymmetric(4, 2, 3));
  w.declare(Symmetry::pair_exchange());
  return w;
}

Tensor weyl(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return weyl(geometry_at(chart, p));
}

Tensor cotton_from(const Tensor& dric, const Geometry& geo) {
  const int n = geo.g.dim();
  const Tensor dscal = trace(dric, 1, 2, geo.ginv);
  const double c = 1.0 / (2.0 * (n - 1));
  Tensor out(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = dric(i, j, k) - dric(j, i, k) - c * (dscal(i) * geo.g(j, k) - dscal(j) * geo.g(i, k));
        out(i, j, k) = v;
        out(j, i, k) = -v;
      }
  out.declare(Symmetry::antisymmetric(3, 0, 1));
  return out;
}

TensorField grad_ricci_field(const Chart& chart) {
  return [&chart](std::span<const double> q) {
    const Geometry geo = geometry_at(chart, q);
    return covariant_derivative(ricci_field(chart), chart, q, geo.christoffel);
  };
}

TensorField cotton_field(const Chart& chart) {
  return [&chart](std::span<const double> q) {
    const Geometry geo = geometry_at(chart, q);
    return cotton_from(covariant_derivative(ricci_field(chart), chart, q, geo.christoffel), geo);
  };
}

TensorField weyl_field(const Chart& chart) {
  return [&chart](std::span<const double> q) { return weyl(geometry_at(chart, q)); };
}

Tensor cotton(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return cotton_field(chart)(p);
}

Tensor bach(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  Tensor b(n, 2);
  if (n == 3) {
    // B_ij = g^ka ∇_a C_kij
    const Tensor dc = covariant_derivative(cotton_field(chart), chart, p, geo.christoffel);
    b = trace(dc, 0, 1, geo.ginv);
  } else {
    const TensorField wf = weyl_field(chart);
    const TensorField dw = [&chart, &wf](std::span<const double> q) {
      return covariant_derivative(wf, chart, q, geometry_at(chart, q).christoffel);
    };
    // ddw(a, b, i, k, j, l) = ∇_a ∇_b W_ikjl; contract a with k and b with l.
    const Tensor ddw = covariant_derivative(dw, chart, p, geo.christoffel);
    const Tensor w = weyl(geo);
    const Tensor ric_up = raise_all(geo.ricci, geo.ginv);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double div2 = 0.0;
        double rw = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            rw += ric_up(k, l) * w(i, k, j, l);
            for (int a = 0; a < n; ++a)
              for (int c = 0; c < n; ++c) div2 += geo.ginv(a, k) * geo.ginv(c, l) * ddw(a, c, i, k, j, l);
          }
        b(i, j) = div2 / (n - 3) + rw / (n - 2);
      }
  }
  return b;
}

ConformalBundle conformal_bundle(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return {weyl(chart, p), cotton(chart, p), bach(chart, p), Point(p.begin(), p.end())};
}

double cotton_weyl_relation_residual(const Chart& chart, std::span<const double> p) {
  const int n = chart.dim();
  if (n == 3) throw Error(ErrorKind::DimensionUnsupported, "Cotton-Weyl divergence relation needs n >= 4");
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const Tensor dw = covariant_derivative(weyl_field(chart), chart, p, geo.christoffel);
  // ∇^l W_ijkl: derivative slot 0 contracted with slot 4.
  const Tensor div = trace(dw, 0, 4, geo.ginv);
  const Tensor c = cotton_from(covariant_derivative(ricci_field(chart), chart, p, geo.christoffel), geo);
  const double factor = (n - 2.0) / (n - 3.0);
  double worst = 0.0;
  for (std::size_t e = 0; e < c.size(); ++e) worst = std::max(worst, std::abs(c[e] + factor * div[e]));
  return worst;
}

Tensor radial_weyl(const Tensor& w, std::span<const double> grad_f, const Tensor& ginv) {
  const int n = w.dim();
  std::vector<double> up(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n; ++a) up[static_cast<std::size_t>(l)] += ginv(l, a) * grad_f[static_cast<std::size_t>(a)];
  Tensor out(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += w(i, j, k, l) * up[static_cast<std::size_t>(l)];
        out(i, j, k) = v;
      }
  return out;
}

Tensor radial_weyl(const Chart& chart, const Potential& potential, std::span<const double> p) {
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const auto grad = gradient(potential.f, chart, p);
  return radial_weyl(weyl(geo), grad, geo.ginv);
}

double radial_weyl_norm(const Chart& chart, const Potential& potential, std::span<const double> p) {
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const auto grad = gradient(potential.f, chart, p);
  return std::sqrt(std::max(0.0, norm_squared(radial_weyl(weyl(geo), grad, geo.ginv), geo.ginv)));
}

double weyl_trace_defect(const Tensor& w, const Tensor& ginv) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) worst = std::max(worst, trace(w, a, b, ginv).max_abs());
  return worst;
}

double weyl_decomposition_residual(const Geometry& geo, const Tensor& w) {
  const Tensor rest = geo.riemann - w - schouten_part(geo);
  return rest.max_abs();
}

}  // namespace curvlab
