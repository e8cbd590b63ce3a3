#include "curvlab/curvature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "curvlab/error.hpp"
#include "curvlab/fd.hpp"

namespace curvlab {

namespace {

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

void fill_riemann_component(Tensor& r, int a, int b, int c, int d, double v) {
  r(a, b, c, d) = v;
  r(b, a, c, d) = -v;
  r(a, b, d, c) = -v;
  r(b, a, d, c) = v;
  r(c, d, a, b) = v;
  r(d, c, a, b) = -v;
  r(c, d, b, a) = -v;
  r(d, c, b, a) = v;
}

Tensor shifted_derivative_shell(const Tensor& t, int n) {
  std::vector<Variance> var;
  var.push_back(Variance::Covariant);
  var.insert(var.end(), t.variance().begin(), t.variance().end());
  Tensor out(n, std::move(var));
  for (const auto& s : t.symmetries()) {
    Symmetry shifted;
    shifted.sign = s.sign;
    shifted.perm.push_back(0);
    for (int k : s.perm) shifted.perm.push_back(k + 1);
    out.declare(std::move(shifted));
  }
  return out;
}

}  // namespace

Tensor spd_inverse(const Tensor& g) {
  const int n = g.dim();
  SmallMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  Eigen::LLT<SmallMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularMetric, "metric is not positive definite");
  }
  const SmallMatrix inv = llt.solve(SmallMatrix::Identity(n, n));
  Tensor out(n, 2, Variance::Contravariant);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  out.declare(Symmetry::symmetric(2, 0, 1));
  return out;
}

Geometry geometry_at(const Chart& chart, std::span<const double> p) {
  const int n = chart.dim();
  MetricJet jet = chart.jet(p);
  Geometry geo;
  geo.ginv = spd_inverse(jet.g);
  geo.g = std::move(jet.g);
  geo.g.declare(Symmetry::symmetric(2, 0, 1));
  const Tensor& dg = jet.dg;
  const Tensor& ddg = jet.ddg;

  // Christoffel symbols of the first kind, (l, i, j) = Γ_{l,ij}.
  Tensor first(n, 3);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = 0.5 * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        first(l, i, j) = v;
        first(l, j, i) = v;
      }

  geo.christoffel = Tensor(n, {Variance::Contravariant, Variance::Covariant, Variance::Covariant});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += geo.ginv(k, l) * first(l, i, j);
        geo.christoffel(k, i, j) = v;
        geo.christoffel(k, j, i) = v;
      }
  geo.christoffel.declare(Symmetry::symmetric(3, 1, 2));

  // R_abcd = ½(∂_b∂_c g_ad + ∂_a∂_d g_bc - ∂_a∂_c g_bd - ∂_b∂_d g_ac)
  //        + Γ^m_bc Γ_{m,ad} - Γ^m_bd Γ_{m,ac}
  // evaluated on canonical (a<b, c<d, (a,b) <= (c,d)) components only.
  Tensor& r = geo.riemann = Tensor(n, 4);
  const Tensor& gam = geo.christoffel;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = a; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (c == a && d < b) continue;
          double v = 0.5 * (ddg(b, c, a, d) + ddg(a, d, b, c) - ddg(a, c, b, d) - ddg(b, d, a, c));
          for (int m = 0; m < n; ++m) v += gam(m, b, c) * first(m, a, d) - gam(m, b, d) * first(m, a, c);
          fill_riemann_component(r, a, b, c, d, v);
        }
  r.declare(Symmetry::antisymmetric(4, 0, 1));
  r.declare(Symmetry::antisymmetric(4, 2, 3));
  r.declare(Symmetry::pair_exchange());

  geo.ricci = Tensor(n, 2);
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) v += geo.ginv(i, k) * r(i, j, k, l);
      geo.ricci(j, l) = v;
      geo.ricci(l, j) = v;
    }
  geo.ricci.declare(Symmetry::symmetric(2, 0, 1));

  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += geo.ginv(i, j) * geo.ricci(i, j);
  geo.scalar = s;
  return geo;
}

Tensor metric_at(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  Tensor g = chart.metric(p);
  const int n = chart.dim();
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(g(i, j) - g(j, i)));
  if (asym > 1e-14) throw Error(ErrorKind::SingularMetric, "metric components are not symmetric");
  spd_inverse(g);
  g.declare(Symmetry::symmetric(2, 0, 1));
  return g;
}

Tensor inverse_metric_at(const Chart& chart, std::span<const double> p) { return spd_inverse(metric_at(chart, p)); }

double partial(const ScalarField& field, const Chart& chart, std::span<const double> p,
               std::span<const int> multi_index) {
  if (multi_index.empty()) return field(p);
  if (field.has_analytic_partials() && multi_index.size() <= 2) {
    const ScalarJet jet = field.jet(p);
    if (multi_index.size() == 1) return jet.grad.at(static_cast<std::size_t>(multi_index[0]));
    return jet.hess(multi_index[0], multi_index[1]);
  }
  return fd::derivative(field.value, chart, p, multi_index, chart.fd());
}

Tensor christoffel(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return geometry_at(chart, p).christoffel;
}

Tensor riemann(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return geometry_at(chart, p).riemann;
}

Tensor ricci(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return geometry_at(chart, p).ricci;
}

double scalar_curvature(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return geometry_at(chart, p).scalar;
}

Tensor traceless_ricci(const Geometry& geo) {
  Tensor out = geo.ricci;
  out.add_scaled(geo.g, -geo.scalar / geo.g.dim());
  return out;
}

Tensor traceless_ricci(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return traceless_ricci(geometry_at(chart, p));
}

double sectional_curvature(const Geometry& geo, std::span<const double> u, std::span<const double> v) {
  const int n = geo.g.dim();
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      uu += geo.g(i, j) * u[ui] * u[uj];
      vv += geo.g(i, j) * v[ui] * v[uj];
      uv += geo.g(i, j) * u[ui] * v[uj];
    }
  const double denom = uu * vv - uv * uv;
  if (denom <= 1e-12) throw Error(ErrorKind::DegeneratePlane, "tangent vectors span no plane");
  double num = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          num += geo.riemann(a, b, c, d) * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)] *
                 u[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(d)];
        }
  return num / denom;
}

double sectional_curvature(const Chart& chart, std::span<const double> p, std::span<const double> u,
                           std::span<const double> v) {
  chart.require_interior(p);
  if (u.size() != static_cast<std::size_t>(chart.dim()) || v.size() != u.size()) {
    throw Error(ErrorKind::InvalidArgument, "tangent vectors must have one component per coordinate");
  }
  return sectional_curvature(geometry_at(chart, p), u, v);
}

Tensor covariant_derivative(const TensorField& field, const Chart& chart, std::span<const double> p,
                            const Tensor& gam) {
  const int n = chart.dim();
  const Tensor t = field(p);
  Tensor out = shifted_derivative_shell(t, n);
  const std::size_t block = t.size();
  const Tensor g = chart.metric(p);
  for (int a = 0; a < n; ++a) {
    const std::array<int, 1> mi{a};
    FdOptions opt = chart.fd();
    opt.step *= fd::arclength_stretch(chart, p, a, g(a, a));
    const Tensor d = fd::derivative(field, chart, p, mi, opt);
    for (std::size_t e = 0; e < block; ++e) out[static_cast<std::size_t>(a) * block + e] = d[e];
  }
  const int r = t.rank();
  if (r == 0) return out;
  std::vector<int> idx(static_cast<std::size_t>(r)), moved(static_cast<std::size_t>(r));
  for (std::size_t e = 0; e < block; ++e) {
    t.unravel(e, idx);
    for (int a = 0; a < n; ++a) {
      double corr = 0.0;
      for (int s = 0; s < r; ++s) {
        const auto us = static_cast<std::size_t>(s);
        moved = idx;
        const bool co = t.variance()[us] == Variance::Covariant;
        for (int c = 0; c < n; ++c) {
          moved[us] = c;
          const double tv = t[t.offset_of(moved)];
          if (co) {
            corr -= gam(c, a, idx[us]) * tv;
          } else {
            corr += gam(idx[us], a, c) * tv;
          }
        }
      }
      out[static_cast<std::size_t>(a) * block + e] += corr;
    }
  }
  return out;
}

Tensor covariant_derivative(const TensorField& field, const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return covariant_derivative(field, chart, p, geometry_at(chart, p).christoffel);
}

std::vector<double> gradient(const ScalarField& field, const Chart& chart, std::span<const double> p) {
  if (field.has_analytic_partials()) return field.jet(p).grad;
  const int n = chart.dim();
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const std::array<int, 1> mi{a};
    g[static_cast<std::size_t>(a)] = fd::derivative(field.value, chart, p, mi, chart.fd());
  }
  return g;
}

namespace {

Tensor hessian_from(const ScalarJet& jet, const Tensor& gam) {
  const int n = gam.dim();
  Tensor h(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0.5 * (jet.hess(i, j) + jet.hess(j, i));
      for (int k = 0; k < n; ++k) v -= gam(k, i, j) * jet.grad[static_cast<std::size_t>(k)];
      h(i, j) = v;
      h(j, i) = v;
    }
  h.declare(Symmetry::symmetric(2, 0, 1));
  return h;
}

}  // namespace

Tensor hessian(const ScalarField& field, const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const ScalarJet jet = field.has_analytic_partials() ? field.jet(p) : fd::scalar_jet(field.value, chart, p, chart.fd());
  return hessian_from(jet, geo.christoffel);
}

double laplacian(const ScalarField& field, const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const ScalarJet jet = field.has_analytic_partials() ? field.jet(p) : fd::scalar_jet(field.value, chart, p, chart.fd());
  const Tensor h = hessian_from(jet, geo.christoffel);
  double lap = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) lap += geo.ginv[i] * h[i];
  return lap;
}

TensorField metric_field(const Chart& chart) {
  return [&chart](std::span<const double> q) {
    Tensor g = chart.metric(q);
    g.declare(Symmetry::symmetric(2, 0, 1));
    return g;
  };
}

TensorField riemann_field(const Chart& chart) {
  return [&chart](std::span<const double> q) { return geometry_at(chart, q).riemann; };
}

TensorField ricci_field(const Chart& chart) {
  return [&chart](std::span<const double> q) { return geometry_at(chart, q).ricci; };
}

ScalarField ricci_norm_squared_field(const Chart& chart) {
  ScalarField f;
  f.value = [&chart](std::span<const double> q) {
    const Geometry geo = geometry_at(chart, q);
    return norm_squared(geo.ricci, geo.ginv);
  };
  return f;
}

double ricci_identity_residual(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const TensorField ric = ricci_field(chart);
  const TensorField dric = [&chart, &ric](std::span<const double> q) {
    return covariant_derivative(ric, chart, q, geometry_at(chart, q).christoffel);
  };
  const Tensor ddric = covariant_derivative(dric, chart, p, geo.christoffel);
  // R_ijk^s with the last slot raised.
  const Tensor rm_up = raise(geo.riemann, 3, geo.ginv);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double rhs = 0.0;
          for (int s = 0; s < n; ++s) rhs += rm_up(i, j, k, s) * geo.ricci(s, l) + rm_up(i, j, l, s) * geo.ricci(k, s);
          const double lhs = ddric(i, j, k, l) - ddric(j, i, k, l);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

double bianchi_residual(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const Tensor drm = covariant_derivative(riemann_field(chart), chart, p, geo.christoffel);
  const Tensor dric = covariant_derivative(ricci_field(chart), chart, p, geo.christoffel);
  const Tensor div = trace(drm, 0, 1, geo.ginv);
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double rhs = dric(k, j, l) - dric(l, j, k);
        worst = std::max(worst, std::abs(div(j, k, l) - rhs));
      }
  return worst;
}

double contracted_bianchi_residual(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const Tensor dric = covariant_derivative(ricci_field(chart), chart, p, geo.christoffel);
  const Tensor div = trace(dric, 0, 2, geo.ginv);   // g^jk ∇_k R_ij (index i left)
  const Tensor dscal = trace(dric, 1, 2, geo.ginv);  // ∇_i R
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(div(i) - 0.5 * dscal(i)));
  return worst;
}

double riemann_symmetry_defect(const Tensor& r) {
  const int n = r.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = r(i, j, k, l);
          worst = std::max(worst, std::abs(v + r(j, i, k, l)));
          worst = std::max(worst, std::abs(v + r(i, j, l, k)));
          worst = std::max(worst, std::abs(v - r(k, l, i, j)));
          worst = std::max(worst, std::abs(v + r(j, k, i, l) + r(k, i, j, l)));
        }
  return worst;
}

}  // namespace curvlab
