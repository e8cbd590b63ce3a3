#include "curvlab/bochner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curvlab/conformal.hpp"
#include "curvlab/error.hpp"
#include "curvlab/fd.hpp"
#include "curvlab/sample_grid.hpp"

namespace curvlab {

namespace {

std::vector<double> raise_vector(std::span<const double> v, const Tensor& ginv) {
  const int n = ginv.dim();
  std::vector<double> up(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) up[static_cast<std::size_t>(i)] += ginv(i, a) * v[static_cast<std::size_t>(a)];
  return up;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Mixed matrix M^i_j = g^ik T_kj for traces of powers.
Eigen::MatrixXd mixed(const Tensor& t, const Tensor& ginv) {
  const int n = t.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m(i, j) += ginv(i, k) * t(k, j);
  return m;
}

struct RicciAlgebra {
  double scalar = 0.0;
  double ric_norm2 = 0.0;       // |Ric|²
  double traceless_norm2 = 0.0;  // |R̊ic|²
  double tr_ric3 = 0.0;
  double tr_traceless3 = 0.0;
  double weyl_rr = 0.0;  // W_ijkl R^ik R^jl
  double riem_rr = 0.0;  // R_ijkl R^ik R^jl
};

RicciAlgebra ricci_algebra(const Geometry& geo, const Tensor& w) {
  const int n = geo.g.dim();
  RicciAlgebra a;
  a.scalar = geo.scalar;
  const Eigen::MatrixXd m = mixed(geo.ricci, geo.ginv);
  const Eigen::MatrixXd m0 = m - (geo.scalar / n) * Eigen::MatrixXd::Identity(n, n);
  a.ric_norm2 = (m * m).trace();
  a.traceless_norm2 = (m0 * m0).trace();
  a.tr_ric3 = (m * m * m).trace();
  a.tr_traceless3 = (m0 * m0 * m0).trace();
  const Tensor up = raise_all(geo.ricci, geo.ginv);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rr = up(i, k) * up(j, l);
          a.weyl_rr += w(i, j, k, l) * rr;
          a.riem_rr += geo.riemann(i, j, k, l) * rr;
        }
  return a;
}

// Everything the divergence formulas share at one point.
struct Ingredients {
  Geometry geo;
  PotentialData pd;
  Tensor dric;    // ∇_i R_jk
  Tensor cotton;  // C_ijk
  Tensor weyl;
  RicciAlgebra alg;
  std::vector<double> grad_phi;  // ∂_i |Ric|²
  double lap_phi = 0.0;          // Δ|Ric|²
  double half_div = 0.0;         // ½ div(f∇|Ric|²)
  double cotton_norm2 = 0.0;
  double gradric_norm2 = 0.0;
  double grad_f_grad_phi = 0.0;  // <∇f, ∇|Ric|²>
};

double ricci_norm_squared_at(const Chart& chart, std::span<const double> q) {
  const Geometry geo = geometry_at(chart, q);
  return norm_squared(geo.ricci, geo.ginv);
}

struct RicnormDerivatives {
  std::vector<double> grad;  // ∂_i |Ric|²
  double laplacian = 0.0;
};

// The Laplacian of |Ric|² is a second difference of a computed quantity whose
// rounding noise grows with the inverse metric near the coordinate poles.
// Each stencil arm spans about b·h of arclength, b = 2 (max g^ii)^{1/6}, which
// balances that noise against the h⁴ truncation; steps stay inside the box.
RicnormDerivatives ricnorm_derivatives(const Chart& chart, std::span<const double> p, const Geometry& geo) {
  const int n = chart.dim();
  double cond = 1.0;
  for (int a = 0; a < n; ++a) cond = std::max(cond, geo.ginv(a, a));
  const double balance = 2.0 * std::pow(cond, 1.0 / 6.0);
  std::vector<double> scale(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto c = static_cast<std::size_t>(a);
    const Interval& box = chart.domain()[c];
    const double room = 0.9 * std::min(p[c] - box.lo, box.hi - p[c]) / chart.fd().step;
    const double arclength = balance / std::sqrt(std::min(1.0, geo.g(a, a)));
    scale[c] = std::max(1.0, std::min(room, arclength));
  }
  const ScalarJet phi = fd::scalar_jet([&chart](std::span<const double> q) { return ricci_norm_squared_at(chart, q); },
                                       chart, p, chart.fd(), scale);
  RicnormDerivatives out;
  out.grad = phi.grad;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double hij = phi.hess(i, j);
      for (int k = 0; k < n; ++k) hij -= geo.christoffel(k, i, j) * phi.grad[static_cast<std::size_t>(k)];
      out.laplacian += geo.ginv(i, j) * hij;
    }
  return out;
}

Ingredients gather(const Chart& chart, const ScalarField& f, std::span<const double> p) {
  Ingredients in;
  in.geo = geometry_at(chart, p);
  in.pd = potential_data(Potential{f, 0.0, false}, chart, in.geo, p);
  in.dric = covariant_derivative(ricci_field(chart), chart, p, in.geo.christoffel);
  in.cotton = cotton_from(in.dric, in.geo);
  in.weyl = weyl(in.geo);
  in.alg = ricci_algebra(in.geo, in.weyl);
  in.cotton_norm2 = norm_squared(in.cotton, in.geo.ginv);
  in.gradric_norm2 = norm_squared(in.dric, in.geo.ginv);

  const RicnormDerivatives phi = ricnorm_derivatives(chart, p, in.geo);
  in.grad_phi = phi.grad;
  in.lap_phi = phi.laplacian;
  in.grad_f_grad_phi = dot(in.pd.grad, raise_vector(in.grad_phi, in.geo.ginv));
  in.half_div = 0.5 * (in.grad_f_grad_phi + in.pd.f * in.lap_phi);
  return in;
}

// div of V_i = f C_ijk R^jk by finite differences of the contracted field.
double div_f_cotton_ricci(const Chart& chart, const ScalarField& f, std::span<const double> p, const Tensor& gam,
                          const Tensor& ginv) {
  const TensorField v = [&chart, &f](std::span<const double> q) {
    const Geometry geo = geometry_at(chart, q);
    const Tensor c = cotton_from(covariant_derivative(ricci_field(chart), chart, q, geo.christoffel), geo);
    const Tensor up = raise_all(geo.ricci, geo.ginv);
    const double fq = f(q);
    const int n = geo.g.dim();
    Tensor out(n, 1);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += c(i, j, k) * up(j, k);
      out(i) = fq * s;
    }
    return out;
  };
  const Tensor dv = covariant_derivative(v, chart, p, gam);
  return trace(dv, 0, 1, ginv).value();
}

// C_ijk ∇^j f R^ik
double cotton_gradf_ricci(const Ingredients& in) {
  const int n = in.geo.g.dim();
  const auto up_f = raise_vector(in.pd.grad, in.geo.ginv);
  const Tensor up_r = raise_all(in.geo.ricci, in.geo.ginv);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += in.cotton(i, j, k) * up_f[static_cast<std::size_t>(j)] * up_r(i, k);
  return s;
}

// W_ijkl ∇^l f C^ijk
double weyl_gradf_cotton(const Ingredients& in) {
  const Tensor rw = radial_weyl(in.weyl, in.pd.grad, in.geo.ginv);
  return inner(rw, in.cotton, in.geo.ginv);
}

double max_abs_of(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

void require_radial_weyl(const Ingredients& in) {
  const Tensor rw = radial_weyl(in.weyl, in.pd.grad, in.geo.ginv);
  const double norm = std::sqrt(std::max(0.0, norm_squared(rw, in.geo.ginv)));
  if (norm > kRadialWeylTolerance) {
    std::ostringstream os;
    os << "radial Weyl norm " << norm << " exceeds " << kRadialWeylTolerance;
    throw Error(ErrorKind::HypothesisViolated, os.str());
  }
}

BochnerBreakdown breakdown_from(const Ingredients& in, double kappa) {
  const double n = in.geo.g.dim();
  const double f = in.pd.f;
  BochnerBreakdown b;
  b.lhs = in.half_div;
  b.term_cotton = (n - 2.0) / (n - 1.0) * f * in.cotton_norm2;
  b.term_gradric = f * in.gradric_norm2;
  b.term_kappa = n * kappa / (n - 1.0) * in.alg.traceless_norm2;
  b.term_cubic =
      f * (2.0 * in.alg.scalar * in.alg.traceless_norm2 / (n - 1.0) + 2.0 * n / (n - 2.0) * in.alg.tr_traceless3);
  b.term_weyl_cotton = -(n - 2.0) / (n - 1.0) * weyl_gradf_cotton(in);
  b.term_weyl_ricci = -2.0 * f * in.alg.weyl_rr;
  b.residual = b.lhs - b.terms_sum();
  return b;
}

double eq313_rhs_from(const Ingredients& in, double kappa) {
  const double n = in.geo.g.dim();
  const double f = in.pd.f;
  return (in.cotton_norm2 / (n - 1.0) + in.gradric_norm2) * f + n * kappa / (n - 1.0) * in.alg.traceless_norm2 +
         (2.0 * in.alg.scalar * in.alg.traceless_norm2 / (n - 1.0) + 2.0 * n / (n - 2.0) * in.alg.tr_traceless3) * f;
}

double okumura_from(const RicciAlgebra& a, int n) {
  const double norm = std::sqrt(std::max(0.0, a.traceless_norm2));
  return a.tr_traceless3 + (n - 2.0) / std::sqrt(n * (n - 1.0)) * norm * norm * norm;
}

}  // namespace

double BochnerBreakdown::terms_sum() const {
  return term_cotton + term_gradric + term_kappa + term_cubic + term_weyl_cotton + term_weyl_ricci;
}

double BochnerBreakdown::scale() const {
  return max_abs_of({lhs, term_cotton, term_gradric, term_kappa, term_cubic, term_weyl_cotton, term_weyl_ricci});
}

Residual BochnerBreakdown::as_residual() const { return {std::abs(residual), scale()}; }

double SpectralData::reconstruction_defect(const Tensor& t, const Tensor& g) const {
  const int n = t.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < eigenvalues.size(); ++a) {
        double li = 0.0, lj = 0.0;
        for (int k = 0; k < n; ++k) {
          li += g(i, k) * eigenvectors[a][static_cast<std::size_t>(k)];
          lj += g(j, k) * eigenvectors[a][static_cast<std::size_t>(k)];
        }
        s += eigenvalues[a] * li * lj;
      }
      worst = std::max(worst, std::abs(s - t(i, j)));
    }
  return worst;
}

double SpectralData::orthonormality_defect(const Tensor& g) const {
  const int n = g.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < eigenvectors.size(); ++a)
    for (std::size_t b = 0; b < eigenvectors.size(); ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += g(i, j) * eigenvectors[a][static_cast<std::size_t>(i)] * eigenvectors[b][static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

SpectralData spectral_decomposition(const Tensor& t, const Tensor& g) {
  const int n = t.dim();
  Eigen::MatrixXd a(n, n), b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a(i, j) = 0.5 * (t(i, j) + t(j, i));
      b(i, j) = 0.5 * (g(i, j) + g(j, i));
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateEigenbasis, "generalized eigen-solve failed");
  }
  SpectralData s;
  for (int c = 0; c < n; ++c) {
    s.eigenvalues.push_back(solver.eigenvalues()(c));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = solver.eigenvectors()(i, c);
    s.eigenvectors.push_back(std::move(v));
  }
  const double defect = s.orthonormality_defect(g);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "eigenbasis g-orthonormal only to " << defect;
    throw Error(ErrorKind::DegenerateEigenbasis, os.str());
  }
  return s;
}

double div_f_grad_ricnorm(const Chart& chart, const ScalarField& f, std::span<const double> p) {
  chart.require_interior(p);
  const Geometry geo = geometry_at(chart, p);
  const PotentialData pd = potential_data(Potential{f, 0.0, false}, chart, geo, p);
  const RicnormDerivatives phi = ricnorm_derivatives(chart, p, geo);
  return 0.5 * (dot(pd.grad, raise_vector(phi.grad, geo.ginv)) + pd.f * phi.laplacian);
}

double div_f_grad_ricnorm(const VStaticTriple& triple, std::span<const double> p) {
  return div_f_grad_ricnorm(triple.chart, triple.potential.f, p);
}

void require_constant_scalar_curvature(const Chart& chart, std::span<const double> p) {
  double lo = scalar_curvature(chart, p);
  double hi = lo;
  const SampleGrid grid = SampleGrid::random(chart, 16, 0xc0ffeeULL);
  for (const Point& q : grid.points()) {
    const double r = geometry_at(chart, q).scalar;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi - lo > kConstantScalarTolerance) {
    std::ostringstream os;
    os << "scalar curvature spread " << hi - lo << " exceeds " << kConstantScalarTolerance;
    throw Error(ErrorKind::NonConstantScalarCurvature, os.str());
  }
}

Residual lemma2_residual(const Chart& chart, const ScalarField& f, std::span<const double> p) {
  chart.require_interior(p);
  require_constant_scalar_curvature(chart, p);
  const Ingredients in = gather(chart, f, p);
  const double n = chart.dim();
  const double fv = in.pd.f;
  const double r = in.alg.scalar;
  const double lhs = 2.0 * in.half_div;
  const double terms[] = {
      -fv * in.cotton_norm2,
      2.0 * fv * in.gradric_norm2,
      in.grad_f_grad_phi,
      2.0 * n / (n - 2.0) * fv * in.alg.tr_ric3,
      -(4.0 * n - 2.0) / ((n - 1.0) * (n - 2.0)) * fv * r * in.alg.traceless_norm2,
      -2.0 / (n * (n - 2.0)) * fv * r * r * r,
      2.0 * div_f_cotton_ricci(chart, f, p, in.geo.christoffel, in.geo.ginv),
      2.0 * cotton_gradf_ricci(in),
      -2.0 * fv * in.alg.weyl_rr,
  };
  double rhs = 0.0;
  double scale = std::abs(lhs);
  for (double t : terms) {
    rhs += t;
    scale = std::max(scale, std::abs(t));
  }
  return {std::abs(lhs - rhs), scale};
}

Residual lemma3_residual(const VStaticTriple& triple, std::span<const double> p) {
  const Chart& chart = triple.chart;
  chart.require_interior(p);
  require_vstatic(triple, p);
  const Ingredients in = gather(chart, triple.potential.f, p);
  const double n = chart.dim();
  const double fv = in.pd.f;
  const double terms[] = {
      -fv * in.cotton_norm2,
      fv * in.gradric_norm2,
      in.grad_f_grad_phi,
      -n * triple.potential.kappa / (n - 1.0) * in.alg.traceless_norm2,
      2.0 * div_f_cotton_ricci(chart, triple.potential.f, p, in.geo.christoffel, in.geo.ginv),
  };
  double rhs = 0.0;
  double scale = std::abs(in.half_div);
  for (double t : terms) {
    rhs += t;
    scale = std::max(scale, std::abs(t));
  }
  return {std::abs(in.half_div - rhs), scale};
}

BochnerBreakdown theorem2_breakdown(const VStaticTriple& triple, std::span<const double> p) {
  triple.chart.require_interior(p);
  require_vstatic(triple, p);
  return breakdown_from(gather(triple.chart, triple.potential.f, p), triple.potential.kappa);
}

Residual radial_weyl_specialization_residual(const VStaticTriple& triple, std::span<const double> p) {
  triple.chart.require_interior(p);
  require_vstatic(triple, p);
  const Ingredients in = gather(triple.chart, triple.potential.f, p);
  require_radial_weyl(in);
  const double rhs = eq313_rhs_from(in, triple.potential.kappa);
  const BochnerBreakdown b = breakdown_from(in, triple.potential.kappa);
  return {std::abs(in.half_div - rhs), std::max({b.scale(), std::abs(rhs)})};
}

Residual eq312_residual(const VStaticTriple& triple, std::span<const double> p) {
  const int n = triple.chart.dim();
  if (n < 4) throw Error(ErrorKind::DimensionUnsupported, "Weyl-Ricci-Cotton balance needs n >= 4");
  triple.chart.require_interior(p);
  require_vstatic(triple, p);
  const Geometry geo = geometry_at(triple.chart, p);
  Ingredients in;
  in.geo = geo;
  in.pd = potential_data(triple.potential, triple.chart, geo, p);
  in.weyl = weyl(geo);
  require_radial_weyl(in);
  in.dric = covariant_derivative(ricci_field(triple.chart), triple.chart, p, geo.christoffel);
  in.cotton = cotton_from(in.dric, geo);
  in.alg = ricci_algebra(geo, in.weyl);
  const double lhs = in.pd.f * in.alg.weyl_rr;
  const double rhs = (n - 3.0) / (2.0 * (n - 1.0)) * in.pd.f * norm_squared(in.cotton, geo.ginv);
  return {std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs))};
}

double okumura_gap(const Geometry& geo) { return okumura_from(ricci_algebra(geo, weyl(geo)), geo.g.dim()); }

double okumura_gap(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return okumura_gap(geometry_at(chart, p));
}

double pinching_gap(const Geometry& geo) {
  const int n = geo.g.dim();
  const RicciAlgebra a = ricci_algebra(geo, weyl(geo));
  return a.scalar * a.scalar / (n * (n - 1.0)) - a.traceless_norm2;
}

double pinching_gap(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return pinching_gap(geometry_at(chart, p));
}

Residual lemma4_residual(const Geometry& geo) {
  const double n = geo.g.dim();
  const RicciAlgebra a = ricci_algebra(geo, weyl(geo));
  const double lhs_a = a.tr_ric3;
  const double lhs_b = -a.riem_rr;
  const double r1 = a.scalar * a.traceless_norm2 / (n - 1.0);
  const double r2 = n / (n - 2.0) * a.tr_traceless3;
  const double r3 = -a.weyl_rr;
  return {std::abs(lhs_a + lhs_b - (r1 + r2 + r3)), max_abs_of({lhs_a, lhs_b, r1, r2, r3})};
}

Residual lemma4_residual(const Chart& chart, std::span<const double> p) {
  chart.require_interior(p);
  return lemma4_residual(geometry_at(chart, p));
}

BergerResult berger_check(const Chart& chart, std::span<const double> p, const TensorField& tensor) {
  chart.require_interior(p);
  const int n = chart.dim();
  const Geometry geo = geometry_at(chart, p);
  const Tensor t = tensor(p);
  BergerResult out;
  out.spectrum = spectral_decomposition(t, geo.g);

  const TensorField dt = [&chart, &tensor](std::span<const double> q) {
    return covariant_derivative(tensor, chart, q, geometry_at(chart, q).christoffel);
  };
  // ddt(a, b, c, d) = ∇_a ∇_b T_cd
  const Tensor ddt = covariant_derivative(dt, chart, p, geo.christoffel);
  const Tensor t_up = raise_all(t, geo.ginv);
  double e = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double comm = ddt(a, b, c, d) - ddt(b, a, c, d);
          if (comm == 0.0) continue;
          // (∇_i∇_j T_ik - ∇_j∇_i T_ik) T_jk: a ↔ c contracted, b and d meet T^jk.
          e += geo.ginv(a, c) * comm * t_up(b, d);
        }
  out.commutator = e;

  const auto& vecs = out.spectrum.eigenvectors;
  const auto& lam = out.spectrum.eigenvalues;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& u = vecs[static_cast<std::size_t>(i)];
      const auto& v = vecs[static_cast<std::size_t>(j)];
      double k = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              k += geo.riemann(a, b, c, d) * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)] *
                   u[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(d)];
      const double dl = lam[static_cast<std::size_t>(i)] - lam[static_cast<std::size_t>(j)];
      sum += k * dl * dl;
    }
  out.eigen_sum = sum;
  return out;
}

std::string_view to_string(RadialIntegrand id) {
  switch (id) {
    case RadialIntegrand::DivFGradRicnorm: return "div_f_grad_ricnorm";
    case RadialIntegrand::RadialWeylRhs: return "eq313_rhs";
    case RadialIntegrand::OkumuraBoundIntegrand: return "eq315_integrand";
  }
  return "unknown";
}

RadialIntegrand parse_radial_integrand(std::string_view name) {
  for (RadialIntegrand id :
       {RadialIntegrand::DivFGradRicnorm, RadialIntegrand::RadialWeylRhs, RadialIntegrand::OkumuraBoundIntegrand}) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown integrand '" + std::string(name) + "'");
}

double radial_integrand(const VStaticTriple& triple, RadialIntegrand id, std::span<const double> p) {
  const Chart& chart = triple.chart;
  const double kappa = triple.potential.kappa;
  if (id == RadialIntegrand::DivFGradRicnorm) {
    const Geometry geo = geometry_at(chart, p);
    const PotentialData pd = potential_data(triple.potential, chart, geo, p);
    const RicnormDerivatives phi = ricnorm_derivatives(chart, p, geo);
    return dot(pd.grad, raise_vector(phi.grad, geo.ginv)) + pd.f * phi.laplacian;
  }
  // Both remaining integrands avoid second derivatives of |Ric|².
  Ingredients in;
  in.geo = geometry_at(chart, p);
  in.pd = potential_data(triple.potential, chart, in.geo, p);
  in.dric = covariant_derivative(ricci_field(chart), chart, p, in.geo.christoffel);
  in.cotton = cotton_from(in.dric, in.geo);
  in.weyl = weyl(in.geo);
  in.alg = ricci_algebra(in.geo, in.weyl);
  in.cotton_norm2 = norm_squared(in.cotton, in.geo.ginv);
  in.gradric_norm2 = norm_squared(in.dric, in.geo.ginv);
  if (id == RadialIntegrand::RadialWeylRhs) return eq313_rhs_from(in, kappa);
  const double n = chart.dim();
  const double root = std::sqrt(n * (n - 1.0));
  const double norm = std::sqrt(std::max(0.0, in.alg.traceless_norm2));
  const double f = in.pd.f;
  return (in.cotton_norm2 / (n - 1.0) + in.gradric_norm2) * f + n * kappa / (n - 1.0) * in.alg.traceless_norm2 +
         2.0 * n / root * in.alg.traceless_norm2 * (in.alg.scalar / root - norm) * f;
}

GaussRule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "quadrature order must be positive");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int m = order;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Newton on P_m from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return rule;
}

double sphere_volume(int k) {
  const double a = (k + 1) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

bool RadialIntegral::vanishes() const {
  const double v = std::abs(value);
  return v <= kIntegralRelTolerance * abs_integral || v <= kIntegralErrorMultiple * numerical_error() ||
         v <= kIntegralAbsFloor;
}

RadialIntegral integrate_radial(const VStaticTriple& triple, RadialIntegrand id,
                                const RadialQuadratureOptions& options) {
  const Chart& chart = triple.chart;
  if (!chart.warped()) {
    throw Error(ErrorKind::NotWarpedProduct, "chart '" + chart.name() + "' is not a warped product over a round sphere");
  }
  if (options.levels < 2) throw Error(ErrorKind::InvalidArgument, "need at least two clip levels");
  const WarpedProfile& profile = *chart.warped();
  const int n = chart.dim();
  const GaussRule rule = gauss_legendre(options.order);
  const double vol = sphere_volume(n - 1);
  const Interval radial = chart.domain()[0];
  const double width = radial.hi - radial.lo;
  const double delta_min = options.delta_min > 0.0 ? options.delta_min : 1.5 * chart.fd().step;
  int levels = options.levels;
  while (levels > 2 && delta_min * std::pow(2.0, levels - 1) > 0.25 * width) --levels;
  const double delta0 = delta_min * std::pow(2.0, levels - 1);
  if (delta0 >= 0.5 * width) throw Error(ErrorKind::InvalidArgument, "radial interval too short for the clip sequence");

  // Fixed fiber point; every integrand in scope is radial.
  Point p(static_cast<std::size_t>(n), std::numbers::pi / 2.0);
  p.back() = std::numbers::pi;
  auto weighted = [&](double t) {
    p[0] = t;
    const double density = vol * std::sqrt(profile.radial_coefficient(t).value) *
                           std::pow(profile.fiber_coefficient(t).value, 0.5 * (n - 1));
    return radial_integrand(triple, id, p) * density;
  };

  // An end where the fiber collapses is a coordinate pole, not a boundary:
  // the weighted integrand behaves like c t^{n-1} there, and the polar chart
  // loses precision as t → pole. Such ends keep a fixed clip (the chart
  // margin) and add the cap ∫_0^δ c s^{n-1} ds = δ F(δ) / n.
  const double b_mid = profile.fiber_coefficient(radial.lo + 0.5 * width).value;
  const bool lo_pole = profile.fiber_coefficient(radial.lo).value <= 1e-14 * b_mid;
  const bool hi_pole = profile.fiber_coefficient(radial.hi).value <= 1e-14 * b_mid;
  const double pole_clip = chart.margin()[0];
  double caps = 0.0;
  if (lo_pole) caps += pole_clip * weighted(radial.lo + pole_clip) / n;
  if (hi_pole) caps += pole_clip * weighted(radial.hi - pole_clip) / n;
  if (lo_pole && hi_pole) levels = 1;

  RadialIntegral out;
  out.order = options.order;
  for (int level = 0; level < levels; ++level) {
    const double delta = delta0 / std::pow(2.0, level);
    const double a = radial.lo + (lo_pole ? pole_clip : delta);
    const double b = radial.hi - (hi_pole ? pole_clip : delta);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = caps, abs_sum = std::abs(caps);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double v = weighted(mid + half * rule.nodes[q]) * rule.weights[q] * half;
      sum += v;
      abs_sum += std::abs(v);
    }
    out.deltas.push_back(delta);
    out.raw.push_back(sum);
    out.abs_integral = abs_sum;
  }
  // I(δ) = I0 + c1 δ + c2 δ² + ...; column k removes δ^k.
  std::vector<double> table = out.raw;
  double previous = table.back();
  for (int k = 1; k < levels; ++k) {
    const double factor = std::pow(2.0, k);
    previous = table.back();
    for (int l = levels - 1; l >= k; --l) {
      const auto ul = static_cast<std::size_t>(l);
      table[ul] = (factor * table[ul] - table[ul - 1]) / (factor - 1.0);
    }
  }
  out.value = table.back();
  out.extrapolation_error = std::abs(out.value - previous);
  if (options.estimate_fd_noise) {
    VStaticTriple fine = triple;
    // A halved step keeps the stencil inside the smallest clip.
    fine.chart.with_fd({0.5 * chart.fd().step, chart.fd().richardson_levels});
    RadialQuadratureOptions again = options;
    again.estimate_fd_noise = false;
    again.delta_min = delta_min;
    again.levels = levels;
    out.fd_noise = std::abs(out.value - integrate_radial(fine, id, again).value);
  }
  return out;
}

}  // namespace curvlab
