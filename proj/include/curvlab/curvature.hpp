#pragma once

#include <span>

#include "curvlab/chart.hpp"
#include "curvlab/tensor.hpp"

// Curvature pipeline: metric jet -> Christoffel -> Riemann -> Ricci.
//
// Sign convention: R_ijkl is pinned so that the unit round sphere has
// R_ijkl = g_ik g_jl - g_il g_jk, i.e. R_ijij > 0 is sectional curvature and
// R_jl = g^ik R_ijkl. Index layout of derived tensors puts the derivative
// slot first: covariant_derivative(Ric)(i, j, k) = ∇_i R_jk.
namespace curvlab {

// Everything algebraic at one point, computed together.
struct Geometry {
  Tensor g;
  Tensor ginv;
  Tensor christoffel;  // (k, i, j) = Γ^k_ij
  Tensor riemann;      // (i, j, k, l) = R_ijkl
  Tensor ricci;        // (i, j) = R_ij
  double scalar = 0.0;
};

// No sampling-region check; used on finite-difference stencils.
Geometry geometry_at(const Chart& chart, std::span<const double> p);

Tensor metric_at(const Chart& chart, std::span<const double> p);
Tensor inverse_metric_at(const Chart& chart, std::span<const double> p);

// Inverse of a symmetric positive-definite matrix; SingularMetric otherwise.
Tensor spd_inverse(const Tensor& g);

// Coordinate partial of a scalar field. Analytic partials win when the field
// registers them (order <= 2); otherwise Richardson-extrapolated central FD.
double partial(const ScalarField& field, const Chart& chart, std::span<const double> p,
               std::span<const int> multi_index);

Tensor christoffel(const Chart& chart, std::span<const double> p);
Tensor riemann(const Chart& chart, std::span<const double> p);
Tensor ricci(const Chart& chart, std::span<const double> p);
double scalar_curvature(const Chart& chart, std::span<const double> p);
Tensor traceless_ricci(const Chart& chart, std::span<const double> p);

// K(u, v) = R(u, v, u, v) / (|u|²|v|² - <u, v>²) in the convention above.
double sectional_curvature(const Chart& chart, std::span<const double> p, std::span<const double> u,
                           std::span<const double> v);
double sectional_curvature(const Geometry& geo, std::span<const double> u, std::span<const double> v);

// Riemann, Ricci, Weyl and related algebraic tensors built from a Geometry.
Tensor traceless_ricci(const Geometry& geo);

// ∇T for a tensor field whose slots carry the variances reported by the
// field's values. Result has one extra covariant slot in front.
Tensor covariant_derivative(const TensorField& field, const Chart& chart, std::span<const double> p);
Tensor covariant_derivative(const TensorField& field, const Chart& chart, std::span<const double> p,
                            const Tensor& christoffel_at_p);

Tensor hessian(const ScalarField& field, const Chart& chart, std::span<const double> p);
double laplacian(const ScalarField& field, const Chart& chart, std::span<const double> p);

// Gradient components ∂_i f (analytic if registered).
std::vector<double> gradient(const ScalarField& field, const Chart& chart, std::span<const double> p);

// Fields over the chart for nesting finite differences.
TensorField metric_field(const Chart& chart);
TensorField riemann_field(const Chart& chart);
TensorField ricci_field(const Chart& chart);
ScalarField ricci_norm_squared_field(const Chart& chart);

// max |∇_i∇_j R_kl - ∇_j∇_i R_kl - R_ijk^s R_sl - R_ijl^s R_ks|.
double ricci_identity_residual(const Chart& chart, std::span<const double> p);

// max |(div Rm)_jkl - (∇_k R_jl - ∇_l R_jk)| with (div Rm)_jkl = ∇^i R_ijkl.
double bianchi_residual(const Chart& chart, std::span<const double> p);

// max_i |g^jk ∇_k R_ij - ½ ∇_i R|.
double contracted_bianchi_residual(const Chart& chart, std::span<const double> p);

// First Bianchi identity and pair symmetries of a Riemann tensor.
double riemann_symmetry_defect(const Tensor& riemann);

}  // namespace curvlab
