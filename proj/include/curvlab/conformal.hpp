#pragma once

#include <span>

#include "curvlab/chart.hpp"
#include "curvlab/curvature.hpp"

namespace curvlab {

struct Potential;

struct ConformalBundle {
  Tensor weyl;    // W_ijkl
  Tensor cotton;  // C_ijk
  Tensor bach;    // B_ij
  Point evaluated_at;
};

// Ricci/scalar part of the Weyl decomposition:
//   (R_ik g_jl + R_jl g_ik - R_il g_jk - R_jk g_il) / (n-2)
//   - R (g_ik g_jl - g_il g_jk) / ((n-1)(n-2))
Tensor schouten_part(const Geometry& geo);

// W = Rm - schouten_part; exact closure by construction.
Tensor weyl(const Geometry& geo);
Tensor weyl(const Chart& chart, std::span<const double> p);

// C_ijk = ∇_i R_jk - ∇_j R_ik - (∇_i R g_jk - ∇_j R g_ik) / (2(n-1)),
// assembled from ∇Ric (layout (i, j, k) = ∇_i R_jk). Exactly antisymmetric
// in (i, j).
Tensor cotton_from(const Tensor& grad_ricci, const Geometry& geo);
Tensor cotton(const Chart& chart, std::span<const double> p);

// Weyl / Cotton / Ricci-gradient fields for nesting finite differences.
TensorField weyl_field(const Chart& chart);
TensorField cotton_field(const Chart& chart);
TensorField grad_ricci_field(const Chart& chart);

// n >= 4: B_ij = ∇^k∇^l W_ikjl / (n-3) + R^kl W_ikjl / (n-2).
// n == 3: B_ij = ∇^k C_kij.
// The mixed Weyl W_i^k_j^l raises slots 2 and 4 with the inverse metric at
// the evaluation point.
Tensor bach(const Chart& chart, std::span<const double> p);

ConformalBundle conformal_bundle(const Chart& chart, std::span<const double> p);

// max |C_ijk + (n-2)/(n-3) ∇^l W_ijkl|; DimensionUnsupported for n = 3.
double cotton_weyl_relation_residual(const Chart& chart, std::span<const double> p);

// W_ijkl ∇^l f; the contraction is over the last slot.
Tensor radial_weyl(const Tensor& weyl, std::span<const double> grad_f, const Tensor& ginv);
Tensor radial_weyl(const Chart& chart, const Potential& potential, std::span<const double> p);
double radial_weyl_norm(const Chart& chart, const Potential& potential, std::span<const double> p);

// Largest |g-contraction| of W over any slot pair.
double weyl_trace_defect(const Tensor& weyl, const Tensor& ginv);

// max |Rm - W - schouten_part|.
double weyl_decomposition_residual(const Geometry& geo, const Tensor& weyl);

}  // namespace curvlab
