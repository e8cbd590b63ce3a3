#pragma once

#include <optional>
#include <span>

#include "curvlab/chart.hpp"
#include "curvlab/curvature.hpp"

namespace curvlab {

// Candidate V-static potential: a scalar field f and the constant κ in
// -(Δf) g + Hess f - f Ric = κ g.
struct Potential {
  ScalarField f;
  double kappa = 0.0;
  bool declared_nonnegative = false;
};

struct VStaticTriple {
  Chart chart;
  Potential potential;
  std::optional<double> declared_scalar_curvature;
};

// Absolute residual together with the scale it is measured against
// (largest magnitude among the individual terms of the identity).
struct Residual {
  double abs = 0.0;
  double scale = 0.0;

  double rel() const { return scale > 0.0 ? abs / scale : abs; }
};

// Residual of a V-static-consequence identity is only meaningful where the
// V-static equation itself holds; operations gated on it throw
// HypothesisViolated above this threshold.
inline constexpr double kVStaticHypothesisTolerance = 1e-5;

// Pointwise data shared by the V-static identities.
struct PotentialData {
  double f = 0.0;
  std::vector<double> grad;  // ∂_i f
  Tensor hess;               // ∇_i∇_j f
  double laplacian = 0.0;
};

PotentialData potential_data(const Potential& potential, const Chart& chart, const Geometry& geo,
                             std::span<const double> p);

// max |-(Δf) g + Hess f - f Ric - κ g|.
Residual vstatic_residual(const VStaticTriple& triple, std::span<const double> p);
// |Δf + R f/(n-1) + nκ/(n-1)|.
Residual trace_residual(const VStaticTriple& triple, std::span<const double> p);
// max |f R̊ic - (Hess f - (Δf/n) g)|.
Residual traceless_residual(const VStaticTriple& triple, std::span<const double> p);

// Gradient identity: f(∇_iR_jk - ∇_jR_ik) = R_ijkl∇^l f + R/(n-1)(∇_if g_jk - ∇_jf g_ik)
//                               - (∇_if R_jk - ∇_jf R_ik).
Residual lemma1_residual(const VStaticTriple& triple, std::span<const double> p);

// T_ijk = (n-1)/(n-2)(R_ik∇_jf - R_jk∇_if) + (g_ik R_js∇^sf - g_jk R_is∇^sf)/(n-2)
//         - R/(n-2)(g_ik∇_jf - g_jk∇_if).
Tensor tensor_T(const Geometry& geo, std::span<const double> grad_f);
Tensor tensor_T(const VStaticTriple& triple, std::span<const double> p);

// max |f C - T - W(·,·,·,∇f)|.
Residual decomposition_residual(const VStaticTriple& triple, std::span<const double> p);

// Throws HypothesisViolated when the V-static residual at p exceeds the gate.
void require_vstatic(const VStaticTriple& triple, std::span<const double> p);

}  // namespace curvlab
