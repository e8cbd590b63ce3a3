#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "curvlab/chart.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/vstatic.hpp"

// Divergence formulas for ½ div(f ∇|Ric|²), the cubic Ricci inequalities,
// the Berger commutator identity and radial quadrature on warped products.
//
// Index placement: all contractions go through the inverse metric, so the
// all-lower-index formulas below are read in an orthonormal frame.
namespace curvlab {

// ½ div(f∇|Ric|²) = (n-2)/(n-1) f|C|² + f|∇Ric|² + nκ/(n-1) |R̊ic|²
//                   + f (2R|R̊ic|²/(n-1) + 2n/(n-2) tr R̊ic³)
//                   - (n-2)/(n-1) W_ijkl ∇_l f C_ijk - 2f W_ijkl R_ik R_jl
struct BochnerBreakdown {
  double lhs = 0.0;
  double term_cotton = 0.0;
  double term_gradric = 0.0;
  double term_kappa = 0.0;
  double term_cubic = 0.0;
  double term_weyl_cotton = 0.0;
  double term_weyl_ricci = 0.0;
  double residual = 0.0;  // lhs - sum of terms, exactly as stored

  double terms_sum() const;
  // Largest magnitude among lhs and the six terms.
  double scale() const;
  Residual as_residual() const;
};

// Eigen-decomposition of a symmetric covariant 2-tensor against g:
// T v = λ g v with g-orthonormal eigenvectors (ascending λ).
struct SpectralData {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // eigenvectors[a][i] = e_a^i

  // max |Σ λ_a (e_a)♭ ⊗ (e_a)♭ - T|.
  double reconstruction_defect(const Tensor& t, const Tensor& g) const;
  // max |g(e_a, e_b) - δ_ab|.
  double orthonormality_defect(const Tensor& g) const;
};

// DegenerateEigenbasis if the eigenvectors are not g-orthonormal to 1e-10.
SpectralData spectral_decomposition(const Tensor& t, const Tensor& g);

// ½ div(f ∇|Ric|²), assembled as ½(<∇f, ∇|Ric|²> + f Δ|Ric|²).
double div_f_grad_ricnorm(const VStaticTriple& triple, std::span<const double> p);
double div_f_grad_ricnorm(const Chart& chart, const ScalarField& f, std::span<const double> p);

// Scalar-curvature constancy over 16 seeded points plus p; the spread must
// stay within this bound for the constant-scalar-curvature divergence formula.
inline constexpr double kConstantScalarTolerance = 1e-5;
void require_constant_scalar_curvature(const Chart& chart, std::span<const double> p);

// div(f∇|Ric|²) against the constant-scalar-curvature expansion with an
// arbitrary smooth f. NonConstantScalarCurvature when R varies.
Residual lemma2_residual(const Chart& chart, const ScalarField& f, std::span<const double> p);

// ½ div(f∇|Ric|²) = -f|C|² + f|∇Ric|² + <∇f, ∇|Ric|²> - nκ/(n-1)|R̊ic|²
//                   + 2∇_i(f C_ijk R_jk); V-static gated.
Residual lemma3_residual(const VStaticTriple& triple, std::span<const double> p);

BochnerBreakdown theorem2_breakdown(const VStaticTriple& triple, std::span<const double> p);

// Zero radial Weyl form: ½ div(f∇|Ric|²) = (|C|²/(n-1) + |∇Ric|²) f
//   + nκ/(n-1)|R̊ic|² + (2R|R̊ic|²/(n-1) + 2n/(n-2) tr R̊ic³) f.
inline constexpr double kRadialWeylTolerance = 1e-6;
Residual radial_weyl_specialization_residual(const VStaticTriple& triple, std::span<const double> p);

// |f W_ijkl R_ik R_jl - (n-3)/(2(n-1)) f|C|²|; n >= 4, zero radial Weyl.
Residual eq312_residual(const VStaticTriple& triple, std::span<const double> p);

// tr(R̊ic³) + (n-2)/√(n(n-1)) |R̊ic|³, nonnegative on every metric.
double okumura_gap(const Chart& chart, std::span<const double> p);
double okumura_gap(const Geometry& geo);

// R²/(n(n-1)) - |R̊ic|².
double pinching_gap(const Chart& chart, std::span<const double> p);
double pinching_gap(const Geometry& geo);

// tr(Ric³) - R_ijkl R_jl R_ik against R|R̊ic|²/(n-1) + n/(n-2) tr R̊ic³ - W_ijkl R_ik R_jl.
Residual lemma4_residual(const Chart& chart, std::span<const double> p);
Residual lemma4_residual(const Geometry& geo);

struct BergerResult {
  double commutator = 0.0;   // (∇_i∇_j T_ik - ∇_j∇_i T_ik) T_jk
  double eigen_sum = 0.0;    // Σ_{i<j} R_ijij (λ_i - λ_j)² in the eigenbasis of T
  SpectralData spectrum;

  double difference() const { return commutator - eigen_sum; }
};

BergerResult berger_check(const Chart& chart, std::span<const double> p, const TensorField& tensor);

enum class RadialIntegrand {
  DivFGradRicnorm,  // div(f∇|Ric|²)
  RadialWeylRhs,         // right side of the zero-radial-Weyl formula
  OkumuraBoundIntegrand,   // Okumura-bounded integrand: (|C|²/(n-1) + |∇Ric|²) f + nκ/(n-1)|R̊ic|²
                    //   + 2n/√(n(n-1)) |R̊ic|² (R/√(n(n-1)) - |R̊ic|) f
};

std::string_view to_string(RadialIntegrand id);
RadialIntegrand parse_radial_integrand(std::string_view name);

// Integrand value at a point (no sampling-margin check).
double radial_integrand(const VStaticTriple& triple, RadialIntegrand id, std::span<const double> p);

struct RadialIntegral {
  double value = 0.0;         // δ → 0 extrapolation
  double abs_integral = 0.0;  // ∫|integrand| at the smallest δ
  int order = 0;
  std::vector<double> deltas;        // δ0, δ0/2, ...
  std::vector<double> raw;           // quadrature on [t_min+δ, t_max-δ]
  double extrapolation_error = 0.0;  // |last two diagonal Richardson estimates|
  double fd_noise = 0.0;             // |value(h) - value(h/2)| over the chart's FD step h

  double numerical_error() const { return extrapolation_error + fd_noise; }
  // |value| <= 1e-4 ∫|integrand|, or within 4 x the numerical error, or below
  // an absolute 1e-6 where the integrand is pure rounding noise.
  bool vanishes() const;
};

inline constexpr int kDefaultQuadratureOrder = 32;
inline constexpr double kIntegralRelTolerance = 1e-4;
inline constexpr double kIntegralErrorMultiple = 4.0;
inline constexpr double kIntegralAbsFloor = 1e-6;

struct RadialQuadratureOptions {
  int order = kDefaultQuadratureOrder;
  int levels = 6;          // clips δ_min 2^(levels-1), ..., 2 δ_min, δ_min
  double delta_min = 0.0;  // 0 selects 1.5 × the chart's finite-difference step
  bool estimate_fd_noise = true;  // repeat at half the FD step
};

// ∫ φ(t) Vol(S^{n-1}) √A(t) B(t)^{(n-1)/2} dt by Gauss-Legendre on
// [t_min+δ, t_max-δ] for a halving sequence of clips δ. The clipped-off
// boundary slabs contribute a power series in δ starting at δ¹, so the
// values are combined by Neville-Richardson steps eliminating δ, δ², ...
// The smallest clip leaves room for the finite-difference stencil; levels
// are dropped (down to two) until the largest clip is at most a quarter of
// the radial interval. Ends where the fiber collapses (coordinate poles)
// keep a fixed clip at the chart margin plus a leading-order cap term.
// NotWarpedProduct without a warped profile.
RadialIntegral integrate_radial(const VStaticTriple& triple, RadialIntegrand id,
                                const RadialQuadratureOptions& options = {});

// Nodes and weights of the order-m Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

// Vol(S^k) = 2π^{(k+1)/2} / Γ((k+1)/2).
double sphere_volume(int k);

}  // namespace curvlab
