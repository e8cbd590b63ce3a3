#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvlab/chart.hpp"
#include "curvlab/vstatic.hpp"

namespace curvlab {

enum class CatalogId {
  Hemisphere,
  Cylinder,
  Schwarzschild,
  EuclideanBall,
  SphericalBall,
  ProductSpheres,
  PerturbedFlat,
};

std::string_view to_string(CatalogId id);
CatalogId parse_catalog_id(std::string_view name);
const std::vector<CatalogId>& all_catalog_ids();

using CatalogParams = std::map<std::string, double>;

struct DeclaredConstants {
  std::optional<double> scalar_curvature;
  std::optional<double> kappa;
  bool f_nonnegative = false;
  bool conformally_flat = false;
  bool bach_flat = false;
};

struct CatalogSpace {
  CatalogId id;
  int n = 0;
  CatalogParams params;  // resolved, defaults filled in
  Chart chart;
  std::optional<VStaticTriple> triple;      // absent for product_spheres / perturbed_flat
  std::optional<ScalarField> test_function;  // optional f for non-V-static charts
  DeclaredConstants declared;
  std::optional<std::pair<double, double>> roots;  // schwarzschild r1 < r2

  const VStaticTriple& require_triple() const;
};

// How much of the declared data build() re-derives with the engine.
enum class LoadCheck {
  None,
  // 32 seeded interior points: R, V-static residual, f sign, |W|; Bach at 2 points.
  Sampled,
};

inline constexpr double kDefaultMargin = 0.05;
inline constexpr int kDefaultRadialSamples = 64;
inline constexpr int kDefaultFiberSamples = 8;
inline constexpr int kMaxGeneralChartDim = 6;

CatalogSpace build(CatalogId id, int n, const CatalogParams& params = {}, LoadCheck check = LoadCheck::Sampled);
CatalogSpace build(std::string_view id, int n, const CatalogParams& params = {},
                   LoadCheck check = LoadCheck::Sampled);

// Upper end of the admissible mass interval, √((n-2)^{n-2} / n^n).
double schwarzschild_mass_bound(int n);

// V(t) = 1 - 2 m t^{2-n} - t²; the static potential is √V.
double schwarzschild_lapse_squared(int n, double m, double t);

// Positive zeros r1 < r2 of V, located by a sign scan of V on (0, 1] and
// refined by bisection to one ulp.
std::pair<double, double> schwarzschild_roots(int n, double m);

// Charts used directly by tests and the catalog.
Chart warped_chart(std::string name, int n, Interval radial, double margin, RadialFn radial_coefficient,
                   RadialFn fiber_coefficient);
Chart round_sphere_chart(int n, double radius = 1.0);
Chart euclidean_box_chart(int n, double half_width = 1.0);
// S²(r1) × S²(r2) in coordinates (t, φ1, u, φ2).
Chart product_spheres_chart(double radius1, double radius2);

// g_ij = δ_ij + a Σ_k c^{(ij)}_k sin(x_k + φ^{(ij)}_k) on [-1, 1]^n. For each
// i <= j (row-major) and k = 0..n-1, two mt19937_64 draws give
// c = 2u - 1 and φ = 2πu with u = unit_uniform(draw), in that order.
Chart perturbed_flat_chart(int n, std::uint64_t seed, double amplitude);

ScalarField radial_scalar_field(int n, RadialFn f);

// Closed-form curvature of g = A dt² + B g_{S^{n-1}} via the arclength warp
// h(s) = √B: radial planes K = -h''/h, fiber planes K = (1 - h'²)/h².
struct WarpedCurvature {
  Tensor riemann;
  Tensor ricci;
  double scalar = 0.0;
  double radial_sectional = 0.0;
  double fiber_sectional = 0.0;
};

WarpedCurvature warped_curvature(const WarpedProfile& profile, std::span<const double> p, int n);

}  // namespace curvlab
