#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvlab/tensor.hpp"

namespace curvlab {

using Point = std::vector<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Metric components and their coordinate partials at a point.
//   dg(k, i, j)     = ∂_k g_ij
//   ddg(l, k, i, j) = ∂_l ∂_k g_ij
struct MetricJet {
  Tensor g;
  Tensor dg;
  Tensor ddg;
};

using MetricFn = std::function<Tensor(std::span<const double>)>;
using MetricJetFn = std::function<MetricJet(std::span<const double>)>;

struct FdOptions {
  double step = 1e-3;
  int richardson_levels = 1;
};

// A function of one real variable with its first two derivatives.
struct Jet1 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using RadialFn = std::function<Jet1(double)>;

// g = A(t) dt² + B(t) g_{S^{n-1}} with coordinate 0 radial and the remaining
// n-1 coordinates hyperspherical on the fiber.
struct WarpedProfile {
  RadialFn radial_coefficient;  // A
  RadialFn fiber_coefficient;   // B = h(t)² in arclength form
};

// Coordinate description of a Riemannian metric on a closed box.
class Chart {
 public:
  Chart(std::string name, std::vector<std::string> coords, std::vector<Interval> domain,
        std::vector<double> margin, MetricFn metric);

  Chart& with_analytic_partials(MetricJetFn jet);
  Chart& with_fd(FdOptions options);
  Chart& with_warped_profile(WarpedProfile profile);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const noexcept { return coords_; }
  const std::vector<Interval>& domain() const noexcept { return domain_; }
  const std::vector<double>& margin() const noexcept { return margin_; }
  const FdOptions& fd() const noexcept { return fd_; }
  bool has_analytic_partials() const noexcept { return static_cast<bool>(jet_); }
  const std::optional<WarpedProfile>& warped() const noexcept { return warped_; }

  // Closed coordinate box.
  bool contains(std::span<const double> p) const;
  // Open box shrunk by the per-coordinate margin.
  bool in_sampling_region(std::span<const double> p) const;
  // Throws PointOutOfDomain unless in_sampling_region.
  void require_interior(std::span<const double> p) const;

  // Raw evaluation; no domain checks.
  Tensor metric(std::span<const double> p) const { return metric_(p); }

  // Analytic jet when registered, otherwise finite differences of metric().
  MetricJet jet(std::span<const double> p) const;
  MetricJet fd_jet(std::span<const double> p) const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<Interval> domain_;
  std::vector<double> margin_;
  MetricFn metric_;
  MetricJetFn jet_;
  FdOptions fd_;
  std::optional<WarpedProfile> warped_;
};

// Scalar field with optional analytic first and second coordinate partials.
struct ScalarJet {
  double value = 0.0;
  std::vector<double> grad;
  Tensor hess;  // hess(i, j) = ∂_i ∂_j
};

struct ScalarField {
  std::function<double(std::span<const double>)> value;
  std::function<ScalarJet(std::span<const double>)> jet;

  double operator()(std::span<const double> p) const { return value(p); }
  bool has_analytic_partials() const noexcept { return static_cast<bool>(jet); }
};

// Covariant tensor field; evaluated pointwise.
using TensorField = std::function<Tensor(std::span<const double>)>;

}  // namespace curvlab
