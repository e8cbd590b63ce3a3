#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvlab/bochner.hpp"
#include "curvlab/catalog.hpp"
#include "curvlab/sample_grid.hpp"

// Check registry, grid runner and ResidualReport serialization.
namespace curvlab {

enum class CheckKind {
  Residual,    // identity residual; pass on max_rel or max_abs
  LowerBound,  // signed quantity that must stay above a bound; residual = violation
  Integral,    // radial divergence integral
  Roots,       // Schwarzschild horizon roots
};

struct CheckSpec {
  std::string_view id;
  std::string_view description;
  CheckKind kind = CheckKind::Residual;
  double tolerance = 0.0;  // bound on max_rel
  double abs_floor = 0.0;  // bound on max_abs
  bool needs_triple = false;
  int min_dim = 3;
  bool algebraic = false;  // needs curvature only, so the warped backend can serve it
};

// Every check id in listing order.
const std::vector<CheckSpec>& check_registry();
// InvalidArgument for unknown ids.
const CheckSpec& find_check(std::string_view id);

// Splits a comma list and expands the group "weyl-identities" and "all" (every
// check except the Schwarzschild-only "roots");
// duplicates are dropped, order follows first appearance.
std::vector<std::string> expand_check_list(std::string_view list);

// Why a check cannot run on a space, or nullopt when it can.
std::optional<std::string> inapplicable_reason(const CheckSpec& check, const CatalogSpace& space);

enum class Backend { Chart, Warped };
std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view name);

struct GridSpec {
  int radial = kDefaultRadialSamples;
  int fiber = kDefaultFiberSamples;
  int random_points = 0;  // > 0 selects seeded random points instead
  std::uint64_t seed = 0x5eed;

  std::string describe() const;
  SampleGrid sample(const Chart& chart) const;
};

// Default grid for a space: uniform radial x fiber on the catalog triples,
// 20 seeded random points on the perturbed metrics and the product chart.
GridSpec default_grid(const CatalogSpace& space);

struct RunOptions {
  std::optional<GridSpec> grid;  // default_grid when absent
  std::optional<double> fd_step;
  std::optional<int> fd_levels;
  Backend backend = Backend::Chart;
  int threads = 0;  // 0 = hardware concurrency
  bool timing = false;  // runtime_ms stays 0 unless set, keeping reports byte-identical
  int quadrature_order = kDefaultQuadratureOrder;
  std::size_t max_failures = 20;
};

struct PointFailure {
  std::size_t index = 0;
  Point point;
  double abs = 0.0;
  double rel = 0.0;
  std::string message;  // exception text when the point threw
};

struct ResidualReport {
  std::string space;
  int n = 0;
  CatalogParams params;
  std::string check;
  std::string grid;
  double fd_step = 0.0;
  std::size_t points = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double max_rel = 0.0;
  double tolerance = 0.0;
  double abs_floor = 0.0;
  std::optional<double> min_value;
  std::optional<double> max_value;
  bool pass = false;
  long long runtime_ms = 0;
  std::vector<std::pair<std::string, double>> extra;  // integral diagnostics, roots
  std::vector<PointFailure> failures;

  // pass == (max_rel <= tolerance || max_abs <= abs_floor) and no point threw.
  bool consistent() const;
};

// Applies fd_step / fd_levels to the space's charts.
CatalogSpace with_fd(const CatalogSpace& space, std::optional<double> step, std::optional<int> levels);

// Applies options.fd_step / fd_levels before running.
ResidualReport run_check(const CatalogSpace& space, const CheckSpec& check, const RunOptions& options);

// Integral and roots checks are per space; the rest run over the grid.
std::vector<ResidualReport> run_checks(const CatalogSpace& space, std::span<const std::string> ids,
                                       const RunOptions& options);

// Fixed 17-significant-digit formatting used by every report writer.
std::string format_double(double v);
// "(x0, x1, ...)" with format_double.
std::string format_point(std::span<const double> p);

std::string reports_to_json(std::span<const ResidualReport> reports);
// Fixed columns, see kCsvColumns.
std::string reports_to_csv(std::span<const ResidualReport> reports, bool header = true);
inline constexpr std::string_view kCsvColumns =
    "space,n,params,check,grid,fd_step,points,max_abs,mean_abs,max_rel,tolerance,abs_floor,min_value,max_value,"
    "pass,runtime_ms,extra";

}  // namespace curvlab
