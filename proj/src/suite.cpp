#include "curvlab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "curvlab/bochner.hpp"
#include "curvlab/conformal.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/vstatic.hpp"

namespace curvlab {
namespace {

using CK = CheckKind;

// id, description, kind, tolerance (rel), floor (abs), needs triple, min n, algebraic
const std::vector<CheckSpec> kRegistry = {
    {"vstatic", "max |-(Δf)g + Hess f - f Ric - κg|", CK::Residual, 1e-6, 1e-6, true, 3, false},
    {"trace", "|Δf + Rf/(n-1) + nκ/(n-1)|", CK::Residual, 1e-6, 1e-6, true, 3, false},
    {"traceless", "max |f R̊ic - (Hess f - (Δf/n)g)|", CK::Residual, 1e-6, 1e-6, true, 3, false},
    {"lemma1", "f(∇_iR_jk - ∇_jR_ik) against the curvature/gradient expansion", CK::Residual, 1e-5, 1e-6, true, 3,
     false},
    {"decomposition", "max |fC - T - W(·,·,·,∇f)|", CK::Residual, 1e-5, 1e-6, true, 3, false},
    {"lemma2", "div(f∇|Ric|²) at constant scalar curvature, any f", CK::Residual, 1e-4, 1e-8, false, 3, false},
    {"lemma3", "½div(f∇|Ric|²) on V-static spaces", CK::Residual, 1e-4, 1e-8, true, 3, false},
    {"theorem2", "Böchner formula for ½div(f∇|Ric|²)", CK::Residual, 1e-4, 1e-8, true, 3, false},
    {"eq312", "fW_ijkl R_ik R_jl = (n-3)/(2(n-1)) f|C|² under zero radial Weyl", CK::Residual, 1e-4, 1e-8, true, 4,
     false},
    {"eq313", "zero-radial-Weyl form of the Böchner formula", CK::Residual, 1e-4, 1e-8, true, 3, false},
    {"lemma4", "tr Ric³ - Rm(Ric, Ric) against its traceless/Weyl expansion", CK::Residual, 1e-6, 1e-6, false, 3,
     true},
    {"okumura", "tr R̊ic³ + (n-2)/√(n(n-1)) |R̊ic|³ ≥ 0", CK::LowerBound, 0.0, 1e-9, false, 3, true},
    {"pinching", "R²/(n(n-1)) - |R̊ic|² ≥ 0", CK::LowerBound, 0.0, 1e-6, false, 3, true},
    {"berger", "commutator contraction of Ric against Σ R_ijij (λ_i - λ_j)²", CK::Residual, 1e-4, 1e-4, false, 3,
     false},
    {"weyl-closure", "max |Rm - W - Ricci part|", CK::Residual, 1e-10, 1e-10, false, 3, true},
    {"weyl-tracefree", "largest g-contraction of W", CK::Residual, 1e-8, 1e-8, false, 3, true},
    {"cotton-weyl", "max |C_ijk + (n-2)/(n-3) ∇^l W_ijkl|", CK::Residual, 1e-4, 1e-4, false, 4, false},
    {"ricci-identity", "commutator of ∇∇Ric against curvature", CK::Residual, 1e-4, 1e-4, false, 3, false},
    {"bianchi", "div Rm against the curl of Ric", CK::Residual, 1e-5, 1e-5, false, 3, false},
    {"scalar", "|R - declared R|", CK::Residual, 0.0, 1e-6, false, 3, true},
    {"sectional", "coordinate-plane sectional curvature ≥ 0", CK::LowerBound, 0.0, 1e-8, false, 3, true},
    {"bach", "max |B| on declared Bach-flat spaces", CK::Residual, 0.0, 1e-4, true, 3, false},
    {"integral", "∫ div(f∇|Ric|²) over the warped product", CK::Integral, 1e-4, 0.0, true, 3, false},
    {"roots", "|V(r_i)| at the Schwarzschild roots", CK::Roots, 0.0, 1e-12, true, 3, false},
};

const std::vector<std::string_view> kWeylGroup = {"weyl-closure", "weyl-tracefree", "cotton-weyl", "ricci-identity",
                                                  "bianchi"};

// Integral pass allows |value| up to this multiple of the estimated numerical error.

struct PointSample {
  double abs = 0.0;
  double scale = 0.0;
  std::optional<double> value;
};

PointSample from_residual(const Residual& r) { return {r.abs, r.scale, std::nullopt}; }

PointSample lower_bound(double value, double bound) { return {std::max(0.0, bound - value), 0.0, value}; }

Geometry warped_geometry(const Chart& chart, std::span<const double> p) {
  const WarpedCurvature w = warped_curvature(*chart.warped(), p, chart.dim());
  Geometry geo;
  geo.g = chart.metric(p);
  geo.ginv = spd_inverse(geo.g);
  geo.riemann = w.riemann;
  geo.ricci = w.ricci;
  geo.scalar = w.scalar;
  return geo;
}

using Evaluator = std::function<PointSample(std::span<const double>)>;

Evaluator make_evaluator(const CatalogSpace& space, const CheckSpec& check, Backend backend) {
  const Chart& chart = space.chart;
  const VStaticTriple* triple = space.triple ? &*space.triple : nullptr;
  const std::string_view id = check.id;
  auto geometry = [&chart, backend](std::span<const double> p) {
    chart.require_interior(p);
    return backend == Backend::Warped ? warped_geometry(chart, p) : geometry_at(chart, p);
  };
  if (id == "vstatic") return [triple](auto p) { return from_residual(vstatic_residual(*triple, p)); };
  if (id == "trace") return [triple](auto p) { return from_residual(trace_residual(*triple, p)); };
  if (id == "traceless") return [triple](auto p) { return from_residual(traceless_residual(*triple, p)); };
  if (id == "lemma1") return [triple](auto p) { return from_residual(lemma1_residual(*triple, p)); };
  if (id == "decomposition") return [triple](auto p) { return from_residual(decomposition_residual(*triple, p)); };
  if (id == "lemma2") {
    const ScalarField* f = triple ? &triple->potential.f : &*space.test_function;
    return [&chart, f](auto p) { return from_residual(lemma2_residual(chart, *f, p)); };
  }
  if (id == "lemma3") return [triple](auto p) { return from_residual(lemma3_residual(*triple, p)); };
  if (id == "theorem2") return [triple](auto p) { return from_residual(theorem2_breakdown(*triple, p).as_residual()); };
  if (id == "eq312") return [triple](auto p) { return from_residual(eq312_residual(*triple, p)); };
  if (id == "eq313") {
    return [triple](auto p) { return from_residual(radial_weyl_specialization_residual(*triple, p)); };
  }
  if (id == "lemma4") return [geometry](auto p) { return from_residual(lemma4_residual(geometry(p))); };
  if (id == "okumura") return [geometry](auto p) { return lower_bound(okumura_gap(geometry(p)), 0.0); };
  if (id == "pinching") return [geometry](auto p) { return lower_bound(pinching_gap(geometry(p)), 0.0); };
  if (id == "berger") {
    return [&chart](auto p) {
      const BergerResult b = berger_check(chart, p, ricci_field(chart));
      PointSample s{std::abs(b.difference()), std::max(std::abs(b.commutator), std::abs(b.eigen_sum)),
                    std::min(b.commutator, b.eigen_sum)};
      return s;
    };
  }
  if (id == "weyl-closure") {
    return [geometry](auto p) {
      const Geometry geo = geometry(p);
      return PointSample{weyl_decomposition_residual(geo, weyl(geo)), 0.0, std::nullopt};
    };
  }
  if (id == "weyl-tracefree") {
    return [geometry](auto p) {
      const Geometry geo = geometry(p);
      return PointSample{weyl_trace_defect(weyl(geo), geo.ginv), 0.0, std::nullopt};
    };
  }
  if (id == "cotton-weyl") {
    return [&chart](auto p) {
      chart.require_interior(p);
      return PointSample{cotton_weyl_relation_residual(chart, p), 0.0, std::nullopt};
    };
  }
  if (id == "ricci-identity") {
    return [&chart](auto p) {
      chart.require_interior(p);
      return PointSample{ricci_identity_residual(chart, p), 0.0, std::nullopt};
    };
  }
  if (id == "bianchi") {
    return [&chart](auto p) {
      chart.require_interior(p);
      return PointSample{bianchi_residual(chart, p), 0.0, std::nullopt};
    };
  }
  if (id == "scalar") {
    const double expected = *space.declared.scalar_curvature;
    return [geometry, expected](auto p) {
      const double r = geometry(p).scalar;
      return PointSample{std::abs(r - expected), std::abs(expected), r};
    };
  }
  if (id == "sectional") {
    return [geometry](auto p) {
      const Geometry geo = geometry(p);
      const int n = geo.g.dim();
      double lo = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          std::vector<double> u(static_cast<std::size_t>(n), 0.0);
          std::vector<double> v(static_cast<std::size_t>(n), 0.0);
          u[static_cast<std::size_t>(i)] = 1.0;
          v[static_cast<std::size_t>(j)] = 1.0;
          lo = std::min(lo, sectional_curvature(geo, u, v));
        }
      }
      return lower_bound(lo, 0.0);
    };
  }
  if (id == "bach") {
    return [&chart](auto p) {
      chart.require_interior(p);
      return PointSample{bach(chart, p).max_abs(), 0.0, std::nullopt};
    };
  }
  throw Error(ErrorKind::InvalidArgument, "check '" + std::string(id) + "' is not pointwise");
}


ResidualReport report_header(const CatalogSpace& space, const CheckSpec& check) {
  ResidualReport r;
  r.space = std::string(to_string(space.id));
  r.n = space.n;
  r.params = space.params;
  r.check = std::string(check.id);
  r.fd_step = space.chart.fd().step;
  r.tolerance = check.tolerance;
  r.abs_floor = check.abs_floor;
  return r;
}

bool rule(double max_rel, double tolerance, double max_abs, double floor) {
  return max_rel <= tolerance || max_abs <= floor;
}

ResidualReport run_integral(const CatalogSpace& space, const CheckSpec& check, const RunOptions& options) {
  ResidualReport r = report_header(space, check);
  RadialQuadratureOptions q;
  q.order = options.quadrature_order;
  const RadialIntegral in = integrate_radial(space.require_triple(), RadialIntegrand::DivFGradRicnorm, q);
  r.grid = "gauss-legendre " + std::to_string(in.order) + " x " + std::to_string(in.deltas.size()) + " clips";
  r.points = static_cast<std::size_t>(in.order) * in.deltas.size();
  r.max_abs = std::abs(in.value);
  r.mean_abs = r.max_abs;
  r.max_rel = in.abs_integral > 0.0 ? r.max_abs / in.abs_integral : r.max_abs;
  r.abs_floor = std::max(kIntegralErrorMultiple * in.numerical_error(), kIntegralAbsFloor);
  r.min_value = in.value;
  r.max_value = in.value;
  r.pass = rule(r.max_rel, r.tolerance, r.max_abs, r.abs_floor);
  r.extra = {{"value", in.value},
             {"abs_integral", in.abs_integral},
             {"order", static_cast<double>(in.order)},
             {"delta_min", in.deltas.back()},
             {"delta_max", in.deltas.front()},
             {"extrapolation_error", in.extrapolation_error},
             {"fd_noise", in.fd_noise}};
  return r;
}

ResidualReport run_roots(const CatalogSpace& space, const CheckSpec& check) {
  ResidualReport r = report_header(space, check);
  const double m = space.params.at("m");
  const auto [r1, r2] = schwarzschild_roots(space.n, m);
  const double v1 = std::abs(schwarzschild_lapse_squared(space.n, m, r1));
  const double v2 = std::abs(schwarzschild_lapse_squared(space.n, m, r2));
  r.grid = "sign scan 4096 + bisection";
  r.points = 2;
  r.max_abs = std::max(v1, v2);
  r.mean_abs = 0.5 * (v1 + v2);
  r.max_rel = r.max_abs;
  r.min_value = r1;
  r.max_value = r2;
  r.pass = r1 < r2 && rule(r.max_rel, r.tolerance, r.max_abs, r.abs_floor);
  r.extra = {{"r1", r1}, {"r2", r2}};
  return r;
}

}  // namespace

const std::vector<CheckSpec>& check_registry() { return kRegistry; }

const CheckSpec& find_check(std::string_view id) {
  for (const CheckSpec& c : kRegistry) {
    if (c.id == id) return c;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown check '" + std::string(id) + "'");
}

std::vector<std::string> expand_check_list(std::string_view list) {
  std::vector<std::string> out;
  auto push = [&out](std::string_view id) {
    find_check(id);
    if (std::find(out.begin(), out.end(), id) == out.end()) out.emplace_back(id);
  };
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "weyl-identities") {
      for (std::string_view id : kWeylGroup) push(id);
    } else if (item == "all") {
      for (const CheckSpec& c : kRegistry) {
        if (c.kind != CheckKind::Roots) push(c.id);
      }
    } else if (!item.empty()) {
      push(item);
    }
    start = end + 1;
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty check list");
  return out;
}

std::optional<std::string> inapplicable_reason(const CheckSpec& check, const CatalogSpace& space) {
  const std::string id(check.id);
  if (check.needs_triple && !space.triple) return id + " needs a V-static triple";
  if (space.n < check.min_dim) return id + " needs n >= " + std::to_string(check.min_dim);
  if (id == "lemma2" && !space.triple && !space.test_function) return "lemma2 needs a scalar field";
  if (id == "lemma2" && space.id == CatalogId::PerturbedFlat) return "lemma2 needs constant scalar curvature";
  if (id == "scalar" && !space.declared.scalar_curvature) return "no declared scalar curvature";
  if (id == "bach" && !space.declared.bach_flat) return "space is not declared Bach-flat";
  if (id == "integral" && !space.chart.warped()) return "integral needs a warped product";
  if (id == "roots" && space.id != CatalogId::Schwarzschild) return "roots applies to schwarzschild only";
  if (id == "sectional" && space.id != CatalogId::Hemisphere && space.id != CatalogId::Cylinder &&
      space.id != CatalogId::SphericalBall && space.id != CatalogId::EuclideanBall &&
      space.id != CatalogId::ProductSpheres) {
    return "sectional curvature is not declared nonnegative";
  }
  return std::nullopt;
}

std::string_view to_string(Backend backend) { return backend == Backend::Warped ? "warped" : "chart"; }

Backend parse_backend(std::string_view name) {
  if (name == "chart") return Backend::Chart;
  if (name == "warped") return Backend::Warped;
  throw Error(ErrorKind::InvalidArgument, "unknown backend '" + std::string(name) + "' (chart, warped)");
}

std::string GridSpec::describe() const {
  if (random_points > 0) return "random " + std::to_string(random_points) + " seed " + std::to_string(seed);
  return "uniform " + std::to_string(radial) + " x " + std::to_string(fiber);
}

SampleGrid GridSpec::sample(const Chart& chart) const {
  if (random_points > 0) return SampleGrid::random(chart, static_cast<std::size_t>(random_points), seed);
  if (radial < 1 || fiber < 1) throw Error(ErrorKind::InvalidArgument, "grid counts must be positive");
  return SampleGrid::uniform(chart, radial, fiber);
}

GridSpec default_grid(const CatalogSpace& space) {
  GridSpec g;
  if (!space.chart.warped()) g.random_points = 20;
  return g;
}

bool ResidualReport::consistent() const {
  const bool threw = std::any_of(failures.begin(), failures.end(), [](const PointFailure& f) {
    return !f.message.empty();
  });
  return pass == (!threw && rule(max_rel, tolerance, max_abs, abs_floor));
}

CatalogSpace with_fd(const CatalogSpace& space, std::optional<double> step, std::optional<int> levels) {
  CatalogSpace out = space;
  FdOptions fd = space.chart.fd();
  if (step) {
    if (!(*step > 0.0)) throw Error(ErrorKind::InvalidArgument, "fd step must be positive");
    fd.step = *step;
  }
  if (levels) {
    if (*levels < 0 || *levels > 4) throw Error(ErrorKind::InvalidArgument, "fd levels must be in [0, 4]");
    fd.richardson_levels = *levels;
  }
  out.chart.with_fd(fd);
  if (out.triple) out.triple->chart.with_fd(fd);
  return out;
}

ResidualReport run_check(const CatalogSpace& base, const CheckSpec& check, const RunOptions& options) {
  const CatalogSpace space = with_fd(base, options.fd_step, options.fd_levels);
  if (auto why = inapplicable_reason(check, space)) throw Error(ErrorKind::InvalidArgument, *why);
  if (options.backend == Backend::Warped && !check.algebraic && check.kind != CheckKind::Integral &&
      check.kind != CheckKind::Roots) {
    throw Error(ErrorKind::InvalidArgument, std::string(check.id) + " needs the chart backend");
  }
  if (options.backend == Backend::Warped && !space.chart.warped()) {
    throw Error(ErrorKind::NotWarpedProduct, "warped backend on a non-warped chart");
  }
  const auto start = std::chrono::steady_clock::now();
  ResidualReport report;
  if (check.kind == CheckKind::Integral) {
    report = run_integral(space, check, options);
  } else if (check.kind == CheckKind::Roots) {
    report = run_roots(space, check);
  } else {
    report = report_header(space, check);
    const GridSpec grid = options.grid.value_or(default_grid(space));
    const SampleGrid sample = grid.sample(space.chart);
    const auto& pts = sample.points();
    report.grid = grid.describe();
    report.points = pts.size();

    const Evaluator eval = make_evaluator(space, check, options.backend);
    std::vector<PointSample> samples(pts.size());
    std::vector<std::string> errors(pts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < pts.size(); i = next.fetch_add(1)) {
        try {
          samples[i] = eval(pts[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, pts.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    // Sequential reduction in point order keeps the report independent of threading.
    double sum = 0.0;
    bool threw = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const PointSample& s = samples[i];
      const double rel = s.scale > 0.0 ? s.abs / s.scale : s.abs;
      if (!errors[i].empty()) {
        threw = true;
      } else {
        report.max_abs = std::max(report.max_abs, s.abs);
        report.max_rel = std::max(report.max_rel, rel);
        sum += s.abs;
        if (s.value) {
          report.min_value = std::min(report.min_value.value_or(*s.value), *s.value);
          report.max_value = std::max(report.max_value.value_or(*s.value), *s.value);
        }
      }
      const bool bad = !errors[i].empty() || !(rel <= check.tolerance || s.abs <= check.abs_floor);
      if (bad && report.failures.size() < options.max_failures) {
        report.failures.push_back({i, pts[i], s.abs, rel, errors[i]});
      }
    }
    report.mean_abs = pts.empty() ? 0.0 : sum / static_cast<double>(pts.size());
    report.pass = !threw && rule(report.max_rel, report.tolerance, report.max_abs, report.abs_floor);
  }
  if (options.timing) {
    report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                            .count();
  }
  return report;
}

std::vector<ResidualReport> run_checks(const CatalogSpace& space, std::span<const std::string> ids,
                                       const RunOptions& options) {
  std::vector<ResidualReport> out;
  for (const std::string& id : ids) out.push_back(run_check(space, find_check(id), options));
  return out;
}

std::string format_point(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += format_double(p[i]);
  }
  return s + ")";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

// JSON has no nan/inf; they become null.
std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_optional(const std::optional<double>& v) { return v ? json_number(*v) : "null"; }

std::string params_compact(const CatalogParams& params) {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ';';
    s += k + "=" + format_double(v);
  }
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string reports_to_json(std::span<const ResidualReport> reports) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ResidualReport& r = reports[i];
    os << (i ? ",\n  {" : "\n  {");
    os << "\"space\": " << json_string(r.space) << ", \"n\": " << r.n << ", \"params\": {";
    bool first = true;
    for (const auto& [k, v] : r.params) {
      os << (first ? "" : ", ") << json_string(k) << ": " << json_number(v);
      first = false;
    }
    os << "}, \"check\": " << json_string(r.check) << ", \"grid\": " << json_string(r.grid)
       << ", \"fd_step\": " << json_number(r.fd_step) << ", \"points\": " << r.points
       << ", \"max_abs\": " << json_number(r.max_abs) << ", \"mean_abs\": " << json_number(r.mean_abs)
       << ", \"max_rel\": " << json_number(r.max_rel) << ", \"tolerance\": " << json_number(r.tolerance)
       << ", \"abs_floor\": " << json_number(r.abs_floor) << ", \"min_value\": " << json_optional(r.min_value)
       << ", \"max_value\": " << json_optional(r.max_value) << ", \"pass\": " << (r.pass ? "true" : "false")
       << ", \"runtime_ms\": " << r.runtime_ms << ", \"extra\": {";
    first = true;
    for (const auto& [k, v] : r.extra) {
      os << (first ? "" : ", ") << json_string(k) << ": " << json_number(v);
      first = false;
    }
    os << "}}";
  }
  os << (reports.empty() ? "]\n" : "\n]\n");
  return os.str();
}

std::string reports_to_csv(std::span<const ResidualReport> reports, bool header) {
  std::ostringstream os;
  if (header) os << kCsvColumns << "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const ResidualReport& r : reports) {
    std::string extra;
    for (const auto& [k, v] : r.extra) extra += (extra.empty() ? "" : ";") + k + "=" + format_double(v);
    os << csv_field(r.space) << ',' << r.n << ',' << csv_field(params_compact(r.params)) << ','
       << csv_field(r.check) << ',' << csv_field(r.grid) << ',' << format_double(r.fd_step) << ',' << r.points
       << ',' << format_double(r.max_abs) << ',' << format_double(r.mean_abs) << ',' << format_double(r.max_rel)
       << ',' << format_double(r.tolerance) << ',' << format_double(r.abs_floor) << ',' << opt(r.min_value)
       << ',' << opt(r.max_value) << ',' << (r.pass ? "true" : "false") << ',' << r.runtime_ms << ','
       << csv_field(extra) << "\n";
  }
  return os.str();
}

}  // namespace curvlab
