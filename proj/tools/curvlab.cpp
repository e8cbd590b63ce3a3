// curvlab: run identity checks over catalog spaces and emit residual reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or validation error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/bochner.hpp"
#include "curvlab/catalog.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/sample_grid.hpp"
#include "curvlab/suite.hpp"

namespace {

using curvlab::CatalogParams;
using curvlab::Error;
using curvlab::ErrorKind;
using json = nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kParamNames = {"m", "r0", "radius1", "radius2", "seed", "amplitude", "margin"};

// Settings shared by every subcommand; filled from --config, then CLI flags.
struct Settings {
  std::string space;
  int n = 3;
  std::map<std::string, std::string> params;  // raw text: a number, or a:b:steps in sweep
  std::string checks = "all";
  std::string check;
  std::optional<int> grid;
  std::optional<int> fiber_grid;
  std::optional<int> random_points;
  std::optional<long long> grid_seed;
  std::optional<double> fd_step;
  std::optional<int> fd_levels;
  std::string backend = "chart";
  int threads = 0;
  std::string out;
  std::string format;
  bool timing = false;
  std::string integrand = "div_f_grad_ricnorm";
  int order = curvlab::kDefaultQuadratureOrder;
  int levels = 6;
  bool json_output = false;
};

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw UsageError("--" + key + ": expected a number, got '" + text + "'");
  return v;
}

std::string number_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    return curvlab::format_double(v.get<double>());
  }
  throw UsageError("config: expected a number or string, got " + v.dump());
}

void load_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, v] : cfg.items()) {
      if (key == "space") s.space = v.get<std::string>();
      else if (key == "n") s.n = v.get<int>();
      else if (key == "params") {
        for (const auto& [pk, pv] : v.items()) s.params[pk] = number_text(pv);
      } else if (key == "checks") {
        if (v.is_array()) {
          std::string joined;
          for (const auto& c : v) joined += (joined.empty() ? "" : ",") + c.get<std::string>();
          s.checks = joined;
        } else {
          s.checks = v.get<std::string>();
        }
      } else if (key == "check") s.check = v.get<std::string>();
      else if (key == "grid") s.grid = v.get<int>();
      else if (key == "fiber_grid") s.fiber_grid = v.get<int>();
      else if (key == "random") s.random_points = v.get<int>();
      else if (key == "grid_seed") s.grid_seed = v.get<long long>();
      else if (key == "fd_step") s.fd_step = v.get<double>();
      else if (key == "fd_levels") s.fd_levels = v.get<int>();
      else if (key == "backend") s.backend = v.get<std::string>();
      else if (key == "threads") s.threads = v.get<int>();
      else if (key == "out") s.out = v.get<std::string>();
      else if (key == "format") s.format = v.get<std::string>();
      else if (key == "timing") s.timing = v.get<bool>();
      else if (key == "integrand") s.integrand = v.get<std::string>();
      else if (key == "order") s.order = v.get<int>();
      else if (key == "levels") s.levels = v.get<int>();
      else if (std::find(kParamNames.begin(), kParamNames.end(), key) != kParamNames.end()) {
        s.params[key] = number_text(v);
      } else {
        throw UsageError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

// Raw flag values; applied over the config only when given on the command line.
struct Flags {
  Settings s;
  std::string config;
  std::vector<std::string> extra_params;
};

void add_space_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--space", f.s.space, "catalog id");
  cmd->add_option("--n", f.s.n, "dimension");
  for (const std::string& name : kParamNames) {
    cmd->add_option("--" + name, f.s.params[name], "space parameter " + name);
  }
  cmd->add_option("--param", f.extra_params, "space parameter as key=value (repeatable)");
  cmd->add_option("--config", f.config, "JSON object mirroring the flags; flags override it");
  cmd->add_option("--fd-step", f.s.fd_step, "finite-difference step");
  cmd->add_option("--fd-levels", f.s.fd_levels, "Richardson levels for finite differences");
  cmd->add_option("--threads", f.s.threads, "worker threads (default: available parallelism)");
  cmd->add_option("--out", f.s.out, "report path (default: stdout)");
}

void add_grid_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--grid", f.s.grid, "radial samples (uniform grid)");
  cmd->add_option("--fiber-grid", f.s.fiber_grid, "samples per fiber coordinate");
  cmd->add_option("--random", f.s.random_points, "seeded random points instead of a uniform grid");
  cmd->add_option("--grid-seed", f.s.grid_seed, "seed for --random");
  cmd->add_option("--backend", f.s.backend, "curvature backend: chart or warped");
  cmd->add_option("--format", f.s.format, "json or csv (default from --out extension, else json)");
  cmd->add_flag("--timing", f.s.timing, "record runtime_ms (reports are otherwise byte-reproducible)");
}

// Config first, then every option the user actually passed.
Settings resolve(CLI::App* cmd, const Flags& f) {
  Settings s;
  if (!f.config.empty()) load_config(f.config, s);
  auto given = [cmd](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--space")) s.space = f.s.space;
  if (given("--n")) s.n = f.s.n;
  for (const std::string& name : kParamNames) {
    if (given("--" + name)) s.params[name] = f.s.params.at(name);
  }
  for (const std::string& kv : f.extra_params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
    s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (given("--checks")) s.checks = f.s.checks;
  if (given("--check")) s.check = f.s.check;
  if (given("--grid")) s.grid = f.s.grid;
  if (given("--fiber-grid")) s.fiber_grid = f.s.fiber_grid;
  if (given("--random")) s.random_points = f.s.random_points;
  if (given("--grid-seed")) s.grid_seed = f.s.grid_seed;
  if (given("--fd-step")) s.fd_step = f.s.fd_step;
  if (given("--fd-levels")) s.fd_levels = f.s.fd_levels;
  if (given("--backend")) s.backend = f.s.backend;
  if (given("--threads")) s.threads = f.s.threads;
  if (given("--out")) s.out = f.s.out;
  if (given("--format")) s.format = f.s.format;
  if (given("--timing")) s.timing = f.s.timing;
  if (given("--integrand")) s.integrand = f.s.integrand;
  if (given("--order")) s.order = f.s.order;
  if (given("--levels")) s.levels = f.s.levels;
  if (given("--json")) s.json_output = f.s.json_output;
  if (s.space.empty()) throw UsageError("--space is required");
  if (s.threads < 0) throw UsageError("--threads must be >= 0");
  return s;
}

CatalogParams numeric_params(const Settings& s) {
  CatalogParams p;
  for (const auto& [k, v] : s.params) {
    if (!v.empty()) p[k] = parse_number(k, v);
  }
  return p;
}

curvlab::RunOptions run_options(const Settings& s, const curvlab::CatalogSpace& space) {
  curvlab::RunOptions o;
  curvlab::GridSpec g = curvlab::default_grid(space);
  if (s.grid || s.fiber_grid) g.random_points = 0;
  if (s.grid) g.radial = *s.grid;
  if (s.fiber_grid) g.fiber = *s.fiber_grid;
  if (s.random_points) g.random_points = *s.random_points;
  if (s.grid_seed) {
    if (*s.grid_seed < 0) throw UsageError("--grid-seed must be >= 0");
    g.seed = static_cast<std::uint64_t>(*s.grid_seed);
  }
  if (g.radial < 1 || g.fiber < 1 || g.random_points < 0) throw UsageError("grid counts must be positive");
  o.grid = g;
  o.fd_step = s.fd_step;
  o.fd_levels = s.fd_levels;
  o.backend = curvlab::parse_backend(s.backend);
  o.threads = s.threads;
  o.timing = s.timing;
  return o;
}

std::string output_format(const Settings& s, const std::string& fallback) {
  std::string fmt = s.format;
  if (fmt.empty()) {
    const auto dot = s.out.rfind('.');
    fmt = (dot != std::string::npos && s.out.substr(dot) == ".csv") ? "csv" : fallback;
  }
  if (fmt != "json" && fmt != "csv") throw UsageError("--format must be json or csv");
  return fmt;
}

void emit(const Settings& s, const std::string& text) {
  if (s.out.empty() || s.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(s.out, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + s.out + "'");
  out << text;
}

void print_failures(const curvlab::ResidualReport& r) {
  if (r.pass) return;
  std::cerr << "FAIL " << r.space << " n=" << r.n << " " << r.check << ": max_abs " << curvlab::format_double(r.max_abs)
            << " max_rel " << curvlab::format_double(r.max_rel) << " (tolerance "
            << curvlab::format_double(r.tolerance) << ", floor " << curvlab::format_double(r.abs_floor) << ")\n";
  for (const curvlab::PointFailure& f : r.failures) {
    std::cerr << "  point " << f.index << " " << curvlab::format_point(f.point);
    if (!f.message.empty()) {
      std::cerr << " error: " << f.message << "\n";
    } else {
      std::cerr << " abs " << curvlab::format_double(f.abs) << " rel " << curvlab::format_double(f.rel) << "\n";
    }
  }
}

// Check ids to run: explicit ones must apply, "all" keeps only applicable ones.
std::vector<std::string> select_checks(const std::string& list, const curvlab::CatalogSpace& space,
                                       curvlab::Backend backend) {
  const bool everything = list == "all";
  std::vector<std::string> ids;
  for (const std::string& id : curvlab::expand_check_list(list)) {
    const curvlab::CheckSpec& c = curvlab::find_check(id);
    auto why = curvlab::inapplicable_reason(c, space);
    if (!why && backend == curvlab::Backend::Warped && !c.algebraic) why = id + " needs the chart backend";
    if (why) {
      if (everything) continue;
      throw UsageError(*why);
    }
    ids.push_back(id);
  }
  if (ids.empty()) throw UsageError("no applicable checks");
  return ids;
}

// ---------------------------------------------------------------- list

struct ParamRange {
  std::string name;
  std::string range;
};

std::vector<ParamRange> param_ranges(curvlab::CatalogId id) {
  using curvlab::CatalogId;
  const std::string margin = "(0, 0.25), default 0.05";
  switch (id) {
    case CatalogId::Hemisphere: return {{"margin", margin}};
    case CatalogId::Cylinder: return {{"margin", margin}};
    case CatalogId::Schwarzschild: return {{"m", "(0, sqrt((n-2)^(n-2)/n^n)), default half the bound"}, {"margin", margin}};
    case CatalogId::EuclideanBall: return {{"r0", "> 2 margin, default 1"}, {"margin", margin}};
    case CatalogId::SphericalBall: return {{"r0", "(2 margin, pi/2), default 1"}, {"margin", margin}};
    case CatalogId::ProductSpheres: return {{"radius1", "> 0, default 1"}, {"radius2", "> 0, default 1/sqrt(2)"}};
    case CatalogId::PerturbedFlat: return {{"seed", "integer >= 0, default 42"}, {"amplitude", "> 0, default 0.05"}};
  }
  return {};
}

std::string dims(curvlab::CatalogId id) {
  if (id == curvlab::CatalogId::ProductSpheres) return "n = 4";
  return "3 <= n <= 6";
}

std::string mass_bound_text(int n) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "m ∈ (0, %.8g) for n=%d", curvlab::schwarzschild_mass_bound(n), n);
  return buf;
}

int cmd_list(bool as_json) {
  if (as_json) {
    json spaces = json::array();
    for (curvlab::CatalogId id : curvlab::all_catalog_ids()) {
      json params = json::object();
      for (const ParamRange& p : param_ranges(id)) params[p.name] = p.range;
      json entry = {{"kind", "space"}, {"id", std::string(curvlab::to_string(id))}, {"dimensions", dims(id)},
                    {"params", params}};
      if (id == curvlab::CatalogId::Schwarzschild) {
        json bounds = json::object();
        for (int n = 3; n <= 6; ++n) bounds[std::to_string(n)] = curvlab::schwarzschild_mass_bound(n);
        entry["mass_bound"] = bounds;
      }
      spaces.push_back(entry);
    }
    for (const curvlab::CheckSpec& c : curvlab::check_registry()) {
      spaces.push_back({{"kind", "check"},
                        {"id", std::string(c.id)},
                        {"description", std::string(c.description)},
                        {"tolerance", c.tolerance},
                        {"abs_floor", c.abs_floor},
                        {"min_n", c.min_dim}});
    }
    spaces.push_back({{"kind", "group"}, {"id", "weyl-identities"},
                      {"members", {"weyl-closure", "weyl-tracefree", "cotton-weyl", "ricci-identity", "bianchi"}}});
    for (curvlab::RadialIntegrand ig : {curvlab::RadialIntegrand::DivFGradRicnorm, curvlab::RadialIntegrand::RadialWeylRhs,
                                        curvlab::RadialIntegrand::OkumuraBoundIntegrand}) {
      spaces.push_back({{"kind", "integrand"}, {"id", std::string(curvlab::to_string(ig))}});
    }
    std::cout << spaces.dump(2) << "\n";
    return kExitPass;
  }
  std::cout << "spaces:\n";
  for (curvlab::CatalogId id : curvlab::all_catalog_ids()) {
    std::printf("  %-16s %s\n", std::string(curvlab::to_string(id)).c_str(), dims(id).c_str());
    if (id == curvlab::CatalogId::Schwarzschild) {
      for (int n = 3; n <= 6; ++n) std::printf("  %-16s %s\n", "schwarzschild", mass_bound_text(n).c_str());
    }
    for (const ParamRange& p : param_ranges(id)) std::printf("  %-16s   %s: %s\n", "", p.name.c_str(), p.range.c_str());
  }
  std::cout << "checks:\n";
  for (const curvlab::CheckSpec& c : curvlab::check_registry()) {
    std::printf("  %-16s %s\n", std::string(c.id).c_str(), std::string(c.description).c_str());
  }
  std::printf("  %-16s %s\n", "weyl-identities", "group: weyl-closure, weyl-tracefree, cotton-weyl, ricci-identity, bianchi");
  std::cout << "integrands:\n";
  std::cout << "  div_f_grad_ricnorm\n  eq313_rhs\n  eq315_integrand\n";
  return kExitPass;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Settings& s) {
  const curvlab::CatalogSpace space = curvlab::build(s.space, s.n, numeric_params(s));
  const curvlab::RunOptions opt = run_options(s, space);
  const std::vector<std::string> ids = select_checks(s.checks, space, opt.backend);
  const std::string fmt = output_format(s, "json");
  const std::vector<curvlab::ResidualReport> reports = curvlab::run_checks(space, ids, opt);
  emit(s, fmt == "csv" ? curvlab::reports_to_csv(reports) : curvlab::reports_to_json(reports));
  bool ok = true;
  for (const auto& r : reports) {
    print_failures(r);
    ok = ok && r.pass;
  }
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- sweep

struct Sweep {
  std::string name;
  std::vector<double> values;
};

Sweep parse_sweep(const Settings& s) {
  std::optional<Sweep> sweep;
  for (const auto& [k, v] : s.params) {
    if (v.find(':') == std::string::npos) continue;
    if (sweep) throw UsageError("sweep takes exactly one a:b:steps range");
    std::vector<std::string> parts;
    std::stringstream ss(v);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("--" + k + ": range syntax is a:b:steps");
    const double a = parse_number(k, parts[0]);
    const double b = parse_number(k, parts[1]);
    const double steps = parse_number(k, parts[2]);
    if (!(steps >= 1.0) || steps != std::floor(steps)) throw UsageError("--" + k + ": steps must be a positive integer");
    const int count = static_cast<int>(steps);
    if (count == 1 && a != b) throw UsageError("--" + k + ": one step needs a == b");
    Sweep out{k, {}};
    for (int i = 0; i < count; ++i) out.values.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    sweep = out;
  }
  if (!sweep) throw UsageError("sweep needs one parameter given as a:b:steps");
  return *sweep;
}

int cmd_sweep(Settings s) {
  const Sweep sweep = parse_sweep(s);
  if (s.check.empty()) throw UsageError("--check is required");
  const std::string fmt = output_format(s, "csv");
  s.params.erase(sweep.name);
  CatalogParams base = numeric_params(s);

  // Validate every parameter value before any output.
  std::vector<curvlab::CatalogSpace> spaces;
  for (double v : sweep.values) {
    CatalogParams p = base;
    p[sweep.name] = v;
    spaces.push_back(curvlab::build(s.space, s.n, p));
  }
  const bool schwarzschild = spaces.front().id == curvlab::CatalogId::Schwarzschild;
  std::vector<curvlab::ResidualReport> reports;
  std::string csv = std::string("param,param_value,") + std::string(curvlab::kCsvColumns) +
                    (schwarzschild ? ",r1,r2\n" : "\n");
  bool ok = true;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const curvlab::RunOptions opt = run_options(s, spaces[i]);
    const std::vector<std::string> ids = select_checks(s.check, spaces[i], opt.backend);
    if (ids.size() != 1) throw UsageError("sweep runs a single check");
    curvlab::ResidualReport r = curvlab::run_checks(spaces[i], ids, opt).front();
    std::string row = sweep.name + "," + curvlab::format_double(sweep.values[i]) + "," +
                      curvlab::reports_to_csv(std::span(&r, 1), false);
    row.pop_back();
    if (schwarzschild) {
      const auto [r1, r2] = *spaces[i].roots;
      row += "," + curvlab::format_double(r1) + "," + curvlab::format_double(r2);
      if (r.check != "roots") r.extra.insert(r.extra.end(), {{"r1", r1}, {"r2", r2}});
    }
    csv += row + "\n";
    print_failures(r);
    ok = ok && r.pass;
    reports.push_back(std::move(r));
  }
  emit(s, fmt == "csv" ? csv : curvlab::reports_to_json(reports));
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- integrate

int cmd_integrate(const Settings& s) {
  const curvlab::CatalogSpace built = curvlab::build(s.space, s.n, numeric_params(s));
  const curvlab::CatalogSpace space = curvlab::with_fd(built, s.fd_step, s.fd_levels);
  if (!space.chart.warped()) throw Error(ErrorKind::NotWarpedProduct, s.space + " is not a warped product");
  const curvlab::RadialIntegrand ig = curvlab::parse_radial_integrand(s.integrand);
  curvlab::RadialQuadratureOptions q;
  q.order = s.order;
  q.levels = s.levels;
  if (q.order < 2) throw UsageError("--order must be >= 2");
  if (q.levels < 2) throw UsageError("--levels must be >= 2");
  const curvlab::RadialIntegral in = curvlab::integrate_radial(space.require_triple(), ig, q);

  // Both the divergence and its zero-radial-Weyl expansion integrate to zero
  // when f vanishes on the boundary.
  const bool vanishing = ig != curvlab::RadialIntegrand::OkumuraBoundIntegrand;
  const bool pass = !vanishing || in.vanishes();

  // Pinching hypothesis along the radial direction, for reading the inequality.
  double pinching_min = std::numeric_limits<double>::infinity();
  const curvlab::SampleGrid radial = curvlab::SampleGrid::uniform(space.chart, 64, 1);
  for (const curvlab::Point& p : radial.points()) {
    pinching_min = std::min(pinching_min, curvlab::pinching_gap(curvlab::geometry_at(space.chart, p)));
  }

  json j = json::object();
  j["space"] = std::string(curvlab::to_string(space.id));
  j["n"] = space.n;
  j["params"] = space.params;
  j["integrand"] = std::string(curvlab::to_string(ig));
  j["order"] = in.order;
  j["value"] = in.value;
  j["abs_integral"] = in.abs_integral;
  j["deltas"] = in.deltas;
  j["raw"] = in.raw;
  j["extrapolation_error"] = in.extrapolation_error;
  j["fd_noise"] = in.fd_noise;
  j["pinching_gap_min"] = pinching_min;
  if (vanishing) {
    j["pass"] = pass;
  } else {
    j["inequality_holds"] = in.value <= 0.0;
  }

  std::ostringstream os;
  if (s.json_output) {
    os << j.dump(2) << "\n";
  } else {
    auto line = [&os](const std::string& k, const std::string& v) { os << k << ": " << v << "\n"; };
    auto list = [](const std::vector<double>& xs) {
      std::string t;
      for (double x : xs) t += (t.empty() ? "" : " ") + curvlab::format_double(x);
      return t;
    };
    std::string params;
    for (const auto& [k, v] : space.params) params += (params.empty() ? "" : " ") + k + "=" + curvlab::format_double(v);
    line("space", std::string(curvlab::to_string(space.id)) + " n=" + std::to_string(space.n) + " " + params);
    line("integrand", std::string(curvlab::to_string(ig)));
    line("order", std::to_string(in.order));
    line("value", curvlab::format_double(in.value));
    line("abs_integral", curvlab::format_double(in.abs_integral));
    line("deltas", list(in.deltas));
    line("raw", list(in.raw));
    line("extrapolation_error", curvlab::format_double(in.extrapolation_error));
    line("fd_noise", curvlab::format_double(in.fd_noise));
    line("pinching_gap_min", curvlab::format_double(pinching_min));
    if (vanishing) {
      line("pass", std::string(pass ? "true" : "false") +
                       " (|value| <= 1e-4 * abs_integral, <= 4 x estimated numerical error, or <= 1e-6)");
    } else {
      line("inequality", in.value <= 0.0 ? "0 >= value holds" : "0 >= value violated");
    }
  }
  emit(s, os.str());
  if (!pass) {
    std::cerr << "FAIL integral " << curvlab::format_double(in.value) << " against abs "
              << curvlab::format_double(in.abs_integral) << "\n";
  }
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: numerical curvature identities on V-static spaces"};
  app.require_subcommand(1);

  bool list_json = false;
  CLI::App* list = app.add_subcommand("list", "catalog spaces, parameter ranges and check ids");
  list->add_flag("--json", list_json, "JSON array output");

  Flags verify_flags;
  CLI::App* verify = app.add_subcommand("verify", "run checks over a grid of a catalog space");
  add_space_options(verify, verify_flags);
  add_grid_options(verify, verify_flags);
  verify->add_option("--checks", verify_flags.s.checks, "comma list of check ids, or all");

  Flags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "one report row per parameter value (a:b:steps)");
  add_space_options(sweep, sweep_flags);
  add_grid_options(sweep, sweep_flags);
  sweep->add_option("--check", sweep_flags.s.check, "check id (roots for schwarzschild horizons)");

  Flags integrate_flags;
  CLI::App* integrate = app.add_subcommand("integrate", "radial integral over a warped-product space");
  add_space_options(integrate, integrate_flags);
  integrate->add_option("--integrand", integrate_flags.s.integrand, "div_f_grad_ricnorm, eq313_rhs or eq315_integrand");
  integrate->add_option("--order", integrate_flags.s.order, "Gauss-Legendre order");
  integrate->add_option("--levels", integrate_flags.s.levels, "boundary clip levels for extrapolation");
  integrate->add_flag("--json", integrate_flags.s.json_output, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*list) return cmd_list(list_json);
    if (*verify) return cmd_verify(resolve(verify, verify_flags));
    if (*sweep) return cmd_sweep(resolve(sweep, sweep_flags));
    if (*integrate) return cmd_integrate(resolve(integrate, integrate_flags));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    // Hypothesis failures surfaced outside a grid run are check failures; the rest is bad input.
    const bool check_failure = e.kind() == ErrorKind::HypothesisViolated ||
                               e.kind() == ErrorKind::NonConstantScalarCurvature;
    return check_failure ? kExitFail : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
