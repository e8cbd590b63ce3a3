#include "curvlab/fd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvlab::fd {

namespace {

constexpr std::array<Tap, 2> kFirst{{{1, 0.5}, {-1, -0.5}}};
constexpr std::array<Tap, 3> kSecond{{{1, 1.0}, {0, -2.0}, {-1, 1.0}}};
constexpr std::array<Tap, 4> kThird{{{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}}};
constexpr std::array<Tap, 5> kFourth{{{2, 1.0}, {1, -4.0}, {0, 6.0}, {-1, -4.0}, {-2, 1.0}}};

}  // namespace

std::span<const Tap> central_stencil(int order) {
  switch (order) {
    case 1: return kFirst;
    case 2: return kSecond;
    case 3: return kThird;
    case 4: return kFourth;
    default: throw Error(ErrorKind::InvalidArgument, "stencil order must be 1..4");
  }
}

int stencil_reach(int order) { return order <= 2 ? 1 : 2; }

void require_stencil(const Chart& chart, std::span<const double> p, int coord, double reach) {
  const auto& iv = chart.domain()[static_cast<std::size_t>(coord)];
  const double x = p[static_cast<std::size_t>(coord)];
  if (x - reach < iv.lo || x + reach > iv.hi) {
    std::ostringstream os;
    os << "stencil of half-width " << reach << " around " << chart.coords()[static_cast<std::size_t>(coord)]
       << " = " << x << " leaves [" << iv.lo << ", " << iv.hi << "]";
    throw Error(ErrorKind::StencilOutOfDomain, os.str());
  }
}

namespace {

ScalarJet plain_scalar_jet(const std::function<double(std::span<const double>)>& f, const Chart& chart,
                           std::span<const double> p, double step, std::span<const double> scale, double f0) {
  const int n = chart.dim();
  const auto un = static_cast<std::size_t>(n);
  ScalarJet out;
  out.value = f0;
  out.grad.assign(un, 0.0);
  out.hess = Tensor(n, 2);
  std::vector<double> hs(un, step);
  for (std::size_t a = 0; a < scale.size(); ++a) hs[a] *= scale[a];
  Point q(p.begin(), p.end());
  auto eval = [&](int a, double da, int b, double db) {
    q[static_cast<std::size_t>(a)] += da;
    if (b >= 0) q[static_cast<std::size_t>(b)] += db;
    const double v = f(q);
    q[static_cast<std::size_t>(a)] -= da;
    if (b >= 0) q[static_cast<std::size_t>(b)] -= db;
    return v;
  };
  for (int a = 0; a < n; ++a) {
    const double h = hs[static_cast<std::size_t>(a)];
    require_stencil(chart, p, a, h);
    const double fp = eval(a, h, -1, 0.0);
    const double fm = eval(a, -h, -1, 0.0);
    out.grad[static_cast<std::size_t>(a)] = (fp - fm) / (2.0 * h);
    out.hess(a, a) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double ha = hs[static_cast<std::size_t>(a)];
      const double hb = hs[static_cast<std::size_t>(b)];
      const double fpp = eval(a, ha, b, hb);
      const double fpm = eval(a, ha, b, -hb);
      const double fmp = eval(a, -ha, b, hb);
      const double fmm = eval(a, -ha, b, -hb);
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * ha * hb);
      out.hess(a, b) = v;
      out.hess(b, a) = v;
    }
  }
  return out;
}

}  // namespace

ScalarJet scalar_jet(const std::function<double(std::span<const double>)>& f, const Chart& chart,
                     std::span<const double> p, const FdOptions& opt, std::span<const double> step_scale) {
  if (!step_scale.empty() && static_cast<int>(step_scale.size()) != chart.dim()) {
    throw Error(ErrorKind::InvalidArgument, "step_scale needs one entry per coordinate");
  }
  const double f0 = f(p);
  std::vector<ScalarJet> table;
  double h = opt.step;
  for (int l = 0; l <= opt.richardson_levels; ++l, h *= 0.5) table.push_back(plain_scalar_jet(f, chart, p, h, step_scale, f0));
  double factor = 4.0;
  for (int k = 1; k <= opt.richardson_levels; ++k, factor *= 4.0) {
    for (int l = opt.richardson_levels; l >= k; --l) {
      auto& hi = table[static_cast<std::size_t>(l)];
      const auto& lo = table[static_cast<std::size_t>(l - 1)];
      const double a = factor / (factor - 1.0);
      const double b = -1.0 / (factor - 1.0);
      for (std::size_t i = 0; i < hi.grad.size(); ++i) hi.grad[i] = a * hi.grad[i] + b * lo.grad[i];
      for (std::size_t i = 0; i < hi.hess.size(); ++i) hi.hess[i] = a * hi.hess[i] + b * lo.hess[i];
    }
  }
  return table.back();
}

double arclength_stretch(const Chart& chart, std::span<const double> p, int coord, double g_aa) {
  const auto c = static_cast<std::size_t>(coord);
  const Interval& box = chart.domain()[c];
  const double room = std::min(p[c] - box.lo, box.hi - p[c]) / chart.fd().step;
  const double stretch = 1.0 / std::sqrt(std::min(1.0, g_aa));
  return std::max(1.0, std::min({stretch, kMaxArclengthStretch, 0.9 * room}));
}

}  // namespace curvlab::fd
