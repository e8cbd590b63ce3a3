#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/chart.hpp"
#include "curvlab/error.hpp"

// Central finite differences on a chart, with Richardson extrapolation.
//
// A multi-index is a list of coordinate indices: {0} is ∂_0, {1, 1} is ∂_1²,
// {0, 2, 2} is ∂_0 ∂_2². The stencil is the tensor product of 1D central
// stencils; each has an error expansion in even powers of h, so one
// Richardson level (4 D(h/2) - D(h)) / 3 lifts the error to O(h⁴).
namespace curvlab::fd {

inline constexpr int kMaxOrder = 4;

struct Tap {
  int offset;
  double weight;
};

// 1D central stencil for d^order/dx^order, weights in units of h^-order.
std::span<const Tap> central_stencil(int order);

// Distance (in units of h) the order-k stencil reaches from the centre.
int stencil_reach(int order);

inline void accumulate(double& acc, double v, double w) { acc += w * v; }
inline void accumulate(Tensor& acc, const Tensor& v, double w) { acc.add_scaled(v, w); }
inline void scale(double& v, double s) { v *= s; }
inline void scale(Tensor& v, double s) { v *= s; }

void require_stencil(const Chart& chart, std::span<const double> p, int coord, double reach);

// One plain central difference at step h.
template <typename F>
auto difference(const F& f, const Chart& chart, std::span<const double> p, std::span<const int> multi,
                double h) {
  using Value = decltype(f(p));
  const int n = chart.dim();
  if (multi.empty()) return f(p);
  if (static_cast<int>(multi.size()) > kMaxOrder) {
    throw Error(ErrorKind::InvalidArgument, "derivative order above 4");
  }
  std::vector<int> order(static_cast<std::size_t>(n), 0);
  for (int c : multi) {
    if (c < 0 || c >= n) throw Error(ErrorKind::InvalidArgument, "multi-index coordinate out of range");
    ++order[static_cast<std::size_t>(c)];
  }
  std::vector<int> active;
  for (int c = 0; c < n; ++c) {
    if (order[static_cast<std::size_t>(c)] > 0) {
      active.push_back(c);
      require_stencil(chart, p, c, stencil_reach(order[static_cast<std::size_t>(c)]) * h);
    }
  }

  std::vector<std::span<const Tap>> taps;
  for (int c : active) taps.push_back(central_stencil(order[static_cast<std::size_t>(c)]));

  std::vector<std::size_t> cursor(active.size(), 0);
  Point q(p.begin(), p.end());
  Value acc{};
  bool first = true;
  for (;;) {
    double w = 1.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const Tap& t = taps[a][cursor[a]];
      w *= t.weight;
      q[static_cast<std::size_t>(active[a])] = p[static_cast<std::size_t>(active[a])] + t.offset * h;
    }
    if (first) {
      acc = f(std::span<const double>(q));
      scale(acc, w);
      first = false;
    } else {
      accumulate(acc, f(std::span<const double>(q)), w);
    }
    std::size_t a = 0;
    while (a < active.size() && ++cursor[a] == taps[a].size()) cursor[a++] = 0;
    if (a == active.size()) break;
  }
  double hpow = 1.0;
  for (std::size_t k = 0; k < multi.size(); ++k) hpow *= h;
  scale(acc, 1.0 / hpow);
  return acc;
}

// Richardson-extrapolated central difference using steps h, h/2, ..., h/2^levels.
template <typename F>
auto derivative(const F& f, const Chart& chart, std::span<const double> p, std::span<const int> multi,
                const FdOptions& opt) {
  using Value = decltype(f(p));
  const int levels = opt.richardson_levels;
  std::vector<Value> table;
  table.reserve(static_cast<std::size_t>(levels) + 1);
  double h = opt.step;
  for (int l = 0; l <= levels; ++l, h *= 0.5) table.push_back(difference(f, chart, p, multi, h));
  // Neville-style elimination of h², h⁴, ...
  double factor = 4.0;
  for (int k = 1; k <= levels; ++k, factor *= 4.0) {
    for (int l = levels; l >= k; --l) {
      Value next = table[static_cast<std::size_t>(l)];
      scale(next, factor / (factor - 1.0));
      accumulate(next, table[static_cast<std::size_t>(l - 1)], -1.0 / (factor - 1.0));
      table[static_cast<std::size_t>(l)] = std::move(next);
    }
  }
  return table.back();
}

// Near coordinate degeneracies (g_aa << 1) a fixed coordinate step is a tiny
// arclength step and rounding noise dominates. This factor widens the step
// along coordinate a to roughly h in arclength, capped at kMaxArclengthStretch
// and kept inside the chart box.
inline constexpr double kMaxArclengthStretch = 16.0;
double arclength_stretch(const Chart& chart, std::span<const double> p, int coord, double g_aa);

// Value, gradient and Hessian (coordinate partials) of a scalar function,
// sharing stencil evaluations across all first and second partials.
// step_scale (empty or one entry per coordinate) multiplies the step along
// each coordinate.
ScalarJet scalar_jet(const std::function<double(std::span<const double>)>& f, const Chart& chart,
                     std::span<const double> p, const FdOptions& opt, std::span<const double> step_scale = {});

}  // namespace curvlab::fd
