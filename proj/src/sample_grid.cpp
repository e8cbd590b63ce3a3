#include "curvlab/sample_grid.hpp"

#include <random>

#include "curvlab/error.hpp"

namespace curvlab {

double unit_uniform(std::uint64_t draw) { return static_cast<double>(draw >> 11) * 0x1.0p-53; }

SampleGrid SampleGrid::uniform(const Chart& chart, std::vector<int> counts) {
  const auto n = static_cast<std::size_t>(chart.dim());
  if (counts.size() != n) throw Error(ErrorKind::InvalidArgument, "one sample count per coordinate required");
  for (int c : counts) {
    if (c < 1) throw Error(ErrorKind::InvalidArgument, "sample counts must be positive");
  }
  SampleGrid grid;
  grid.counts_ = counts;
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  grid.points_.reserve(total);
  std::vector<int> cursor(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Point p(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& iv = chart.domain()[c];
      const double lo = iv.lo + chart.margin()[c];
      const double hi = iv.hi - chart.margin()[c];
      p[c] = lo + (cursor[c] + 0.5) * (hi - lo) / counts[c];
    }
    grid.points_.push_back(std::move(p));
    // First coordinate varies slowest.
    for (std::size_t c = n; c-- > 0;) {
      if (++cursor[c] < counts[c]) break;
      cursor[c] = 0;
    }
  }
  return grid;
}

SampleGrid SampleGrid::uniform(const Chart& chart, int radial, int fiber) {
  std::vector<int> counts(static_cast<std::size_t>(chart.dim()), fiber);
  counts[0] = radial;
  return uniform(chart, std::move(counts));
}

SampleGrid SampleGrid::random(const Chart& chart, std::size_t count, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(chart.dim());
  SampleGrid grid;
  grid.random_ = true;
  grid.seed_ = seed;
  grid.counts_.assign(n, 0);
  std::mt19937_64 rng(seed);
  grid.points_.reserve(count);
  while (grid.points_.size() < count) {
    Point p(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& iv = chart.domain()[c];
      const double lo = iv.lo + chart.margin()[c];
      const double hi = iv.hi - chart.margin()[c];
      p[c] = lo + unit_uniform(rng()) * (hi - lo);
    }
    // u = 0 lands on the closed edge; redraw to stay in the open region.
    if (chart.in_sampling_region(p)) grid.points_.push_back(std::move(p));
  }
  return grid;
}

}  // namespace curvlab
