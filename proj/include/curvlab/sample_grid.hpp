#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/chart.hpp"

namespace curvlab {

// Interior sample points of a chart. Uniform points are cell-centred in the
// margin-shrunk box, so none touches the excluded margin. Random points use a
// fixed-seed mt19937_64 with the top 53 bits mapped to [0, 1); both are
// reproducible bit for bit.
class SampleGrid {
 public:
  static SampleGrid uniform(const Chart& chart, std::vector<int> counts);
  // Same count along every coordinate after the first.
  static SampleGrid uniform(const Chart& chart, int radial, int fiber);
  static SampleGrid random(const Chart& chart, std::size_t count, std::uint64_t seed);

  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<int>& counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  bool is_random() const noexcept { return random_; }

 private:
  std::vector<int> counts_;
  std::vector<Point> points_;
  std::uint64_t seed_ = 0;
  bool random_ = false;
};

// Uniform double in [0, 1) from one 64-bit draw; documented so other
// implementations can reproduce seeded test data.
double unit_uniform(std::uint64_t draw);

}  // namespace curvlab
