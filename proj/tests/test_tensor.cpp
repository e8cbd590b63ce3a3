#include <cmath>
#include <random>

#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/sample_grid.hpp"
#include "curvlab/tensor.hpp"
#include "doctest.h"

using namespace curvlab;

TEST_CASE("row-major layout puts the first slot slowest") {
  Tensor t(3, 3);
  t(1, 2, 0) = 7.0;
  CHECK(t[1 * 9 + 2 * 3 + 0] == 7.0);
  std::array<int, 3> idx{};
  t.unravel(15, idx);
  CHECK(idx == std::array<int, 3>{1, 2, 0});
  CHECK(t.offset_of(idx) == 15);
  CHECK(t.size() == 27);
}

TEST_CASE("declared symmetries are measured in absolute terms") {
  Tensor t(3, 2);
  t.declare(Symmetry::antisymmetric(2, 0, 1));
  t(0, 1) = 1.0;
  t(1, 0) = -1.0;
  CHECK(t.symmetry_defect() == 0.0);
  t(1, 0) = -0.75;
  CHECK(t.symmetry_defect() == doctest::Approx(0.25));
}

TEST_CASE("arithmetic keeps shapes and scales components") {
  Tensor a = identity(3);
  Tensor b = 2.0 * identity(3);
  Tensor c = a + b;
  CHECK(c(2, 2) == 3.0);
  c -= a;
  CHECK(c(1, 1) == 2.0);
  c.add_scaled(a, -2.0);
  CHECK(c.max_abs() == 0.0);
}

TEST_CASE("inverse of identity and of a diagonal metric") {
  CHECK((spd_inverse(identity(4)) - identity(4)).max_abs() == 0.0);
  Tensor g(2, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 4.0;
  const Tensor gi = spd_inverse(g);
  CHECK(gi(0, 0) == doctest::Approx(1.0));
  CHECK(gi(1, 1) == doctest::Approx(0.25));
  CHECK(gi(0, 1) == 0.0);
}

TEST_CASE("inverse of seeded random SPD matrices multiplies back to identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor a(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = 2.0 * unit_uniform(rng()) - 1.0;
    // g = a aᵀ + I is symmetric positive definite.
    Tensor g(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = i == j ? 1.0 : 0.0;
        for (int k = 0; k < 3; ++k) s += a(i, k) * a(j, k);
        g(i, j) = s;
      }
    const Tensor prod = matmul(g, spd_inverse(g));
    CHECK((prod - identity(3)).max_abs() <= 1e-12);
  }
}

TEST_CASE("indefinite or singular matrices are rejected") {
  Tensor g = identity(3);
  g(2, 2) = -1.0;
  CHECK_THROWS_AS(spd_inverse(g), Error);
  try {
    spd_inverse(g);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMetric);
  }
  g(2, 2) = 0.0;
  CHECK_THROWS_AS(spd_inverse(g), Error);
}

TEST_CASE("raise, trace and norm use the inverse metric") {
  Tensor g(2, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 4.0;
  const Tensor gi = spd_inverse(g);
  Tensor t(2, 2);
  t(0, 0) = 3.0;
  t(1, 1) = 8.0;
  t(0, 1) = t(1, 0) = 2.0;
  CHECK(trace(t, 0, 1, gi).value() == doctest::Approx(3.0 + 8.0 / 4.0));
  // |t|² = g^ik g^jl t_ij t_kl.
  CHECK(norm_squared(t, gi) == doctest::Approx(9.0 + 2.0 * 4.0 / 4.0 + 64.0 / 16.0));
  const Tensor up = raise(t, 0, gi);
  CHECK(up.variance()[0] == Variance::Contravariant);
  CHECK(up(1, 1) == doctest::Approx(2.0));
  CHECK(up(1, 0) == doctest::Approx(0.5));
  CHECK(inner(t, identity(2), gi) == doctest::Approx(3.0 + 8.0 / 16.0));
}
