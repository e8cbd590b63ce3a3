#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace curvlab {

enum class Variance : std::uint8_t { Covariant, Contravariant };

// A slot permutation together with a sign: T(idx ∘ perm) = sign * T(idx).
// Antisymmetry in slots (a, b) is {swap(a, b), -1}; Riemann pair exchange is
// the permutation (2, 3, 0, 1) with sign +1.
struct Symmetry {
  std::vector<int> perm;
  int sign = 1;

  static Symmetry symmetric(int rank, int a, int b);
  static Symmetry antisymmetric(int rank, int a, int b);
  static Symmetry pair_exchange();
};

// Dense components of a tensor at a point. Index order is row-major: the
// first slot varies slowest. No symmetry compression.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank, Variance variance = Variance::Covariant);
  Tensor(int dim, std::vector<Variance> variance);

  static Tensor scalar(double value);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(variance_.size()); }
  std::size_t size() const noexcept { return data_.size(); }

  const std::vector<Variance>& variance() const noexcept { return variance_; }
  void set_variance(int slot, Variance v) { variance_.at(static_cast<std::size_t>(slot)) = v; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  double value() const { return data_.at(0); }

  std::size_t offset_of(std::span<const int> idx) const;
  void unravel(std::size_t flat, std::span<int> idx) const;

  Tensor& declare(Symmetry s);
  const std::vector<Symmetry>& symmetries() const noexcept { return symmetries_; }

  // Largest violation of any declared symmetry, in absolute terms.
  double symmetry_defect() const;

  double max_abs() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);

  // Fused a += s * other; used by the finite-difference stencils.
  Tensor& add_scaled(const Tensor& other, double s);

 private:
  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_ = std::vector<double>(1, 0.0);
  std::vector<Symmetry> symmetries_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor a);

// Raise one slot with the inverse metric (rank-2, contravariant components).
Tensor raise(const Tensor& t, int slot, const Tensor& inverse_metric);

// Raise every covariant slot.
Tensor raise_all(const Tensor& t, const Tensor& inverse_metric);

// g-inner product of two equal-rank covariant tensors.
double inner(const Tensor& a, const Tensor& b, const Tensor& inverse_metric);
double norm_squared(const Tensor& t, const Tensor& inverse_metric);

// Contract two covariant slots of t with the inverse metric.
Tensor trace(const Tensor& t, int slot_a, int slot_b, const Tensor& inverse_metric);

// Plain component product of two matrices (rank 2 each).
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor identity(int dim);

}  // namespace curvlab
