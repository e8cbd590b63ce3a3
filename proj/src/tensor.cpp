#include "curvlab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvlab/error.hpp"

namespace curvlab {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

std::vector<int> identity_perm(int rank) {
  std::vector<int> p(static_cast<std::size_t>(rank));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

Symmetry Symmetry::symmetric(int rank, int a, int b) {
  auto p = identity_perm(rank);
  std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
  return {std::move(p), 1};
}

Symmetry Symmetry::antisymmetric(int rank, int a, int b) {
  auto p = identity_perm(rank);
  std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
  return {std::move(p), -1};
}

Symmetry Symmetry::pair_exchange() { return {{2, 3, 0, 1}, 1}; }

Tensor::Tensor(int dim, int rank, Variance variance)
    : dim_(dim),
      variance_(static_cast<std::size_t>(rank), variance),
      data_(ipow(dim, rank), 0.0) {}

Tensor::Tensor(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)), data_(ipow(dim, static_cast<int>(variance_.size())), 0.0) {}

Tensor Tensor::scalar(double value) {
  Tensor t;
  t.data_[0] = value;
  return t;
}

std::size_t Tensor::offset_of(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return off;
}

void Tensor::unravel(std::size_t flat, std::span<int> idx) const {
  for (std::size_t s = idx.size(); s-- > 0;) {
    idx[s] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
}

Tensor& Tensor::declare(Symmetry s) {
  if (static_cast<int>(s.perm.size()) != rank()) {
    throw Error(ErrorKind::InvalidArgument, "symmetry rank does not match tensor rank");
  }
  symmetries_.push_back(std::move(s));
  return *this;
}

double Tensor::symmetry_defect() const {
  double worst = 0.0;
  const auto r = static_cast<std::size_t>(rank());
  std::vector<int> idx(r), permuted(r);
  for (const auto& s : symmetries_) {
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      unravel(flat, idx);
      for (std::size_t k = 0; k < r; ++k) permuted[k] = idx[static_cast<std::size_t>(s.perm[k])];
      const double other = data_[offset_of(permuted)];
      worst = std::max(worst, std::abs(data_[flat] - s.sign * other));
    }
  }
  return worst;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor& Tensor::operator+=(const Tensor& other) { return add_scaled(other, 1.0); }
Tensor& Tensor::operator-=(const Tensor& other) { return add_scaled(other, -1.0); }

Tensor& Tensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Tensor& Tensor::add_scaled(const Tensor& other, double s) {
  if (other.data_.size() != data_.size()) {
    throw Error(ErrorKind::InvalidArgument, "tensor shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double s, Tensor a) { return a *= s; }

Tensor raise(const Tensor& t, int slot, const Tensor& inverse_metric) {
  const int n = t.dim();
  const auto un = static_cast<std::size_t>(n);
  Tensor out(n, t.variance());
  out.set_variance(slot, Variance::Contravariant);
  // View the tensor as [outer][slot][inner].
  std::size_t inner = 1;
  for (int s = slot + 1; s < t.rank(); ++s) inner *= un;
  const std::size_t outer = t.size() / (inner * un);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t a = 0; a < un; ++a) {
      for (std::size_t in = 0; in < inner; ++in) {
        double acc = 0.0;
        for (std::size_t b = 0; b < un; ++b) {
          acc += inverse_metric[a * un + b] * t[(o * un + b) * inner + in];
        }
        out[(o * un + a) * inner + in] = acc;
      }
    }
  }
  return out;
}

Tensor raise_all(const Tensor& t, const Tensor& inverse_metric) {
  Tensor out = t;
  for (int s = 0; s < t.rank(); ++s) {
    if (t.variance()[static_cast<std::size_t>(s)] == Variance::Covariant) out = raise(out, s, inverse_metric);
  }
  return out;
}

double inner(const Tensor& a, const Tensor& b, const Tensor& inverse_metric) {
  const Tensor up = raise_all(a, inverse_metric);
  double acc = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) acc += up[i] * b[i];
  return acc;
}

double norm_squared(const Tensor& t, const Tensor& inverse_metric) { return inner(t, t, inverse_metric); }

Tensor trace(const Tensor& t, int slot_a, int slot_b, const Tensor& inverse_metric) {
  if (slot_a == slot_b || t.rank() < 2) throw Error(ErrorKind::InvalidArgument, "trace needs two distinct slots");
  const int n = t.dim();
  const int r = t.rank();
  std::vector<Variance> var;
  for (int s = 0; s < r; ++s) {
    if (s != slot_a && s != slot_b) var.push_back(t.variance()[static_cast<std::size_t>(s)]);
  }
  Tensor out(n, std::move(var));
  std::vector<int> idx(static_cast<std::size_t>(r)), rest(static_cast<std::size_t>(r - 2));
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    t.unravel(flat, idx);
    const double w = inverse_metric(idx[static_cast<std::size_t>(slot_a)], idx[static_cast<std::size_t>(slot_b)]);
    if (w == 0.0) continue;
    std::size_t k = 0;
    for (int s = 0; s < r; ++s) {
      if (s != slot_a && s != slot_b) rest[k++] = idx[static_cast<std::size_t>(s)];
    }
    out[out.offset_of(rest)] += w * t[flat];
  }
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  const int n = a.dim();
  Tensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

Tensor identity(int dim) {
  Tensor out(dim, 2);
  for (int i = 0; i < dim; ++i) out(i, i) = 1.0;
  return out;
}

}  // namespace curvlab
