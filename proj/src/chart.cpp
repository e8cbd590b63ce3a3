#include "curvlab/chart.hpp"

#include <sstream>

#include "curvlab/error.hpp"
#include "curvlab/fd.hpp"

namespace curvlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PointOutOfDomain: return "PointOutOfDomain";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NonConstantScalarCurvature: return "NonConstantScalarCurvature";
    case ErrorKind::DegenerateEigenbasis: return "DegenerateEigenbasis";
    case ErrorKind::NotWarpedProduct: return "NotWarpedProduct";
    case ErrorKind::InadmissibleMass: return "InadmissibleMass";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::NonpositiveWarp: return "NonpositiveWarp";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Chart::Chart(std::string name, std::vector<std::string> coords, std::vector<Interval> domain,
             std::vector<double> margin, MetricFn metric)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      domain_(std::move(domain)),
      margin_(std::move(margin)),
      metric_(std::move(metric)) {
  if (coords_.size() < 3) throw Error(ErrorKind::UnsupportedDimension, "charts need n >= 3");
  if (domain_.size() != coords_.size() || margin_.size() != coords_.size()) {
    throw Error(ErrorKind::InvalidArgument, "domain and margin must have one entry per coordinate");
  }
  for (std::size_t c = 0; c < domain_.size(); ++c) {
    if (!(domain_[c].lo < domain_[c].hi) || margin_[c] < 0.0 || 2.0 * margin_[c] >= domain_[c].hi - domain_[c].lo) {
      throw Error(ErrorKind::InvalidArgument, "empty sampling region for coordinate " + coords_[c]);
    }
  }
}

Chart& Chart::with_analytic_partials(MetricJetFn jet) {
  jet_ = std::move(jet);
  return *this;
}

Chart& Chart::with_fd(FdOptions options) {
  if (!(options.step > 0.0) || options.richardson_levels < 0) {
    throw Error(ErrorKind::InvalidArgument, "fd step must be positive");
  }
  fd_ = options;
  return *this;
}

Chart& Chart::with_warped_profile(WarpedProfile profile) {
  warped_ = std::move(profile);
  return *this;
}

bool Chart::contains(std::span<const double> p) const {
  if (p.size() != domain_.size()) return false;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c] < domain_[c].lo || p[c] > domain_[c].hi) return false;
  }
  return true;
}

bool Chart::in_sampling_region(std::span<const double> p) const {
  if (p.size() != domain_.size()) return false;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (!(p[c] > domain_[c].lo + margin_[c] && p[c] < domain_[c].hi - margin_[c])) return false;
  }
  return true;
}

void Chart::require_interior(std::span<const double> p) const {
  if (in_sampling_region(p)) return;
  std::ostringstream os;
  os << "point (";
  for (std::size_t c = 0; c < p.size(); ++c) os << (c ? ", " : "") << p[c];
  os << ") outside the sampling region of chart " << name_;
  throw Error(ErrorKind::PointOutOfDomain, os.str());
}

MetricJet Chart::jet(std::span<const double> p) const {
  if (jet_) return jet_(p);
  return fd_jet(p);
}

MetricJet Chart::fd_jet(std::span<const double> p) const {
  const int n = dim();
  const auto un = static_cast<std::size_t>(n);
  MetricJet out{metric_(p), Tensor(n, 3), Tensor(n, 4)};
  const std::size_t block = un * un;
  for (int k = 0; k < n; ++k) {
    const std::array<int, 1> mi{k};
    const Tensor d = fd::derivative(metric_, *this, p, mi, fd_);
    for (std::size_t e = 0; e < block; ++e) out.dg[static_cast<std::size_t>(k) * block + e] = d[e];
  }
  for (int l = 0; l < n; ++l) {
    for (int k = l; k < n; ++k) {
      const std::array<int, 2> mi{l, k};
      const Tensor d = fd::derivative(metric_, *this, p, mi, fd_);
      for (std::size_t e = 0; e < block; ++e) {
        out.ddg[(static_cast<std::size_t>(l) * un + static_cast<std::size_t>(k)) * block + e] = d[e];
        out.ddg[(static_cast<std::size_t>(k) * un + static_cast<std::size_t>(l)) * block + e] = d[e];
      }
    }
  }
  return out;
}

}  // namespace curvlab
