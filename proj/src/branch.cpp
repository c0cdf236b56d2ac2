#include "everett/branch.hpp"

#include <cmath>
#include <string>

namespace everett {
namespace {

double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_weights(std::span<const double> weights, std::size_t split,
                   std::span<const BranchLabel> labels) {
  if (weights.empty()) throw Error(ErrorCode::InvalidArgument, "branch set needs at least one branch");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "branch weights must be finite and non-negative");
    }
  }
  if (split > weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "split index exceeds the number of branches");
  }
  if (!labels.empty() && labels.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "one label per branch is required");
  }
}

// Exponents beyond this would need gigabytes of digits.
constexpr std::uint64_t kMaxExponent = 1u << 20;

unsigned checked_exponent(std::uint64_t e) {
  if (e > kMaxExponent) throw Error(ErrorCode::InvalidArgument, "world count exponent too large");
  return static_cast<unsigned>(e);
}

}  // namespace

BranchSet::BranchSet(std::vector<double> weights, std::size_t split_index,
                     std::vector<BranchLabel> labels)
    : weights_(std::move(weights)), split_(split_index), labels_(std::move(labels)) {
  check_weights(weights_, split_, labels_);
  if (std::abs(sum_squares(weights_) - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::InvalidArgument, "branch weights must satisfy sum c_i^2 == 1");
  }
}

BranchSet BranchSet::normalized(std::vector<double> raw, std::size_t split_index,
                                std::vector<BranchLabel> labels) {
  check_weights(raw, split_index, labels);
  const double n2 = sum_squares(raw);
  if (!(n2 > 1e-300)) throw Error(ErrorCode::ZeroNorm, "branch weights are all zero");
  const double scale = 1.0 / std::sqrt(n2);
  for (double& w : raw) w *= scale;
  return BranchSet(std::move(raw), split_index, std::move(labels));
}

void DecoherenceModel::validate() const {
  if (!(lambda_per_event > 0.0) || !std::isfinite(lambda_per_event)) {
    throw Error(ErrorCode::InvalidArgument, "decoherence rate lambda must be > 0");
  }
  if (!(epsilon_coherence > 0.0 && epsilon_coherence < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "coherence threshold epsilon must lie in (0, 1)");
  }
}

double DecoherenceModel::overlap(std::uint64_t n_events) const {
  return std::exp(-static_cast<double>(n_events) * lambda_per_event);
}

DensityMatrix::DensityMatrix(std::size_t dim) : dim_(dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "density matrix dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
  entries_.assign(dim * dim, Complex{0.0, 0.0});
}

Complex DensityMatrix::trace() const noexcept {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

BranchSet branch_set_from_run(const TimeSeries& series) {
  if (series.empty()) throw Error(ErrorCode::ScatteringIncomplete, "time series is empty");
  const std::size_t last = series.size() - 1;
  if (!(series.p_inside[last] < 1e-3)) {
    throw Error(ErrorCode::ScatteringIncomplete,
                "scattering incomplete: in-barrier probability " + std::to_string(series.p_inside[last]));
  }
  return BranchSet::normalized({series.w_reflected[last], series.w_transmitted[last]}, 1);
}

double tunneling_probability(const BranchSet& branches) noexcept {
  return sum_squares(branches.tunneled());
}

double reflection_probability(const BranchSet& branches) noexcept {
  return sum_squares(branches.reflected());
}

DensityMatrix build_density_matrix(const BranchSet& branches, const DecoherenceModel& model,
                                   std::uint64_t n_events) {
  model.validate();
  const auto c = branches.weights();
  DensityMatrix rho(c.size());
  const double overlap = model.overlap(n_events);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      rho(i, j) = i == j ? c[i] * c[i] : c[i] * c[j] * overlap;
    }
  }
  return rho;
}

double coherence_measure(const DensityMatrix& rho) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      if (i != j) s += std::abs(rho(i, j));
    }
  }
  return s;
}

std::uint64_t events_to_decohere(const BranchSet& branches, const DecoherenceModel& model) {
  model.validate();
  auto coherence = [&](std::uint64_t n) {
    return coherence_measure(build_density_matrix(branches, model, n));
  };
  const double c0 = coherence(0);
  const double eps = model.epsilon_coherence;
  if (c0 < eps) return 0;

  const double estimate = std::ceil(std::log(c0 / eps) / model.lambda_per_event);
  if (!(estimate < 9.0e18)) throw Error(ErrorCode::InvalidArgument, "decoherence would need too many events");
  auto n = static_cast<std::uint64_t>(std::max(0.0, estimate));
  // Rounding at the boundary can put the closed form one event off.
  while (!(coherence(n) < eps)) ++n;
  while (n > 0 && coherence(n - 1) < eps) --n;
  return n;
}

WorldCount world_count_paper(std::uint64_t n_events, std::uint64_t d_outcomes) {
  if (n_events < 1 || d_outcomes < 1) {
    throw Error(ErrorCode::InvalidArgument, "world count needs N >= 1 and d >= 1");
  }
  return boost::multiprecision::pow(WorldCount(n_events), checked_exponent(d_outcomes));
}

WorldCount world_count_sequential(std::uint64_t n_events, std::uint64_t d_outcomes) {
  if (d_outcomes < 1) throw Error(ErrorCode::InvalidArgument, "world count needs d >= 1");
  return boost::multiprecision::pow(WorldCount(d_outcomes), checked_exponent(n_events));
}

}  // namespace everett
