#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "everett/core.hpp"
#include "everett/evolve.hpp"

namespace everett {

/// Orthonormal observer/environment state indices attached to a branch.
/// Only their distinctness matters.
struct BranchLabel {
  std::size_t observer;
  std::size_t environment;
};

/// Non-negative world weights c_i with sum c_i^2 == 1. Branches
/// [0, split_index) are reflected worlds, [split_index, d) tunneled worlds.
class BranchSet {
 public:
  static constexpr double kNormTolerance = 1e-10;

  /// Throws InvalidArgument unless the weights are already normalized.
  BranchSet(std::vector<double> weights, std::size_t split_index,
            std::vector<BranchLabel> labels = {});

  /// Rescales raw non-negative weights to unit norm. Throws ZeroNorm.
  static BranchSet normalized(std::vector<double> raw, std::size_t split_index,
                              std::vector<BranchLabel> labels = {});

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t split_index() const noexcept { return split_; }
  std::size_t dim() const noexcept { return weights_.size(); }
  std::span<const BranchLabel> labels() const noexcept { return labels_; }

  std::span<const double> reflected() const noexcept { return std::span(weights_).first(split_); }
  std::span<const double> tunneled() const noexcept { return std::span(weights_).subspan(split_); }

 private:
  std::vector<double> weights_;
  std::size_t split_;
  std::vector<BranchLabel> labels_;
};

/// Environment overlap <E_i|E_j> = exp(-n lambda) after n interaction
/// events, for every pair i != j.
struct DecoherenceModel {
  double lambda_per_event;
  double epsilon_coherence;

  void validate() const;
  double overlap(std::uint64_t n_events) const;
};

/// Dense d x d complex matrix, row-major. Limited to d <= 64.
class DensityMatrix {
 public:
  static constexpr std::size_t kMaxDim = 64;

  explicit DensityMatrix(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  std::span<const Complex> entries() const noexcept { return entries_; }
  Complex trace() const noexcept;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// Two-branch (reflected, transmitted) decomposition taken from the final
/// recorded row; the residual in-barrier probability is shared
/// proportionally. Throws ScatteringIncomplete when p_inside >= 1e-3.
BranchSet branch_set_from_run(const TimeSeries& series);

double tunneling_probability(const BranchSet& branches) noexcept;
double reflection_probability(const BranchSet& branches) noexcept;

/// rho_ii = c_i^2, rho_ij = c_i c_j exp(-n lambda).
DensityMatrix build_density_matrix(const BranchSet& branches, const DecoherenceModel& model,
                                   std::uint64_t n_events);

/// Sum of |rho_ij| over i != j.
double coherence_measure(const DensityMatrix& rho) noexcept;

/// Smallest n with coherence below epsilon, i.e. ceil(ln(C0/eps)/lambda).
/// Returns 0 when the branches start out decohered.
std::uint64_t events_to_decohere(const BranchSet& branches, const DecoherenceModel& model);

using WorldCount = boost::multiprecision::cpp_int;

/// N^d, the count as printed for N events with d outcomes each.
WorldCount world_count_paper(std::uint64_t n_events, std::uint64_t d_outcomes);

/// d^N, every live world splitting into d children at each of N events.
WorldCount world_count_sequential(std::uint64_t n_events, std::uint64_t d_outcomes);

}  // namespace everett
