#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "everett/error.hpp"

namespace everett {

using Complex = std::complex<double>;

/// Action and thermal constants for one system of units. Natural units
/// (hbar = 1) drive the microscopic solver; SI is used for the macroscopic
/// timing calculator.
struct UnitSystem {
  enum class Mode { Natural, SI };

  Mode mode = Mode::Natural;
  double hbar = 1.0;
  double k_boltzmann = 1.0;

  static UnitSystem natural() noexcept { return {}; }
  static UnitSystem si() noexcept {
    return {Mode::SI, 1.054571817e-34, 1.380649e-23};
  }
};

/// Uniform 1-D grid including both end points.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  Grid(double x_min, double x_max, std::size_t n_points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t n_points() const noexcept { return n_points_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t j) const noexcept {
    return x_min_ + static_cast<double>(j) * dx_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

/// Complex amplitudes sampled on a Grid. Norms use the rectangle rule
/// sum |psi_j|^2 dx.
class WaveFunction {
 public:
  WaveFunction(Grid grid, std::vector<Complex> amp);
  explicit WaveFunction(Grid grid);  // all zeros

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> amp() const noexcept { return amp_; }
  std::span<Complex> amp() noexcept { return amp_; }
  std::size_t size() const noexcept { return amp_.size(); }

  double norm() const noexcept;
  /// Probability over grid points with lo <= x_j <= hi.
  double probability(double lo, double hi) const noexcept;
  double mean_position() const;

 private:
  Grid grid_;
  std::vector<Complex> amp_;
};

struct RectBarrier {
  double v0;
  double length;
  double x_start = 0.0;

  double x_end() const noexcept { return x_start + length; }
  void validate() const;
};

struct Particle {
  double mass;
  double energy;

  void validate() const;
};

/// V(x) = v0 on the closed interval [x_start, x_start + length], 0 elsewhere.
double potential_at(const RectBarrier& barrier, double x) noexcept;

/// Mean of potential_at over [lo, hi]; the exact overlap fraction times v0.
double potential_cell_average(const RectBarrier& barrier, double lo, double hi) noexcept;

/// Rescales by a positive real so that sum |amp|^2 dx == 1.
/// Throws ZeroNorm when the input norm is <= 1e-300.
WaveFunction normalize(const WaveFunction& psi);

}  // namespace everett
