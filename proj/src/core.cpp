#include "everett/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace everett {

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw Error(ErrorCode::InvalidArgument, "grid requires finite x_max > x_min");
  }
  if (n_points < kMinPoints) {
    throw Error(ErrorCode::InvalidArgument,
                "grid requires at least " + std::to_string(kMinPoints) + " points");
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

WaveFunction::WaveFunction(Grid grid, std::vector<Complex> amp)
    : grid_(grid), amp_(std::move(amp)) {
  if (amp_.size() != grid_.n_points()) {
    throw Error(ErrorCode::LengthMismatch, "wavefunction length differs from grid size");
  }
  for (const Complex& a : amp_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw Error(ErrorCode::InvalidArgument, "wavefunction has non-finite amplitude");
    }
  }
}

WaveFunction::WaveFunction(Grid grid)
    : grid_(grid), amp_(grid.n_points(), Complex{0.0, 0.0}) {}

double WaveFunction::norm() const noexcept {
  double sum = 0.0;
  for (const Complex& a : amp_) sum += std::norm(a);
  return sum * grid_.dx();
}

double WaveFunction::probability(double lo, double hi) const noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < amp_.size(); ++j) {
    const double x = grid_.x(j);
    if (x >= lo && x <= hi) sum += std::norm(amp_[j]);
  }
  return sum * grid_.dx();
}

double WaveFunction::mean_position() const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < amp_.size(); ++j) {
    const double p = std::norm(amp_[j]);
    num += grid_.x(j) * p;
    den += p;
  }
  if (den <= 0.0) throw Error(ErrorCode::ZeroNorm, "mean position of a zero wavefunction");
  return num / den;
}

void RectBarrier::validate() const {
  if (!(v0 > 0.0) || !std::isfinite(v0)) {
    throw Error(ErrorCode::InvalidArgument, "barrier height v0 must be > 0");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidArgument, "barrier length must be > 0");
  }
  if (!std::isfinite(x_start)) {
    throw Error(ErrorCode::InvalidArgument, "barrier x_start must be finite");
  }
}

void Particle::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidArgument, "particle mass must be > 0");
  }
  if (!(energy >= 0.0) || !std::isfinite(energy)) {
    throw Error(ErrorCode::InvalidArgument, "particle energy must be >= 0");
  }
}

double potential_at(const RectBarrier& barrier, double x) noexcept {
  return (x >= barrier.x_start && x <= barrier.x_end()) ? barrier.v0 : 0.0;
}

double potential_cell_average(const RectBarrier& barrier, double lo, double hi) noexcept {
  if (!(hi > lo)) return potential_at(barrier, lo);
  const double overlap =
      std::min(hi, barrier.x_end()) - std::max(lo, barrier.x_start);
  if (overlap <= 0.0) return 0.0;
  return barrier.v0 * std::min(1.0, overlap / (hi - lo));
}

WaveFunction normalize(const WaveFunction& psi) {
  const double n = psi.norm();
  if (!(n > 1e-300)) throw Error(ErrorCode::ZeroNorm, "cannot normalize a zero-norm wavefunction");
  const double scale = 1.0 / std::sqrt(n);
  std::vector<Complex> amp(psi.amp().begin(), psi.amp().end());
  for (Complex& a : amp) a *= scale;
  return WaveFunction(psi.grid(), std::move(amp));
}

}  // namespace everett
