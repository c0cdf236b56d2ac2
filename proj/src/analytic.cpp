#include "everett/analytic.hpp"

#include <cmath>

namespace everett {
namespace {

// sinh(x)/x and sin(x)/x with the removable point handled.
double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

double decay_constant(const Particle& particle, const RectBarrier& barrier,
                      const UnitSystem& units) {
  particle.validate();
  barrier.validate();
  if (particle.energy >= barrier.v0) {
    throw Error(ErrorCode::NotTunneling, "decay constant needs energy below the barrier height");
  }
  return std::sqrt(2.0 * particle.mass * (barrier.v0 - particle.energy)) / units.hbar;
}

double transmission_approx(double kappa, double barrier_length) {
  if (!(kappa >= 0.0) || !(barrier_length > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "transmission_approx needs kappa >= 0 and L > 0");
  }
  return std::exp(-2.0 * kappa * barrier_length);
}

double transmission_exact(const Particle& particle, const RectBarrier& barrier,
                          const UnitSystem& units) {
  if (!(particle.energy > 0.0)) {
    throw Error(ErrorCode::NonPositiveEnergy, "exact transmission needs energy > 0");
  }
  particle.validate();
  barrier.validate();

  const double e = particle.energy;
  const double v0 = barrier.v0;
  const double l = barrier.length;
  const double hbar2 = units.hbar * units.hbar;
  // wavenumber inside the barrier, real above v0 and imaginary below
  const double q = std::sqrt(2.0 * particle.mass * std::abs(e - v0)) / units.hbar;
  const double shape = e < v0 ? sinhc(q * l) : sinc(q * l);

  // v0^2 sinh^2(qL) / (4E|v0-E|) rewritten so E == v0 is regular.
  const double excess = v0 * v0 / (4.0 * e) * (2.0 * particle.mass * l * l / hbar2) * shape * shape;
  return 1.0 / (1.0 + excess);
}

std::vector<TransmissionPoint> transmission_sweep(double particle_mass, const RectBarrier& barrier,
                                                  double e_min, double e_max, std::size_t n_steps,
                                                  const UnitSystem& units) {
  const bool single = n_steps == 1 && e_min == e_max;
  const bool range = n_steps >= 2 && e_min < e_max;
  if (!(e_min > 0.0) || !std::isfinite(e_max) || !(single || range)) {
    throw Error(ErrorCode::BadRange, "sweep needs 0 < e_min < e_max and n_steps >= 2");
  }

  std::vector<TransmissionPoint> table;
  table.reserve(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) {
    double e = e_min;
    if (n_steps > 1) {
      e = i + 1 == n_steps ? e_max
                           : e_min + (e_max - e_min) * static_cast<double>(i) /
                                         static_cast<double>(n_steps - 1);
    }
    const Particle particle{particle_mass, e};
    TransmissionPoint point{e, std::nullopt, std::nullopt, transmission_exact(particle, barrier, units)};
    if (e < barrier.v0) {
      point.kappa = decay_constant(particle, barrier, units);
      point.p_approx = transmission_approx(*point.kappa, barrier.length);
    }
    table.push_back(point);
  }
  return table;
}

}  // namespace everett
