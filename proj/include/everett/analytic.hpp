#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "everett/core.hpp"

namespace everett {

/// One row of a rectangular-barrier transmission table. kappa and p_approx
/// exist only in the tunneling regime (energy < v0).
struct TransmissionPoint {
  double energy;
  std::optional<double> kappa;
  std::optional<double> p_approx;
  double p_exact;
};

/// sqrt(2 m (v0 - E)) / hbar. Throws NotTunneling when E >= v0.
double decay_constant(const Particle& particle, const RectBarrier& barrier,
                      const UnitSystem& units = UnitSystem::natural());

/// exp(-2 kappa L), the opaque-barrier estimate.
double transmission_approx(double kappa, double barrier_length);

/// Exact plane-wave transmission coefficient of the rectangular barrier,
/// valid on both sides of v0 (E == v0 is the continuous limit).
/// Throws NonPositiveEnergy when E <= 0.
double transmission_exact(const Particle& particle, const RectBarrier& barrier,
                          const UnitSystem& units = UnitSystem::natural());

/// Tabulates the quantities above on linearly spaced energies in
/// [e_min, e_max]. A single point is allowed when e_min == e_max.
std::vector<TransmissionPoint> transmission_sweep(double particle_mass, const RectBarrier& barrier,
                                                  double e_min, double e_max, std::size_t n_steps,
                                                  const UnitSystem& units = UnitSystem::natural());

}  // namespace everett
