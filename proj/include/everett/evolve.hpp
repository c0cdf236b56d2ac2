#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "everett/core.hpp"
#include "everett/tridiagonal.hpp"

namespace everett {

struct GaussianPacket {
  double x0;
  double sigma;
  double k0;
};

/// How the barrier enters the diagonal of the discrete Hamiltonian.
///  - CellAverage: mean of V over [x_j - dx/2, x_j + dx/2]. The discrete
///    barrier then has width exactly L, independent of grid alignment.
///  - Node: V(x_j) sampled at the node. The effective width is rounded to
///    whole cells.
enum class PotentialSampling { CellAverage, Node };

struct EvolveConfig {
  Grid grid;
  GaussianPacket packet;
  RectBarrier barrier;
  double mass = 1.0;
  double dt = 0.05;
  std::size_t n_steps = 2000;
  std::size_t record_every = 10;
  PotentialSampling sampling = PotentialSampling::CellAverage;

  /// Throws InvalidArgument / PacketOutOfDomain. Barrier height 0 is
  /// allowed here (free propagation with the same region bookkeeping).
  void validate() const;

  /// m = hbar = 1, V0 = 1, L = 1 at x = 0, packet k0 = 1 (E = 0.5),
  /// sigma = 10, x0 = -50, grid [-200, 200] x 4096, dt = 0.05 run to t = 100.
  static EvolveConfig standard_scenario();
};

/// Observables recorded along a run. w_* are amplitudes (square roots of
/// region probabilities); e_* are <H> of the normalized region restriction.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> w_reflected;
  std::vector<double> w_transmitted;
  std::vector<double> p_inside;
  std::vector<double> norm;
  std::vector<double> e_reflected;
  std::vector<double> e_transmitted;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
};

struct RunResult {
  WaveFunction final_state;
  TimeSeries series;
  bool edge_contamination = false;
};

/// Discrete H = -hbar^2/(2m) d^2/dx^2 + V with second-order central
/// differences and zero Dirichlet ghosts beyond both ends.
class Hamiltonian {
 public:
  Hamiltonian(const Grid& grid, const RectBarrier& barrier, double mass, const UnitSystem& units,
              PotentialSampling sampling = PotentialSampling::CellAverage);

  std::span<const double> diagonal() const noexcept { return diag_; }
  double off_diagonal() const noexcept { return off_; }

  /// <phi|H|phi> / <phi|phi> where phi is psi restricted to indices
  /// [first, last]. Returns 0 for an empty restriction.
  double restricted_energy(std::span<const Complex> psi, std::size_t first, std::size_t last) const;

 private:
  std::vector<double> diag_;
  double off_;
};

/// Crank-Nicolson propagator (I + i dt H / 2hbar) psi' = (I - i dt H / 2hbar) psi
/// with the left-hand matrix factorized once.
class CrankNicolson {
 public:
  CrankNicolson(const Grid& grid, const RectBarrier& barrier, double mass, double dt,
                const UnitSystem& units, PotentialSampling sampling = PotentialSampling::CellAverage);

  const Hamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  void step(std::span<Complex> psi);

 private:
  Hamiltonian hamiltonian_;
  Complex half_step_;  // i dt / (2 hbar)
  TridiagonalSolver solver_;
  std::vector<Complex> scratch_;
};

/// (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2/(4 sigma^2) + i k0 x), normalized on
/// the grid. Throws PacketOutOfDomain when x0 +- 5 sigma leaves the grid.
WaveFunction init_packet(const Grid& grid, const GaussianPacket& packet);

WaveFunction step_crank_nicolson(const WaveFunction& psi, const RectBarrier& barrier, double mass,
                                 double dt, const UnitSystem& units = UnitSystem::natural(),
                                 PotentialSampling sampling = PotentialSampling::CellAverage);

RunResult run(const EvolveConfig& config, const UnitSystem& units = UnitSystem::natural());

}  // namespace everett
