#pragma once

#include <span>

#include "everett/branch.hpp"
#include "everett/core.hpp"
#include "everett/evolve.hpp"

namespace everett {

/// Measure-weighted energies: E_R = sum_{i<k} c_i^2 E_i, E_T over the
/// tunneled branches, and their sum.
struct EnergyDecomposition {
  double e_universal;
  double e_reflected_weighted;
  double e_transmitted_weighted;
};

/// Logarithmic growth rate of the tunneled amplitude at its steepest point.
struct RateEstimate {
  double delta_e;    // hbar * dW/dt / W at eval_time
  double eval_time;
  double amplitude;  // W(eval_time)
  double slope;      // dW/dt at eval_time
};

struct TimingResult {
  double delta_e_separation;
  double delta_e_rate;
  double tau_b;
  double n_b;
  double tau_t;
  double eval_time;
};

/// Parameters of the thermal branching-count model. Temperatures share one
/// unit (only their ratio enters); tau_b is in seconds.
struct MacroParams {
  double t_env;
  double t_crossover;
  double alpha = 1.0;
  double tau_b;

  /// tau_b = 1 / f_p.
  static MacroParams from_plasma_frequency(double t_env, double t_crossover, double alpha,
                                           double f_p_hz);
  void validate() const;
};

EnergyDecomposition energy_decomposition(const BranchSet& branches,
                                         std::span<const double> branch_energies);

/// |E_R - E_T|.
double separation_energy(const EnergyDecomposition& decomp) noexcept;

/// Sum of the tunneled amplitudes c_i, i >= split (not their squares).
double tunneled_amplitude_sum(const BranchSet& branches) noexcept;

/// Evaluates hbar W'/W at the sample where W' is largest. W' uses
/// three-point differences: central inside, second-order one-sided at the
/// ends; spacing may be non-uniform. Throws NoGrowth if W' never exceeds
/// roundoff (1e-12 max|W| over the sampled window).
RateEstimate branching_energy_rate(std::span<const double> times, std::span<const double> amplitude,
                                   const UnitSystem& units = UnitSystem::natural());

/// Same, with W = w_transmitted of the series.
RateEstimate branching_energy_rate(const TimeSeries& series,
                                   const UnitSystem& units = UnitSystem::natural());

/// hbar / delta_e. Throws ZeroSeparation when delta_e <= 0.
double branching_duration(double delta_e, const UnitSystem& units = UnitSystem::natural());

/// n_b * tau_b. Throws SubUnityEvents when n_b < 1.
double tunneling_time(double n_b, double tau_b);

/// 1 + (t_env / t_crossover)^alpha.
double thermal_branching_events(const MacroParams& params);

/// 1 + (k_B t_env / delta_e)^alpha with an explicit branching energy.
double thermal_branching_events(double t_env, double delta_e, double alpha, const UnitSystem& units);

double macroscopic_tunneling_time(const MacroParams& params);

/// Both branching-energy estimators for one completed run, plus the
/// branching duration from the rate estimator and tau_t = n_b tau_b.
TimingResult analyze_run(const TimeSeries& series, const UnitSystem& units = UnitSystem::natural(),
                         double n_b = 1.0);

}  // namespace everett
