#include "everett/timing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace everett {

MacroParams MacroParams::from_plasma_frequency(double t_env, double t_crossover, double alpha,
                                               double f_p_hz) {
  if (!(f_p_hz > 0.0) || !std::isfinite(f_p_hz)) {
    throw Error(ErrorCode::InvalidArgument, "plasma frequency must be > 0");
  }
  return MacroParams{t_env, t_crossover, alpha, 1.0 / f_p_hz};
}

void MacroParams::validate() const {
  if (!(t_env >= 0.0) || !std::isfinite(t_env)) {
    throw Error(ErrorCode::InvalidArgument, "environment temperature must be >= 0");
  }
  if (!(t_crossover > 0.0) || !std::isfinite(t_crossover)) {
    throw Error(ErrorCode::InvalidArgument, "crossover temperature must be > 0");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "scaling exponent alpha must be > 0");
  }
  if (!(tau_b > 0.0) || !std::isfinite(tau_b)) {
    throw Error(ErrorCode::InvalidArgument, "branching duration must be > 0");
  }
}

EnergyDecomposition energy_decomposition(const BranchSet& branches,
                                         std::span<const double> branch_energies) {
  if (branch_energies.size() != branches.dim()) {
    throw Error(ErrorCode::LengthMismatch, "need one energy per branch");
  }
  const auto c = branches.weights();
  double e_r = 0.0;
  double e_t = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double term = c[i] * c[i] * branch_energies[i];
    (i < branches.split_index() ? e_r : e_t) += term;
  }
  return {e_r + e_t, e_r, e_t};
}

double separation_energy(const EnergyDecomposition& decomp) noexcept {
  return std::abs(decomp.e_reflected_weighted - decomp.e_transmitted_weighted);
}

double tunneled_amplitude_sum(const BranchSet& branches) noexcept {
  double s = 0.0;
  for (double c : branches.tunneled()) s += c;
  return s;
}

RateEstimate branching_energy_rate(std::span<const double> times, std::span<const double> amplitude,
                                   const UnitSystem& units) {
  const std::size_t n = times.size();
  if (amplitude.size() != n) throw Error(ErrorCode::LengthMismatch, "times and amplitudes differ in length");
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "rate estimate needs at least 3 samples");
  for (std::size_t j = 1; j < n; ++j) {
    if (!(times[j] > times[j - 1])) throw Error(ErrorCode::InvalidArgument, "times must be strictly increasing");
  }

  std::vector<double> slope(n);
  {
    const double h1 = times[1] - times[0];
    const double h2 = times[2] - times[1];
    slope[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * amplitude[0] + (h1 + h2) / (h1 * h2) * amplitude[1] -
               h1 / (h2 * (h1 + h2)) * amplitude[2];
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double h1 = times[j] - times[j - 1];
    const double h2 = times[j + 1] - times[j];
    slope[j] = -h2 / (h1 * (h1 + h2)) * amplitude[j - 1] + (h2 - h1) / (h1 * h2) * amplitude[j] +
               h1 / (h2 * (h1 + h2)) * amplitude[j + 1];
  }
  {
    const double h1 = times[n - 2] - times[n - 3];
    const double h2 = times[n - 1] - times[n - 2];
    slope[n - 1] = h2 / (h1 * (h1 + h2)) * amplitude[n - 3] - (h1 + h2) / (h1 * h2) * amplitude[n - 2] +
                   (2.0 * h2 + h1) / (h2 * (h1 + h2)) * amplitude[n - 1];
  }

  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (slope[j] > slope[best]) best = j;
  }
  double scale = 0.0;
  for (double w : amplitude) scale = std::max(scale, std::abs(w));
  // growth below roundoff of the amplitude over the whole window is none
  const double min_slope = 1e-12 * scale / (times[n - 1] - times[0]);
  if (!(slope[best] > min_slope) || !(amplitude[best] > 0.0)) {
    throw Error(ErrorCode::NoGrowth, "tunneled amplitude never grows");
  }
  return {units.hbar * slope[best] / amplitude[best], times[best], amplitude[best], slope[best]};
}

RateEstimate branching_energy_rate(const TimeSeries& series, const UnitSystem& units) {
  return branching_energy_rate(series.times, series.w_transmitted, units);
}

double branching_duration(double delta_e, const UnitSystem& units) {
  if (!(delta_e > 0.0)) throw Error(ErrorCode::ZeroSeparation, "branching energy must be > 0");
  return units.hbar / delta_e;
}

double tunneling_time(double n_b, double tau_b) {
  if (!(n_b >= 1.0)) throw Error(ErrorCode::SubUnityEvents, "a tunneled world needs at least one branching event");
  if (!(tau_b > 0.0)) throw Error(ErrorCode::InvalidArgument, "branching duration must be > 0");
  return n_b * tau_b;
}

double thermal_branching_events(const MacroParams& params) {
  params.validate();
  return 1.0 + std::pow(params.t_env / params.t_crossover, params.alpha);
}

double thermal_branching_events(double t_env, double delta_e, double alpha, const UnitSystem& units) {
  if (!(t_env >= 0.0) || !(alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need t_env >= 0 and alpha > 0");
  }
  if (!(delta_e > 0.0)) throw Error(ErrorCode::ZeroSeparation, "branching energy must be > 0");
  return 1.0 + std::pow(units.k_boltzmann * t_env / delta_e, alpha);
}

double macroscopic_tunneling_time(const MacroParams& params) {
  return tunneling_time(thermal_branching_events(params), params.tau_b);
}

TimingResult analyze_run(const TimeSeries& series, const UnitSystem& units, double n_b) {
  const BranchSet branches = branch_set_from_run(series);
  const std::size_t last = series.size() - 1;
  const double energies[] = {series.e_reflected[last], series.e_transmitted[last]};
  const double separation = separation_energy(energy_decomposition(branches, energies));
  const RateEstimate rate = branching_energy_rate(series, units);
  const double tau_b = branching_duration(rate.delta_e, units);
  return {separation, rate.delta_e, tau_b, n_b, tunneling_time(n_b, tau_b), rate.eval_time};
}

}  // namespace everett
