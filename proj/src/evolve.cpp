#include "everett/evolve.hpp"

#include <cmath>
#include <numbers>

namespace everett {
namespace {

constexpr std::size_t kEdgePoints = 10;
constexpr double kEdgeTolerance = 1e-6;
constexpr double kEmptyRegion = 1e-12;

std::vector<Complex> off_band(std::size_t n, Complex value) {
  return std::vector<Complex>(n, value);
}

std::vector<Complex> lhs_diagonal(const Hamiltonian& h, Complex half_step) {
  std::vector<Complex> diag(h.diagonal().size());
  for (std::size_t j = 0; j < diag.size(); ++j) diag[j] = 1.0 + half_step * h.diagonal()[j];
  return diag;
}

// Point counts of the left and barrier regions; the rest lie right of the barrier.
struct Regions {
  std::size_t n_left = 0;   // x < x_start
  std::size_t n_inside = 0; // x_start <= x <= x_end
};

Regions split_regions(const Grid& grid, const RectBarrier& barrier) {
  Regions r;
  for (std::size_t j = 0; j < grid.n_points(); ++j) {
    const double x = grid.x(j);
    if (x < barrier.x_start) {
      ++r.n_left;
    } else if (x <= barrier.x_end()) {
      ++r.n_inside;
    }
  }
  return r;
}

double sum_probability(std::span<const Complex> psi, std::size_t first, std::size_t count, double dx) {
  double s = 0.0;
  for (std::size_t j = first; j < first + count; ++j) s += std::norm(psi[j]);
  return s * dx;
}

}  // namespace

void EvolveConfig::validate() const {
  if (!(packet.sigma > 0.0) || !std::isfinite(packet.sigma) || !std::isfinite(packet.x0) ||
      !std::isfinite(packet.k0)) {
    throw Error(ErrorCode::InvalidArgument, "packet needs finite x0, k0 and sigma > 0");
  }
  if (!(barrier.v0 >= 0.0) || !std::isfinite(barrier.v0)) {
    throw Error(ErrorCode::InvalidArgument, "barrier height must be >= 0");
  }
  if (!(barrier.length > 0.0) || !std::isfinite(barrier.length) || !std::isfinite(barrier.x_start)) {
    throw Error(ErrorCode::InvalidArgument, "barrier length must be > 0");
  }
  if (!(barrier.x_start > grid.x_min()) || !(barrier.x_end() < grid.x_max())) {
    throw Error(ErrorCode::InvalidArgument, "barrier must lie strictly inside the grid");
  }
  if (packet.x0 - 5.0 * packet.sigma < grid.x_min() || packet.x0 + 5.0 * packet.sigma > grid.x_max()) {
    throw Error(ErrorCode::PacketOutOfDomain, "packet x0 +- 5 sigma leaves the grid");
  }
  if (packet.x0 + 5.0 * packet.sigma > barrier.x_start) {
    throw Error(ErrorCode::PacketOutOfDomain, "packet must start clear of the barrier (x0 + 5 sigma <= x_start)");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorCode::InvalidArgument, "mass must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
  if (record_every < 1 || record_every > n_steps) {
    throw Error(ErrorCode::InvalidArgument, "record_every must be in [1, n_steps]");
  }
}

EvolveConfig EvolveConfig::standard_scenario() {
  return EvolveConfig{
      .grid = Grid(-200.0, 200.0, 4096),
      .packet = {.x0 = -50.0, .sigma = 10.0, .k0 = 1.0},
      .barrier = {.v0 = 1.0, .length = 1.0, .x_start = 0.0},
      .mass = 1.0,
      .dt = 0.05,
      .n_steps = 2000,
      .record_every = 10,
      .sampling = PotentialSampling::CellAverage,
  };
}

Hamiltonian::Hamiltonian(const Grid& grid, const RectBarrier& barrier, double mass,
                         const UnitSystem& units, PotentialSampling sampling)
    : diag_(grid.n_points()) {
  const double dx = grid.dx();
  const double kinetic = units.hbar * units.hbar / (2.0 * mass * dx * dx);
  off_ = -kinetic;
  for (std::size_t j = 0; j < diag_.size(); ++j) {
    const double x = grid.x(j);
    const double v = sampling == PotentialSampling::Node
                         ? potential_at(barrier, x)
                         : potential_cell_average(barrier, x - 0.5 * dx, x + 0.5 * dx);
    diag_[j] = 2.0 * kinetic + v;
  }
}

double Hamiltonian::restricted_energy(std::span<const Complex> psi, std::size_t first,
                                      std::size_t last) const {
  if (first > last || last >= psi.size()) return 0.0;
  Complex num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t j = first; j <= last; ++j) {
    Complex h_psi = diag_[j] * psi[j];
    if (j > first) h_psi += off_ * psi[j - 1];
    if (j < last) h_psi += off_ * psi[j + 1];
    num += std::conj(psi[j]) * h_psi;
    den += std::norm(psi[j]);
  }
  return den > 0.0 ? num.real() / den : 0.0;
}

CrankNicolson::CrankNicolson(const Grid& grid, const RectBarrier& barrier, double mass, double dt,
                             const UnitSystem& units, PotentialSampling sampling)
    : hamiltonian_(grid, barrier, mass, units, sampling),
      half_step_(0.0, dt / (2.0 * units.hbar)),
      solver_(off_band(grid.n_points(), half_step_ * hamiltonian_.off_diagonal()),
              lhs_diagonal(hamiltonian_, half_step_),
              off_band(grid.n_points(), half_step_ * hamiltonian_.off_diagonal())),
      scratch_(grid.n_points()) {}

void CrankNicolson::step(std::span<Complex> psi) {
  const std::size_t n = psi.size();
  if (n != scratch_.size()) throw Error(ErrorCode::LengthMismatch, "wavefunction size differs from propagator");
  const auto diag = hamiltonian_.diagonal();
  const Complex off = half_step_ * hamiltonian_.off_diagonal();
  for (std::size_t j = 0; j < n; ++j) {
    Complex r = (1.0 - half_step_ * diag[j]) * psi[j];
    if (j > 0) r -= off * psi[j - 1];
    if (j + 1 < n) r -= off * psi[j + 1];
    scratch_[j] = r;
  }
  solver_.solve(scratch_);
  std::copy(scratch_.begin(), scratch_.end(), psi.begin());
}

WaveFunction init_packet(const Grid& grid, const GaussianPacket& packet) {
  if (!(packet.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "packet sigma must be > 0");
  if (packet.x0 - 5.0 * packet.sigma < grid.x_min() || packet.x0 + 5.0 * packet.sigma > grid.x_max()) {
    throw Error(ErrorCode::PacketOutOfDomain, "packet x0 +- 5 sigma leaves the grid");
  }
  const double s2 = packet.sigma * packet.sigma;
  const double prefactor = std::pow(2.0 * std::numbers::pi * s2, -0.25);
  std::vector<Complex> amp(grid.n_points());
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double x = grid.x(j);
    const double d = x - packet.x0;
    amp[j] = prefactor * std::exp(Complex(-d * d / (4.0 * s2), packet.k0 * x));
  }
  return normalize(WaveFunction(grid, std::move(amp)));
}

WaveFunction step_crank_nicolson(const WaveFunction& psi, const RectBarrier& barrier, double mass,
                                 double dt, const UnitSystem& units, PotentialSampling sampling) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be > 0");
  CrankNicolson propagator(psi.grid(), barrier, mass, dt, units, sampling);
  WaveFunction next = psi;
  propagator.step(next.amp());
  return next;
}

RunResult run(const EvolveConfig& config, const UnitSystem& units) {
  config.validate();
  const Grid& grid = config.grid;
  const double dx = grid.dx();
  const std::size_t n = grid.n_points();
  const Regions regions = split_regions(grid, config.barrier);
  const std::size_t right_first = regions.n_left + regions.n_inside;
  const std::size_t n_right = n - right_first;

  CrankNicolson propagator(grid, config.barrier, config.mass, config.dt, units, config.sampling);
  RunResult result{init_packet(grid, config.packet), {}, false};
  auto psi = result.final_state.amp();
  TimeSeries& s = result.series;
  const std::size_t rows = config.n_steps / config.record_every + 1;
  for (auto* v : {&s.times, &s.w_reflected, &s.w_transmitted, &s.p_inside, &s.norm, &s.e_reflected,
                  &s.e_transmitted}) {
    v->reserve(rows);
  }

  auto record = [&](double t) {
    const double p_left = sum_probability(psi, 0, regions.n_left, dx);
    const double p_in = sum_probability(psi, regions.n_left, regions.n_inside, dx);
    const double p_right = sum_probability(psi, right_first, n_right, dx);
    s.times.push_back(t);
    s.w_reflected.push_back(std::sqrt(p_left));
    s.w_transmitted.push_back(std::sqrt(p_right));
    s.p_inside.push_back(p_in);
    s.norm.push_back(p_left + p_in + p_right);
    const auto& h = propagator.hamiltonian();
    s.e_reflected.push_back(p_left < kEmptyRegion || regions.n_left == 0
                                ? 0.0
                                : h.restricted_energy(psi, 0, regions.n_left - 1));
    s.e_transmitted.push_back(p_right < kEmptyRegion || n_right == 0
                                  ? 0.0
                                  : h.restricted_energy(psi, right_first, n - 1));
    const double p_edges = sum_probability(psi, 0, kEdgePoints, dx) +
                           sum_probability(psi, n - kEdgePoints, kEdgePoints, dx);
    if (p_edges > kEdgeTolerance) result.edge_contamination = true;
  };

  record(0.0);
  for (std::size_t step = 1; step <= config.n_steps; ++step) {
    propagator.step(psi);
    if (step % config.record_every == 0) record(static_cast<double>(step) * config.dt);
  }
  return result;
}

}  // namespace everett
