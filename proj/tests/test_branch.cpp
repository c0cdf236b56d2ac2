#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "everett/analytic.hpp"
#include "everett/branch.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace everett;
using everett::testing::code_of;

namespace {

const double kHalf = 1.0 / std::sqrt(2.0);

BranchSet random_branch_set(std::mt19937_64& rng, std::size_t max_dim) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t d = dim(rng);
  std::vector<double> w(d);
  for (auto& x : w) x = u(rng) + 1e-3;
  std::uniform_int_distribution<std::size_t> split(0, d);
  return BranchSet::normalized(w, split(rng));
}

TimeSeries single_row(double w_r, double w_t, double p_in) {
  TimeSeries s;
  s.times = {0.0};
  s.w_reflected = {w_r};
  s.w_transmitted = {w_t};
  s.p_inside = {p_in};
  s.norm = {w_r * w_r + w_t * w_t + p_in};
  s.e_reflected = {0.0};
  s.e_transmitted = {0.0};
  return s;
}

}  // namespace

TEST_CASE("branch set invariants") {
  CHECK_NOTHROW(BranchSet({0.8, 0.6}, 1));
  CHECK_THROWS_AS(BranchSet({0.8, 0.8}, 1), Error);
  CHECK_THROWS_AS(BranchSet({0.8, 0.6}, 3), Error);
  CHECK_THROWS_AS(BranchSet({-0.8, 0.6}, 1), Error);
  CHECK_THROWS_AS(BranchSet({}, 0), Error);
  CHECK(code_of([] { BranchSet::normalized({0.0, 0.0}, 1); }) == ErrorCode::ZeroNorm);
  CHECK(code_of([] { BranchSet({0.8, 0.6}, 1, {{0, 0}}); }) == ErrorCode::LengthMismatch);

  const BranchSet labelled({0.8, 0.6}, 1, {{0, 0}, {1, 1}});
  CHECK(labelled.labels().size() == 2);
  CHECK(labelled.reflected().size() == 1);
  CHECK(labelled.tunneled().size() == 1);
}

TEST_CASE("branch set from a run") {
  const BranchSet b = branch_set_from_run(single_row(0.8, 0.6, 0.0));
  CHECK(b.split_index() == 1);
  CHECK(b.weights()[0] == doctest::Approx(0.8));
  CHECK(b.weights()[1] == doctest::Approx(0.6));

  // residual barrier probability is shared proportionally
  const BranchSet r = branch_set_from_run(single_row(0.8 * std::sqrt(0.9995), 0.6 * std::sqrt(0.9995), 0.0005));
  CHECK(r.weights()[0] == doctest::Approx(0.8).epsilon(1e-12));

  CHECK(code_of([] { branch_set_from_run(single_row(0.5, 0.5, 0.5)); }) == ErrorCode::ScatteringIncomplete);
  CHECK(code_of([] { branch_set_from_run(TimeSeries{}); }) == ErrorCode::ScatteringIncomplete);

  SUBCASE("standard scenario") {
    const auto& run = everett::testing::standard_run();
    const BranchSet s = branch_set_from_run(run.series);
    const EvolveConfig c = EvolveConfig::standard_scenario();
    const double pt = oracle::momentum_averaged_transmission(c.packet, c.barrier, c.mass);
    CHECK(std::abs(s.weights()[1] * s.weights()[1] - pt) / pt < 0.10);
    CHECK(std::abs(s.weights()[0] * s.weights()[0] - (1.0 - pt)) / (1.0 - pt) < 0.10);
    // mean-energy transmission below 1/2 means the tunneled world is lighter
    REQUIRE(transmission_exact({1.0, 0.5}, c.barrier) < 0.5);
    CHECK(s.weights()[1] < s.weights()[0]);
  }
}

TEST_CASE("tunneling probability") {
  CHECK(tunneling_probability(BranchSet({kHalf, kHalf}, 1)) == doctest::Approx(0.5));
  CHECK(tunneling_probability(BranchSet({1.0, 0.0, 0.0}, 3)) == 0.0);
  CHECK(reflection_probability(BranchSet({1.0, 0.0, 0.0}, 3)) == 1.0);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const BranchSet b = random_branch_set(rng, 8);
    CHECK(std::abs(tunneling_probability(b) + reflection_probability(b) - 1.0) < 1e-10);
  }

  SUBCASE("projector oracle, d = 6, split 2") {
    std::normal_distribution<double> g;
    std::vector<double> w(6);
    for (auto& x : w) x = std::abs(g(rng));
    const BranchSet b = BranchSet::normalized(w, 2);
    const auto basis = oracle::random_orthonormal_basis(6, rng);
    const std::vector<double> c(b.weights().begin(), b.weights().end());
    CHECK(std::abs(tunneling_probability(b) - oracle::projected_weight(basis, c, 2)) < 1e-12);
  }
}

TEST_CASE("density matrix") {
  const BranchSet equal({kHalf, kHalf}, 1);
  SUBCASE("pure state") {
    const DensityMatrix rho = build_density_matrix(equal, {1.0, 0.5}, 0);
    for (const Complex& e : rho.entries()) CHECK(e.real() == doctest::Approx(0.5));
    CHECK(coherence_measure(rho) == doctest::Approx(1.0));
  }
  SUBCASE("one event at lambda = ln 2") {
    const DensityMatrix rho = build_density_matrix(equal, {std::numbers::ln2, 0.5}, 1);
    CHECK(rho(0, 1).real() == doctest::Approx(0.25));
    CHECK(rho(1, 0).real() == doctest::Approx(0.25));
    CHECK(rho(0, 0).real() == doctest::Approx(0.5));
    CHECK(coherence_measure(rho) == doctest::Approx(0.5));
  }
  SUBCASE("block-diagonal limit") {
    const DensityMatrix rho = build_density_matrix(equal, {1.0, 0.5}, 100000);
    CHECK(rho(0, 0).real() == doctest::Approx(0.5));
    CHECK(std::abs(rho(0, 1)) < 1e-300);
    CHECK(coherence_measure(rho) == 0.0);
  }
  SUBCASE("diagonal input has no coherence") {
    const DensityMatrix rho = build_density_matrix(BranchSet({1.0, 0.0}, 1), {1.0, 0.5}, 0);
    CHECK(coherence_measure(rho) == 0.0);
  }
  SUBCASE("random draws: hermitian, unit trace, non-negative spectrum") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> lam(0.01, 3.0);
    std::uniform_int_distribution<std::uint64_t> events(0, 40);
    for (int trial = 0; trial < 200; ++trial) {
      const BranchSet b = random_branch_set(rng, 12);
      const DensityMatrix rho = build_density_matrix(b, {lam(rng), 0.1}, events(rng));
      Eigen::MatrixXcd m(rho.dim(), rho.dim());
      for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j) {
          m(i, j) = rho(i, j);
          CHECK(rho(i, j) == std::conj(rho(j, i)));
        }
      CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
  }
  SUBCASE("coherence decreases strictly with events") {
    const BranchSet b({0.6, 0.48, 0.64}, 1);
    const DecoherenceModel model{0.3, 0.1};
    double previous = coherence_measure(build_density_matrix(b, model, 0));
    for (std::uint64_t n = 1; n < 60; ++n) {
      const double c = coherence_measure(build_density_matrix(b, model, n));
      CHECK(c < previous);
      previous = c;
    }
  }
  SUBCASE("dimension limit") {
    std::vector<double> w(65, 1.0);
    const BranchSet big = BranchSet::normalized(w, 10);
    CHECK(code_of([&] { build_density_matrix(big, {1.0, 0.5}, 0); }) == ErrorCode::DimensionTooLarge);
  }
  SUBCASE("model validation") {
    CHECK_THROWS_AS(build_density_matrix(equal, {0.0, 0.5}, 0), Error);
    CHECK_THROWS_AS(build_density_matrix(equal, {1.0, 1.0}, 0), Error);
    CHECK_THROWS_AS(build_density_matrix(equal, {1.0, 0.0}, 0), Error);
  }
}

TEST_CASE("events to decohere") {
  const BranchSet equal({kHalf, kHalf}, 1);
  CHECK(events_to_decohere(equal, {std::log(10.0), 1e-3}) == 3);
  CHECK(events_to_decohere(equal, {5.0, 0.5}) == 1);
  CHECK(events_to_decohere(BranchSet::normalized({0.7071, 0.7071}, 1), {0.693, 0.01}) == 7);
  CHECK(events_to_decohere(BranchSet({1.0, 0.0}, 1), {1.0, 0.5}) == 0);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> lam(0.05, 4.0);
  std::uniform_real_distribution<double> log_eps(-12.0, -0.01);
  for (int trial = 0; trial < 100; ++trial) {
    const BranchSet b = random_branch_set(rng, 6);
    const DecoherenceModel model{lam(rng), std::pow(10.0, log_eps(rng))};
    std::uint64_t scan = 0;
    while (!(coherence_measure(build_density_matrix(b, model, scan)) < model.epsilon_coherence)) ++scan;
    CHECK(events_to_decohere(b, model) == scan);
    const double c0 = coherence_measure(build_density_matrix(b, model, 0));
    if (c0 >= model.epsilon_coherence) {
      CHECK(static_cast<std::uint64_t>(std::ceil(std::log(c0 / model.epsilon_coherence) / model.lambda_per_event)) ==
            scan);
    }
  }
}

TEST_CASE("world counts") {
  CHECK(world_count_paper(1, 5) == 1);
  CHECK(world_count_paper(2, 3) == 8);
  CHECK(world_count_paper(10, 2) == 100);
  CHECK(world_count_sequential(3, 2) == 8);
  CHECK(world_count_sequential(2, 3) == 9);
  CHECK(world_count_sequential(0, 4) == 1);
  CHECK(world_count_sequential(20, 10).str() == "100000000000000000000");
  CHECK(world_count_sequential(200, 2).str().size() == 61);  // 2^200 is 61 digits
  CHECK_THROWS_AS(world_count_paper(0, 2), Error);
  CHECK_THROWS_AS(world_count_paper(2, 0), Error);
  CHECK_THROWS_AS(world_count_sequential(2, 0), Error);

  for (unsigned n = 0; n <= 6; ++n)
    for (unsigned d = 1; d <= 4; ++d)
      CHECK(world_count_sequential(n, d) == oracle::enumerate_branching_tree(n, d));
}
