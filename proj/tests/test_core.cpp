#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "everett/core.hpp"

using namespace everett;

TEST_CASE("potential_at follows the closed barrier interval") {
  CHECK(potential_at({1.0, 1.0, 0.0}, 0.5) == 1.0);
  CHECK(potential_at({1.0, 1.0, 0.0}, -3.0) == 0.0);
  CHECK(potential_at({2.0, 1.0, 0.0}, 1.0) == 2.0);
  CHECK(potential_at({2.0, 1.0, 0.0}, 0.0) == 2.0);
  CHECK(potential_at({2.0, 1.0, 0.0}, std::nextafter(1.0, 2.0)) == 0.0);
  CHECK(potential_at({2.0, 1.0, 0.0}, std::nextafter(0.0, -1.0)) == 0.0);
}

TEST_CASE("potential_at is piecewise constant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const RectBarrier b{std::abs(u(rng)) + 0.1, std::abs(u(rng)) + 0.1, u(rng)};
    const double x = u(rng);
    const bool inside = x >= b.x_start && x <= b.x_start + b.length;
    CHECK(potential_at(b, x) == (inside ? b.v0 : 0.0));
  }
}

TEST_CASE("cell average weights the overlap fraction") {
  const RectBarrier b{2.0, 1.0, 0.0};
  CHECK(potential_cell_average(b, -1.0, -0.5) == 0.0);
  CHECK(potential_cell_average(b, 0.2, 0.4) == 2.0);
  CHECK(potential_cell_average(b, -0.1, 0.1) == doctest::Approx(1.0));
  CHECK(potential_cell_average(b, 0.9, 1.3) == doctest::Approx(0.5));
  // wider than the barrier
  CHECK(potential_cell_average(b, -1.0, 3.0) == doctest::Approx(0.5));
}

TEST_CASE("grid invariants") {
  const Grid g(-1.0, 1.0, 21);
  CHECK(g.dx() == doctest::Approx(0.1));
  CHECK(g.x(20) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Grid(1.0, 1.0, 32), Error);
  CHECK_THROWS_AS(Grid(2.0, 1.0, 32), Error);
  CHECK_THROWS_AS(Grid(0.0, 1.0, 15), Error);
  CHECK_NOTHROW(Grid(0.0, 1.0, 16));
}

TEST_CASE("wavefunction construction checks length and finiteness") {
  const Grid g(0.0, 1.0, 16);
  CHECK_THROWS_AS(WaveFunction(g, std::vector<Complex>(15)), Error);
  std::vector<Complex> bad(16);
  bad[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(WaveFunction(g, bad), Error);
  CHECK(WaveFunction(g).norm() == 0.0);
}

TEST_CASE("normalize") {
  SUBCASE("uniform rescale") {
    // 100 points at dx = 0.01: rectangle-rule measure n * dx == 1
    const Grid g(0.0, 0.99, 100);
    const WaveFunction psi = normalize(WaveFunction(g, std::vector<Complex>(100, Complex(2.0, 0.0))));
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (const Complex& a : psi.amp()) {
      CHECK(a.real() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(a.imag() == 0.0);
    }
  }
  SUBCASE("idempotent and direction preserving") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    const Grid g(-5.0, 5.0, 64);
    std::vector<Complex> amp(64);
    for (auto& a : amp) a = Complex(n(rng), n(rng));
    const WaveFunction once = normalize(WaveFunction(g, amp));
    const WaveFunction twice = normalize(once);
    CHECK(std::abs(once.norm() - 1.0) < 1e-12);
    const double ratio = std::abs(once.amp()[0]) / std::abs(amp[0]);
    for (std::size_t j = 0; j < amp.size(); ++j) {
      CHECK(std::abs(twice.amp()[j] - once.amp()[j]) <= 1e-14 * std::abs(once.amp()[j]) + 1e-300);
      CHECK(std::abs(once.amp()[j] - ratio * amp[j]) < 1e-12);
    }
  }
  SUBCASE("zero norm") {
    try {
      normalize(WaveFunction(Grid(0.0, 1.0, 16)));
      FAIL("expected ZeroNorm");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroNorm);
    }
  }
}

TEST_CASE("barrier and particle validation") {
  CHECK_THROWS_AS((RectBarrier{0.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((RectBarrier{1.0, 0.0}.validate()), Error);
  CHECK_NOTHROW((RectBarrier{1.0, 1.0}.validate()));
  CHECK_THROWS_AS((Particle{0.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Particle{1.0, -1.0}.validate()), Error);
  CHECK_NOTHROW((Particle{1.0, 0.0}.validate()));
}

TEST_CASE("unit systems") {
  CHECK(UnitSystem::natural().hbar == 1.0);
  CHECK(UnitSystem::si().hbar == 1.054571817e-34);
  CHECK(UnitSystem::si().k_boltzmann == 1.380649e-23);
}
