#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cqed/errors.hpp"
#include "cqed/semiclassical.hpp"
#include "cqed/tfim.hpp"
#include "oracles.hpp"

using namespace cqed;

namespace {

ModelParams fig1(double J_x) { return ModelParams::paper_fig1(J_x); }

// Independent slope of eps2(n) by central differences.
double slope(double n, const ModelParams& p) {
  const double h = std::max(1e-3, 1e-6 * n);
  return oracle::derivative([&p](double m) { return epsilon2_of_n(m, p); }, n, h);
}

double window_middle(const ResponseCurve& curve) {
  const auto& f = curve.folds();
  return 0.5 * (f[0].eps2 + f[1].eps2);
}

}  // namespace

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.g = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = ModelParams{};
  p.kappa = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = ModelParams{};
  p.backend = Backend::FiniteFreeFermion;
  p.M = 101;
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS(find_steady_states(-1.0, fig1(1.8)), DomainError);
}

TEST_CASE("total magnetization is odd in the effective field") {
  const auto p = fig1(1.8);
  for (double J : {0.3, 0.9, 1.2, 2.5}) {
    CHECK(total_magnetization(-J, p) == -total_magnetization(J, p));
    CHECK(array_response(-J, p).dX == array_response(J, p).dX);
  }
  CHECK(total_magnetization(1.8, p) == doctest::Approx(100 * tfim::magnetization_x_per_site(1.8)));
  CHECK(total_magnetization(0.0, p) == 0.0);
}

TEST_CASE("response curve is S-shaped at the figure parameters") {
  for (double J_x : {1.4, 1.6, 1.8, 2.0}) {
    CAPTURE(J_x);
    const auto p = fig1(J_x);
    const ResponseCurve curve(p);
    REQUIRE(curve.folds().size() == 2);
    CHECK(curve.folds()[0].is_maximum);
    CHECK_FALSE(curve.folds()[1].is_maximum);
    CHECK(curve.folds()[0].eps2 > curve.folds()[1].eps2);
    // The dense-scan oracle sees the same two extrema on [0, J_x/g].
    CHECK(oracle::count_extrema([&p](double n) { return epsilon2_of_n(n, p); }, 0.0, J_x / p.g,
                                200000) == 2);
  }
}

TEST_CASE("detuning gM removes the window") {
  auto p = fig1(1.8);
  p.delta_c = p.g * p.M;
  const ResponseCurve curve(p);
  CHECK(curve.folds().empty());
  for (double e : {0.2, 1.0, 2.0, 3.0}) CHECK(curve.steady_states(e).size() == 1);
}

TEST_CASE("a chain already ordered at zero drive has no window") {
  const ResponseCurve curve(fig1(0.5));
  CHECK(curve.folds().empty());
}

TEST_CASE("linear regime") {
  const auto p = fig1(1.8);
  const double eps2 = 1e-4;
  const auto roots = find_steady_states(eps2, p);
  REQUIRE(roots.size() == 1);
  const double gX = p.g * p.M * tfim::magnetization_x_per_site(1.8);
  const double linear = eps2 / (p.kappa * p.kappa / 4 + gX * gX);
  CHECK(roots[0].n_s == doctest::Approx(linear).epsilon(0.01));
  CHECK(roots[0].stable);
  CHECK(roots[0].c_s > 0.0);
  CHECK(roots[0].phase == Phase::Paramagnetic);
  CHECK(find_steady_states(0.0, p).front().n_s == 0.0);
}

TEST_CASE("three roots inside the window") {
  const ResponseCurve curve(fig1(1.8));
  const auto roots = curve.steady_states(window_middle(curve));
  REQUIRE(roots.size() == 3);
  CHECK(roots[0].stable);
  CHECK_FALSE(roots[1].stable);
  CHECK(roots[2].stable);
  CHECK(roots[1].c_s < 0.0);
  CHECK(roots[0].phase == Phase::Paramagnetic);
  CHECK(roots[2].phase == Phase::Ferromagnetic);
  CHECK(roots[0].n_s < roots[1].n_s);
  CHECK(roots[1].n_s < roots[2].n_s);
  for (const auto& r : roots) {
    CHECK(std::abs(residual(r.n_s, r.eps2, curve.params())) < 1e-6 * std::max(1.0, r.n_s));
    CHECK(r.J_eff == doctest::Approx(1.8 - 0.0005 * r.n_s));
  }
}

TEST_CASE("roots are fixed points of the self-consistency map") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> J(1.3, 2.2);
  std::uniform_real_distribution<double> drive(0.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = fig1(J(rng));
    const double eps2 = drive(rng);
    for (const auto& r : find_steady_states(eps2, p)) {
      const double X = total_magnetization(p.J_x - p.g * r.n_s, p);
      const double n = eps2 / (p.kappa * p.kappa / 4 + p.g * p.g * X * X);
      CHECK(n == doctest::Approx(r.n_s).epsilon(1e-8));
    }
  }
}

TEST_CASE("stability coefficient has the sign of the drive-curve slope") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> J(1.4, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    const auto p = fig1(J(rng));
    const ResponseCurve curve(p);
    const auto& f = curve.folds();
    const double eps2 = f[1].eps2 + unit(rng) * (f[0].eps2 - f[1].eps2);
    for (const auto& r : curve.steady_states(eps2)) {
      const double d = slope(r.n_s, p);
      CHECK((r.c_s > 0.0) == (d > 0.0));
      CHECK(r.c_s == doctest::Approx(r.n_s / eps2 * d).epsilon(1e-5));
      ++checked;
    }
  }
}

TEST_CASE("off resonance the coefficient is the slope criterion") {
  auto p = fig1(1.8);
  p.delta_c = 0.01;
  const auto roots = find_steady_states(0.5, p);
  REQUIRE_FALSE(roots.empty());
  for (const auto& r : roots) {
    CHECK(r.extrapolated);
    CHECK(r.c_s == doctest::Approx(r.n_s / r.eps2 * slope(r.n_s, p)).epsilon(1e-5));
  }
  CHECK_FALSE(find_steady_states(0.5, fig1(1.8)).front().extrapolated);
}

TEST_CASE("vanishing coupling gives the bare resonator") {
  auto p = fig1(1.8);
  p.g = 1e-9;
  const auto roots = find_steady_states(0.3, p);
  REQUIRE(roots.size() == 1);
  const double gX = p.g * p.M * tfim::magnetization_x_per_site(1.8);
  CHECK(roots[0].n_s == doctest::Approx(0.3 / (p.kappa * p.kappa / 4 + gX * gX)).epsilon(1e-9));
}

TEST_CASE("finite free-fermion backend reproduces the window") {
  auto p = fig1(1.8);
  p.backend = Backend::FiniteFreeFermion;
  const ResponseCurve finite(p);
  const ResponseCurve limit(fig1(1.8));
  REQUIRE(finite.folds().size() == 2);
  CHECK(finite.folds()[0].eps2 == doctest::Approx(limit.folds()[0].eps2).epsilon(0.02));
  CHECK(finite.folds()[1].eps2 == doctest::Approx(limit.folds()[1].eps2).epsilon(0.02));
}

TEST_CASE("hysteresis at J_x = 1.8") {
  const ResponseCurve curve(fig1(1.8));
  const double eps2_up = curve.folds()[0].eps2;
  const double eps1_sq = curve.folds()[1].eps2;
  std::vector<double> grid;
  for (int i = 0; i <= 300; ++i) grid.push_back(0.01 * i);
  const auto up = hysteresis_sweep(grid, curve, Direction::Up);
  std::vector<double> reversed(grid.rbegin(), grid.rend());
  const auto down = hysteresis_sweep(reversed, curve, Direction::Down);

  REQUIRE(up.jumps.size() == 1);
  REQUIRE(down.jumps.size() == 1);
  CHECK(up.jumps[0].phase_before == Phase::Paramagnetic);
  CHECK(up.jumps[0].phase_after == Phase::Ferromagnetic);
  CHECK(down.jumps[0].phase_before == Phase::Ferromagnetic);
  CHECK(down.jumps[0].phase_after == Phase::Paramagnetic);
  CHECK(down.jumps[0].eps2 < up.jumps[0].eps2);
  // The jump is recorded at the first grid point past the fold.
  CHECK(up.jumps[0].eps2 > eps2_up);
  CHECK(up.jumps[0].eps2 - 0.01 < eps2_up);
  CHECK(down.jumps[0].eps2 < eps1_sq);
  CHECK(down.jumps[0].eps2 + 0.01 > eps1_sq);
  for (const auto& s : up.points) CHECK(s.stable);
  for (const auto& s : down.points) CHECK(s.stable);
}

TEST_CASE("sweeps without a jump") {
  const ResponseCurve curve(fig1(1.8));
  std::vector<double> low;
  for (int i = 0; i < 50; ++i) low.push_back(curve.folds()[1].eps2 * i / 50.0);
  const auto up = hysteresis_sweep(low, curve, Direction::Up);
  CHECK(up.jumps.empty());
  for (const auto& s : up.points) CHECK(s.phase == Phase::Paramagnetic);

  auto detuned = fig1(1.8);
  detuned.delta_c = detuned.g * detuned.M;
  std::vector<double> grid;
  for (int i = 0; i <= 300; ++i) grid.push_back(0.01 * i);
  CHECK(hysteresis_sweep(grid, detuned, Direction::Up).jumps.empty());
  std::reverse(grid.begin(), grid.end());
  CHECK(hysteresis_sweep(grid, detuned, Direction::Down).jumps.empty());
  CHECK_THROWS_AS(hysteresis_sweep(grid, detuned, Direction::Up), DomainError);
}

TEST_CASE("relaxation around the three roots") {
  const auto p = fig1(1.8);
  const ResponseCurve curve(p);
  const auto roots = curve.steady_states(window_middle(curve));
  REQUIRE(roots.size() == 3);
  const double dt = 0.01 / p.kappa;
  auto evolve = [&](double n, int steps) {
    for (int i = 0; i < steps; ++i) n = relaxation_step(n, roots[0].eps2, p, dt);
    return n;
  };
  for (int i : {0, 2}) {
    const double n0 = roots[i].n_s * 1.01;
    CHECK(std::abs(evolve(n0, 50) - roots[i].n_s) < std::abs(n0 - roots[i].n_s));
  }
  const double start = roots[1].n_s * 1.01;
  CHECK(std::abs(evolve(start, 50) - roots[1].n_s) > std::abs(start - roots[1].n_s));
  CHECK_THROWS_AS(relaxation_step(10.0, 1.0, p, 4.0), StepSizeError);
  CHECK_THROWS_AS(relaxation_step(10.0, 1.0, p, 0.0), StepSizeError);
}
