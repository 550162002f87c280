// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/circuit.hpp"
#include "cqed/errors.hpp"
#include "cqed/phases.hpp"
#include "cqed/semiclassical.hpp"
#include "cqed/tfim.hpp"
#include "oracles.hpp"

using namespace cqed;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream log;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      log << " [failed: " << what << "]";
    }
  }
};

double fold_slope(double n, const ModelParams& p) {
  const double h = std::max(1e-3, 1e-6 * n);
  return oracle::derivative([&p](double m) { return epsilon2_of_n(m, p); }, n, h);
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = a + (b - a) * i / (count - 1);
  return v;
}

const std::vector<double> kFigureFields = {1.4, 1.6, 1.8, 2.0};

void tfim_anchors(Outcome& o) {
  const double e1 = tfim::ground_energy_per_site(1.0);
  const double e0 = tfim::ground_energy_per_site(0.0);
  const double x0 = tfim::magnetization_x_per_site(0.0);
  const double x1 = tfim::magnetization_x_per_site(1.0);
  o.expect(std::abs(e1 + 4.0 / M_PI) < 1e-12, "E(1) = -4/pi");
  o.expect(std::abs(e0 + 1.0) < 1e-12, "E(0) = -1");
  o.expect(x0 == 0.0, "x(0) = 0");
  o.expect(std::abs(x1 - 2.0 / M_PI) < 1e-8, "x(1) = 2/pi");
  o.log << "|E(1)+4/pi|=" << std::abs(e1 + 4.0 / M_PI) << " |x(1)-2/pi|=" << std::abs(x1 - 2.0 / M_PI);
}

void oracle_equivalence(Outcome& o) {
  double worst = 0.0;
  for (int M : {4, 6, 8, 10}) {
    for (double J : {0.0, 0.3, 0.7, 1.0, 1.4, 2.0, 5.0}) {
      const auto ff = tfim::finite_free_fermion(J, M);
      const auto ed = tfim::exact_diag(J, M);
      worst = std::max({worst, std::abs(ff.energy_per_site - ed.energy_per_site),
                        std::abs(ff.x_per_site - ed.x_per_site)});
    }
  }
  o.expect(worst < 1e-10, "max deviation < 1e-10");
  o.log << "max |FF - ED|=" << worst;
}

void thermodynamic_convergence(Outcome& o) {
  double worst = 0.0;
  for (double J : linspace(0.0, 3.0, 50)) {
    worst = std::max(worst, std::abs(tfim::ground_energy_per_site(J) -
                                     tfim::finite_free_fermion(J, 4096).energy_per_site));
  }
  o.expect(worst < 1e-5, "max deviation < 1e-5");
  o.log << "max |closed - FF(4096)|=" << worst;
}

void bistability_structure(Outcome& o) {
  for (double J : kFigureFields) {
    const auto p = ModelParams::paper_fig1(J);
    const ResponseCurve curve(p);
    const auto& f = curve.folds();
    if (f.size() != 2) {
      o.expect(false, "two folds at J_x=" + std::to_string(J));
      continue;
    }
    const auto roots = curve.steady_states(0.5 * (f[0].eps2 + f[1].eps2));
    const bool pattern = roots.size() == 3 && roots[0].stable && !roots[1].stable && roots[2].stable;
    o.expect(pattern, "3 roots S/U/S at J_x=" + std::to_string(J));
    o.log << " J_x=" << J << ": eps1^2=" << f[1].eps2 << " eps2^2=" << f[0].eps2;
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int samples = 0;
  int mismatches = 0;
  while (samples < 100) {
    const double J = kFigureFields[samples % kFigureFields.size()];
    const ResponseCurve curve(ModelParams::paper_fig1(J));
    const auto& f = curve.folds();
    const double eps2 = f[1].eps2 + unit(rng) * (f[0].eps2 - f[1].eps2);
    for (const auto& r : curve.steady_states(eps2)) {
      if ((r.c_s > 0.0) != (fold_slope(r.n_s, curve.params()) > 0.0)) ++mismatches;
    }
    ++samples;
  }
  o.expect(mismatches == 0, "sign(c_s) == sign(d eps2/dn)");
  o.log << "; sign mismatches " << mismatches << " over " << samples << " samples";
}

void hysteresis(Outcome& o) {
  for (double J : kFigureFields) {
    const auto start = std::chrono::steady_clock::now();
    const ResponseCurve curve(ModelParams::paper_fig1(J));
    const double top = 1.5 * curve.folds()[0].eps2;
    auto grid = linspace(0.0, top, 1501);
    const auto up = hysteresis_sweep(grid, curve, Direction::Up);
    std::reverse(grid.begin(), grid.end());
    const auto down = hysteresis_sweep(grid, curve, Direction::Down);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string tag = " at J_x=" + std::to_string(J);
    o.expect(up.jumps.size() == 1 && down.jumps.size() == 1, "one jump per direction" + tag);
    if (up.jumps.size() != 1 || down.jumps.size() != 1) continue;
    const auto& u = up.jumps[0];
    const auto& d = down.jumps[0];
    o.expect(d.eps2 < u.eps2, "eps1^2 < eps2^2" + tag);
    o.expect(u.J_eff_before > 1.0 && u.J_eff_after < 1.0, "Up crosses J=1 downward" + tag);
    o.expect(u.phase_before == Phase::Paramagnetic && u.phase_after == Phase::Ferromagnetic,
             "Up is P->F" + tag);
    o.expect(d.phase_before == Phase::Ferromagnetic && d.phase_after == Phase::Paramagnetic,
             "Down is F->P" + tag);
    o.expect(seconds < 60.0, "runtime" + tag);
    o.log << " J_x=" << J << ": up@" << u.eps2 << " J " << u.J_eff_before << "->" << u.J_eff_after
          << ", down@" << d.eps2 << " J " << d.J_eff_before << "->" << d.J_eff_after;
  }
}

void no_bistability_control(Outcome& o) {
  auto p = ModelParams::paper_fig1(1.8);
  p.delta_c = p.g * p.M;
  const ResponseCurve curve(p);
  auto grid = linspace(0.0, 4.0, 801);
  std::size_t max_roots = 0;
  for (double e : grid) max_roots = std::max(max_roots, curve.steady_states(e).size());
  const auto up = hysteresis_sweep(grid, curve, Direction::Up);
  std::reverse(grid.begin(), grid.end());
  const auto down = hysteresis_sweep(grid, curve, Direction::Down);
  o.expect(curve.folds().empty() && max_roots == 1, "single-valued curve");
  o.expect(up.jumps.empty() && down.jumps.empty(), "zero jumps");
  o.log << "folds=" << curve.folds().size() << " max roots=" << max_roots
        << " jumps=" << up.jumps.size() + down.jumps.size();
}

void energy_jumps(Outcome& o) {
  double worst = 0.0;
  for (double J : kFigureFields) {
    const auto p = ModelParams::paper_fig1(J);
    const auto closed = energy_jump(J, p);
    const auto finite = energy_jump(J, p, 4096);
    o.expect(closed.dE_up > 0.0 && closed.dE_down > 0.0, "positive at J_x=" + std::to_string(J));
    worst = std::max({worst, std::abs(closed.dE_up - finite.dE_up),
                      std::abs(closed.dE_down - finite.dE_down)});
    o.log << " J_x=" << J << ": dE_up=" << closed.dE_up << " dE_down=" << closed.dE_down;
  }
  o.expect(worst < 1e-5, "closed form vs M=4096 within 1e-5");
  o.log << "; max backend gap " << worst;
}

void phase_diagram_consistency(Outcome& o) {
  const auto J_range = linspace(1.4, 2.0, 40);
  const auto eps2_range = linspace(0.0, 3.6, 40);
  const auto p = ModelParams::paper_fig1(1.8);
  const auto cells = phase_diagram(J_range, eps2_range, p, 4);
  int disagreements = 0;
  int counts[3] = {0, 0, 0};
  for (std::size_t a = 0; a < J_range.size(); ++a) {
    auto column = p;
    column.J_x = J_range[a];
    const auto t = switching_thresholds(J_range[a], column);
    if (!t.bistable()) {
      o.expect(false, "window at J_x=" + std::to_string(J_range[a]));
      continue;
    }
    for (std::size_t b = 0; b < eps2_range.size(); ++b) {
      const auto& c = cells[a * eps2_range.size() + b];
      const auto roots = find_steady_states(c.eps2, column);
      const int stable = static_cast<int>(std::count_if(
          roots.begin(), roots.end(), [](const SteadyState& s) { return s.stable; }));
      Region expected = Region::Bistable;
      if (c.eps2 < *t.eps1_sq) expected = Region::Paramagnetic;
      if (c.eps2 > *t.eps2_sq) expected = Region::Ferromagnetic;
      const bool by_count = (stable >= 2) == (c.region == Region::Bistable);
      if (c.region != expected || !by_count || stable != c.stable_roots) ++disagreements;
      ++counts[static_cast<int>(c.region)];
    }
  }
  o.expect(disagreements == 0, "labels match thresholds and root counts");
  o.log << "cells P/F/B=" << counts[0] << "/" << counts[1] << "/" << counts[2]
        << " disagreements=" << disagreements;
}

void circuit_numbers(Outcome& o) {
  circuit::CircuitSpec spec = circuit::CircuitSpec::reference_resonator();
  spec.C0 = 1.94e-15;
  spec.C1 = 0.194e-15;
  spec.E_J = 7.2e9;
  const auto r = circuit::resonator_params(spec);
  const double g_ratio = r.g_hz / 1e6;
  const double w_ratio = r.omega_c0_hz / 29e9;
  o.expect(g_ratio > 0.5 && g_ratio < 2.0, "g within factor 2 of 2pi x 1 MHz");
  o.expect(w_ratio > 0.5 && w_ratio < 2.0, "omega_c0 within factor 2 of 2pi x 29 GHz");
  const auto m = circuit::dimensionless(1e6, spec.E_J, spec.M, 2e9, 0.0, 0.0);
  o.expect(m.g == 0.0005, "g_Hz = 1 MHz with a 2 GHz unit gives 0.0005");
  o.log << "R0=" << spec.R0 << " m; L_sq0=" << r.L_sq0 * 1e12 << " pH (quoted 100 pH); omega_c0/2pi="
        << r.omega_c0_hz / 1e9 << " GHz (quoted 29 GHz); g/2pi=" << r.g_hz / 1e6
        << " MHz (quoted 1 MHz); dimensionless g=" << m.g;
}

void relaxation_dynamics(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> field(1.4, 2.0);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  int configs = 0;
  int mismatches = 0;
  while (configs < 20) {
    const auto p = ModelParams::paper_fig1(field(rng));
    const ResponseCurve curve(p);
    const auto& f = curve.folds();
    const double eps2 = f[1].eps2 + unit(rng) * (f[0].eps2 - f[1].eps2);
    const auto roots = curve.steady_states(eps2);
    if (roots.size() != 3) {
      o.expect(false, "3 roots in window");
      ++configs;
      continue;
    }
    double c_max = 0.0;
    for (const auto& r : roots) c_max = std::max(c_max, std::abs(r.c_s));
    const double dt = std::min(0.05, 0.5 / c_max) / p.kappa;
    for (const auto& r : roots) {
      for (double sign : {-1.0, 1.0}) {
        const double start = r.n_s * (1.0 + sign * 0.01);
        double n = start;
        for (int step = 0; step < 100000; ++step) n = relaxation_step(n, eps2, p, dt);
        const double before = std::abs(start - r.n_s);
        const double after = std::abs(n - r.n_s);
        const bool converged = after < 1e-3 * before;
        const bool escaped = after > before;
        // Linear theory: decay iff c_s > 0.
        if ((r.c_s > 0.0 && !converged) || (r.c_s < 0.0 && !escaped)) ++mismatches;
      }
    }
    ++configs;
  }
  o.expect(mismatches == 0, "relaxation matches sign(c_s)");
  o.log << configs << " configurations, " << mismatches << " mismatches";
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "TFIM anchors", 1.0, tfim_anchors},
      {2, "free fermions vs exact diagonalization", 30.0, oracle_equivalence},
      {3, "thermodynamic convergence", 5.0, thermodynamic_convergence},
      {4, "bistability structure", 0.0, bistability_structure},
      {5, "hysteresis", 0.0, hysteresis},
      {6, "no-bistability control", 0.0, no_bistability_control},
      {7, "energy jump", 0.0, energy_jumps},
      {8, "phase-diagram consistency", 0.0, phase_diagram_consistency},
      {9, "circuit numbers", 0.0, circuit_numbers},
      {10, "relaxation dynamics", 0.0, relaxation_dynamics},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0) o.expect(seconds < c.budget_seconds, "runtime budget");
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s (%.3f s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                o.log.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
