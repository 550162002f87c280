#include "cqed/phases.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "cqed/errors.hpp"
#include "cqed/tfim.hpp"

namespace cqed {

namespace {

ModelParams with_field(const ModelParams& p, double J_x) {
  if (!std::isfinite(J_x) || J_x < 0.0) throw DomainError("J_x must be finite and >= 0");
  ModelParams q = p;
  q.J_x = J_x;
  return q;
}

// Among stable branches other than `exclude` that reach eps2, the root
// closest in n to `from`.
bool nearest_stable_root(const ResponseCurve& curve, double eps2, double from, int exclude,
                         double& n_out, int& branch_out) {
  bool found = false;
  for (int b = 0; b < curve.branch_count(); b += 2) {
    if (b == exclude) continue;
    double n = 0.0;
    if (!curve.solve_on_branch(b, eps2, n)) continue;
    if (!found || std::abs(n - from) < std::abs(n_out - from)) {
      n_out = n;
      branch_out = b;
      found = true;
    }
  }
  return found;
}

double energy_at(double J_eff, int chain_length) {
  const double field = std::abs(J_eff);
  return chain_length == 0 ? tfim::ground_energy_per_site(field)
                           : tfim::finite_free_fermion(field, chain_length).energy_per_site;
}

template <class Fn>
void parallel_columns(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < count; i += threads) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::optional<SwitchingPoints> switching_points(const ResponseCurve& curve) {
  const auto& folds = curve.folds();
  if (folds.empty()) return std::nullopt;
  const ModelParams& p = curve.params();
  SwitchingPoints sp;

  // Up: the low-drive branch ends at the first fold maximum.
  sp.eps2_sq = folds.front().eps2;
  sp.n_before_up = folds.front().n;
  int branch = 0;
  if (!nearest_stable_root(curve, sp.eps2_sq, sp.n_before_up, 0, sp.n_after_up, branch)) {
    throw NumericalError("no stable branch above the first fold");
  }

  // Down: follow the top branch to its lower fold and cascade through the
  // stable branches until the low-drive branch is reached.
  branch = curve.branch_count() - 1;
  for (int hops = 0;; ++hops) {
    if (hops > curve.branch_count()) throw NumericalError("down-sweep fold cascade did not terminate");
    const Fold& lower = folds[branch - 1];
    double n_next = 0.0;
    int next = 0;
    if (!nearest_stable_root(curve, lower.eps2, lower.n, branch, n_next, next)) {
      throw NumericalError("no stable branch below a fold minimum");
    }
    if (next == 0) {
      sp.eps1_sq = lower.eps2;
      sp.n_before_down = lower.n;
      sp.n_after_down = n_next;
      break;
    }
    branch = next;
  }

  sp.J_before_up = p.J_x - p.g * sp.n_before_up;
  sp.J_after_up = p.J_x - p.g * sp.n_after_up;
  sp.J_before_down = p.J_x - p.g * sp.n_before_down;
  sp.J_after_down = p.J_x - p.g * sp.n_after_down;
  return sp;
}

SwitchingThresholds switching_thresholds(double J_x, const ModelParams& p) {
  const auto sp = switching_points(ResponseCurve(with_field(p, J_x)));
  if (!sp) return {};
  return {sp->eps1_sq, sp->eps2_sq};
}

EnergyJump energy_jump(double J_x, const ModelParams& p, int energy_chain_length) {
  if (energy_chain_length < 0) throw DomainError("energy chain length must be >= 0");
  const auto sp = switching_points(ResponseCurve(with_field(p, J_x)));
  if (!sp) {
    throw NoBistabilityError("no bistable window at J_x = " + std::to_string(J_x));
  }
  const int L = energy_chain_length;
  return {std::abs(energy_at(sp->J_after_up, L) - energy_at(sp->J_before_up, L)),
          std::abs(energy_at(sp->J_after_down, L) - energy_at(sp->J_before_down, L))};
}

SwitchFields effective_field_at_switch(double J_x, const ModelParams& p) {
  const auto sp = switching_points(ResponseCurve(with_field(p, J_x)));
  if (!sp) {
    throw NoBistabilityError("no bistable window at J_x = " + std::to_string(J_x));
  }
  return {sp->J_before_up, sp->J_after_up, sp->J_before_down, sp->J_after_down};
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Paramagnetic:
      return "P";
    case Region::Ferromagnetic:
      return "F";
    case Region::Bistable:
      return "B";
  }
  return "?";
}

PhaseBoundaries phase_boundaries(const std::vector<double>& J_grid, const ModelParams& p,
                                 unsigned threads) {
  PhaseBoundaries out;
  out.J_grid = J_grid;
  out.eps1_sq.resize(J_grid.size());
  out.eps2_sq.resize(J_grid.size());
  parallel_columns(J_grid.size(), threads, [&](std::size_t i) {
    const auto t = switching_thresholds(J_grid[i], p);
    out.eps1_sq[i] = t.eps1_sq;
    out.eps2_sq[i] = t.eps2_sq;
  });
  return out;
}

std::vector<RegionCell> phase_diagram(const std::vector<double>& J_range,
                                      const std::vector<double>& eps2_range, const ModelParams& p,
                                      unsigned threads) {
  for (double e : eps2_range) {
    if (!std::isfinite(e) || e < 0.0) throw DomainError("drive powers must be finite and >= 0");
  }
  std::vector<RegionCell> cells(J_range.size() * eps2_range.size());
  parallel_columns(J_range.size(), threads, [&](std::size_t i) {
    const ResponseCurve curve(with_field(p, J_range[i]));
    for (std::size_t j = 0; j < eps2_range.size(); ++j) {
      RegionCell& cell = cells[i * eps2_range.size() + j];
      cell.J_x = J_range[i];
      cell.eps2 = eps2_range[j];
      const auto roots = curve.steady_states(cell.eps2);
      const SteadyState* last_stable = nullptr;
      for (const auto& s : roots) {
        if (s.stable) {
          ++cell.stable_roots;
          last_stable = &s;
        }
      }
      if (cell.stable_roots >= 2) {
        cell.region = Region::Bistable;
      } else if (last_stable != nullptr) {
        cell.region = last_stable->phase == Phase::Ferromagnetic ? Region::Ferromagnetic
                                                                 : Region::Paramagnetic;
      } else {
        throw NumericalError("no stable steady state at eps2 = " + std::to_string(cell.eps2));
      }
    }
  });
  return cells;
}

}  // namespace cqed
