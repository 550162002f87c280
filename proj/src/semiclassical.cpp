#include "cqed/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cqed/errors.hpp"
#include "cqed/tfim.hpp"

namespace cqed {

namespace {

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

double cavity_denominator(double n, const ModelParams& p) {
  const double X = total_magnetization(p.J_x - p.g * n, p);
  const double shift = p.delta_c - p.g * X;
  return 0.25 * p.kappa * p.kappa + shift * shift;
}

// Golden-section search for an extremum of f inside [a, b]. Returns the best
// abscissa seen, including the seed point that produced the bracket.
template <class F>
double golden_extremum(F&& f, double a, double b, double seed, bool maximize) {
  const double sign = maximize ? -1.0 : 1.0;
  auto cost = [&](double n) { return sign * f(n); };
  constexpr double inv_phi = 0.6180339887498949;
  double best_n = seed;
  double best = cost(seed);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = cost(c);
  double fd = cost(d);
  for (int iter = 0; iter < 200; ++iter) {
    if (b - a <= 1e-10 * std::max(1.0, std::abs(a) + std::abs(b))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = cost(d);
    }
    if (fc < best) {
      best = fc;
      best_n = c;
    }
    if (fd < best) {
      best = fd;
      best_n = d;
    }
  }
  return best_n;
}

}  // namespace

void ModelParams::validate() const {
  check_finite(J_x, "J_x");
  check_finite(g, "g");
  check_finite(kappa, "kappa");
  check_finite(delta_c, "delta_c");
  if (J_x < 0.0) throw DomainError("J_x must be >= 0");
  if (!(g > 0.0)) throw DomainError("g must be > 0");
  if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
  if (M < 1) throw DomainError("chain length M must be >= 1");
  if (backend == Backend::FiniteFreeFermion && M % 2 != 0) {
    throw DomainError("the finite free-fermion backend needs an even chain length");
  }
}

ModelParams ModelParams::paper_fig1(double J_x) {
  ModelParams p;
  p.J_x = J_x;
  p.g = 0.0005;
  p.kappa = 0.03;
  p.delta_c = 0.0;
  p.M = 100;
  return p;
}

std::string_view to_string(Phase phase) {
  return phase == Phase::Ferromagnetic ? "F" : "P";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::Up ? "up" : "down";
}

Phase classify_phase(double J_eff) {
  return J_eff < tfim::kCriticalField ? Phase::Ferromagnetic : Phase::Paramagnetic;
}

double total_magnetization(double J_eff, const ModelParams& p) {
  check_finite(J_eff, "effective field");
  const double field = std::abs(J_eff);
  const double x = p.backend == Backend::Thermodynamic
                       ? tfim::magnetization_x_per_site(field)
                       : tfim::finite_free_fermion(field, p.M).x_per_site;
  return std::copysign(p.M * x, J_eff);
}

ArrayResponse array_response(double J_eff, const ModelParams& p) {
  check_finite(J_eff, "effective field");
  const double field = std::abs(J_eff);
  double x = 0.0;
  double dx = 0.0;
  if (p.backend == Backend::Thermodynamic) {
    x = tfim::magnetization_x_per_site(field);
    dx = tfim::magnetization_x_derivative(field);
  } else {
    const auto obs = tfim::finite_free_fermion(field, p.M);
    x = obs.x_per_site;
    dx = obs.x_derivative_per_site;
  }
  return {std::copysign(p.M * x, J_eff), p.M * dx};
}

double epsilon2_of_n(double n, const ModelParams& p) {
  if (!std::isfinite(n) || n < 0.0) throw DomainError("photon number must be finite and >= 0");
  return n * cavity_denominator(n, p);
}

double residual(double n, double eps2, const ModelParams& p) {
  if (!std::isfinite(n) || n < 0.0) throw DomainError("photon number must be finite and >= 0");
  if (!std::isfinite(eps2) || eps2 < 0.0) throw DomainError("drive power must be finite and >= 0");
  return eps2 / cavity_denominator(n, p) - n;
}

StabilityCoefficient stability_coefficient(double n_ss, double eps2, const ModelParams& p) {
  if (!std::isfinite(n_ss) || n_ss < 0.0) throw DomainError("photon number must be finite and >= 0");
  if (!std::isfinite(eps2) || !(eps2 > 0.0)) throw DomainError("stability needs eps2 > 0");
  const auto r = array_response(p.J_x - p.g * n_ss, p);
  const double value = 1.0 + 2.0 * n_ss * n_ss * p.g * p.g * r.dX * (p.delta_c - p.g * r.X) / eps2;
  return {value, p.delta_c != 0.0};
}

ResponseCurve::ResponseCurve(const ModelParams& p) : params_(p) {
  params_.validate();
  const double g = params_.g;
  // For |J_eff| > 10 the array is saturated and eps2(n) grows linearly.
  structure_limit_ = (params_.J_x + 10.0) / g;

  std::vector<double> grid;
  grid.reserve(kScanPoints + 200);
  for (int i = 0; i <= kScanPoints; ++i) {
    grid.push_back(structure_limit_ * i / kScanPoints);
  }
  // The slope of eps2(n) has logarithmic singularities where J_eff = +-1, so
  // arbitrarily thin windows can hide there. Sample those points densely.
  for (double critical : {1.0, -1.0}) {
    const double n_c = (params_.J_x - critical) / g;
    if (n_c >= 0.0 && n_c <= structure_limit_) grid.push_back(n_c);
    for (int e = -80; e <= -10; ++e) {
      const double offset = std::pow(10.0, e / 10.0) / g;
      for (double n : {n_c - offset, n_c + offset}) {
        if (n > 0.0 && n < structure_limit_) grid.push_back(n);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  // Nearly coincident samples would compare rounding noise, not slope.
  const double min_gap = 1e-10 * structure_limit_;
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [min_gap](double a, double b) { return b - a <= min_gap; }),
             grid.end());

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = epsilon2(grid[i]);

  auto f = [this](double n) { return epsilon2(n); };
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const bool is_max = values[i] > values[i - 1] && values[i] >= values[i + 1];
    const bool is_min = values[i] < values[i - 1] && values[i] <= values[i + 1];
    if (!is_max && !is_min) continue;
    const double n = golden_extremum(f, grid[i - 1], grid[i + 1], grid[i], is_max);
    folds_.push_back({n, epsilon2(n), is_max});
  }
  if (values.back() <= values[values.size() - 2]) {
    throw NumericalError("drive curve is not increasing at the end of the structure scan");
  }
  for (std::size_t k = 0; k < folds_.size(); ++k) {
    if (folds_[k].is_maximum != (k % 2 == 0)) {
      throw NumericalError("drive curve folds do not alternate between maxima and minima");
    }
  }
}

double ResponseCurve::n_max(double eps2) const {
  return params_.J_x / params_.g + 10.0 * eps2 / (0.25 * params_.kappa * params_.kappa);
}

double ResponseCurve::branch_begin(int branch) const {
  return branch == 0 ? 0.0 : folds_[branch - 1].n;
}

double ResponseCurve::branch_end(int branch, double eps2) const {
  if (branch < static_cast<int>(folds_.size())) return folds_[branch].n;
  return std::max(n_max(eps2), branch_begin(branch));
}

bool ResponseCurve::solve_on_branch(int branch, double eps2, double& n_out) const {
  double lo = branch_begin(branch);
  double hi = branch_end(branch, eps2);
  double f_lo = (branch == 0 ? 0.0 : folds_[branch - 1].eps2) - eps2;
  double f_hi = (branch < static_cast<int>(folds_.size()) ? folds_[branch].eps2 : epsilon2(hi)) - eps2;
  if (f_lo == 0.0) {
    n_out = lo;
    return true;
  }
  if (f_hi == 0.0) {
    n_out = hi;
    return true;
  }
  if ((f_lo > 0.0) == (f_hi > 0.0)) return false;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = epsilon2(mid) - eps2;
    if (f_mid == 0.0) {
      n_out = mid;
      return true;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  n_out = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
  return true;
}

SteadyState ResponseCurve::make_state(double n, double eps2, int branch) const {
  SteadyState s;
  s.n_s = n;
  s.eps2 = eps2;
  s.J_eff = params_.J_x - params_.g * n;
  s.X = total_magnetization(s.J_eff, params_);
  s.branch = branch;
  s.phase = classify_phase(s.J_eff);
  s.extrapolated = params_.delta_c != 0.0;
  if (eps2 > 0.0) {
    s.c_s = stability_coefficient(n, eps2, params_).value;
  } else {
    // Dark cavity: the coefficient tends to 1 as eps2 -> 0 along the root.
    s.c_s = 1.0;
  }
  s.stable = s.c_s > 0.0;
  return s;
}

std::vector<SteadyState> ResponseCurve::steady_states(double eps2) const {
  if (!std::isfinite(eps2) || eps2 < 0.0) throw DomainError("drive power must be finite and >= 0");
  const double dedup = 1e-6 * n_max(eps2);
  std::vector<SteadyState> roots;
  for (int b = 0; b < branch_count(); ++b) {
    double n = 0.0;
    if (!solve_on_branch(b, eps2, n)) continue;
    if (!roots.empty() && n - roots.back().n_s <= dedup) continue;
    roots.push_back(make_state(n, eps2, b));
  }
  if (roots.empty()) {
    throw NumericalError("no steady state bracketed at eps2 = " + std::to_string(eps2));
  }
  return roots;
}

std::vector<SteadyState> find_steady_states(double eps2, const ModelParams& p) {
  if (!std::isfinite(eps2) || eps2 < 0.0) throw DomainError("drive power must be finite and >= 0");
  return ResponseCurve(p).steady_states(eps2);
}

SweepTrajectory hysteresis_sweep(const std::vector<double>& eps2_grid, const ModelParams& p,
                                 Direction direction) {
  if (eps2_grid.empty()) throw DomainError("sweep grid is empty");
  return hysteresis_sweep(eps2_grid, ResponseCurve(p), direction);
}

SweepTrajectory hysteresis_sweep(const std::vector<double>& eps2_grid, const ResponseCurve& curve,
                                 Direction direction) {
  if (eps2_grid.empty()) throw DomainError("sweep grid is empty");
  for (std::size_t i = 0; i < eps2_grid.size(); ++i) {
    if (!std::isfinite(eps2_grid[i]) || eps2_grid[i] < 0.0) {
      throw DomainError("sweep drive powers must be finite and >= 0");
    }
    if (i > 0) {
      const bool ordered = direction == Direction::Up ? eps2_grid[i] > eps2_grid[i - 1]
                                                      : eps2_grid[i] < eps2_grid[i - 1];
      if (!ordered) throw DomainError("sweep grid is not strictly monotone in the sweep direction");
    }
  }

  const double quarter_kappa2 = 0.25 * curve.params().kappa * curve.params().kappa;
  SweepTrajectory traj;
  traj.direction = direction;
  traj.points.reserve(eps2_grid.size());

  for (std::size_t i = 0; i < eps2_grid.size(); ++i) {
    const auto roots = curve.steady_states(eps2_grid[i]);
    std::vector<SteadyState> stable;
    std::copy_if(roots.begin(), roots.end(), std::back_inserter(stable),
                 [](const SteadyState& s) { return s.stable; });
    if (stable.empty()) {
      throw NumericalError("no stable steady state at eps2 = " + std::to_string(eps2_grid[i]));
    }
    if (i == 0) {
      traj.points.push_back(direction == Direction::Up ? stable.front() : stable.back());
      continue;
    }
    const SteadyState& prev = traj.points.back();
    const SteadyState* pick = &stable.front();
    for (const auto& s : stable) {
      const double d_new = std::abs(s.n_s - prev.n_s);
      const double d_best = std::abs(pick->n_s - prev.n_s);
      if (d_new < d_best || (d_new == d_best && s.phase == prev.phase && pick->phase != prev.phase)) {
        pick = &s;
      }
    }
    const bool branch_lost = std::none_of(stable.begin(), stable.end(), [&](const SteadyState& s) {
      return s.branch == prev.branch;
    });
    const double threshold = 10.0 * std::abs(eps2_grid[i] - eps2_grid[i - 1]) / quarter_kappa2;
    if (branch_lost || std::abs(pick->n_s - prev.n_s) > threshold) {
      traj.jumps.push_back({eps2_grid[i], prev.n_s, pick->n_s, prev.J_eff, pick->J_eff, prev.phase,
                            pick->phase});
    }
    traj.points.push_back(*pick);
  }
  return traj;
}

double relaxation_step(double n, double eps2, const ModelParams& p, double dt) {
  if (!std::isfinite(n) || n < 0.0) throw DomainError("photon number must be finite and >= 0");
  if (!std::isfinite(eps2) || eps2 < 0.0) throw DomainError("drive power must be finite and >= 0");
  if (!(dt > 0.0) || !(dt * p.kappa < 0.1)) {
    throw StepSizeError("relaxation step needs dt > 0 and dt * kappa < 0.1");
  }
  const double target = eps2 / cavity_denominator(n, p);
  return std::max(0.0, n + dt * p.kappa * (target - n));
}

}  // namespace cqed
