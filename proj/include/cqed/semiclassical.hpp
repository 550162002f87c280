#pragma once

#include <string_view>
#include <vector>

namespace cqed {

/// How the per-site transverse magnetization x(J) of the qubit array is
/// evaluated: closed form in the thermodynamic limit, or the finite-M
/// free-fermion sum (requires even M).
enum class Backend { Thermodynamic, FiniteFreeFermion };

/// Dimensionless system parameters, hbar = 1, energies in units of the
/// ferromagnetic coupling.
struct ModelParams {
  double J_x = 1.8;
  double g = 0.0005;
  double kappa = 0.03;
  double delta_c = 0.0;
  int M = 100;
  Backend backend = Backend::Thermodynamic;

  /// Throws DomainError unless g > 0, kappa > 0, M >= 1, J_x >= 0, all finite,
  /// and M is even for the finite backend.
  void validate() const;

  /// kappa = 0.03, g = 0.0005, delta_c = 0, M = 100.
  static ModelParams paper_fig1(double J_x);
};

enum class Phase { Paramagnetic, Ferromagnetic };

std::string_view to_string(Phase phase);

/// Ferromagnetic iff the effective field is below the critical value 1.
Phase classify_phase(double J_eff);

/// Total magnetization X = <sum_i sx_i> and its field derivative at an
/// effective field that may be negative: X(J) = sign(J) M x(|J|),
/// dX/dJ = M x'(|J|).
struct ArrayResponse {
  double X;
  double dX;
};

/// X(J_eff) only; never throws near criticality.
double total_magnetization(double J_eff, const ModelParams& p);

/// X and dX/dJ; throws SingularityError within the critical guard band.
ArrayResponse array_response(double J_eff, const ModelParams& p);

/// One self-consistent solution of the resonator / qubit-array equations.
struct SteadyState {
  double n_s = 0.0;
  double eps2 = 0.0;
  double J_eff = 0.0;
  double X = 0.0;
  double c_s = 1.0;
  bool stable = true;
  /// True when delta_c != 0, where the coefficient is the fold (slope)
  /// criterion rather than the resonant linearization.
  bool extrapolated = false;
  Phase phase = Phase::Paramagnetic;
  /// Index of the monotone piece of the drive curve eps2(n) holding n_s.
  int branch = 0;
};

/// Drive power needed to sustain photon number n:
/// eps2(n) = n (kappa^2/4 + (delta_c - g X(J_x - g n))^2).
double epsilon2_of_n(double n, const ModelParams& p);

/// Fixed-point residual eps2 / (kappa^2/4 + (delta_c - g X)^2) - n.
double residual(double n, double eps2, const ModelParams& p);

struct StabilityCoefficient {
  double value;
  bool extrapolated;
};

/// c_s = 1 + 2 n^2 g^2 X' (delta_c - g X) / eps2 at a root n_ss. For
/// delta_c = 0 this is 1 - 2 n^2 g^3 X' X / eps2; in general it equals
/// (n / eps2) d(eps2)/dn, the fold criterion, and is flagged extrapolated.
StabilityCoefficient stability_coefficient(double n_ss, double eps2, const ModelParams& p);

/// A local extremum of eps2(n).
struct Fold {
  double n;
  double eps2;
  bool is_maximum;
};

/// The drive curve eps2(n) of one parameter set, split into monotone
/// branches at its folds. Building it costs a dense scan; queries reuse it.
class ResponseCurve {
 public:
  /// Samples used to locate folds on [0, structure_limit()].
  static constexpr int kScanPoints = 20000;

  explicit ResponseCurve(const ModelParams& p);

  const ModelParams& params() const { return params_; }
  const std::vector<Fold>& folds() const { return folds_; }

  /// Beyond this photon number eps2(n) is increasing.
  double structure_limit() const { return structure_limit_; }

  /// J_x / g + 10 eps2 / (kappa^2 / 4), an upper bound on every root.
  double n_max(double eps2) const;

  double epsilon2(double n) const { return epsilon2_of_n(n, params_); }

  /// All roots on [0, n_max(eps2)], sorted by n_s, deduplicated within
  /// 1e-6 n_max.
  std::vector<SteadyState> steady_states(double eps2) const;

  /// Root of eps2(n) = eps2 restricted to one branch, if the branch reaches it.
  bool solve_on_branch(int branch, double eps2, double& n_out) const;

  int branch_count() const { return static_cast<int>(folds_.size()) + 1; }

  /// Full SteadyState record for a known root.
  SteadyState make_state(double n, double eps2, int branch) const;

 private:
  double branch_begin(int branch) const;
  double branch_end(int branch, double eps2) const;

  ModelParams params_;
  double structure_limit_ = 0.0;
  std::vector<Fold> folds_;
};

/// All steady states at drive power eps2 >= 0.
std::vector<SteadyState> find_steady_states(double eps2, const ModelParams& p);

enum class Direction { Up, Down };

std::string_view to_string(Direction direction);

struct JumpEvent {
  double eps2 = 0.0;
  double n_before = 0.0;
  double n_after = 0.0;
  double J_eff_before = 0.0;
  double J_eff_after = 0.0;
  Phase phase_before = Phase::Paramagnetic;
  Phase phase_after = Phase::Paramagnetic;
};

struct SweepTrajectory {
  Direction direction = Direction::Up;
  std::vector<SteadyState> points;
  std::vector<JumpEvent> jumps;
};

/// Adiabatic drive sweep with branch following. eps2_grid must be strictly
/// increasing for Up and strictly decreasing for Down.
SweepTrajectory hysteresis_sweep(const std::vector<double>& eps2_grid, const ModelParams& p,
                                 Direction direction);

/// Same, reusing a prebuilt curve.
SweepTrajectory hysteresis_sweep(const std::vector<double>& eps2_grid, const ResponseCurve& curve,
                                 Direction direction);

/// One explicit Euler step of dn/dt = kappa (n_target(n) - n) with
/// n_target(n) = eps2 / (kappa^2/4 + (delta_c - g X(J_x - g n))^2), clamped
/// at 0. Requires dt > 0 and dt * kappa < 0.1.
double relaxation_step(double n, double eps2, const ModelParams& p, double dt);

}  // namespace cqed
