#pragma once

// Ground-state observables of the periodic transverse-field Ising chain
//   H = -J sum_i sx_i - sum_i sz_i sz_{i+1}
// in units of the ferromagnetic coupling. Everything here is per site and
// defined for J >= 0; the odd extension to negative fields lives with the
// callers.

namespace cqed::tfim {

/// Critical field of the chain.
inline constexpr double kCriticalField = 1.0;

/// Half width of the band around J = 1 where dx/dJ is refused.
inline constexpr double kCriticalGuard = 1e-9;

/// Largest chain that exact_diag will build.
inline constexpr int kMaxExactDiagSites = 12;

struct ChainObservables {
  double energy_per_site = 0.0;
  double x_per_site = 0.0;
  double x_derivative_per_site = 0.0;
};

/// Thermodynamic-limit ground-state energy per site,
/// -(2/pi)(1+J) E(4J/(1+J)^2).
double ground_energy_per_site(double J);

/// Thermodynamic-limit <sx> per site, equal to -d(E/M)/dJ.
double magnetization_x_per_site(double J);

/// d<sx>/dJ per site. Diverges logarithmically at J = 1; throws
/// SingularityError for |J - 1| < kCriticalGuard.
double magnetization_x_derivative(double J);

/// All three thermodynamic observables at once. The derivative is set to
/// +infinity inside the critical guard band instead of throwing.
ChainObservables thermodynamic(double J);

/// Free-fermion solution of an even-length periodic chain in the
/// antiperiodic (even parity) sector: modes k = +-(2m-1) pi / M,
/// Lambda_k = sqrt(J^2 + 2 J cos k + 1).
ChainObservables finite_free_fermion(double J, int M);

/// Brute-force ground state of the 2^M dimensional Hamiltonian with
/// periodic boundaries, 2 <= M <= 12. The derivative field is left at 0.
ChainObservables exact_diag(double J, int M);

}  // namespace cqed::tfim
