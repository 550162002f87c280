#pragma once

#include <Eigen/Dense>

#include "cqed/semiclassical.hpp"

// Maps the charge-qubit chain and SQUID-loaded resonator onto the
// dimensionless model. SI units throughout; frequencies carry an explicit
// suffix: *_hz is cyclic (f), bare names are angular (rad/s).

namespace cqed::circuit {

namespace si {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / (2.0 * 3.14159265358979323846);
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb
inline constexpr double kVacuumPermeability = 1.25663706212e-6;             // H/m
}  // namespace si

/// Physical description of the qubit chain and resonator.
struct CircuitSpec {
  double C0 = 0.0;      ///< total island capacitance [F]
  double C1 = 0.0;      ///< coupling capacitance between neighbouring islands [F]
  double E_J = 0.0;     ///< Josephson energy of each qubit, as a cyclic frequency [Hz]
  double L_r = 100e-12;   ///< resonator loop inductance [H]
  double C_r = 0.1e-12;   ///< resonator capacitance [F]
  double I_r = 1200e-9;   ///< SQUID junction critical current [A]
  double I_q2 = 80e-9;    ///< qubit loop current scale [A]
  double R0 = 1e-6;       ///< qubit loop size entering the mutual flux [m]
  double phi_ex = 0.7853981633974483;  ///< external SQUID phase [rad]
  double Phi_r = 0.0;     ///< static flux offset in the SQUID loop [Wb]
  int M = 100;            ///< chain length
  bool periodic = true;   ///< wrap the capacitance matrix around

  /// Throws DomainError unless all sizes are positive and C1 < C0.
  void validate() const;

  /// Resonator values quoted for the circuit example; C0, C1 and E_J are
  /// left for the caller.
  static CircuitSpec reference_resonator();
};

/// Exact inverse of the capacitance matrix (diagonal C0, neighbours -C1).
Eigen::MatrixXd inverse_capacitance(double C0, double C1, int M, bool periodic = true);

/// Second-order expansion in C1/C0 of the inverse capacitance matrix.
struct InverseCapacitanceExpansion {
  double diagonal;   ///< 1/C0 + 2 C1^2 / C0^3
  double neighbour;  ///< C1 / C0^2
};

InverseCapacitanceExpansion inverse_capacitance_expansion(double C0, double C1);

struct IsingCouplings {
  double B1;     ///< 4 e^2 (C1/C0), as printed
  double B2;     ///< 4 e^2 (C1/C0)^2, as printed
  double ratio;  ///< C1 / C0
  bool valid;    ///< ratio < 1/2, where the chain stays Ising-like
};

IsingCouplings ising_couplings(double C0, double C1);

/// Couplings read off the exact inverse capacitance with the charge
/// operators n_i - 1/2 = +-sz_i/2 at the degeneracy point:
/// B1 = e^2 Cinv_{i,i+1}, B2 = e^2 Cinv_{i,i+2} [J].
struct DerivedIsingCouplings {
  double B1;
  double B2;
  double ratio;
};

DerivedIsingCouplings derived_ising_couplings(double C0, double C1, int M, bool periodic = true);

/// (hbar / 2e) / (2 I_r cos phi_ex - 2 I_r sin phi_ex pi Phi_r / Phi_0).
/// Throws DivergenceError when the denominator is not positive
/// (to within 1e-12 of its scale).
double squid_inductance(double I_r, double phi_ex, double Phi_r);

struct ResonatorParams {
  double L_sq0;        ///< SQUID inductance at Phi_r = 0 [H]
  double omega_c0;     ///< bare resonator frequency [rad/s]
  double g;            ///< qubit-resonator coupling [rad/s]
  double omega_c0_hz;  ///< omega_c0 / 2 pi
  double g_hz;         ///< g / 2 pi
};

ResonatorParams resonator_params(const CircuitSpec& spec);

/// Divides rates by the ferromagnetic coupling. All arguments are cyclic
/// frequencies in the same unit; J_x = (E_J / 2) / ferro_coupling.
ModelParams dimensionless(double g_hz, double E_J_hz, int M, double ferro_coupling_hz,
                          double kappa_hz, double detuning_hz);

ModelParams to_dimensionless(const CircuitSpec& spec, double ferro_coupling_hz, double kappa_hz,
                             double detuning_hz);

/// Everything derived from a spec, as emitted by the CLI.
struct DerivedCouplings {
  IsingCouplings literal;
  DerivedIsingCouplings derived;
  double L_sq;  ///< SQUID inductance at the given Phi_r
  ResonatorParams resonator;
  ModelParams model;
};

DerivedCouplings derive(const CircuitSpec& spec, double ferro_coupling_hz, double kappa_hz,
                        double detuning_hz);

}  // namespace cqed::circuit
