#include "cqed/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cqed/errors.hpp"

namespace cqed::circuit {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw DomainError(std::string(name) + " must be finite and > 0");
  }
}

void check_capacitances(double C0, double C1) {
  require_positive(C0, "C0");
  if (!std::isfinite(C1) || C1 < 0.0) throw DomainError("C1 must be finite and >= 0");
  if (!(C1 < C0)) throw DomainError("C1 must be smaller than C0");
}

}  // namespace

void CircuitSpec::validate() const {
  check_capacitances(C0, C1);
  require_positive(C1, "C1");
  require_positive(E_J, "E_J");
  require_positive(L_r, "L_r");
  require_positive(C_r, "C_r");
  require_positive(I_r, "I_r");
  require_positive(I_q2, "I_q2");
  require_positive(R0, "R0");
  if (!std::isfinite(phi_ex)) throw DomainError("phi_ex must be finite");
  if (!std::isfinite(Phi_r)) throw DomainError("Phi_r must be finite");
  if (M < 3) throw DomainError("chain length M must be >= 3");
}

CircuitSpec CircuitSpec::reference_resonator() {
  CircuitSpec spec;
  spec.L_r = 100e-12;
  spec.C_r = 0.1e-12;
  spec.I_r = 1200e-9;
  spec.I_q2 = 80e-9;
  spec.phi_ex = std::numbers::pi / 4.0;
  return spec;
}

Eigen::MatrixXd inverse_capacitance(double C0, double C1, int M, bool periodic) {
  check_capacitances(C0, C1);
  if (M < 3) throw DomainError("inverse_capacitance needs M >= 3");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    C(i, i) = C0;
    if (i + 1 < M || periodic) {
      const int j = (i + 1) % M;
      C(i, j) = -C1;
      C(j, i) = -C1;
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  if (!lu.isInvertible()) throw SingularityError("capacitance matrix is singular");
  return lu.solve(Eigen::MatrixXd::Identity(M, M));
}

InverseCapacitanceExpansion inverse_capacitance_expansion(double C0, double C1) {
  check_capacitances(C0, C1);
  return {1.0 / C0 + 2.0 * C1 * C1 / (C0 * C0 * C0), C1 / (C0 * C0)};
}

IsingCouplings ising_couplings(double C0, double C1) {
  check_capacitances(C0, C1);
  constexpr double e2 = si::kElementaryCharge * si::kElementaryCharge;
  const double r = C1 / C0;
  return {4.0 * e2 * r, 4.0 * e2 * r * r, r, r < 0.5};
}

DerivedIsingCouplings derived_ising_couplings(double C0, double C1, int M, bool periodic) {
  const Eigen::MatrixXd inv = inverse_capacitance(C0, C1, M, periodic);
  // Interior site so that open chains see both neighbours.
  const int i = periodic ? 0 : (M - 1) / 2 - 1;
  constexpr double e2 = si::kElementaryCharge * si::kElementaryCharge;
  const double b1 = e2 * inv(i, (i + 1) % M);
  const double b2 = e2 * inv(i, (i + 2) % M);
  return {b1, b2, b2 / b1};
}

double squid_inductance(double I_r, double phi_ex, double Phi_r) {
  require_positive(I_r, "I_r");
  if (!std::isfinite(phi_ex) || !std::isfinite(Phi_r)) {
    throw DomainError("SQUID phase and flux must be finite");
  }
  const double denominator = 2.0 * I_r * std::cos(phi_ex) -
                             2.0 * I_r * std::sin(phi_ex) * (std::numbers::pi * Phi_r / si::kFluxQuantum);
  // Residues of cancellation count as zero.
  if (!(denominator > 1e-12 * 2.0 * I_r)) {
    throw DivergenceError("SQUID inductance diverges at this operating point");
  }
  return (si::kHbar / (2.0 * si::kElementaryCharge)) / denominator;
}

ResonatorParams resonator_params(const CircuitSpec& spec) {
  require_positive(spec.L_r, "L_r");
  require_positive(spec.C_r, "C_r");
  require_positive(spec.I_q2, "I_q2");
  require_positive(spec.R0, "R0");
  const double L_sq0 = squid_inductance(spec.I_r, spec.phi_ex, 0.0);
  const double L_tot = L_sq0 + spec.L_r;
  const double omega_c0 = 1.0 / std::sqrt(L_tot * spec.C_r);
  const double flux_ratio =
      si::kVacuumPermeability * spec.R0 * spec.I_q2 / (si::kFluxQuantum * std::numbers::sqrt2);
  const double g = omega_c0 * (L_sq0 / L_tot) * (std::numbers::pi / 2.0) * flux_ratio;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {L_sq0, omega_c0, g, omega_c0 / two_pi, g / two_pi};
}

ModelParams dimensionless(double g_hz, double E_J_hz, int M, double ferro_coupling_hz,
                          double kappa_hz, double detuning_hz) {
  require_positive(ferro_coupling_hz, "ferromagnetic coupling");
  if (!std::isfinite(g_hz) || !std::isfinite(E_J_hz) || !std::isfinite(kappa_hz) ||
      !std::isfinite(detuning_hz)) {
    throw DomainError("rates must be finite");
  }
  ModelParams p;
  p.g = g_hz / ferro_coupling_hz;
  p.J_x = 0.5 * E_J_hz / ferro_coupling_hz;
  p.kappa = kappa_hz / ferro_coupling_hz;
  p.delta_c = detuning_hz / ferro_coupling_hz;
  p.M = M;
  return p;
}

ModelParams to_dimensionless(const CircuitSpec& spec, double ferro_coupling_hz, double kappa_hz,
                             double detuning_hz) {
  spec.validate();
  const auto res = resonator_params(spec);
  return dimensionless(res.g_hz, spec.E_J, spec.M, ferro_coupling_hz, kappa_hz, detuning_hz);
}

DerivedCouplings derive(const CircuitSpec& spec, double ferro_coupling_hz, double kappa_hz,
                        double detuning_hz) {
  spec.validate();
  DerivedCouplings out;
  out.literal = ising_couplings(spec.C0, spec.C1);
  out.derived = derived_ising_couplings(spec.C0, spec.C1, spec.M, spec.periodic);
  out.L_sq = squid_inductance(spec.I_r, spec.phi_ex, spec.Phi_r);
  out.resonator = resonator_params(spec);
  out.model = dimensionless(out.resonator.g_hz, spec.E_J, spec.M, ferro_coupling_hz, kappa_hz,
                            detuning_hz);
  return out;
}

}  // namespace cqed::circuit
