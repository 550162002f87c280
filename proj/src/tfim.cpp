#include "cqed/tfim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cqed/elliptic.hpp"
#include "cqed/errors.hpp"

namespace cqed::tfim {

namespace {

using std::numbers::pi;

void check_field(double J) {
  if (!std::isfinite(J) || J < 0.0) {
    throw DomainError("transverse field must be finite and >= 0, got " + std::to_string(J));
  }
}

// Parameter and complementary modulus of the elliptic argument 4J/(1+J)^2.
// k' = |1 - J| / (1 + J) is exact, which keeps K accurate near J = 1.
struct EllipticArgument {
  double m;
  double k_prime;
};

EllipticArgument argument(double J) {
  return {4.0 * J / ((1.0 + J) * (1.0 + J)), std::abs(1.0 - J) / (1.0 + J)};
}

// Power series coefficients of D(m) = ((2 - m)(K - E)/m - E) / m in units
// of pi/2, used where the direct form cancels.
constexpr int kSeriesTerms = 40;

std::array<double, kSeriesTerms> d_series() {
  // a_n = ((2n)! / (4^n n!^2))^2; K = pi/2 sum a_n m^n, E = pi/2 sum a_n m^n / (1 - 2n)
  std::array<double, kSeriesTerms + 2> a{};
  double t = 1.0;
  a[0] = 1.0;
  for (int n = 1; n < kSeriesTerms + 2; ++n) {
    t *= (2.0 * n - 1.0) / (2.0 * n);
    a[n] = t * t;
  }
  auto beta = [&](int n) { return a[n + 1] * 2.0 * (n + 1) / (2.0 * n + 1.0); };
  auto e = [&](int n) { return a[n] / (1.0 - 2.0 * n); };
  std::array<double, kSeriesTerms> c{};
  for (int j = 1; j <= kSeriesTerms; ++j) {
    c[j - 1] = 2.0 * beta(j) - beta(j - 1) - e(j);
  }
  return c;
}

double d_quotient(double m, const CompleteElliptic& ell) {
  if (m < 0.1) {
    static const auto coeffs = d_series();
    double acc = 0.0;
    for (int j = kSeriesTerms - 1; j >= 0; --j) acc = acc * m + coeffs[j];
    return 0.5 * pi * acc;
  }
  return ((2.0 - m) * ell.k_minus_e_over_m - ell.E) / m;
}

}  // namespace

double ground_energy_per_site(double J) {
  check_field(J);
  const auto arg = argument(J);
  const double E = arg.k_prime == 0.0 ? 1.0 : complete_elliptic(arg.m, arg.k_prime).E;
  return -(2.0 / pi) * (1.0 + J) * E;
}

double magnetization_x_per_site(double J) {
  check_field(J);
  if (J == kCriticalField) return 2.0 / pi;
  const auto arg = argument(J);
  const auto ell = complete_elliptic(arg.m, arg.k_prime);
  // x = (2/pi) [E - 2 (1 - J) (K - E)/m / (1 + J)^2]
  const double x = (2.0 / pi) *
                   (ell.E - 2.0 * (1.0 - J) * ell.k_minus_e_over_m / ((1.0 + J) * (1.0 + J)));
  return std::clamp(x, 0.0, 1.0);
}

double magnetization_x_derivative(double J) {
  check_field(J);
  if (std::abs(J - kCriticalField) < kCriticalGuard) {
    throw SingularityError("dx/dJ diverges at the critical field J = 1");
  }
  const auto arg = argument(J);
  const auto ell = complete_elliptic(arg.m, arg.k_prime);
  const double s = 1.0 + J;
  return 8.0 / (pi * s * s * s) * d_quotient(arg.m, ell);
}

ChainObservables thermodynamic(double J) {
  ChainObservables obs;
  obs.energy_per_site = ground_energy_per_site(J);
  obs.x_per_site = magnetization_x_per_site(J);
  obs.x_derivative_per_site = std::abs(J - kCriticalField) < kCriticalGuard
                                  ? std::numeric_limits<double>::infinity()
                                  : magnetization_x_derivative(J);
  return obs;
}

ChainObservables finite_free_fermion(double J, int M) {
  check_field(J);
  if (M < 2 || M % 2 != 0) {
    throw DomainError("finite_free_fermion needs an even chain length M >= 2");
  }
  double energy = 0.0;
  double x = 0.0;
  double dx = 0.0;
  // +k and -k contribute identically.
  for (int mode = 1; mode <= M / 2; ++mode) {
    const double k = (2.0 * mode - 1.0) * pi / M;
    const double c = std::cos(k);
    const double s = std::sin(k);
    const double lambda = std::sqrt(J * J + 2.0 * J * c + 1.0);
    energy -= 2.0 * lambda;
    x += 2.0 * (J + c) / lambda;
    dx += 2.0 * s * s / (lambda * lambda * lambda);
  }
  return {energy / M, x / M, dx / M};
}

namespace {

// Ground state of one Z2 parity sector, in the sx eigenbasis. A basis state
// is a bit string b with b_i = 1 meaning sx_i = -1; sz_i sz_{i+1} flips bits
// i and i+1 and keeps the bit parity.
struct SectorResult {
  double energy;
  double x_total;
};

SectorResult sector_ground_state(double J, int M, int parity) {
  const std::uint32_t full = 1u << M;
  std::vector<std::uint32_t> states;
  std::vector<int> index(full, -1);
  for (std::uint32_t b = 0; b < full; ++b) {
    if (std::popcount(b) % 2 == parity) {
      index[b] = static_cast<int>(states.size());
      states.push_back(b);
    }
  }
  const auto dim = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd sx_total(dim);
  for (Eigen::Index row = 0; row < dim; ++row) {
    const std::uint32_t b = states[row];
    sx_total[row] = M - 2.0 * std::popcount(b);
    H(row, row) = -J * sx_total[row];
    for (int i = 0; i < M; ++i) {
      const std::uint32_t flipped = b ^ (1u << i) ^ (1u << ((i + 1) % M));
      H(index[flipped], row) -= 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("exact_diag: eigensolver failed");
  }
  const Eigen::VectorXd psi = solver.eigenvectors().col(0);
  return {solver.eigenvalues()[0], psi.cwiseAbs2().dot(sx_total)};
}

}  // namespace

ChainObservables exact_diag(double J, int M) {
  check_field(J);
  if (M < 2 || M > kMaxExactDiagSites) {
    throw DomainError("exact_diag supports 2 <= M <= " + std::to_string(kMaxExactDiagSites));
  }
  const SectorResult even = sector_ground_state(J, M, 0);
  const SectorResult odd = sector_ground_state(J, M, 1);
  const SectorResult& best = odd.energy < even.energy - 1e-13 ? odd : even;
  return {best.energy / M, best.x_total / M, 0.0};
}

}  // namespace cqed::tfim
