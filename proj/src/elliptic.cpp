#include "cqed/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

// Below this distance from m = 1 the endpoint value E(1) = 1 is returned.
constexpr double kEndpointGap = 1e-15;

void check_parameter(double m) {
  if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
    throw DomainError("elliptic parameter m must lie in [0, 1]");
  }
}

}  // namespace

CompleteElliptic complete_elliptic(double m, double k_prime) {
  if (!(k_prime > 0.0) || !std::isfinite(k_prime)) {
    throw DomainError("complete_elliptic requires a positive complementary modulus");
  }
  // Gauss AGM with the Legendre sum E = K (1 - sum_n 2^{n-1} c_n^2).
  // The ratios r_n = c_n^2 / m obey r_{n+1} = m r_n^2 / (16 a_{n+1}^2),
  // so (K - E)/m = K sum_n 2^{n-1} r_n is accumulated from positive terms.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = 1.0;
  double b = k_prime;
  double r = 1.0;
  double weight = 0.5;
  double sum = weight * r;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_next = 0.5 * (a + b);
    const double b_next = std::sqrt(a * b);
    r = m * r * r / (16.0 * a_next * a_next);
    weight *= 2.0;
    sum += weight * r;
    a = a_next;
    b = b_next;
    if (std::abs(a - b) <= eps * a && weight * r <= eps * sum) break;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return {K, K * (1.0 - m * sum), K * sum};
}

double elliptic_e(double m) {
  check_parameter(m);
  if (1.0 - m < kEndpointGap) return 1.0;
  return complete_elliptic(m, std::sqrt(1.0 - m)).E;
}

double elliptic_k(double m) {
  check_parameter(m);
  if (m == 1.0) throw SingularityError("K(m) diverges at m = 1");
  return complete_elliptic(m, std::sqrt(1.0 - m)).K;
}

}  // namespace cqed
