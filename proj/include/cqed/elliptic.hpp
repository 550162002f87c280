#pragma once

namespace cqed {

/// Complete elliptic integrals of the first and second kind together with
/// the difference quotient (K - E) / m, which the AGM yields without
/// cancellation. All functions use the parameter convention m = k^2.
struct CompleteElliptic {
  double K;
  double E;
  double k_minus_e_over_m;
};

/// Evaluates K, E and (K - E)/m from the parameter m and the complementary
/// modulus k' = sqrt(1 - m). Passing both lets callers that know k' in
/// closed form keep full relative accuracy close to m = 1. Requires k' > 0.
CompleteElliptic complete_elliptic(double m, double k_prime);

/// E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt for m in [0, 1].
double elliptic_e(double m);

/// K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t) for m in [0, 1).
double elliptic_k(double m);

}  // namespace cqed
