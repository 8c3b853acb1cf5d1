#pragma once

#include <optional>
#include <utility>

namespace ringburst {

struct EllipticValue {
  double value = 0.0;
  std::optional<double> remainder_bound;
};

// K(k) by the arithmetic-geometric mean.
EllipticValue agm_K(double k);

// K evaluated from the complementary modulus k' = sqrt(1 - k^2), which keeps
// full relative accuracy when k is close to 1.
double K_from_complement(double kp);

struct KEPair {
  double K;
  double E;
};

// K and E together; m = k^2 and kp = sqrt(1 - m) are both passed so the caller
// can supply whichever is computed without cancellation.
KEPair complete_KE(double m, double kp);

// dK/dm, with the small-m branch handled by its Taylor series.
double dK_dm(double m, double kp, const KEPair& ke);

// Truncated logarithmic series of K near k = 1. `terms` is the number of
// retained terms (m = 0 .. terms-1).
EllipticValue series_K_near1(double k, int terms = 2);
EllipticValue series_K_near1_c(double one_minus_k2, int terms = 2);

// Frozen constant C of the remainder bound C (1-k^2)^terms |ln(1-k^2)|.
double series_remainder_constant(int terms);

double incomplete_F(double phi, double k);

// Carlson's symmetric integral R_F(x, y, z).
double carlson_RF(double x, double y, double z);

double imaginary_modulus_integral(double a);

// (h(m), d(m)) of the near-degenerate series.
std::pair<double, double> series_coeffs(int m);

}  // namespace ringburst
