#include "ringburst/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ringburst/errors.hpp"

namespace ringburst {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Twice the worst truncation ratio observed in extended precision on
// 1-k^2 in [1e-8, 0.1] (1e-3 for three and four terms), by retained terms.
constexpr double kRemainderC[] = {0.0, 0.36, 0.18, 0.12, 0.09};

}  // namespace

double K_from_complement(double kp) {
  if (!(kp > 0.0) || kp > 1.0) {
    throw DomainError("K: complementary modulus must lie in (0, 1]");
  }
  double a = 1.0;
  double b = kp;
  while (std::abs(a - b) > 4.0 * kEps * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

EllipticValue agm_K(double k) {
  if (!(k >= 0.0) || k >= 1.0) {
    throw DomainError("agm_K: modulus must satisfy 0 <= k < 1");
  }
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  return {K_from_complement(kp), std::nullopt};
}

KEPair complete_KE(double m, double kp) {
  double a = 1.0;
  double b = kp;
  double c2 = m;
  double sum = 0.5 * c2;
  double pow2 = 0.5;
  while (std::abs(a - b) > 4.0 * kEps * a) {
    const double an = 0.5 * (a + b);
    const double cn = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * cn * cn;
  }
  const double K = kPi / (2.0 * a);
  return {K, K * (1.0 - sum)};
}

double dK_dm(double m, double kp, const KEPair& ke) {
  if (m < 1e-5) {
    return 0.5 * kPi * (0.25 + m * (9.0 / 32.0 + m * (75.0 / 256.0)));
  }
  const double kp2 = kp * kp;
  return (ke.E - kp2 * ke.K) / (2.0 * m * kp2);
}

std::pair<double, double> series_coeffs(int m) {
  if (m < 0) throw DomainError("series_coeffs: m must be non-negative");
  double h = 1.0;
  double d = 2.0 * std::numbers::ln2;
  for (int j = 0; j < m; ++j) {
    const double ratio = (j + 0.5) / (j + 1.0);
    h *= ratio * ratio;
    d -= 2.0 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
  }
  return {h, d};
}

double series_remainder_constant(int terms) {
  if (terms < 1 || terms > 4) {
    throw DomainError("series_K_near1: terms must lie in [1, 4]");
  }
  return kRemainderC[terms];
}

EllipticValue series_K_near1_c(double x, int terms) {
  if (!(x > 0.0) || x > 0.1) {
    throw DomainError("series_K_near1: requires 0 < 1-k^2 <= 0.1");
  }
  const double C = series_remainder_constant(terms);
  const double lead = -0.5 * std::log(x);
  double sum = 0.0;
  double xm = 1.0;
  for (int m = 0; m < terms; ++m) {
    const auto [h, d] = series_coeffs(m);
    sum += h * xm * (lead + d);
    xm *= x;
  }
  return {sum, C * xm * std::abs(std::log(x)) + 8.0 * kEps * sum};
}

EllipticValue series_K_near1(double k, int terms) {
  if (!(k > 0.0) || k >= 1.0) {
    throw DomainError("series_K_near1: modulus must satisfy 0 < k < 1");
  }
  return series_K_near1_c((1.0 - k) * (1.0 + k), terms);
}

double carlson_RF(double x, double y, double z) {
  constexpr double errtol = 1e-3;
  for (;;) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    const double ave = (x + y + z) / 3.0;
    const double dx = (ave - x) / ave;
    const double dy = (ave - y) / ave;
    const double dz = (ave - z) / ave;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < errtol) {
      const double e2 = dx * dy - dz * dz;
      const double e3 = dx * dy * dz;
      return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) /
             std::sqrt(ave);
    }
  }
}

double incomplete_F(double phi, double k) {
  if (!(phi >= 0.0) || phi > 0.5 * kPi + 1e-15) {
    throw DomainError("incomplete_F: phi must lie in [0, pi/2]");
  }
  if (!(k >= 0.0) || k >= 1.0) {
    throw DomainError("incomplete_F: modulus must satisfy 0 <= k < 1");
  }
  if (phi == 0.0) return 0.0;
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double ks = k * s;
  return s * carlson_RF(c * c, (1.0 - ks) * (1.0 + ks), 1.0);
}

double imaginary_modulus_integral(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw DomainError("imaginary_modulus_integral: a must be finite and >= 0");
  }
  const double s = std::sqrt(1.0 + a);
  return K_from_complement(1.0 / s) / s;
}

}  // namespace ringburst
