#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ringburst/elliptic.hpp"
#include "ringburst/errors.hpp"

using namespace ringburst;

TEST_CASE("agm_K matches closed values and the quadrature oracle") {
  CHECK(agm_K(0.0).value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-16));
  CHECK(std::abs(agm_K(1.0 / std::sqrt(2.0)).value - 1.8540746773013719) < 1e-14);
  CHECK(std::abs(agm_K(std::sqrt(0.75)).value - 2.1565156474996432) < 1e-14);
  for (double k : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double ref = oracle::K_quad(k);
    CHECK(std::abs(agm_K(k).value - ref) <= 1e-14 * ref);
  }
  CHECK_FALSE(agm_K(0.5).remainder_bound.has_value());
}

TEST_CASE("agm_K rejects degenerate moduli") {
  CHECK_THROWS_AS(agm_K(1.0), DomainError);
  CHECK_THROWS_AS(agm_K(-0.1), DomainError);
  CHECK_THROWS_AS(agm_K(NAN), DomainError);
}

TEST_CASE("agm_K is increasing and bounded below by pi/2") {
  double prev = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double k = 0.999 * i / 499.0;
    const double v = agm_K(k).value;
    CHECK(v >= std::numbers::pi / 2);
    if (i > 0) CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("series coefficients") {
  auto [h0, d0] = series_coeffs(0);
  CHECK(h0 == 1.0);
  CHECK(d0 == doctest::Approx(2 * std::numbers::ln2).epsilon(1e-16));
  auto [h1, d1] = series_coeffs(1);
  CHECK(h1 == 0.25);
  CHECK(d1 == doctest::Approx(2 * std::numbers::ln2 - 1).epsilon(1e-15));
  auto [h2, d2] = series_coeffs(2);
  CHECK(h2 == doctest::Approx(9.0 / 64).epsilon(1e-16));
  CHECK(d2 == doctest::Approx(2 * std::numbers::ln2 - 1 - 1.0 / 6).epsilon(1e-15));
}

TEST_CASE("near-degenerate series stays within its bound") {
  CHECK(std::abs(series_K_near1_c(1e-2).value - 3.6956016527492211) < 1e-12);
  CHECK(std::abs(series_K_near1_c(1e-4).value - 5.9915893337216597) < 1e-12);
  for (int terms = 1; terms <= 4; ++terms) {
    for (int i = 0; i < 100; ++i) {
      const double x = std::pow(10.0, -8.0 + 6.0 * i / 99.0);
      const auto s = series_K_near1_c(x, terms);
      REQUIRE(s.remainder_bound.has_value());
      CHECK(*s.remainder_bound >= 0.0);
      CHECK(std::abs(s.value - K_from_complement(std::sqrt(x))) <= *s.remainder_bound);
    }
  }
  const double k = std::sqrt(1.0 - 1e-2);
  CHECK(std::abs(series_K_near1(k).value - series_K_near1_c(1e-2).value) < 1e-12);
  const double tiny = 1e-14;
  CHECK(series_K_near1_c(tiny).value / std::log(4.0 / std::sqrt(tiny)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(series_K_near1_c(0.2), DomainError);
  CHECK_THROWS_AS(series_K_near1(0.5), DomainError);
}

TEST_CASE("the first-order constant is -1, not -1/6") {
  const double x = 1e-3;
  const double L = std::log(4.0 / std::sqrt(x));
  const double K = K_from_complement(std::sqrt(x));
  const double with_one = L + 0.25 * x * (L - 1.0);
  const double with_sixth = L + 0.25 * x * (L - 1.0 / 6.0);
  CHECK(std::abs(with_one - K) < 0.1 * std::abs(with_sixth - K));
}

TEST_CASE("incomplete_F") {
  CHECK(incomplete_F(std::numbers::pi / 2, 0.3) ==
        doctest::Approx(agm_K(0.3).value).epsilon(1e-13));
  CHECK(incomplete_F(0.0, 0.7) == 0.0);
  CHECK(incomplete_F(std::numbers::pi / 4, 0.0) ==
        doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  for (double k : {0.2, 0.6, 0.95, 0.9999}) {
    for (double phi : {0.1, 0.5, 1.0, 1.4, 1.5707}) {
      const double ref = oracle::F_quad(phi, k);
      CHECK(std::abs(incomplete_F(phi, k) - ref) <= 1e-12 * ref);
      CHECK(incomplete_F(phi, k) <= agm_K(k).value);
    }
  }
  CHECK_THROWS_AS(incomplete_F(2.0, 0.1), DomainError);
  CHECK_THROWS_AS(incomplete_F(1.0, 1.0), DomainError);
}

TEST_CASE("imaginary-modulus identity") {
  CHECK(imaginary_modulus_integral(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(std::abs(imaginary_modulus_integral(1.0) - 1.3110287771460599) < 1e-14);
  CHECK(std::abs(imaginary_modulus_integral(3.0) - 1.0782578237498216) < 1e-14);
  for (double a : {0.1, 1.0, 10.0, 100.0}) {
    const double ref = oracle::imt_quad(a);
    CHECK(std::abs(imaginary_modulus_integral(a) - ref) <= 1e-10 * ref);
  }
  CHECK_THROWS_AS(imaginary_modulus_integral(-1.0), DomainError);
}

TEST_CASE("K and E from the joint AGM") {
  for (double m : {1e-8, 0.1, 0.5, 0.9, 0.999999}) {
    const double kp = std::sqrt(1.0 - m);
    const auto ke = complete_KE(m, kp);
    CHECK(ke.K == doctest::Approx(oracle::K_quad_c(1.0 - m)).epsilon(1e-13));
    const double E = oracle::ts(
        [m](double g) { return std::sqrt(1.0 - m * std::sin(g) * std::sin(g)); }, 0.0,
        std::numbers::pi / 2);
    CHECK(ke.E == doctest::Approx(E).epsilon(1e-13));
    // dK/dm against a centred difference of K
    const double h = 1e-6 * std::max(m, 1e-3) * std::min(1.0, (1 - m) * 1e3);
    const double mp = m + h, mm = m - h;
    const double fd = (K_from_complement(std::sqrt(1 - mp)) - K_from_complement(std::sqrt(1 - mm))) / (2 * h);
    CHECK(dK_dm(m, kp, ke) == doctest::Approx(fd).epsilon(1e-5));
  }
}
