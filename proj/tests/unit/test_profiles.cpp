#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ringburst/errors.hpp"
#include "ringburst/field.hpp"
#include "ringburst/profiles.hpp"

using namespace ringburst;
constexpr double kPi = std::numbers::pi;

TEST_CASE("closed-form profiles") {
  CHECK(U_profile(0.0) == 8.0);
  CHECK(Gamma0(0.0) == doctest::Approx(std::log(8.0)).epsilon(1e-16));
  CHECK(Z0(0.0) == 16.0);
  CHECK(U_profile(1.0) == 2.0);
  CHECK(U_profile(0.6, 0.8) == doctest::Approx(2.0).epsilon(1e-15));
  for (double s : {0.0, 0.3, 1.0, 2.7, 10.0}) {
    CHECK(std::abs(U_prime(s) - U_profile(s) * Gamma0_prime(s)) < 1e-12);
    CHECK(std::exp(Gamma0(s)) == doctest::Approx(U_profile(s)).epsilon(1e-14));
    CHECK(Z0(s) == doctest::Approx(2 * U_profile(s) + s * U_prime(s)).epsilon(1e-13));
    const double h = 1e-5;
    auto fd1 = [&](double (*f)(double)) { return (f(s + h) - f(std::abs(s - h)) * (s > h ? 1 : 0) - (s > h ? 0 : f(s))) / (s > h ? 2 * h : h); };
    if (s > h) {
      CHECK(U_second(s) == doctest::Approx((U_prime(s + h) - U_prime(s - h)) / (2 * h)).epsilon(1e-7));
      CHECK(Gamma0_second(s) == doctest::Approx((Gamma0_prime(s + h) - Gamma0_prime(s - h)) / (2 * h)).epsilon(1e-7));
      CHECK(Z0_prime(s) == doctest::Approx((Z0(s + h) - Z0(s - h)) / (2 * h)).epsilon(1e-7));
      CHECK(Z0_second(s) == doctest::Approx((Z0_prime(s + h) - Z0_prime(s - h)) / (2 * h)).epsilon(1e-7));
    }
    (void)fd1;
  }
}

TEST_CASE("steady-state identities converge at second order") {
  double prev_flux = 0.0, prev_lap = 0.0;
  for (int n : {200, 400, 800}) {
    const double h = 10.0 / n;
    double flux = 0.0, lap = 0.0;
    for (int k = 1; k < n; ++k) {
      const double s = k * h;
      // discrete divergence of grad U - U grad Gamma0 (radial)
      auto F = [&](double x) {
        return (U_profile(x + 0.5 * h) - U_profile(x - 0.5 * h)) / h -
               U_profile(x) * (Gamma0(x + 0.5 * h) - Gamma0(x - 0.5 * h)) / h;
      };
      const double div = ((s + 0.5 * h) * F(s + 0.5 * h) - (s - 0.5 * h) * F(s - 0.5 * h)) / (s * h);
      flux = std::max(flux, std::abs(div));
      const double l = (Gamma0(s + h) - 2 * Gamma0(s) + Gamma0(s - h)) / (h * h) +
                       (Gamma0(s + h) - Gamma0(s - h)) / (2 * h * s);
      lap = std::max(lap, std::abs(l + U_profile(s)));
    }
    if (prev_flux > 0.0) {
      CHECK(std::log2(prev_flux / flux) > 1.8);
      CHECK(std::log2(prev_lap / lap) > 1.8);
    }
    prev_flux = flux;
    prev_lap = lap;
  }
}

TEST_CASE("cutoff chi0") {
  CHECK(cutoff_chi0(0.5) == 1.0);
  CHECK(cutoff_chi0(3.0) == 0.0);
  CHECK(cutoff_chi0(1.5) > 0.0);
  CHECK(cutoff_chi0(1.5) < 1.0);
  CHECK(cutoff_chi0(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double s = 2.5 * i / 199.0;
    const double v = cutoff_chi0(s);
    CHECK(v <= prev);
    prev = v;
  }
  for (double s : {1.01, 1.2, 1.5, 1.77, 1.95}) {
    const double h = 1e-6;
    const auto j = cutoff_chi0_jet(s);
    CHECK(j.d1 == doctest::Approx((cutoff_chi0(s + h) - cutoff_chi0(s - h)) / (2 * h)).epsilon(1e-6));
    CHECK(j.d2 == doctest::Approx((cutoff_chi0_jet(s + h).d1 - cutoff_chi0_jet(s - h).d1) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("lambda0") {
  const double T = 1.0;
  const auto l = lambda0(T - 1e-4, T);
  CHECK(std::abs(l.lambda - 6.4478291470515751e-4) < 1e-15);
  CHECK(l.lambda == doctest::Approx(6.446e-4).epsilon(1e-3));
  double prev = 1.0, prev_ratio = 1.0;
  for (int k = 2; k <= 12; ++k) {
    const double tau = std::pow(10.0, -k);
    const double v = lambda0(T - tau, T).lambda;
    CHECK(v < prev);
    CHECK(v / std::sqrt(tau) < prev_ratio);
    prev = v;
    prev_ratio = v / std::sqrt(tau);
  }
  for (double tau : {1e-2, 1e-5, 3.0}) {
    const double h = 1e-6 * tau;
    const double fd = (lambda0(T - tau + h, T).lambda - lambda0(T - tau - h, T).lambda) / (2 * h);
    CHECK(lambda0(T - tau, T).lambda_dot == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK_THROWS_AS(lambda0(1.0, 1.0), DomainError);
}

TEST_CASE("tau_of_t") {
  auto one = [](double) { return 1.0; };
  CHECK(tau_of_t(0.0, one, 3.0) == 3.0);
  CHECK(tau_of_t(1.0, one, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const double T = 1e-2;
  auto lam = [T](double s) { return lambda0(s, T).lambda; };
  double prev = 0.0;
  for (int k = 3; k <= 9; ++k) {
    const double t = T - std::pow(10.0, -k);
    const double v = tau_of_t(t, lam, 1.0);
    const double ref = 1.0 + oracle::ts([&](double s) { return 1.0 / (lam(s) * lam(s)); }, 0.0, t, 1e-12);
    CHECK(v == doctest::Approx(ref).epsilon(1e-8));
    CHECK(v > prev + 1.0);
    prev = v;
  }
}

TEST_CASE("ansatz u0") {
  RingParams p;
  p.T = 1e-3;
  p.delta = 1.0;
  p.lambda = CurveSpec::constant_value(3e-4);
  p.alpha = CurveSpec::constant_value(1.3);
  const double w = p.cutoff_scale(0.0);
  const double lam = 3e-4;
  CHECK(lam / w <= 1e-2);
  const auto g = make_grid(Axis::graded(0.9, 1.1, 1.0, lam / 10, 1.05, 2e-3),
                           Axis::graded(-0.1, 0.1, 0.0, lam / 10, 1.05, 2e-3));
  const auto u = ansatz_u0(p, 0.0, g);
  const std::size_t ic = g->r().nearest(1.0), jc = g->z().nearest(0.0);
  CHECK(u.at(ic, jc) == doctest::Approx(8 * 1.3 / (lam * lam)).epsilon(1e-12));
  for (std::size_t j = 0; j < g->nz(); ++j)
    for (std::size_t i = 0; i < g->nr(); ++i)
      if (std::hypot(g->r().nodes()[i] - 1.0, g->z().nodes()[j]) >= 2 * w) CHECK(u.at(i, j) == 0.0);
  const double ref = 2 * kPi * 1.0 * 1.3 *
                     oracle::radial_mass([&](double s) { return U_profile(s) * cutoff_chi0(s * lam / w); },
                                         2 * w / lam);
  CHECK(integrate_cyl(u) == doctest::Approx(ref).epsilon(2e-3));
  CHECK(integrate_cyl(u) == doctest::Approx(16 * kPi * kPi * 1.3).epsilon(2e-3));

  const auto m = ansatz_multi({p}, 0.0, g);
  CHECK(m.values == u.values);
  RingParams q = p;
  q.xi_T = {1.05, 0.0};
  CHECK_THROWS_AS(ansatz_u0(q, 0.0, g), CoverageError);

  const auto g2 = make_grid(Axis::uniform(0.5, 2.5, 400), Axis::uniform(-0.5, 0.5, 200));
  RingParams a = p, b = p;
  a.lambda = b.lambda = CurveSpec::constant_value(0.01);
  b.xi_T = {2.0, 0.0};
  const auto ua = ansatz_u0(a, 0.0, g2), ub = ansatz_u0(b, 0.0, g2);
  CHECK(integrate_cyl(ansatz_multi({a, b}, 0.0, g2)) ==
        doctest::Approx(integrate_cyl(ua) + integrate_cyl(ub)).epsilon(1e-13));
}

TEST_CASE("validate_params") {
  RingParams p;
  p.T = 0.01;
  auto rep = validate_params(p, 1e-8);
  CHECK(rep.ok());
  for (const auto& c : rep.checks) CHECK(std::isfinite(c.worst_ratio));
  CHECK(rep.checks[2].worst_ratio == 0.0);
  CHECK(rep.lambda_c1 > 0.5);
  CHECK(rep.lambda_c2 < 0.6);

  RingParams q = p;
  q.lambda = CurveSpec::power_law(1.0, 0.5);
  auto bad = validate_params(q, 1e-8);
  CHECK_FALSE(bad.ok());
  CHECK(bad.checks[0].violated);
  CHECK(bad.checks[0].last_ratio > 10 * bad.checks[0].first_ratio);
}

TEST_CASE("curve specs serialize") {
  for (const auto& c : {CurveSpec::constant_value(1.25), CurveSpec::power_law(0.3, 0.5, 1.0),
                        CurveSpec::rate_lambda0(0.9)}) {
    CHECK(CurveSpec::parse(c.to_string()) == c);
  }
  CHECK(CurveSpec::parse("power 2 0.5").value(0.0, 4.0) == doctest::Approx(4.0));
}
