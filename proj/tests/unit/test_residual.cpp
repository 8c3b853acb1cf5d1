#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "ringburst/errors.hpp"
#include "ringburst/potential.hpp"
#include "ringburst/residual.hpp"

using namespace ringburst;

namespace {

RingParams lambda0_ring(double T = 0.1) {
  RingParams p;
  p.lambda = CurveSpec::rate_lambda0();
  p.T = T;
  return p;
}

double fv_integral(const RadialProfile& f) {
  const auto& x = f.grid->nodes();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lo = k == 0 ? 0.0 : 0.5 * (x[k - 1] + x[k]);
    const double hi = k + 1 == x.size() ? x[k] : 0.5 * (x[k] + x[k + 1]);
    s += f.values[k] * 0.5 * (hi * hi - lo * lo);
  }
  return s;
}

double sup_L_Z0(std::size_t n) {
  auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(20.0, n));
  const RadialProfile L = apply_L(sample(g, [](double s) { return Z0(s); }));
  double m = 0.0;
  for (double v : L.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("residual terms of u0 match finite differences of the ansatz") {
  RingParams p = lambda0_ring();
  const double t = p.T - 1e-3;
  const double lam = p.lam(t);
  ResidualOptions opt;
  opt.scaled = false;
  const ResidualEvaluator ev(p, t, opt);
  CHECK_FALSE(ev.corrected());
  CHECK(ev.lambda() == doctest::Approx(lam).epsilon(1e-15));

  const Point c = p.xi(t);
  for (Point y : {Point{2.0, 1.0}, Point{-0.5, 0.3}, Point{0.0, -3.0}}) {
    const double r = c.r + lam * y.r, z = c.z + lam * y.z;
    const double h = 1e-2 * lam, ht = 1e-4 * (p.T - t);
    auto u = [&](double rr, double zz, double tt) { return ansatz_value(p, rr, zz, tt); };
    const double u0 = u(r, z, t);
    const double ur = (u(r + h, z, t) - u(r - h, z, t)) / (2 * h);
    const double uz = (u(r, z + h, t) - u(r, z - h, t)) / (2 * h);
    const double lap = (u(r + h, z, t) + u(r - h, z, t) + u(r, z + h, t) + u(r, z - h, t) - 4 * u0) / (h * h);
    const double ut = (u(r, z, t + ht) - u(r, z, t - ht)) / (2 * ht);
    const auto T = ev.terms({r, z});
    const auto gv = ev.grad_v({r, z});
    CHECK(T.dt == doctest::Approx(-ut).epsilon(1e-3));
    CHECK(T.diffusion == doctest::Approx(lap + ur / r).epsilon(1e-3));
    CHECK(T.reaction == doctest::Approx(u0 * u0).epsilon(1e-12));
    CHECK(T.drift == doctest::Approx(-(ur * gv[0] + uz * gv[1])).epsilon(1e-3));
  }
}

TEST_CASE("quadrature gradient of v0 agrees with a direct potential evaluation") {
  RingParams p = lambda0_ring();
  const double t = p.T - 1e-3;
  const double lam = p.lam(t);
  const ResidualEvaluator ev(p, t);
  const ScalarField2D u0 = ansatz_u0(p, t, ansatz_grid(p, t, {0.05, 1.04, 0.05, 1.3}));
  const Point c = p.xi(t);
  for (double d : {6.0 * lam, 0.3 * p.cutoff_scale(t)}) {
    const Point x{c.r + 0.6 * d, c.z + 0.8 * d};
    const PointValue direct = axisym_potential_at(u0, x, true);
    const auto g = ev.grad_v(x);
    const double scale = std::hypot(direct.dr, direct.dz);
    CHECK(std::abs(g[0] - direct.dr) < 0.02 * scale);
    CHECK(std::abs(g[1] - direct.dz) < 0.02 * scale);
  }
}

TEST_CASE("S of the ansatz on a grid") {
  RingParams p = lambda0_ring();
  const double t = p.T - 1e-3;
  const auto grid = ansatz_grid(p, t);
  const ResidualField S0 = S_of_ansatz(p, t, grid, false);
  CHECK(S0.scaled);
  CHECK(S0.field.sup_abs() > 0.0);
  CHECK_THROWS_AS(S_of_ansatz(p, t, grid, true), DomainError);

  const auto coarse = make_grid(Axis::uniform(0.5, 1.5, 20), Axis::uniform(-0.5, 0.5, 20));
  CHECK_THROWS_AS(S_of_ansatz(p, t, coarse, false), ResolutionError);

  const auto rays = residual_rays(p, t, 10.0, 5, 4);
  REQUIRE(rays.size() == 20);
  const Point c = p.xi(t);
  CHECK(std::hypot(rays[4].r - c.r, rays[4].z - c.z) == doctest::Approx(10.0 * p.lam(t)));
}

TEST_CASE("residual envelope, gradient branches and moments") {
  RingParams p = lambda0_ring();
  std::vector<double> times;
  for (double tau : {1e-2, 1e-3, 1e-4}) times.push_back(p.T - tau);
  const auto run = solve_phi_lambda(p, correction_grid(p, times.back()), times);
  const ResidualEnvelope env = residual_envelope(p, run, times, 24, 4);
  REQUIRE(env.C.size() == 3);
  for (double C : env.C) CHECK(std::isfinite(C));
  CHECK(env.spread() <= 5.0);

  const double t = times[1];
  const ResidualMoments m = residual_moments(p, t, run, 12, 16);
  CHECK(m.abs0 > 0.0);
  CHECK(std::abs(m.m0) < m.abs0);
  CHECK(std::abs(m.m1z) < 1e-8 * m.abs0 * p.cutoff_scale(t));
}

TEST_SUITE("spec invariants") {
TEST_CASE("expansion and quadrature gradients give the same residual within half the envelope") {
  RingParams p = lambda0_ring();
  std::vector<double> times;
  for (double tau : {1e-2, 1e-3, 1e-4}) times.push_back(p.T - tau);
  const auto run = solve_phi_lambda(p, correction_grid(p, times.back()), times);
  const ResidualEnvelope env = residual_envelope(p, run, times, 24, 4);
  ResidualOptions ex;
  ex.grad = GradSource::expansion;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const ResidualEvaluator q(p, t, {}, &run), e(p, t, ex, &run);
    const double lam = p.lam(t);
    const double decay = std::exp(-std::sqrt(2.0 * std::abs(std::log(p.T - t))));
    const Point c = p.xi(t);
    double worst = 0.0;
    for (const Point& x : residual_rays(p, t, 1.9 * p.cutoff_scale(t) / lam, 16, 4)) {
      const double y = std::hypot(x.r - c.r, x.z - c.z) / lam;
      worst = std::max(worst, std::abs(q.S(x) - e.S(x)) * (1.0 + std::pow(y, 6)) / std::log(2.0 + y) / decay);
    }
    CHECK(worst <= 0.5 * env.C[k]);
  }
}
}

TEST_CASE("operator L: kernel, conservation and convergence") {
  auto g = std::make_shared<const RadialGrid>(RadialGrid::geometric(0.01, 1.05, 30.0));
  const RadialProfile zero = apply_L(sample(g, [](double) { return 0.0; }));
  for (double v : zero.values) CHECK(v == 0.0);

  for (auto f : {+[](double s) { return std::exp(-s * s); }, +[](double s) { return (1.0 - s) * std::exp(-s); },
                 +[](double s) { return U_profile(s) * std::cos(s); }}) {
    const RadialProfile phi = sample(g, f);
    RadialProfile absphi = phi;
    for (double& v : absphi.values) v = std::abs(v);
    CHECK(std::abs(fv_integral(apply_L(phi))) <= 1e-8 * fv_integral(absphi));
  }

  const double e1 = sup_L_Z0(200), e2 = sup_L_Z0(400), e3 = sup_L_Z0(800);
  CHECK(std::log2(e1 / e2) >= 1.8);
  CHECK(std::log2(e2 / e3) >= 1.8);

  const auto pg = make_plane_grid(Axis::uniform(-6.0, 6.0, 40), Axis::uniform(-6.0, 6.0, 40));
  const ScalarField2D phi = sample(pg, [](double a, double b) { return (1.0 + a) * std::exp(-a * a - 2 * b * b); });
  ScalarField2D absphi = phi;
  for (double& v : absphi.values) v = std::abs(v);
  CHECK(std::abs(integrate_plane(apply_L(phi))) <= 1e-8 * integrate_plane(absphi));
}

TEST_CASE("operator B: Euler identity and zero mean") {
  auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(4.0, 400));
  const RadialProfile inv = sample(g, [](double s) { return s > 0 ? 1.0 / (s * s) : 0.0; });
  const RadialProfile Binv = apply_B(inv, 3.0);
  const auto& x = g->nodes();
  for (std::size_t k = 100; k + 1 < x.size(); k += 50) CHECK(std::abs(Binv.values[k]) < 1e-3 * 3.0 * inv.values[k]);

  const auto off = make_plane_grid(Axis::uniform(1.0, 3.0, 200), Axis::uniform(1.0, 3.0, 200));
  const ScalarField2D f = sample(off, [](double a, double b) { return 1.0 / (a * a + b * b); });
  const ScalarField2D Bf = apply_B(f, 2.0);
  for (std::size_t j = 1; j + 1 < off->nz(); j += 37)
    for (std::size_t i = 1; i + 1 < off->nr(); i += 41) CHECK(std::abs(Bf.at(i, j)) < 1e-3 * f.at(i, j));

  const auto pg = make_plane_grid(Axis::uniform(-8.0, 8.0, 160), Axis::uniform(-8.0, 8.0, 160));
  const ScalarField2D gauss = sample(pg, [](double a, double b) { return std::exp(-(a * a + b * b)); });
  const ScalarField2D Bg = apply_B(gauss, 1.5);
  ScalarField2D absB = Bg;
  for (double& v : absB.values) v = std::abs(v);
  CHECK(std::abs(integrate_plane(Bg)) < 1e-3 * integrate_plane(absB));

  BOptions cut;
  cut.with_cutoff = true;
  cut.cutoff_radius = 2.0;
  const RadialProfile one = sample(g, [](double) { return 1.0; });
  const RadialProfile Bc = apply_B(one, 1.0, cut);
  CHECK(Bc.values[0] == doctest::Approx(2.0));
  CHECK(std::abs(Bc.values.back()) < 1e-12);
}

TEST_CASE("outer barrier components") {
  RingParams p = lambda0_ring();
  const OuterBarrier bar = OuterBarrier::defaults(p);
  CHECK(bar.M == doctest::Approx(20.0));
  const double t = p.T - 1e-3;
  const Point c = p.xi(t);
  for (double d : {0.0, 1e-3, 0.1, 1.0, 5.0}) {
    const auto v = outer_barrier_eval(bar, p, c.r + d, c.z, t);
    for (double x : v) CHECK(x >= 0.0);
    CHECK(v[2] > 0.0);
    CHECK(outer_source_weight(bar, p, c.r + d, c.z, t) > 0.0);
  }
  const double tau = p.T - t;
  const auto at_center = outer_barrier_eval(bar, p, c.r, c.z, t);
  CHECK(at_center[0] == doctest::Approx(std::exp(-std::sqrt(2.0 * std::abs(std::log(tau)))) / tau));
  const auto a = outer_barrier_eval(bar, p, c.r + 0.5, c.z, t);
  const auto b = outer_barrier_eval(bar, p, c.r - 0.5, c.z + 1.0, t);
  CHECK(a[1] == doctest::Approx(b[1]));
  CHECK_THROWS_AS(outer_barrier_eval(bar, p, 0.0, 0.0, t), DomainError);
  CHECK_THROWS_AS(outer_barrier_eval(bar, p, 1.0, 0.0, p.T), DomainError);

  const BarrierReport rep = barrier_check(p, bar, 4, 50);
  CHECK(rep.samples.size() == 200);
  CHECK(rep.barrier.c0 == 1.0);
  CHECK(rep.fraction() >= 0.99);
}
