#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ringburst/errors.hpp"
#include "ringburst/field.hpp"
#include "ringburst/profiles.hpp"
#include "ringburst/snapshot.hpp"

using namespace ringburst;
constexpr double kPi = std::numbers::pi;

TEST_CASE("axes") {
  const Axis u = Axis::uniform(1.0, 2.0, 10);
  CHECK(u.size() == 10);
  CHECK(u.nodes().front() == doctest::Approx(1.05));
  CHECK(u.locate(1.5) == 5);
  CHECK(u.locate(3.0) == -1);
  CHECK(u.nearest(1.149) == 1);

  const Axis g = Axis::graded(0.0, 2.0, 1.0, 1e-3, 1.1, 0.05);
  CHECK(g.lo() == 0.0);
  CHECK(g.hi() == 2.0);
  CHECK(g.nodes()[g.nearest(1.0)] == doctest::Approx(1.0).epsilon(1e-12));
  double wsum = 0.0;
  for (double w : g.widths()) {
    CHECK(w > 0.0);
    CHECK(w <= 0.05 * 1.5);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  const Axis s = Axis::stretched(-2.0, 2.0, 0.0, 400, 6.0);
  CHECK(s.size() == 400);
  CHECK(s.widths()[200] < s.widths()[0]);
  const Axis s0 = Axis::stretched(0.0, 2.0, 0.0, 200, 4.0);
  CHECK(s0.widths()[0] < s0.widths()[199]);
  CHECK_THROWS_AS(make_grid(Axis::uniform(-1.0, 1.0, 4), Axis::uniform(0.0, 1.0, 4)), DomainError);
}

TEST_CASE("integrate_plane and integrate_cyl") {
  const auto g = make_grid(Axis::uniform(1.0, 2.0, 7), Axis::uniform(0.0, 1.0, 5));
  CHECK(integrate_plane(ScalarField2D(g)) == 0.0);
  CHECK(integrate_plane(sample(g, [](double, double) { return 1.0; })) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // midpoint rule is exact for bilinear integrands
  CHECK(integrate_plane(sample(g, [](double r, double z) { return r * z + 3 * r - z; })) ==
        doctest::Approx(0.75 + 4.5 - 0.5).epsilon(1e-14));
  CHECK(integrate_cyl(ScalarField2D(g)) == 0.0);
  CHECK(integrate_cyl(sample(g, [](double, double) { return 1.0; })) ==
        doctest::Approx(2 * kPi * 1.5).epsilon(1e-14));

  const auto b = make_grid(Axis::uniform(0.0, 1.5, 600), Axis::uniform(-1.5, 1.5, 1200));
  const auto ball = sample(b, [](double r, double z) { return r * r + z * z <= 1.0 ? 1.0 : 0.0; });
  CHECK(integrate_cyl(ball) == doctest::Approx(4 * kPi / 3).epsilon(1e-3));
}

TEST_CASE("integrate_plane of a rescaled U") {
  const double lam = 0.05, R = 40 * lam;
  const auto g = make_grid(Axis::graded(0.0, 3.0, 1.0, lam / 8, 1.05, lam),
                           Axis::graded(-2.0, 2.0, 0.0, lam / 8, 1.05, lam));
  auto f = sample(g, [&](double r, double z) {
    const double d = std::hypot(r - 1.0, z);
    return U_profile(d / lam) / (lam * lam) * cutoff_chi0(d / R);
  });
  const double ref = oracle::radial_mass(
      [&](double s) { return U_profile(s) * cutoff_chi0(s * lam / R); }, 2 * R / lam);
  CHECK(integrate_plane(f) == doctest::Approx(ref).epsilon(2e-3));
  CHECK(ref == doctest::Approx(8 * kPi).epsilon(2e-3));
}

TEST_CASE("moments") {
  const auto g = make_grid(Axis::uniform(0.5, 1.5, 50), Axis::uniform(-1.0, 1.0, 100));
  auto f = sample(g, [](double r, double z) { return std::exp(-((r - 1) * (r - 1) + z * z) * 20); });
  const auto m = moments(f, {1.0, 0.0});
  CHECK(std::abs(m.m1_1) < 1e-14);
  CHECK(std::abs(m.m1_2) < 1e-14);
  CHECK(m.m0 > 0.0);

  const auto w2 = moments(make_W2());
  CHECK(std::abs(w2.m0) < 1e-10);
  CHECK(std::abs(w2.m2 - 1.0) < 1e-10);
  const auto w0 = moments(make_W0());
  CHECK(std::abs(w0.m0 - 1.0) < 1e-10);
  CHECK(std::abs(w0.m2) < 1e-10);
  const auto w1 = make_W1(1);
  double s = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < w1.grid->nz(); ++j)
    for (std::size_t i = 0; i < w1.grid->nr(); ++i) {
      s += w1.grid->weight(i, j) * w1.at(i, j) * w1.grid->r().nodes()[i];
      s2 += w1.grid->weight(i, j) * w1.at(i, j) * w1.grid->z().nodes()[j];
    }
  CHECK(std::abs(s - 1.0) < 1e-10);
  CHECK(std::abs(s2) < 1e-12);
  CHECK(std::abs(integrate_plane(w1)) < 1e-12);
  CHECK(W0_value(2.0) == 0.0);
  CHECK(W2_value(2.5) == 0.0);
}

TEST_CASE("W moments converge under refinement on trapezoid grids") {
  double prev = 0.0;
  for (int n : {20, 40, 80}) {
    auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(2.0, n));
    const double e = std::abs(moments(make_W2(g)).m2 - 1.0) + std::abs(moments(make_W2(g)).m0);
    if (prev > 0.0) CHECK(prev / e > 3.5);
    prev = e;
  }
}

TEST_CASE("U moments on a truncated domain") {
  auto g = std::make_shared<const RadialGrid>(RadialGrid::gauss_panels({0, 1, 2, 5, 10, 20, 50}, 20));
  const auto m = moments(sample(g, [](double s) { return U_profile(s); }));
  const double R = 50.0;
  CHECK(m.m0 == doctest::Approx(8 * kPi * R * R / (1 + R * R)).epsilon(1e-10));
  // int U |y|^2 over |y| < R equals 8 pi (ln(1+R^2) - R^2/(1+R^2))
  CHECK(m.m2 == doctest::Approx(8 * kPi * (std::log1p(R * R) - R * R / (1 + R * R))).epsilon(1e-10));
}

TEST_CASE("weighted_sup_norm") {
  const WeightedNormSpec spec{1.0, 2.0, 3.0, 0.5};
  const double tau = 50.0;
  auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(40.0, 400));
  auto env = sample(g, [&](double y) { return 1.0 / weighted_norm_weight(y, spec, tau); });
  CHECK(weighted_sup_norm(env, spec, tau) == doctest::Approx(1.0).epsilon(1e-14));
  auto two = env;
  for (auto& v : two.values) v *= -2.0;
  CHECK(weighted_sup_norm(two, spec, tau) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(weighted_sup_norm(RadialProfile(g), spec, tau) == 0.0);
  CHECK_THROWS_AS(weighted_sup_norm(env, spec, 2.0), DomainError);

  const auto pg = make_plane_grid(Axis::uniform(-5, 5, 50), Axis::uniform(-5, 5, 50));
  auto f2 = sample(pg, [&](double a, double b) {
    return 3.0 / weighted_norm_weight(std::hypot(a, b) / 0.5, spec, tau);
  });
  CHECK(weighted_sup_norm(f2, {0, 0}, 0.5, spec, tau) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("snapshot round trips") {
  const auto g = make_grid(Axis::graded(0.0, 2.0, 1.0, 0.01, 1.2, 0.2),
                           Axis::stretched(-1.0, 1.0, 0.0, 17, 3.0));
  auto f = sample(g, [](double r, double z) { return std::sin(13 * r) * std::exp(z) / 3.0; });
  const auto dir = std::filesystem::temp_directory_path() / "ringburst_snap_test";
  std::filesystem::create_directories(dir);
  const std::string bin = (dir / "f.bin").string();
  write_snapshot_bin(f, bin);
  const auto back = read_snapshot_bin(bin);
  CHECK(back.grid->same_as(*g));
  CHECK(back.values == f.values);

  const std::string csv = (dir / "f.csv").string();
  write_snapshot_csv(f, csv);
  const auto c = read_snapshot_csv(csv);
  CHECK(c.values == f.values);
  CHECK(c.grid->r().nodes() == g->r().nodes());
  CHECK(c.grid->z().nodes() == g->z().nodes());
  CHECK_THROWS_AS(read_snapshot_bin((dir / "missing.bin").string()), IoError);
  std::filesystem::remove_all(dir);
}
