#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ringburst/errors.hpp"
#include "ringburst/profiles.hpp"
#include "ringburst/simulator.hpp"

using namespace ringburst;

namespace {

constexpr double kPi = 3.14159265358979323846;

SimConfig small_ring(double alpha = 1.0, double lambda = 0.1) {
  SimConfig c;
  c.grid = {0.4, 1.6, -0.6, 0.6, 0.01, 1.3, 0.1};
  c.rings = {RingInit{{1.0, 0.0}, lambda, alpha, 0.25}};
  c.output_every = 10;
  c.t_end = 1.0;
  return c;
}

double heat_kernel(double r, double z, double t) {
  return std::pow(4.0 * kPi * t, -1.5) * std::exp(-(r * r + z * z) / (4.0 * t));
}

// Relative sup error of the axisymmetric heat flow of a Gaussian from t = 0.05 to 0.1.
double diffusion_error(std::size_t n) {
  SimConfig c;
  c.rings.clear();
  c.chemotaxis = false;
  c.t_end = 0.1;
  c.output_every = 1000;
  const GridPtr g = make_grid(Axis::uniform(0.0, 2.5, n), Axis::uniform(-2.5, 2.5, 2 * n));
  const Simulator sim(c, g);
  SimState s = sim.from_density(sample(g, [](double r, double z) { return heat_kernel(r, z, 0.05); }));
  s.t = 0.0;
  while (!s.terminal()) s = sim.step(s);
  double err = 0.0, sup = 0.0;
  for (std::size_t j = 0; j < g->nz(); ++j)
    for (std::size_t i = 0; i < g->nr(); ++i) {
      const double exact = heat_kernel(g->r().nodes()[i], g->z().nodes()[j], 0.15);
      err = std::max(err, std::abs(s.u.at(i, j) - exact));
      sup = std::max(sup, exact);
    }
  return err / sup;
}

RateSeries synthetic(double T, const std::vector<double>& times, double (*sup)(double, double)) {
  RateSeries s;
  for (double t : times) {
    RateRow r;
    r.t = t;
    r.sup_u = sup(t, T);
    r.lambda_est = std::sqrt(8.0 / r.sup_u);
    s.rows.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("simulator grid and configuration checks") {
  SimConfig c = small_ring();
  const GridPtr g = make_sim_grid(c.grid, c.rings);
  const auto& ze = g->z().edges();
  for (std::size_t k = 0; k < ze.size(); ++k) CHECK(ze[k] == -ze[ze.size() - 1 - k]);
  const auto& rw = g->r().widths();
  CHECK(*std::min_element(rw.begin(), rw.end()) == doctest::Approx(0.01).epsilon(0.2));
  CHECK(*std::max_element(rw.begin(), rw.end()) <= 0.1 * 1.05);

  SimConfig bad = c;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.cap_factor = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.rings[0].cutoff = 0.5;
  CHECK_THROWS_AS(Simulator(bad).init(), CoverageError);
}

TEST_CASE("initial data") {
  SimConfig c = small_ring(1.5, 0.08);
  const Simulator sim(c);
  const SimState s = sim.init();
  CHECK(sim.initial_sup() == doctest::Approx(8.0 * 1.5 / (0.08 * 0.08)));
  double sup = 0.0;
  for (double v : s.u.values) sup = std::max(sup, v);
  CHECK(sup <= sim.initial_sup());
  CHECK(sup >= 0.9 * sim.initial_sup());

  SimConfig two = c;
  two.grid = {0.2, 1.8, -0.8, 0.8, 0.01, 1.3, 0.1};
  two.rings = {RingInit{{0.7, 0.3}, 0.05, 1.0, 0.1}, RingInit{{1.3, -0.3}, 0.04, 2.0, 0.12}};
  const GridPtr g = make_sim_grid(two.grid, two.rings);
  SimConfig a = two, b = two;
  a.rings = {two.rings[0]};
  b.rings = {two.rings[1]};
  const double m2 = sim_mass(Simulator(two, g).init().u);
  const double ma = sim_mass(Simulator(a, g).init().u), mb = sim_mass(Simulator(b, g).init().u);
  CHECK(m2 == doctest::Approx(ma + mb).epsilon(1e-13));

  const double M = sim_mass(s.u);
  const double R = 1.0 + 2.0 * 0.25;
  for (Point x : {Point{10.0 * R, 0.0}, Point{6.0 * R, 8.0 * R}}) {
    const double v = axisym_potential_at(s.u, x).v;
    CHECK(v == doctest::Approx(M / (4.0 * kPi * std::hypot(x.r, x.z))).epsilon(0.02));
  }
}

TEST_CASE("zero data is a fixed point") {
  SimConfig c = small_ring();
  c.rings.clear();
  c.max_steps = 20;
  c.output_every = 5;
  const Simulator sim(c, make_sim_grid(c.grid, {RingInit{}}));
  const RunResult r = run(sim, sim.init());
  CHECK(r.event == SimEvent::max_steps);
  for (const RateRow& row : r.series.rows) {
    CHECK(row.sup_u == 0.0);
    CHECK(row.mass == 0.0);
  }
  for (double v : r.final_state.u.values) CHECK(v == 0.0);
}

TEST_CASE("pure diffusion conserves mass and follows the heat kernel") {
  const double e1 = diffusion_error(25), e2 = diffusion_error(50);
  CHECK(e2 < 0.02);
  CHECK(e1 / e2 > 3.0);

  SimConfig c = small_ring();
  c.chemotaxis = false;
  c.max_steps = 200;
  const RunResult r = run(c);
  CHECK(r.max_mass_drift <= 1e-12);
  CHECK(r.min_u >= 0.0);
  CHECK(r.series.rows.back().sup_u < r.series.rows.front().sup_u);
}

TEST_CASE("ring dynamics: aggregation, conservation, positivity, symmetry") {
  SimConfig c = small_ring(1.5, 0.1);
  c.max_steps = 100;
  c.output_every = 1;
  const RunResult r = run(c);
  REQUIRE(r.series.rows.size() == 101);
  for (std::size_t k = 1; k < r.series.rows.size(); ++k)
    CHECK(r.series.rows[k].sup_u > r.series.rows[k - 1].sup_u);
  CHECK(r.max_mass_drift <= 1e-10);
  CHECK(r.min_u >= 0.0);

  const ScalarField2D& u = r.final_state.u;
  const Grid2D& g = *u.grid;
  double sup = 0.0, asym = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i) {
      sup = std::max(sup, u.at(i, j));
      asym = std::max(asym, std::abs(u.at(i, j) - u.at(i, g.nz() - 1 - j)));
    }
  CHECK(asym <= 1e-12 * sup);

  SimConfig full = c;
  full.potential = PotentialMode::full_kernel;
  full.max_steps = 3;
  SimConfig cached = c;
  cached.max_steps = 3;
  const RunResult a = run(full), b = run(cached);
  for (std::size_t k = 0; k < a.final_state.u.values.size(); ++k)
    CHECK(a.final_state.u.values[k] == doctest::Approx(b.final_state.u.values[k]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("small mass spreads out") {
  SimConfig c = small_ring(0.05, 0.1);
  c.max_steps = 400;
  const RunResult r = run(c);
  const auto& rows = r.series.rows;
  for (std::size_t k = rows.size() / 2; k + 1 < rows.size(); ++k) CHECK(rows[k + 1].sup_u < rows[k].sup_u);
}

TEST_CASE("supercritical ring reaches the cap") {
  SimConfig c = small_ring(1.5, 0.1);
  c.grid.h_min = 0.004;
  c.cap_factor = 10.0;
  const RunResult r = run(c);
  CHECK(r.event == SimEvent::cap);
  CHECK(r.min_u >= 0.0);
  const auto lam = extract_lambda(r.series);
  CHECK(lam.back() < 0.5 * lam.front());
  REQUIRE(r.series.T_star.has_value());
  CHECK(*r.series.T_star > r.series.rows.back().t);
  CHECK(r.series.csv().rfind("t,sup_u,mass,lambda_est,typeII\n", 0) == 0);
}

TEST_CASE("rate extraction and classification on synthetic series") {
  const double T = 10.0;
  std::vector<double> times;
  for (int k = 0; k <= 400; ++k) times.push_back(T - std::pow(10.0, -1.0 * k / 400.0));
  const RateSeries lam0 = synthetic(T, times, [](double t, double T) {
    const double l = lambda0(t, T).lambda;
    return 8.0 / (l * l);
  });
  const auto est = extract_lambda(lam0);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(est[k] == doctest::Approx(lambda0(times[k], T).lambda).epsilon(1e-12));
  const Classification c2 = classify(lam0, T);
  CHECK(c2.type == BlowupType::type_II_like);
  CHECK(c2.tail_rows >= 10);

  const RateSeries type1 = synthetic(T, times, [](double t, double T) { return 3.0 / (T - t); });
  const Classification c1 = classify(type1, T);
  CHECK(c1.type == BlowupType::type_I_like);
  CHECK(c1.growth == doctest::Approx(1.0));
  CHECK(estimate_blowup_time(type1) == doctest::Approx(T).epsilon(1e-9));

  const SlopeFit f = lambda_slope(type1, T, 0.1 * (1.0 - 1e-9), 1.0);
  CHECK(f.slope == doctest::Approx(0.5));
  CHECK(f.decades == doctest::Approx(1.0).epsilon(1e-6));

  RateSeries few = type1;
  few.rows.resize(5);
  CHECK_THROWS_AS(classify(few, T), InsufficientData);
}

TEST_CASE("scaling symmetry") {
  SimConfig c = small_ring(1.2, 0.1);
  c.grid.h_min = 0.01;
  c.t_end = 5e-4;
  c.output_every = 20;
  const ScalingReport one = scaling_check(c, 1.0);
  CHECK(one.bitwise_identical);
  CHECK(one.max_rel_diff == 0.0);
  const ScalingReport two = scaling_check(c, 2.0);
  CHECK(two.mass_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.compared_times > 2);
  CHECK(two.passed);
}
