#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ringburst/config.hpp"
#include "ringburst/elliptic.hpp"
#include "ringburst/field.hpp"
#include "ringburst/potential.hpp"
#include "ringburst/profiles.hpp"
#include "ringburst/residual.hpp"
#include "ringburst/simulator.hpp"
#include "ringburst/snapshot.hpp"
#include "ringburst/verify.hpp"

using namespace ringburst;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome elliptic_series() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = std::pow(10.0, -8.0 + 6.0 * i / 199.0);
    const EllipticValue s = series_K_near1_c(x);
    const double diff = std::abs(s.value - K_from_complement(std::sqrt(x)));
    worst = std::max(worst, diff / *s.remainder_bound);
    if (!(diff <= *s.remainder_bound)) ++bad;
  }
  const double two = series_K_near1(std::sqrt(1.0 - 1e-2)).value;
  const double agm = agm_K(1.0 / std::sqrt(2.0)).value;
  const double dt = seconds_since(t0);
  Outcome o;
  o.pass = bad == 0 && std::abs(two - 3.6956017) <= 1e-6 && std::abs(agm - 1.8540746773) <= 1e-9 && dt < 1.0;
  o.detail = "violations " + std::to_string(bad) + "/200, worst diff/bound " + fmt17(worst) + ", two-term " +
             fmt17(two) + ", K(1/sqrt2) " + fmt17(agm) + ", " + fmt17(dt) + " s";
  return o;
}

Outcome imaginary_modulus() {
  double worst = 0.0;
  for (double a : {0.1, 1.0, 10.0, 100.0}) {
    const double ref = oracle::imt_quad(a);
    worst = std::max(worst, std::abs(imaginary_modulus_integral(a) - ref) / ref);
  }
  return {worst <= 1e-10, "max relative error " + fmt17(worst)};
}

Outcome ball_potential() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridPtr g = make_grid(Axis::stretched(0.0, 1.3, 1.0, 200, 2.0), Axis::stretched(-1.3, 1.3, 0.0, 400, 0.0));
  const ScalarField2D f = sample(g, [](double r, double z) { return r * r + z * z <= 1.0 ? 1.0 : 0.0; });
  const double R = support_radius(f);
  const std::vector<Point> targets{{0.0, 0.0}, {10.0 * R, 0.0}, {6.0 * R, 8.0 * R}, {8.0 * R, -6.0 * R}};
  const KernelCache cache(g, targets);
  std::vector<double> v;
  cache.apply(f.values, v);
  const double M = integrate_cyl(f);
  double far = 0.0;
  for (std::size_t k = 1; k < targets.size(); ++k) {
    const double mono = M / (4.0 * kPi * 10.0 * R);
    far = std::max(far, std::abs(v[k] - mono) / mono);
  }
  const double dt = seconds_since(t0);
  Outcome o;
  o.pass = std::abs(v[0] - 0.5) <= 1e-3 && far <= 0.02 && dt < 60.0;
  o.detail = "centre " + fmt17(v[0]) + ", far-field relative error " + fmt17(far) + ", " + fmt17(dt) + " s";
  return o;
}

Outcome radial_potential() {
  std::vector<double> res, err;
  for (std::size_t n : {2000, 4000, 8000}) {
    const auto rg = std::make_shared<const RadialGrid>(RadialGrid::uniform(200.0, n));
    const RadialProfile f = sample(rg, [](double s) { return U_profile(s); });
    const RadialProfile v = radial_potential_2d(f);
    const auto& x = rg->nodes();
    const double h = x[1] - x[0];
    double r = 0.0, e = 0.0;
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
      const double lap = (v.values[k + 1] - 2.0 * v.values[k] + v.values[k - 1]) / (h * h) +
                         (v.values[k + 1] - v.values[k - 1]) / (2.0 * h * x[k]);
      r = std::max(r, std::abs(-lap - f.values[k]));
    }
    const double c0 = v.values[0] - Gamma0(x[0]);
    for (std::size_t k = 0; k < x.size() && x[k] <= 10.0; ++k)
      e = std::max(e, std::abs(v.values[k] - Gamma0(x[k]) - c0));
    res.push_back(r);
    err.push_back(e);
  }
  const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
  Outcome o;
  o.pass = o1 >= 1.8 && o2 >= 1.8 && err.back() <= res.back();
  o.detail = "residual orders " + fmt17(o1) + ", " + fmt17(o2) + "; |result - Gamma0 - c| " + fmt17(err.back()) +
             " vs residual " + fmt17(res.back());
  return o;
}

Outcome from_report(const VerifyReport& r) { return {r.passed, r.detail}; }

double sup_L_Z0(std::size_t n) {
  auto g = std::make_shared<const RadialGrid>(RadialGrid::uniform(20.0, n));
  const RadialProfile L = apply_L(sample(g, [](double s) { return Z0(s); }));
  double m = 0.0;
  for (double v : L.values) m = std::max(m, std::abs(v));
  return m;
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

Outcome operator_L() {
  const double e1 = sup_L_Z0(200), e2 = sup_L_Z0(400), e3 = sup_L_Z0(800);
  const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
  auto g = std::make_shared<const RadialGrid>(RadialGrid::geometric(0.01, 1.05, 30.0));
  double worst = 0.0;
  for (auto fn : {+[](double s) { return std::exp(-s * s); }, +[](double s) { return (1.0 - s) * std::exp(-s); },
                  +[](double s) { return U_profile(s) * std::cos(s); }}) {
    const RadialProfile phi = sample(g, fn);
    RadialProfile absphi = phi;
    for (double& v : absphi.values) v = std::abs(v);
    worst = std::max(worst, std::abs(fv_integral(apply_L(phi))) / fv_integral(absphi));
  }
  const auto pg = make_plane_grid(Axis::uniform(-6.0, 6.0, 40), Axis::uniform(-6.0, 6.0, 40));
  const ScalarField2D phi = sample(pg, [](double a, double b) { return (1.0 + a) * std::exp(-a * a - 2 * b * b); });
  ScalarField2D absphi = phi;
  for (double& v : absphi.values) v = std::abs(v);
  worst = std::max(worst, std::abs(integrate_plane(apply_L(phi))) / integrate_plane(absphi));
  Outcome o;
  o.pass = o1 >= 1.8 && o2 >= 1.8 && worst <= 1e-8;
  o.detail = "sup|L[Z0]| orders " + fmt17(o1) + ", " + fmt17(o2) + "; max |int L|/|phi|_1 " + fmt17(worst);
  return o;
}

Outcome conservation() {
  SimConfig c;
  c.max_steps = 10000;
  c.output_every = 1000;
  const RunResult r = run(c);
  Outcome o;
  o.pass = r.steps == 10000 && r.max_mass_drift <= 1e-10 && r.min_u >= 0.0;
  o.detail = std::to_string(r.steps) + " steps (" + to_string(r.event) + "), max relative mass drift per step " +
             fmt17(r.max_mass_drift) + ", min u " + fmt17(r.min_u);
  return o;
}

Outcome phenomenology() {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig c;
  c.output_every = 10;
  const RunResult r = run(c);
  const BlowupReport b = blowup_report(r);
  const double dt = seconds_since(t0);
  return {b.passed && dt <= 600.0, b.detail + ", " + fmt17(dt) + " s"};
}

Outcome scaling() {
  SimConfig c;
  c.t_end = 2e-4;
  c.output_every = 50;
  const ScalingReport s = scaling_check(c, 2.0);
  Outcome o;
  o.pass = s.passed;
  o.detail = "max relative difference " + fmt17(s.max_rel_diff) + " vs self-convergence " +
             fmt17(s.self_convergence) + " over " + std::to_string(s.compared_times) + " times, mass ratio " +
             fmt17(s.mass_ratio);
  return o;
}

}  // namespace

int main() {
  const RunConfig cfg;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"elliptic series vs AGM", elliptic_series},
      {"imaginary-modulus identity", imaginary_modulus},
      {"axisymmetric potential ball test", ball_potential},
      {"2D radial potential", radial_potential},
      {"value expansion inner band", [&] { return from_report(verify_expansion_v0(cfg)); }},
      {"gradient expansion constant", [&] { return from_report(verify_grad_v0(cfg)); }},
      {"correction envelope and dt order", [&] { return from_report(verify_phi_lambda(cfg)); }},
      {"residual envelope", [&] { return from_report(verify_residual_envelope(cfg)); }},
      {"residual moments", [&] { return from_report(verify_moments(cfg)); }},
      {"operator L", operator_L},
      {"simulator conservation and positivity", conservation},
      {"blow-up phenomenology", phenomenology},
      {"outer barrier", [&] { return from_report(verify_barrier(cfg)); }},
      {"scaling symmetry", scaling},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s %s (%s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
