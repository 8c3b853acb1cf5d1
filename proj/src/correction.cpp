#include "ringburst/correction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringburst/errors.hpp"

namespace ringburst {

namespace {

constexpr double kPi = std::numbers::pi;

double decay_factor(double tau) { return std::exp(-std::sqrt(2.0 * std::abs(std::log(tau)))); }

// Solves a tridiagonal system in place (Thomas algorithm); b is the diagonal.
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
            std::vector<double>& d) {
  const std::size_t n = b.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double m = a[k] / b[k - 1];
    b[k] -= m * c[k - 1];
    d[k] -= m * d[k - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) d[k] = (d[k] - c[k] * d[k + 1]) / b[k];
}

}  // namespace

void radial_derivatives(const std::vector<double>& x, const std::vector<double>& v,
                       std::vector<double>& d1, std::vector<double>& d2) {
  const std::size_t n = x.size();
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  d2[0] = 2.0 * (v[1] - v[0]) / (x[1] * x[1]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double hm = x[k] - x[k - 1], hp = x[k + 1] - x[k];
    const double sm = (v[k] - v[k - 1]) / hm, sp = (v[k + 1] - v[k]) / hp;
    d1[k] = (hm * sp + hp * sm) / (hm + hp);
    d2[k] = 2.0 * (sp - sm) / (hm + hp);
  }
  const std::size_t e = n - 1;
  d1[e] = (v[e] - v[e - 1]) / (x[e] - x[e - 1]);
  d2[e] = d2[e - 1];
}


double CorrectionOptions::start(double T) const { return -(eps_T > 0.0 ? eps_T : std::sqrt(T)); }

double correction_source(double rho, double t, const RingParams& p) {
  const double sigma = p.cutoff_scale(t);
  const double sw = rho / sigma;
  if (sw >= 2.0) return 0.0;
  const double lam = p.lam(t);
  const double lam_dot = p.lam_dot(t);
  const double sy = rho / lam;
  const double tau = p.T - t;
  const Jet chi = cutoff_chi0_jet(sw);
  const double U = U_profile(sy);
  double E = lam_dot / (lam * lam * lam) * Z0(sy) * chi.v;
  if (sw > 1.0) {
    const double l2 = lam * lam;
    E -= U * chi.d1 * sw / (2.0 * l2 * tau);
    E += 2.0 / (l2 * lam * sigma) * chi.d1 * U_prime(sy);
    E += (chi.d2 + chi.d1 / sw) * U / (sigma * sigma * l2);
    // grad v0 replaced by its inner expansion alpha grad Gamma0 (alpha cancels).
    E -= U * Gamma0_prime(sy) * chi.d1 / (l2 * lam * sigma);
  }
  return E;
}

RadialGridPtr correction_grid(const RingParams& p, double t_last, const CorrectionOptions& opt) {
  const double eps = -opt.start(p.T);
  const double rho_max = opt.rho_max_factor * std::sqrt(eps);
  const double h0 = 0.0125 * p.lam(t_last);
  return std::make_shared<const RadialGrid>(RadialGrid::geometric(h0, 1.03, rho_max));
}

std::size_t CorrectionRun::index_of(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return k;
  throw DomainError("CorrectionRun: time not stored");
}

RadialJet CorrectionRun::jet(std::size_t k, double rho) const {
  const auto& x = grid->nodes();
  const auto& v = profiles.at(k).values;
  if (rho >= x.back()) return {0.0, 0.0, 0.0};
  rho = std::abs(rho);
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), rho) - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double s = (rho - x[i]) / h;
  // Cubic Hermite for the value, linear for the derivatives.
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  RadialJet j;
  j.v = h00 * v[i] + h10 * h * d1[k][i] + h01 * v[i + 1] + h11 * h * d1[k][i + 1];
  j.d1 = (1 - s) * d1[k][i] + s * d1[k][i + 1];
  j.d2 = (1 - s) * d2[k][i] + s * d2[k][i + 1];
  return j;
}

CorrectionRun solve_radial6(RadialGridPtr grid, const RadialSource& source, double t_start,
                            const std::vector<double>& times,
                            const std::function<double(double)>& max_dt) {
  const auto& x = grid->nodes();
  const std::size_t N = x.size();
  if (N < 3 || x[0] != 0.0) throw DomainError("solve_radial6: grid must start at 0 with >= 3 nodes");
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() <= t_start))
    throw DomainError("solve_radial6: times must ascend after t_start");
  const std::size_t n = N - 1;  // unknowns; the last node carries phi = 0
  std::vector<double> flux(n), vol(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = 0.5 * (x[k] + x[k + 1]);
    flux[k] = std::pow(m, 5) / (x[k + 1] - x[k]);
    const double lo = k == 0 ? 0.0 : 0.5 * (x[k - 1] + x[k]);
    vol[k] = (std::pow(m, 6) - std::pow(lo, 6)) / 6.0;
  }
  CorrectionRun run;
  run.grid = grid;
  run.t_start = t_start;
  std::vector<double> phi(N, 0.0), a(n), b(n), c(n), d(n);
  double t = t_start;
  for (double t_out : times) {
    while (t < t_out) {
      double dt = std::min(max_dt(t), t_out - t);
      if (t_out - (t + dt) < 1e-9 * dt) dt = t_out - t;
      const double tn = t + dt;
      for (std::size_t k = 0; k < n; ++k) {
        const double fl = k == 0 ? 0.0 : flux[k - 1];
        const double fr = flux[k];
        const double r = dt / vol[k];
        a[k] = -r * fl;
        c[k] = k + 1 < n ? -r * fr : 0.0;
        b[k] = 1.0 + r * (fl + fr);
        d[k] = phi[k] + dt * source(x[k], tn);
      }
      thomas(a, b, c, d);
      std::copy(d.begin(), d.end(), phi.begin());
      t = tn;
      ++run.steps;
    }
    run.times.push_back(t_out);
    run.profiles.emplace_back(grid, phi);
    double sup = 0.0;
    for (std::size_t k = 0; k < N; ++k) sup = std::max(sup, std::abs(source(x[k], t_out)));
    run.source_norms.push_back(sup);
    run.d1.emplace_back();
    run.d2.emplace_back();
    radial_derivatives(x, phi, run.d1.back(), run.d2.back());
  }
  return run;
}

CorrectionRun solve_phi_lambda(const RingParams& p, RadialGridPtr grid,
                               const std::vector<double>& times, const CorrectionOptions& opt) {
  const double h_core = grid->nodes()[1];
  for (double t : times) {
    if (p.lam(t) < opt.min_cells_per_lambda * h_core)
      throw ResolutionError("solve_phi_lambda: lambda spans fewer than the required grid cells");
  }
  const double t0 = opt.start(p.T);
  auto max_dt = [&](double t) { return std::min(opt.dt_max, opt.dt_factor * (p.T - t)); };
  return solve_radial6(grid, [&](double rho, double t) { return correction_source(rho, t, p); },
                       t0, times, max_dt);
}

double laplacian6(const CorrectionRun& run, std::size_t k, double rho) {
  const RadialJet j = run.jet(k, rho);
  return rho > 0.0 ? j.d2 + 5.0 * j.d1 / rho : 6.0 * j.d2;
}

ScalarField2D phi_lambda_field(const CorrectionRun& run, std::size_t k, const RingParams& p,
                               const GridPtr& grid) {
  const double t = run.times.at(k);
  const Point c = p.xi(t);
  const double w = 2.0 * p.cutoff_scale(t);
  return sample(grid, [&](double r, double z) {
    const double d = std::hypot(r - c.r, z - c.z);
    if (d >= 2.0 * w) return 0.0;
    return run.jet(k, d).v * cutoff_chi0(d / w);
  });
}

double EnvelopeFit::spread() const {
  if (C.empty()) return 0.0;
  const auto [mn, mx] = std::minmax_element(C.begin(), C.end());
  return *mx / *mn;
}

EnvelopeFit phi_envelope(const CorrectionRun& run, const RingParams& p) {
  EnvelopeFit fit;
  const auto& x = run.grid->nodes();
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double t = run.times[k];
    const double tau = p.T - t;
    const double lam = p.lam(t);
    const double e = decay_factor(tau);
    double C = 0.0;
    for (std::size_t i = 0; i < x.size() && x[i] <= std::sqrt(tau); ++i)
      C = std::max(C, std::abs(run.profiles[k].values[i]) * (lam * lam + x[i] * x[i]) / e);
    fit.times.push_back(t);
    fit.C.push_back(C);
  }
  return fit;
}

EnvelopeFit phi_grad_envelope(const CorrectionRun& run, const RingParams& p) {
  EnvelopeFit fit;
  const auto& x = run.grid->nodes();
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double t = run.times[k];
    const double tau = p.T - t;
    const double lam = p.lam(t);
    const double e = decay_factor(tau);
    double C = 0.0;
    for (std::size_t i = 1; i < x.size() && x[i] <= std::sqrt(tau); ++i) {
      const double q = lam * lam + x[i] * x[i];
      C = std::max(C, std::abs(run.d1[k][i]) * q * q / (x[i] * e));
    }
    fit.times.push_back(t);
    fit.C.push_back(C);
  }
  return fit;
}

GridPtr correction_field_grid(const RingParams& p, double t, double h_min_factor, double growth) {
  const Point c = p.xi(t);
  const double sigma = p.cutoff_scale(t);
  const double half = 4.0 * sigma * 1.15;
  const double hmin = h_min_factor * p.lam(t);
  const double hmax = std::max(hmin, 0.25 * sigma);
  return make_grid(Axis::graded(std::max(0.0, c.r - half), c.r + half, c.r, hmin, growth, hmax),
                   Axis::graded(c.z - half, c.z + half, c.z, hmin, growth, hmax));
}

PotentialResult psi_lambda(const CorrectionRun& run, std::size_t k, const RingParams& p,
                           const GridPtr& targets) {
  const auto g = correction_field_grid(p, run.times.at(k));
  return axisym_potential(phi_lambda_field(run, k, p, g), targets);
}

PsiEnvelope psi_envelope(const CorrectionRun& run, std::size_t k, const RingParams& p,
                         int n_radii) {
  const double t = run.times.at(k);
  const auto g = correction_field_grid(p, t);
  const ScalarField2D f = phi_lambda_field(run, k, p, g);
  const Point c = p.xi(t);
  const double tau = p.T - t;
  const double lam = p.lam(t);
  const double L = std::abs(std::log(tau));
  const double e = decay_factor(tau);
  const double split = std::sqrt(2.0 * p.delta * tau);
  const double lo = 0.5 * lam, hi = std::min(12.0 * p.cutoff_scale(t), 0.5 * c.r);
  PsiEnvelope out;
  for (int i = 0; i < n_radii; ++i) {
    const double d = lo * std::pow(hi / lo, double(i) / (n_radii - 1));
    for (double th : {0.0, 0.5 * kPi, kPi}) {
      const PointValue q = axisym_potential_at(f, {c.r + d * std::cos(th), c.z + d * std::sin(th)}, true);
      const double gmag = std::hypot(q.dr, q.dz);
      if (d <= split) {
        const double rh = d / lam;
        out.C_inner = std::max(out.C_inner, gmag / (e / lam * std::log1p(rh) / (1.0 + rh)));
      } else {
        out.C_outer = std::max(out.C_outer, gmag * d / (e * std::sqrt(L)));
      }
    }
  }
  return out;
}

}  // namespace ringburst
