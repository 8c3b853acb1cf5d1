#include "ringburst/residual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringburst/errors.hpp"
#include "ringburst/parallel.hpp"
#include "ringburst/potential.hpp"
#include "ringburst/quadrature.hpp"

namespace ringburst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGauss = 8;

struct GaussRule {
  double x[kGauss];
  double w[kGauss];
  GaussRule() { gauss_legendre(kGauss, x, w); }
};

const GaussRule& gauss() {
  static const GaussRule rule;
  return rule;
}

double decay_factor(double tau) { return std::exp(-std::sqrt(2.0 * std::abs(std::log(tau)))); }

template <class F>
double gauss_panel(F&& f, double a, double b) {
  const GaussRule& g = gauss();
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (int k = 0; k < kGauss; ++k) s += g.w[k] * f(c + h * g.x[k]);
  return s * h;
}

// Breaks 0, h0, h0 q, ... up to `hi` (inclusive).
std::vector<double> geometric_breaks(double h0, double q, double hi) {
  std::vector<double> b{0.0};
  double x = h0;
  while (x < hi) {
    b.push_back(x);
    x *= q;
  }
  b.push_back(hi);
  return b;
}

}  // namespace

ResidualEvaluator::ResidualEvaluator(const RingParams& p, double t, const ResidualOptions& opt,
                                     const CorrectionRun* run)
    : p_(p), t_(t), lam_(p.lam(t)), opt_(opt), run_(run) {
  if (!(lam_ > 0.0)) throw DomainError("residual: lambda must be positive");
  const double sigma = p.cutoff_scale(t);
  const Point c = p.xi(t);
  u0_.center_r = phi_.center_r = c.r;
  u0_.center_z = phi_.center_z = c.z;

  auto tabulate = [&](Radial& R, double hi, bool phi) {
    R.x = geometric_breaks(0.01 * lam_, 1.1, hi);
    R.m.assign(R.x.size(), 0.0);
    auto f = [&](double s) { return (phi ? phi_radial(s) : u0_radial(s)) * s; };
    for (std::size_t k = 1; k < R.x.size(); ++k) R.m[k] = R.m[k - 1] + gauss_panel(f, R.x[k - 1], R.x[k]);
  };
  tabulate(u0_, 2.0 * sigma, false);
  if (opt_.grad == GradSource::quadrature) u0_.field = ansatz_u0(p, t, ansatz_grid(p, t, opt_.source_grid));
  if (run_) {
    k_ = run_->index_of(t);
    tabulate(phi_, 4.0 * sigma, true);
    phi_.field = phi_lambda_field(*run_, k_, p, correction_field_grid(p, t));
  }
}

double ResidualEvaluator::u0_radial(double rho) const {
  const double sigma = p_.cutoff_scale(t_);
  return p_.alp(t_) / (lam_ * lam_) * U_profile(rho / lam_) * cutoff_chi0(rho / sigma);
}

double ResidualEvaluator::phi_radial(double rho) const {
  const double sigma = p_.cutoff_scale(t_);
  return run_->jet(k_, rho).v * cutoff_chi0(rho / (2.0 * sigma));
}

double ResidualEvaluator::radial_mass(const Radial& R, double rho, bool phi) const {
  if (rho >= R.x.back()) return R.m.back();
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(R.x.begin(), R.x.end(), rho) - R.x.begin()) - 1;
  auto f = [&](double s) { return (phi ? phi_radial(s) : u0_radial(s)) * s; };
  return R.m[k] + gauss_panel(f, R.x[k], rho);
}

std::array<double, 2> ResidualEvaluator::deferred_grad(const Radial& R, Point x, bool phi) const {
  const double er = x.r - R.center_r, ez = x.z - R.center_z;
  const double rho = std::hypot(er, ez);
  std::array<double, 2> g{0.0, 0.0};
  if (rho > 0.0) {
    const double c = -radial_mass(R, rho, phi) / (rho * rho);
    g = {c * er, c * ez};
  }
  const PointValue a = axisym_potential_at(R.field, x, true);
  const PointValue b = planar_potential_at(R.field, x, true);
  g[0] += a.dr - b.dr;
  g[1] += a.dz - b.dz;
  return g;
}

std::array<double, 2> ResidualEvaluator::grad_v(Point x) const {
  std::array<double, 2> g{0.0, 0.0};
  if (opt_.grad == GradSource::quadrature) {
    g = deferred_grad(u0_, x, false);
  } else {
    const GradExpansion e = grad_v0_expansion(x.r, x.z, t_, p_, opt_.expansion);
    g = {e.dr, e.dz};
  }
  if (run_) {
    const auto h = deferred_grad(phi_, x, true);
    g[0] += h[0];
    g[1] += h[1];
  }
  return g;
}

ResidualEvaluator::Terms ResidualEvaluator::terms(Point x) const {
  const double sigma = p_.cutoff_scale(t_);
  const double er = x.r - u0_.center_r, ez = x.z - u0_.center_z;
  const double rho = std::hypot(er, ez);
  Terms out;
  if (rho >= (run_ ? 4.0 : 2.0) * sigma) return out;
  const double lam = lam_, alpha = p_.alp(t_);
  const double lam_dot = p_.lam_dot(t_), alpha_dot = p_.alp_dot(t_);
  const Point xi_dot = p_.xi_dot();
  const double nr = rho > 0.0 ? er / rho : 0.0, nz = rho > 0.0 ? ez / rho : 0.0;
  const double rho_dot = -(nr * xi_dot.r + nz * xi_dot.z);
  const double sigma_dot = -0.5 * p_.delta / sigma;

  // Radial jet (value, d/drho, d2/drho2) and time derivative of u at fixed x.
  double g = 0.0, g1 = 0.0, g2 = 0.0, gt = 0.0;
  {
    const double s = rho / lam, w = rho / sigma;
    const Jet chi = cutoff_chi0_jet(w);
    if (chi.v != 0.0 || chi.d1 != 0.0) {
      const double a = alpha / (lam * lam);
      const double U = U_profile(s), U1 = U_prime(s), U2 = U_second(s);
      g += a * U * chi.v;
      g1 += a * (U1 / lam * chi.v + U * chi.d1 / sigma);
      g2 += a * (U2 / (lam * lam) * chi.v + 2.0 * U1 * chi.d1 / (lam * sigma) + U * chi.d2 / (sigma * sigma));
      const double s_dot = rho_dot / lam - rho * lam_dot / (lam * lam);
      const double w_dot = rho_dot / sigma - rho * sigma_dot / (sigma * sigma);
      gt += alpha_dot / (lam * lam) * U * chi.v - 2.0 * alpha * lam_dot / (lam * lam * lam) * U * chi.v +
            a * (U1 * s_dot * chi.v + U * chi.d1 * w_dot);
    }
  }
  if (run_) {
    const RadialJet J = run_->jet(k_, rho);
    const double h = 2.0 * sigma;
    const Jet ch = cutoff_chi0_jet(rho / h);
    g += J.v * ch.v;
    g1 += J.d1 * ch.v + J.v * ch.d1 / h;
    g2 += J.d2 * ch.v + 2.0 * J.d1 * ch.d1 / h + J.v * ch.d2 / (h * h);
    // phi6 solves phi_t = Delta_6 phi + E, so its time derivative is taken from the equation.
    const double lap6 = rho > 0.0 ? J.d2 + 5.0 * J.d1 / rho : 6.0 * J.d2;
    const double phi_t = lap6 + correction_source(rho, t_, p_);
    const double w_dot = rho_dot / h - rho * 2.0 * sigma_dot / (h * h);
    gt += (phi_t + J.d1 * rho_dot) * ch.v + J.v * ch.d1 * w_dot;
  }
  const double g1_over_rho = rho > 1e-9 * lam ? g1 / rho : g2;
  const auto gv = grad_v(x);
  out.dt = -gt;
  out.diffusion = g2 + g1_over_rho + g1 * nr / x.r;
  out.drift = -g1 * (nr * gv[0] + nz * gv[1]);
  out.reaction = g * g;
  if (opt_.scaled) {
    const double l4 = lam * lam * lam * lam;
    out.dt *= l4;
    out.diffusion *= l4;
    out.drift *= l4;
    out.reaction *= l4;
  }
  return out;
}

ResidualField S_of_ansatz(const RingParams& p, double t, const GridPtr& grid,
                          bool include_phi_lambda, const CorrectionRun* run,
                          const ResidualOptions& opt) {
  if (include_phi_lambda && !run) throw DomainError("S_of_ansatz: correction run required");
  const Grid2D& g = *grid;
  const double h_core = std::min(g.r().widths()[g.r().locate(p.xi(t).r) >= 0 ? g.r().locate(p.xi(t).r) : 0],
                                 g.z().widths()[g.z().locate(p.xi(t).z) >= 0 ? g.z().locate(p.xi(t).z) : 0]);
  if (p.lam(t) < 4.0 * h_core) throw ResolutionError("S_of_ansatz: grid does not resolve lambda");
  configure_threads();
  const ResidualEvaluator ev(p, t, opt, include_phi_lambda ? run : nullptr);
  ResidualField out{ScalarField2D(grid), t, p, opt.scaled};
  const long n = static_cast<long>(g.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long k = 0; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k) % g.nr();
    const std::size_t j = static_cast<std::size_t>(k) / g.nr();
    out.field.values[k] = ev.S({g.r().nodes()[i], g.z().nodes()[j]});
  }
  out.field.check_finite();
  return out;
}

std::vector<Point> residual_rays(const RingParams& p, double t, double y_max, int n_radii,
                                 int n_angles) {
  const Point c = p.xi(t);
  const double lam = p.lam(t);
  const double y0 = std::min(0.05, 0.5 * y_max);
  std::vector<Point> pts;
  for (int a = 0; a < n_angles; ++a) {
    const double th = 2.0 * kPi * a / n_angles;
    for (int i = 0; i < n_radii; ++i) {
      const double y = n_radii == 1 ? y_max : y0 * std::pow(y_max / y0, double(i) / (n_radii - 1));
      pts.push_back({c.r + lam * y * std::cos(th), c.z + lam * y * std::sin(th)});
    }
  }
  return pts;
}

double ResidualEnvelope::spread() const {
  if (C.empty()) return 0.0;
  const auto [mn, mx] = std::minmax_element(C.begin(), C.end());
  return *mx / *mn;
}

ResidualEnvelope residual_envelope(const RingParams& p, const CorrectionRun& run,
                                   const std::vector<double>& times, int n_radii, int n_angles,
                                   const ResidualOptions& opt_in) {
  configure_threads();
  ResidualOptions opt = opt_in;
  opt.scaled = true;
  ResidualEnvelope out;
  for (double t : times) {
    const ResidualEvaluator ev(p, t, opt, &run);
    const double lam = p.lam(t);
    const double y_max = 0.999 * 2.0 * p.cutoff_scale(t) / lam;
    const auto pts = residual_rays(p, t, y_max, n_radii, n_angles);
    const Point c = p.xi(t);
    const double e = decay_factor(p.T - t);
    std::vector<double> ratio(pts.size());
    const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) {
      const double y = std::hypot(pts[k].r - c.r, pts[k].z - c.z) / lam;
      ratio[k] = std::abs(ev.S(pts[k])) * (1.0 + std::pow(y, 6)) / std::log(2.0 + y) / e;
    }
    const auto it = std::max_element(ratio.begin(), ratio.end());
    const std::size_t kmax = static_cast<std::size_t>(it - ratio.begin());
    out.times.push_back(t);
    out.C.push_back(*it);
    out.y_at_sup.push_back(std::hypot(pts[kmax].r - c.r, pts[kmax].z - c.z) / lam);
  }
  return out;
}

ResidualMoments residual_moments(const RingParams& p, double t, const CorrectionRun& run, int n_panels,
                                 int n_angles, const ResidualOptions& opt_in) {
  configure_threads();
  ResidualOptions opt = opt_in;
  opt.scaled = false;
  const ResidualEvaluator ev(p, t, opt, &run);
  const double lam = p.lam(t);
  const double R = 4.0 * p.cutoff_scale(t);
  const Point c = p.xi_T;
  std::vector<double> breaks{0.0};
  const double h0 = 0.05 * lam;
  for (int k = 0; k < n_panels; ++k) breaks.push_back(h0 * std::pow(R / h0, double(k) / (n_panels - 1)));
  const GaussRule& gr = gauss();
  struct Node {
    Point x;
    double w;
  };
  std::vector<Node> nodes;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    for (int q = 0; q < kGauss; ++q) {
      const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gr.x[q];
      const double wr = 0.5 * (hi - lo) * gr.w[q] * rho * 2.0 * kPi / n_angles;
      for (int a = 0; a < n_angles; ++a) {
        const double th = 2.0 * kPi * (a + 0.5) / n_angles;
        nodes.push_back({{c.r + rho * std::cos(th), c.z + rho * std::sin(th)}, wr});
      }
    }
  }
  std::vector<double> S(nodes.size());
  const long n = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long k = 0; k < n; ++k) S[k] = ev.S(nodes[k].x) * chi_tilde(p, nodes[k].x.r, nodes[k].x.z, t);
  ResidualMoments m;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double dr = nodes[k].x.r - c.r, dz = nodes[k].x.z - c.z;
    const double w = nodes[k].w * S[k];
    m.m0 += w;
    m.abs0 += nodes[k].w * std::abs(S[k]);
    m.m1r += w * dr;
    m.m1z += w * dz;
    m.m2 += w * (dr * dr + dz * dz);
  }
  return m;
}

RadialProfile apply_L(const RadialProfile& phi) {
  const auto& x = phi.grid->nodes();
  const auto& f = phi.values;
  const std::size_t N = x.size();
  RadialProfile out(phi.grid);
  if (N < 2) return out;
  std::vector<double> V(N), F(N, 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    const double lo = k == 0 ? 0.0 : 0.5 * (x[k - 1] + x[k]);
    const double hi = k + 1 == N ? x[k] : 0.5 * (x[k] + x[k + 1]);
    V[k] = 0.5 * (hi * hi - lo * lo);
  }
  double mass = 0.0;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    mass += f[k] * V[k];
    const double m = 0.5 * (x[k] + x[k + 1]);
    const double dpsi = -mass / m;
    const double fm = 0.5 * (f[k] + f[k + 1]);
    F[k] = m * ((f[k + 1] - f[k]) / (x[k + 1] - x[k]) - U_profile(m) * dpsi - fm * Gamma0_prime(m));
  }
  for (std::size_t k = 0; k < N; ++k) out.values[k] = (F[k] - (k == 0 ? 0.0 : F[k - 1])) / V[k];
  return out;
}

ScalarField2D apply_L(const ScalarField2D& phi) {
  const Grid2D& g = *phi.grid;
  const std::size_t nx = g.nr(), ny = g.nz();
  const auto& xs = g.r().nodes();
  const auto& ys = g.z().nodes();
  configure_threads();
  ScalarField2D psi(phi.grid);
  const long n = static_cast<long>(g.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long k = 0; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k) % nx, j = static_cast<std::size_t>(k) / nx;
    psi.values[k] = planar_potential_at(phi, {xs[i], ys[j]}).v;
  }
  ScalarField2D out(phi.grid);
  auto flux = [&](std::size_t a, std::size_t b, double yx, double yy, double h, bool along_x) {
    const double s = std::hypot(yx, yy);
    const double dG = s > 0.0 ? Gamma0_prime(s) * (along_x ? yx : yy) / s : 0.0;
    const double fm = 0.5 * (phi.values[a] + phi.values[b]);
    return (phi.values[b] - phi.values[a]) / h - U_profile(s) * (psi.values[b] - psi.values[a]) / h - fm * dG;
  };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const std::size_t a = g.index(i, j), b = g.index(i + 1, j);
      const double F = flux(a, b, 0.5 * (xs[i] + xs[i + 1]), ys[j], xs[i + 1] - xs[i], true) * g.z().widths()[j];
      out.values[a] += F;
      out.values[b] -= F;
    }
  }
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t a = g.index(i, j), b = g.index(i, j + 1);
      const double F = flux(a, b, xs[i], 0.5 * (ys[j] + ys[j + 1]), ys[j + 1] - ys[j], false) * g.r().widths()[i];
      out.values[a] += F;
      out.values[b] -= F;
    }
  }
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) out.values[g.index(i, j)] /= g.weight(i, j);
  return out;
}

RadialProfile apply_B(const RadialProfile& phi, double ll, const BOptions& opt) {
  const auto& x = phi.grid->nodes();
  std::vector<double> f = phi.values;
  if (opt.with_cutoff)
    for (std::size_t k = 0; k < x.size(); ++k) f[k] *= cutoff_chi0(x[k] / opt.cutoff_radius);
  RadialProfile out(phi.grid);
  if (x.size() < 2) return out;
  std::vector<double> d1, d2;
  radial_derivatives(x, f, d1, d2);
  for (std::size_t k = 0; k < x.size(); ++k) out.values[k] = ll * (2.0 * f[k] + x[k] * d1[k]);
  return out;
}

ScalarField2D apply_B(const ScalarField2D& phi, double ll, const BOptions& opt) {
  const Grid2D& g = *phi.grid;
  const std::size_t nx = g.nr(), ny = g.nz();
  const auto& xs = g.r().nodes();
  const auto& ys = g.z().nodes();
  std::vector<double> f = phi.values;
  if (opt.with_cutoff)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        f[g.index(i, j)] *= cutoff_chi0(std::hypot(xs[i], ys[j]) / opt.cutoff_radius);
  auto deriv = [](const std::vector<double>& x, auto&& val, std::size_t k) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    if (k == 0) return (val(1) - val(0)) / (x[1] - x[0]);
    if (k + 1 == n) return (val(n - 1) - val(n - 2)) / (x[n - 1] - x[n - 2]);
    const double hm = x[k] - x[k - 1], hp = x[k + 1] - x[k];
    return (hm * (val(k + 1) - val(k)) / hp + hp * (val(k) - val(k - 1)) / hm) / (hm + hp);
  };
  ScalarField2D out(phi.grid);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double fx = deriv(xs, [&](std::size_t a) { return f[g.index(a, j)]; }, i);
      const double fy = deriv(ys, [&](std::size_t b) { return f[g.index(i, b)]; }, j);
      out.values[g.index(i, j)] = ll * (2.0 * f[g.index(i, j)] + xs[i] * fx + ys[j] * fy);
    }
  return out;
}

OuterBarrier OuterBarrier::defaults(const RingParams& p) {
  OuterBarrier b;
  b.M = 10.0 * (p.xi_T.r + 1.0);
  b.delta = p.delta;
  return b;
}

std::array<double, 4> outer_barrier_eval(const OuterBarrier& bar, const RingParams& p, double r,
                                         double z, double t) {
  if (!(r > 0.0)) throw DomainError("outer_barrier_eval: requires r > 0");
  const double T = p.T, tau = T - t;
  if (!(tau > 0.0)) throw DomainError("outer_barrier_eval: requires t < T");
  const Point c = p.xi(t);
  const double d = std::hypot(r - c.r, z - c.z);
  const double q = tau + d * d;
  const double lam = p.lam(t);
  const double eT = std::exp(-bar.a * std::sqrt(2.0 * std::abs(std::log(T))));
  const double x2 = r * r + z * z;
  std::array<double, 4> out{};
  out[0] = std::exp(-bar.a * std::sqrt(2.0 * std::abs(std::log(q)))) / q * cutoff_chi0(d / std::sqrt(T));
  out[1] = (t + T) * eT / (T * T) * cutoff_chi0(std::sqrt(x2) / (2.0 * (bar.M + std::hypot(c.r, c.z))));
  out[2] = eT / (T * bar.M * bar.M) * std::exp(-x2 / (4.0 * (t + 1.0)));
  out[3] = std::sqrt(tau) / (bar.M * bar.M) * std::exp(-bar.a * std::sqrt(2.0 * std::abs(std::log(tau)))) /
           (lam * lam + d * d) * cutoff_chi0(d / std::sqrt(bar.delta * tau));
  return out;
}

double outer_source_weight(const OuterBarrier& bar, const RingParams& p, double r, double z,
                           double t) {
  const double T = p.T, tau = T - t;
  const Point c = p.xi(t);
  const double d = std::hypot(r - c.r, z - c.z);
  if (d <= std::sqrt(T)) {
    const double q = tau + d * d;
    const double L = std::abs(std::log(q));
    return std::exp(-bar.a * std::sqrt(2.0 * L)) / (q * q * std::pow(L, bar.b));
  }
  const double LT = std::abs(std::log(T));
  const double base = std::exp(-bar.a * std::sqrt(2.0 * LT)) / (T * T * std::pow(LT, bar.b));
  if (d <= bar.M) return base;
  return base * std::exp(-(r * r + z * z) / (4.0 * (t + 1.0)));
}

BarrierReport barrier_check(const RingParams& p, OuterBarrier bar, int n_times, int n_space,
                            const ExpansionOptions&) {
  configure_threads();
  BarrierReport rep;
  const double T = p.T;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < n_times; ++it) {
    const double tau = T * std::pow(1e-3, (it + 0.5) / n_times);
    const double t = T - tau;
    const double lam = p.lam(t);
    const Point c = p.xi(t);
    const ScalarField2D u0 = ansatz_u0(p, t, ansatz_grid(p, t));
    const double d_lo = 0.1 * lam, d_hi = 3.0 * bar.M;
    std::vector<BarrierSample> batch(static_cast<std::size_t>(n_space));
#pragma omp parallel for schedule(dynamic, 1)
    for (int is = 0; is < n_space; ++is) {
      const double d = d_lo * std::pow(d_hi / d_lo, (is + 0.5) / n_space);
      const double frac = std::fmod((it * n_space + is + 1) * golden, 1.0);
      const double th_max = std::acos(std::max(-1.0, -0.95 * c.r / d));
      const double th = (2.0 * frac - 1.0) * th_max;
      const double r = c.r + d * std::cos(th), z = c.z + d * std::sin(th);
      BarrierSample s;
      s.r = r;
      s.z = z;
      s.t = t;
      s.weight = outer_source_weight(bar, p, r, z, t);
      const double h = 1e-3 * std::min({lam + d, r, std::sqrt(tau)});
      const double ht = 1e-3 * tau;
      const PointValue gv = axisym_potential_at(u0, {r, z}, true);
      auto ev = [&](double rr, double zz, double tt) { return outer_barrier_eval(bar, p, rr, zz, tt); };
      const auto f0 = ev(r, z, t);
      const auto fe = ev(r + h, z, t), fw = ev(r - h, z, t);
      const auto fn = ev(r, z + h, t), fs = ev(r, z - h, t);
      const auto fp = ev(r, z, t + ht), fm = ev(r, z, t - ht);
      for (int i = 0; i < 4; ++i) {
        const double dt = (fp[i] - fm[i]) / (2.0 * ht);
        const double dr = (fe[i] - fw[i]) / (2.0 * h);
        const double dz = (fn[i] - fs[i]) / (2.0 * h);
        const double lap = (fe[i] + fw[i] + fn[i] + fs[i] - 4.0 * f0[i]) / (h * h);
        s.op[i] = dt - lap - dr / r + gv.dr * dr + gv.dz * dz;
      }
      batch[static_cast<std::size_t>(is)] = s;
    }
    rep.samples.insert(rep.samples.end(), batch.begin(), batch.end());
  }
  auto count = [&](const OuterBarrier& b) {
    const double c[4] = {b.c0, b.c1, b.c2, b.c3};
    std::size_t k = 0;
    for (const auto& s : rep.samples) {
      double v = 0.0;
      for (int i = 0; i < 4; ++i) v += c[i] * s.op[i];
      if (v >= 0.5 * s.weight) ++k;
    }
    return k;
  };
  double* slots[3] = {&bar.c3, &bar.c2, &bar.c1};
  for (double* slot : slots) {
    double best_c = *slot;
    std::size_t best = count(bar);
    for (int e = 1; e <= 60; ++e) {
      *slot = std::ldexp(1.0, e);
      const std::size_t k = count(bar);
      if (k > best) {
        best = k;
        best_c = *slot;
      }
    }
    *slot = best_c;
  }
  rep.barrier = bar;
  rep.passed = count(bar);
  return rep;
}

}  // namespace ringburst
