#include "ringburst/expansions.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "ringburst/errors.hpp"
#include "ringburst/potential.hpp"
#include "ringburst/quadrature.hpp"
#include "ringburst/snapshot.hpp"

namespace ringburst {

namespace {

constexpr double kPi = std::numbers::pi;

struct Local {
  double dr, dz, d;
};

Local local(const RingParams& p, double r, double z, double t) {
  const Point c = p.xi(t);
  const double dr = r - c.r, dz = z - c.z;
  return {dr, dz, std::hypot(dr, dz)};
}

// Shared pieces of omega1 and calV: R+ = |(r + q1, z)|, D = |(r - q1, z)| and
// the bracket 1 + D^2 / (4 R+^2) with its partials.
struct Geometry {
  double Rp, Rp2, B, Br, Bz;
};

Geometry geometry(double r, double z, double q1) {
  if (!(r >= 0.0) || !(q1 > 0.0)) throw DomainError("expansion weights require r >= 0, q1 > 0");
  Geometry g;
  g.Rp2 = z * z + (r + q1) * (r + q1);
  g.Rp = std::sqrt(g.Rp2);
  const double D2 = z * z + (r - q1) * (r - q1);
  g.B = 1.0 + 0.25 * D2 / g.Rp2;
  const double R4 = g.Rp2 * g.Rp2;
  g.Br = 0.25 * (2.0 * (r - q1) * g.Rp2 - D2 * 2.0 * (r + q1)) / R4;
  g.Bz = 0.25 * (2.0 * z * g.Rp2 - D2 * 2.0 * z) / R4;
  return g;
}

double lnsqrt_tau(const RingParams& p, double t) { return 0.5 * std::log(p.T - t); }

}  // namespace

Grad2 omega1_jet(double r, double z, double q1) {
  const Geometry g = geometry(r, z, q1);
  const double A = 2.0 * q1 / g.Rp;
  const double R3 = g.Rp2 * g.Rp;
  const double Ar = -2.0 * q1 * (r + q1) / R3;
  const double Az = -2.0 * q1 * z / R3;
  return {A * g.B, Ar * g.B + A * g.Br, Az * g.B + A * g.Bz};
}

double omega1(double r, double z, double q1) { return omega1_jet(r, z, q1).v; }

Grad2 calV_jet(double r, double z, double q1) {
  const Geometry g = geometry(r, z, q1);
  const double L = std::log(4.0 * g.Rp);
  const double P = q1 * L / g.Rp;
  const double R3 = g.Rp2 * g.Rp;
  const double Pr = q1 * (1.0 - L) * (r + q1) / R3;
  const double Pz = q1 * (1.0 - L) * z / R3;
  return {P * g.B / kPi, (Pr * g.B + P * g.Br) / kPi, (Pz * g.B + P * g.Bz) / kPi};
}

double calV(double r, double z, double q1) { return calV_jet(r, z, q1).v; }

Grad2 Gamma0R(const RingParams& p, double r, double z, double t) {
  const Local x = local(p, r, z, t);
  const double lam = p.lam(t);
  Grad2 out;
  out.v = Gamma0(x.d / lam) - 4.0 * std::log(lam);
  if (x.d > 0.0) {
    const double g = Gamma0_prime(x.d / lam) / lam / x.d;
    out.dr = g * x.dr;
    out.dz = g * x.dz;
  }
  return out;
}

double E2d_radial(double u, double lambda, double sigma) {
  if (!(sigma > 0.0) || lambda < 0.0) throw DomainError("E2d: requires sigma > 0, lambda >= 0");
  const double s = u / sigma;
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const Jet chi = cutoff_chi0_jet(s);
  const double c1 = chi.d1 / sigma;
  const double c2 = chi.d2 / (sigma * sigma);
  const double l2 = lambda * lambda;
  // Gamma0(u/lambda) - Gamma0(sigma/lambda) and its u-derivative.
  const double G = -2.0 * std::log((l2 + u * u) / (l2 + sigma * sigma));
  const double Gp = -4.0 * u / (l2 + u * u);
  return G * (c2 + c1 / u) + 2.0 * Gp * c1;
}

double E2d_selfsimilar(double u, double sigma) { return E2d_radial(u, 0.0, sigma); }

double E2d_error(double r, double z, double t, const RingParams& p) {
  return E2d_radial(local(p, r, z, t).d, p.lam(t), p.cutoff_scale(t));
}

MassPair M0_c0(double lambda, double sigma) {
  auto m = [&](double s) { return E2d_radial(sigma * s, lambda, sigma) * sigma * sigma * s; };
  MassPair out;
  out.M0 = integrate_adaptive(m, 1.0, 2.0, 1e-14, 1e-13, 50).value;
  out.c0 = integrate_adaptive([&](double s) { return std::log(s) * m(s); }, 1.0, 2.0, 1e-14,
                              1e-13, 50).value;
  return out;
}

MassPair M0_c0_of_t(double t, const RingParams& p) { return M0_c0(p.lam(t), p.cutoff_scale(t)); }

ExpansionPieces expansion_pieces(double t, const RingParams& p) {
  ExpansionPieces e;
  const Point c = p.xi(t);
  e.Gamma0R = [p, t](double r, double z) { return Gamma0R(p, r, z, t).v; };
  e.omega1 = [c](double r, double z) { return omega1(r, z - c.z, c.r); };
  e.calV = [c](double r, double z) { return calV(r, z - c.z, c.r); };
  const MassPair mc = M0_c0_of_t(t, p);
  e.M0 = mc.M0;
  e.c0 = mc.c0;
  const double lam = p.lam(t);
  e.c1_bound = lam * lam / (p.T - t);
  return e;
}

double v0_expansion(double r, double z, double t, const RingParams& p,
                    const ExpansionOptions& opt) {
  const Local x = local(p, r, z, t);
  const Point c = p.xi(t);
  if (x.d > opt.eps(c.r)) throw RegionError("v0_expansion: target outside |x - xi| <= eps");
  const MassPair mc = M0_c0_of_t(t, p);
  const double base = Gamma0R(p, r, z, t).v + (4.0 - mc.M0) * lnsqrt_tau(p, t) + mc.c0;
  const double chi = cutoff_chi0(x.d / p.cutoff_scale(t));
  const double w = omega1(r, z - c.z, c.r);
  return p.alp(t) * (base * chi + w * base * (1.0 - chi));
}

std::string to_string(GradRegion r) {
  switch (r) {
    case GradRegion::inner: return "inner";
    case GradRegion::intermediate: return "intermediate";
    case GradRegion::bounded: return "bounded";
    case GradRegion::far: return "far";
  }
  return "?";
}

GradRegion classify_grad_region(double r, double z, double t, const RingParams& p,
                                const ExpansionOptions& opt) {
  const double d = local(p, r, z, t).d;
  const double q1 = p.xi(t).r;
  if (d <= 2.0 * p.cutoff_scale(t)) return GradRegion::inner;
  if (d <= opt.eps(q1)) return GradRegion::intermediate;
  if (d < opt.m_far(q1)) return GradRegion::bounded;
  return GradRegion::far;
}

GradExpansion grad_v0_expansion(double r, double z, double t, const RingParams& p,
                                const ExpansionOptions& opt) {
  GradExpansion out;
  out.region = classify_grad_region(r, z, t, p, opt);
  const double a = p.alp(t);
  const Point c = p.xi(t);
  switch (out.region) {
    case GradRegion::inner: {
      const Grad2 g = Gamma0R(p, r, z, t);
      out.dr = a * g.dr;
      out.dz = a * g.dz;
      break;
    }
    case GradRegion::intermediate: {
      const Grad2 g = Gamma0R(p, r, z, t);
      const double w = omega1(r, z - c.z, c.r);
      out.dr = a * w * g.dr;
      out.dz = a * w * g.dz;
      break;
    }
    case GradRegion::bounded:
      out.has_main_term = false;
      break;
    case GradRegion::far: {
      const double zz = z - c.z;
      const double R = std::hypot(r, zz);
      const double k = -4.0 * kPi * c.r * a / (R * R * R);
      out.dr = k * r;
      out.dz = k * zz;
      break;
    }
  }
  return out;
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path);
  os << "region,r,z,quadrature,expansion,discrepancy\n";
  for (const auto& w : rows) {
    os << w.region << ',' << fmt17(w.r) << ',' << fmt17(w.z) << ',' << fmt17(w.quadrature) << ','
       << fmt17(w.expansion) << ',' << fmt17(w.discrepancy) << '\n';
  }
  if (!os) throw IoError("write failed for " + path);
}

std::vector<ComparisonRow> compare_v0_inner(const RingParams& p, double t,
                                            const std::vector<double>& offsets_over_lambda,
                                            const ExpansionOptions& opt,
                                            const AnsatzGridOptions& grid) {
  const auto g = ansatz_grid(p, t, grid);
  const ScalarField2D u0 = ansatz_u0(p, t, g);
  const Point c = p.xi(t);
  const double lam = p.lam(t);
  std::vector<Point> targets;
  for (double o : offsets_over_lambda) {
    targets.push_back({c.r + o * lam, c.z});
    if (o > 0.0) {
      targets.push_back({c.r - o * lam, c.z});
      targets.push_back({c.r, c.z + o * lam});
    }
  }
  std::vector<ComparisonRow> rows;
  for (Point x : targets) {
    ComparisonRow w{"inner", x.r, x.z};
    w.quadrature = axisym_potential_at(u0, x).v;
    w.expansion = v0_expansion(x.r, x.z, t, p, opt);
    w.discrepancy = w.quadrature - w.expansion;
    rows.push_back(w);
  }
  return rows;
}

std::vector<ComparisonRow> compare_grad_intermediate(const RingParams& p, double t, int n_radii,
                                                     const ExpansionOptions& opt,
                                                     const AnsatzGridOptions& grid) {
  const auto g = ansatz_grid(p, t, grid);
  const ScalarField2D u0 = ansatz_u0(p, t, g);
  const Point c = p.xi(t);
  const double lo = 2.0 * p.cutoff_scale(t) * 1.02;
  const double hi = opt.eps(c.r);
  if (!(hi > lo)) throw RegionError("intermediate region is empty at this time");
  std::vector<ComparisonRow> rows;
  for (int k = 0; k < n_radii; ++k) {
    const double d = lo * std::pow(hi / lo, n_radii == 1 ? 0.0 : double(k) / (n_radii - 1));
    for (double th : {0.0, 0.5 * kPi, kPi, 1.25 * kPi}) {
      const Point x{c.r + d * std::cos(th), c.z + d * std::sin(th)};
      const PointValue q = axisym_potential_at(u0, x, true);
      const GradExpansion e = grad_v0_expansion(x.r, x.z, t, p, opt);
      ComparisonRow w{"intermediate", x.r, x.z};
      w.quadrature = std::hypot(q.dr, q.dz);
      w.expansion = std::hypot(e.dr, e.dz);
      w.discrepancy = std::hypot(q.dr - e.dr, q.dz - e.dz) / std::abs(std::log(d));
      rows.push_back(w);
    }
  }
  return rows;
}

std::vector<ComparisonRow> compare_grad_far(const RingParams& p, double t,
                                            const std::vector<double>& distances,
                                            const AnsatzGridOptions& grid) {
  const auto g = ansatz_grid(p, t, grid);
  const ScalarField2D u0 = ansatz_u0(p, t, g);
  const double M = integrate_cyl(u0);
  const Point c = p.xi(t);
  std::vector<ComparisonRow> rows;
  for (double D : distances) {
    for (double th : {0.3, 0.5 * kPi, 2.5}) {
      const Point x{D * std::sin(th), c.z + D * std::cos(th)};
      const PointValue q = axisym_potential_at(u0, x, true);
      const double k = -M / (4.0 * kPi * D * D * D);
      const double er = k * x.r, ez = k * (x.z - c.z);
      ComparisonRow w{"far", x.r, x.z};
      w.quadrature = std::hypot(q.dr, q.dz);
      w.expansion = std::hypot(er, ez);
      w.discrepancy = std::hypot(q.dr - er, q.dz - ez) / w.expansion;
      rows.push_back(w);
    }
  }
  return rows;
}

Compare2d3dReport compare_2d_3d(const std::function<double(double)>& phi, const RingParams& p,
                                double t, const ExpansionOptions& opt,
                                const AnsatzGridOptions& grid) {
  const auto g = ansatz_grid(p, t, grid);
  const Point c = p.xi(t);
  const double lam = p.lam(t);
  const double sigma = p.cutoff_scale(t);
  const ScalarField2D f = sample(g, [&](double r, double z) {
    const double d = std::hypot(r - c.r, z - c.z);
    return d >= 2.0 * sigma ? 0.0 : phi(d / lam) * cutoff_chi0(d / sigma) / (lam * lam);
  });
  // Planar mass inside scaled radius rho, int_0^rho phi(s) s ds.
  auto mass = [&](double rho) {
    return integrate_adaptive([&](double s) { return phi(s) * s; }, 0.0, rho, 1e-15, 1e-12, 50).value;
  };
  const double eps = opt.eps(c.r);
  const double inner_lim = p.delta * std::sqrt(p.T - t);
  Compare2d3dReport rep;
  const int n = 24;
  const double lo = 0.5 * lam, hi = 3.0 * eps;
  for (int k = 0; k < n; ++k) {
    const double d = lo * std::pow(hi / lo, double(k) / (n - 1));
    for (double th : {0.0, 0.5 * kPi, kPi}) {
      const Point x{c.r + d * std::cos(th), c.z + d * std::sin(th)};
      const PointValue q = axisym_potential_at(f, x, true);
      const double gscale = -mass(d / lam) / (d * d);
      double er = gscale * (x.r - c.r), ez = gscale * (x.z - c.z);
      ComparisonRow w{"", x.r, x.z};
      w.quadrature = std::hypot(q.dr, q.dz);
      if (d <= inner_lim) {
        w.region = "inner";
        w.expansion = std::hypot(er, ez);
        w.discrepancy = std::hypot(q.dr - er, q.dz - ez);
        rep.inner_sup = std::max(rep.inner_sup, w.discrepancy);
      } else if (d <= eps) {
        const double om = omega1(x.r, x.z - c.z, c.r);
        er *= om;
        ez *= om;
        w.region = "intermediate";
        w.expansion = std::hypot(er, ez);
        w.discrepancy = std::hypot(q.dr - er, q.dz - ez);
        rep.intermediate_sup = std::max(rep.intermediate_sup, w.discrepancy);
      } else {
        w.region = "far";
        w.discrepancy = w.quadrature * d;
        rep.far_constant = std::max(rep.far_constant, w.discrepancy);
      }
      rep.rows.push_back(w);
    }
  }
  return rep;
}

}  // namespace ringburst
