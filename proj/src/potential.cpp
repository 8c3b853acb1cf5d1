#include "ringburst/potential.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "ringburst/elliptic.hpp"
#include "ringburst/errors.hpp"
#include "ringburst/parallel.hpp"
#include "ringburst/quadrature.hpp"

namespace ringburst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kG0 = 0.5 / kPi;  // singular coefficient of the kernel on the diagonal
constexpr long kValuePatch = 1;     // 3x3 cells
constexpr long kGradPatch = 2;      // 5x5 cells

// x * atan(y / x) with its limit 0 at x = 0.
double xatan(double x, double y) { return x == 0.0 ? 0.0 : x * std::atan(y / x); }

double xlog(double x, double r2) { return r2 == 0.0 ? 0.0 : x * std::log(r2); }

// F(X, Y) = int int ln(X^2 + Y^2) dX dY.
double F_log(double X, double Y) {
  const double r2 = X * X + Y * Y;
  return X * xlog(Y, r2) - 3.0 * X * Y + X * xatan(X, Y) + Y * xatan(Y, X);
}

// dF/dX = int ln(X^2 + Y^2) dY.
double FX_log(double X, double Y) {
  const double r2 = X * X + Y * Y;
  return xlog(Y, r2) - 2.0 * Y + 2.0 * xatan(X, Y);
}

struct Interp {
  std::size_t idx[4];
  double w[4];
  int n = 0;
};

// Bilinear weights on the node lattice, clamped to the node hull.
Interp bilinear(const Grid2D& g, double r, double z) {
  auto bracket = [](const std::vector<double>& x, double v, std::size_t& k, double& t) {
    if (x.size() == 1 || v <= x.front()) {
      k = 0;
      t = 0.0;
      return;
    }
    if (v >= x.back()) {
      k = x.size() - 2;
      t = 1.0;
      return;
    }
    k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), v) - x.begin()) - 1;
    t = (v - x[k]) / (x[k + 1] - x[k]);
  };
  std::size_t i = 0, j = 0;
  double tr = 0.0, tz = 0.0;
  bracket(g.r().nodes(), r, i, tr);
  bracket(g.z().nodes(), z, j, tz);
  Interp out;
  const std::size_t i1 = std::min(i + 1, g.nr() - 1);
  const std::size_t j1 = std::min(j + 1, g.nz() - 1);
  const double wr[2] = {1.0 - tr, tr};
  const double wz[2] = {1.0 - tz, tz};
  const std::size_t ii[2] = {i, i1};
  const std::size_t jj[2] = {j, j1};
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a) {
      const double w = wr[a] * wz[b];
      if (w != 0.0) {
        out.idx[out.n] = g.index(ii[a], jj[b]);
        out.w[out.n] = w;
        ++out.n;
      }
    }
  return out;
}

struct PatchSums {
  double v = 0.0;
  double r = 0.0;
  double z = 0.0;
};

// Visits every source node once, reporting per-node coefficients (value and
// gradient) of the potential at (r, z); the singular patch corrections are
// reported against the interpolation nodes of the target. `Planar` swaps the
// ring kernel for the plane kernel -ln|x - x'| / (2 pi).
template <bool Planar = false, class Sink>
void sweep(const Grid2D& g, double r, double z, bool grad, Sink& sink,
           double* patch_log = nullptr) {
  const auto& rn = g.r().nodes();
  const auto& zn = g.z().nodes();
  const auto& hr = g.r().widths();
  const auto& hz = g.z().widths();
  const long nr = static_cast<long>(g.nr());
  const long nz = static_cast<long>(g.nz());
  const long ic = g.r().locate(r);
  const long jc = g.z().locate(z);
  const bool sub = (Planar || r > 0.0) && ic >= 0 && jc >= 0;
  const double gr0 = sub && !Planar ? -0.25 / (kPi * r) : 0.0;
  PatchSums vsum, gsum;
  for (long j = 0; j < nz; ++j) {
    const double w = zn[j];
    const long dj = std::abs(j - jc);
    for (long i = 0; i < nr; ++i) {
      const double rho = rn[i];
      const double wt = hr[i] * hz[j];
      const std::size_t idx = static_cast<std::size_t>(j * nr + i);
      const double dr = r - rho;
      const double dz = z - w;
      const double d2 = dr * dr + dz * dz;
      const long di = std::abs(i - ic);
      if (sub && d2 > 0.0) {
        if (di <= kValuePatch && dj <= kValuePatch) {
          vsum.v += wt * kG0 * (-0.5 * std::log(d2));
        }
        if (grad && di <= kGradPatch && dj <= kGradPatch) {
          const double L = -0.5 * std::log(d2);
          gsum.r += wt * (kG0 * (-dr / d2) + gr0 * L);
          gsum.z += wt * (kG0 * (-dz / d2));
        }
      }
      if (!sink.wants(idx)) continue;
      if (d2 == 0.0) {
        // Limit of the subtracted integrand on the diagonal.
        if (!Planar)
          sink.add(idx, wt * kG0 * std::log(8.0 * r), grad ? wt * kG0 * 0.5 / r : 0.0, 0.0);
        continue;
      }
      if constexpr (Planar) {
        sink.add(idx, wt * kG0 * (-0.5 * std::log(d2)), -wt * kG0 * dr / d2, -wt * kG0 * dz / d2);
        continue;
      }
      const KernelValue kv = axisym_kernel(r, z, rho, w, grad);
      sink.add(idx, wt * kv.G, wt * kv.Gr, wt * kv.Gz);
    }
  }
  if (!sub) return;
  auto patch = [&](long half) {
    const long i0 = std::max(0L, ic - half), i1 = std::min(nr - 1, ic + half);
    const long j0 = std::max(0L, jc - half), j1 = std::min(nz - 1, jc + half);
    return rect_log_integral(r, z, g.r().edges()[i0], g.r().edges()[i1 + 1],
                             g.z().edges()[j0], g.z().edges()[j1 + 1]);
  };
  const PointValue pv = patch(kValuePatch);
  double cv = kG0 * pv.v - vsum.v;
  double cr = 0.0, cz = 0.0;
  if (grad) {
    const PointValue pg = patch(kGradPatch);
    cr = kG0 * pg.dr + gr0 * pg.v - gsum.r;
    cz = kG0 * pg.dz - gsum.z;
  }
  if (patch_log) *patch_log = std::max(*patch_log, std::abs(pv.v));
  const Interp ip = bilinear(g, r, z);
  for (int k = 0; k < ip.n; ++k) sink.add(ip.idx[k], ip.w[k] * cv, ip.w[k] * cr, ip.w[k] * cz);
}

struct DotSink {
  const double* f;
  double v = 0.0, r = 0.0, z = 0.0;
  bool wants(std::size_t j) const { return f[j] != 0.0; }
  void add(std::size_t j, double cv, double cr, double cz) {
    const double fj = f[j];
    v += cv * fj;
    r += cr * fj;
    z += cz * fj;
  }
};

struct RowSink {
  double* v;
  double* r;
  double* z;
  bool wants(std::size_t) const { return true; }
  void add(std::size_t j, double cv, double cr, double cz) {
    v[j] += cv;
    if (r) {
      r[j] += cr;
      z[j] += cz;
    }
  }
};


}  // namespace

KernelValue axisym_kernel(double r, double z, double rho, double w, bool with_grad) {
  const double dz = z - w;
  const double sp = r + rho;
  const double sm = r - rho;
  const double Rp2 = dz * dz + sp * sp;
  const double Rp = std::sqrt(Rp2);
  const double d = std::sqrt(dz * dz + sm * sm);
  const double kp = d / Rp;
  KernelValue out;
  if (!with_grad) {
    out.G = rho * K_from_complement(kp) / (kPi * Rp);
    return out;
  }
  const double m = 4.0 * r * rho / Rp2;
  const KEPair ke = complete_KE(m, kp);
  out.G = rho * ke.K / (kPi * Rp);
  const double Km = dK_dm(m, kp, ke);
  const double Rp4 = Rp2 * Rp2;
  const double m_r = 4.0 * rho / Rp2 - 8.0 * r * rho * sp / Rp4;
  const double m_z = -8.0 * r * rho * dz / Rp4;
  const double Rp3 = Rp2 * Rp;
  out.Gr = rho / kPi * (Km * m_r / Rp - ke.K * sp / Rp3);
  out.Gz = rho / kPi * (Km * m_z / Rp - ke.K * dz / Rp3);
  return out;
}

PointValue rect_log_integral(double r, double z, double r0, double r1, double z0,
                             double z1) {
  const double A1 = r0 - r, B1 = r1 - r, A2 = z0 - z, B2 = z1 - z;
  PointValue out;
  out.v = -0.5 * (F_log(B1, B2) - F_log(A1, B2) - F_log(B1, A2) + F_log(A1, A2));
  out.dr = 0.5 * (FX_log(B1, B2) - FX_log(A1, B2) - FX_log(B1, A2) + FX_log(A1, A2));
  out.dz = 0.5 * (FX_log(B2, B1) - FX_log(A2, B1) - FX_log(B2, A1) + FX_log(A2, A1));
  return out;
}

PointValue axisym_potential_at(const ScalarField2D& f, Point x, bool with_grad) {
  DotSink s{f.values.data()};
  sweep(*f.grid, x.r, x.z, with_grad, s);
  return {s.v, s.r, s.z};
}

PointValue planar_potential_at(const ScalarField2D& f, Point x, bool with_grad) {
  DotSink s{f.values.data()};
  sweep<true>(*f.grid, x.r, x.z, with_grad, s);
  return {s.v, s.r, s.z};
}

double support_radius(const ScalarField2D& f) {
  const Grid2D& g = *f.grid;
  double R = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i)
      if (f.at(i, j) != 0.0) R = std::max(R, std::hypot(g.r().nodes()[i], g.z().nodes()[j]));
  return R;
}

FarField far_field(const ScalarField2D& f, Point x) {
  const double R = support_radius(f);
  const double dist = std::hypot(x.r, x.z);
  if (dist < 2.0 * R) throw DomainError("far_field: target lies within twice the support radius");
  FarField out;
  out.mass = integrate_cyl(f);
  out.v = out.mass / (4.0 * kPi * dist);
  const double c = -out.mass / (4.0 * kPi * dist * dist * dist);
  out.dr = c * x.r;
  out.dz = c * x.z;
  return out;
}

PotentialResult axisym_potential(const ScalarField2D& f, const GridPtr& targets,
                                 const PotentialOptions& opt) {
  configure_threads();
  const auto t0 = std::chrono::steady_clock::now();
  f.check_finite();
  const Grid2D& src = *f.grid;
  // Coverage: the outermost ring of cells must be empty.
  for (std::size_t j = 0; j < src.nz(); ++j)
    for (std::size_t i = 0; i < src.nr(); ++i) {
      const bool edge = i + 1 == src.nr() || j == 0 || j + 1 == src.nz();
      if (opt.require_empty_boundary && edge && f.at(i, j) != 0.0) throw CoverageError("axisym_potential: source support touches the grid boundary");
    }
  PotentialResult res;
  res.field = ScalarField2D(targets);
  res.grad_r = ScalarField2D(targets);
  res.grad_z = ScalarField2D(targets);
  const Grid2D& tg = *targets;
  const long n = static_cast<long>(tg.size());
  double far_R = 0.0, mass = 0.0;
  if (opt.far_field_factor > 0.0) {
    far_R = support_radius(f);
    mass = integrate_cyl(f);
  }
  std::size_t subtracted = 0, far_count = 0;
  double patch_max = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : subtracted, far_count) reduction(max : patch_max)
  for (long k = 0; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k) % tg.nr();
    const std::size_t j = static_cast<std::size_t>(k) / tg.nr();
    const double r = tg.r().nodes()[i];
    const double z = tg.z().nodes()[j];
    const double dist = std::hypot(r, z);
    if (opt.far_field_factor > 0.0 && far_R > 0.0 && dist >= opt.far_field_factor * far_R) {
      res.field.values[k] = mass / (4.0 * kPi * dist);
      const double c = -mass / (4.0 * kPi * dist * dist * dist);
      res.grad_r.values[k] = c * r;
      res.grad_z.values[k] = c * z;
      ++far_count;
      continue;
    }
    DotSink s{f.values.data()};
    double pl = 0.0;
    sweep(src, r, z, opt.with_gradient, s, &pl);
    if (pl > 0.0) ++subtracted;
    patch_max = std::max(patch_max, pl);
    res.field.values[k] = s.v;
    res.grad_r.values[k] = s.r;
    res.grad_z.values[k] = s.z;
  }
  res.diagnostics.targets = tg.size();
  res.diagnostics.sources = src.size();
  res.diagnostics.subtracted_targets = subtracted;
  res.diagnostics.far_field_targets = far_count;
  res.diagnostics.max_patch_log_integral = patch_max;
  res.diagnostics.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

KernelCache::KernelCache(GridPtr grid, bool with_grad)
    : KernelCache(grid, [&] {
        std::vector<Point> t;
        t.reserve(grid->size());
        for (std::size_t j = 0; j < grid->nz(); ++j)
          for (std::size_t i = 0; i < grid->nr(); ++i)
            t.push_back({grid->r().nodes()[i], grid->z().nodes()[j]});
        return t;
      }(), with_grad) {}

KernelCache::KernelCache(GridPtr sources, std::vector<Point> targets, bool with_grad)
    : sources_(std::move(sources)), n_targets_(targets.size()), n_sources_(sources_->size()) {
  configure_threads();
  value_rows_.assign(n_targets_ * n_sources_, 0.0);
  if (with_grad) {
    dr_rows_.assign(n_targets_ * n_sources_, 0.0);
    dz_rows_.assign(n_targets_ * n_sources_, 0.0);
  }
  const long n = static_cast<long>(n_targets_);
#pragma omp parallel for schedule(dynamic, 8)
  for (long k = 0; k < n; ++k) {
    const std::size_t off = static_cast<std::size_t>(k) * n_sources_;
    RowSink s{value_rows_.data() + off, with_grad ? dr_rows_.data() + off : nullptr,
              with_grad ? dz_rows_.data() + off : nullptr};
    sweep(*sources_, targets[k].r, targets[k].z, with_grad, s);
  }
}

std::size_t KernelCache::bytes() const {
  return sizeof(double) * (value_rows_.size() + dr_rows_.size() + dz_rows_.size());
}

void KernelCache::apply(const std::vector<double>& f, std::vector<double>& v) const {
  if (f.size() != n_sources_) throw DomainError("KernelCache: source size mismatch");
  v.assign(n_targets_, 0.0);
  const long n = static_cast<long>(n_targets_);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const double* row = value_rows_.data() + static_cast<std::size_t>(k) * n_sources_;
    double s = 0.0;
    for (std::size_t j = 0; j < n_sources_; ++j) s += row[j] * f[j];
    v[k] = s;
  }
}

void KernelCache::apply_grad(const std::vector<double>& f, std::vector<double>& dr,
                             std::vector<double>& dz) const {
  if (dr_rows_.empty()) throw DomainError("KernelCache: built without gradient rows");
  if (f.size() != n_sources_) throw DomainError("KernelCache: source size mismatch");
  dr.assign(n_targets_, 0.0);
  dz.assign(n_targets_, 0.0);
  const long n = static_cast<long>(n_targets_);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const std::size_t off = static_cast<std::size_t>(k) * n_sources_;
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < n_sources_; ++j) {
      a += dr_rows_[off + j] * f[j];
      b += dz_rows_[off + j] * f[j];
    }
    dr[k] = a;
    dz[k] = b;
  }
}

RadialProfile radial_potential_2d(const RadialProfile& f) {
  const auto& x = f.grid->nodes();
  const std::size_t n = x.size();
  // m(u) = int_0^u f s ds by cumulative trapezoid, starting from the origin.
  std::vector<double> m(n, 0.0);
  double prev_x = 0.0, prev_g = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double g = f.values[k] * x[k];
    acc += 0.5 * (x[k] - prev_x) * (g + prev_g);
    m[k] = acc;
    prev_x = x[k];
    prev_g = g;
  }
  // q(u) = m(u)/u, with q(0) = 0 since m = O(u^2).
  std::vector<double> inner(n, 0.0);
  prev_x = 0.0;
  double prev_q = 0.0;
  acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = x[k] > 0.0 ? m[k] / x[k] : 0.0;
    acc += 0.5 * (x[k] - prev_x) * (q + prev_q);
    inner[k] = acc;
    prev_x = x[k];
    prev_q = q;
  }
  double outer = 0.0;
  prev_x = 0.0;
  prev_g = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double g = x[k] > 0.0 ? std::log(x[k]) * f.values[k] * x[k] : 0.0;
    outer += 0.5 * (x[k] - prev_x) * (g + prev_g);
    prev_x = x[k];
    prev_g = g;
  }
  RadialProfile out(f.grid);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = -inner[k] - outer;
  return out;
}

AngularLog angular_log_identity(double r, double rho) {
  if (!(r > 0.0) || !(rho > 0.0)) throw DomainError("angular_log_identity: r, rho must be > 0");
  AngularLog out;
  out.ill_conditioned = std::abs(r - rho) / std::max(r, rho) <= 1e-6;
  // Near phi = 0 the integrand has a log spike of width |r - rho|; split there.
  auto f = [r, rho](double phi) {
    const double s = std::sin(0.5 * phi);
    const double d2 = (r - rho) * (r - rho) + 4.0 * r * rho * s * s;
    return 0.5 * std::log(d2);
  };
  const double spike = std::min(kPi, 50.0 * std::abs(r - rho) / std::sqrt(r * rho) + 1e-300);
  double v = 0.0;
  if (spike < kPi) {
    v += integrate_adaptive(f, 0.0, spike, 1e-14, 1e-13, 60).value;
    v += integrate_adaptive(f, spike, kPi, 1e-14, 1e-13, 60).value;
  } else {
    v += integrate_adaptive(f, 0.0, kPi, 1e-14, 1e-13, 60).value;
  }
  out.value = 2.0 * v;
  return out;
}

}  // namespace ringburst
