#include "ringburst/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ringburst/errors.hpp"
#include "ringburst/parallel.hpp"
#include "ringburst/profiles.hpp"
#include "ringburst/snapshot.hpp"

namespace ringburst {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Edges equidistributing 1/h(x), with h = h_min at each focus growing by
// (growth - 1) h_min per unit h_min of distance up to h_max. Mirror-symmetric
// focus sets give exactly mirrored edges.
std::vector<double> graded_edges(double lo, double hi, const std::vector<double>& foci, double h_min,
                                 double growth, double h_max) {
  auto size_at = [&](double x) {
    double h = h_max;
    for (double f : foci) h = std::min(h, h_min + (growth - 1.0) * std::abs(x - f));
    return h;
  };
  const std::size_t m = 20000;
  std::vector<double> xs(m + 1), N(m + 1, 0.0);
  for (std::size_t k = 0; k <= m; ++k) xs[k] = lo + (hi - lo) * double(k) / m;
  for (std::size_t k = 1; k <= m; ++k) N[k] = N[k - 1] + 0.5 * (xs[k] - xs[k - 1]) * (1.0 / size_at(xs[k - 1]) + 1.0 / size_at(xs[k]));
  const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(N[m] - 1e-9)));
  std::vector<double> e(n + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double target = N[m] * double(i) / n;
    while (k + 1 < m && N[k + 1] < target) ++k;
    const double w = N[k + 1] > N[k] ? (target - N[k]) / (N[k + 1] - N[k]) : 0.0;
    e[i] = xs[k] + std::clamp(w, 0.0, 1.0) * (xs[k + 1] - xs[k]);
  }
  e.front() = lo;
  e.back() = hi;
  const double mid = 0.5 * (lo + hi);
  bool symmetric = true;
  for (double f : foci) {
    bool found = false;
    for (double g : foci) found = found || std::abs((2.0 * mid - f) - g) <= 1e-14 * (hi - lo);
    symmetric = symmetric && found;
  }
  if (symmetric)
    for (std::size_t i = 0; i <= n / 2; ++i) {
      e[n - i] = 2.0 * mid - e[i];
      if (2 * i == n) e[i] = mid;
    }
  return e;
}

// Bernoulli function x / (e^x - 1).
double bernoulli(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - 0.5 * x + x * x / 12.0;
  return x / std::expm1(x);
}

// Outflow and inflow coefficients of the face flux J = (cL uL - cR uR) / h.
struct FaceCoef {
  double cL, cR;
};
FaceCoef face_coef(FluxScheme f, double a, double h) {
  switch (f) {
    case FluxScheme::upwind: return {1.0 + h * std::max(a, 0.0), 1.0 + h * std::max(-a, 0.0)};
    case FluxScheme::exponential: return {bernoulli(-a * h), bernoulli(a * h)};
    case FluxScheme::centred: return {1.0 + 0.5 * a * h, 1.0 - 0.5 * a * h};
  }
  return {1.0, 1.0};
}

double sup_of(const ScalarField2D& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, v);
  return m;
}

double window_sup(const ScalarField2D& u, Point c, double radius) {
  const Grid2D& g = *u.grid;
  double m = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i)
      if (std::hypot(g.r().nodes()[i] - c.r, g.z().nodes()[j] - c.z) < radius) m = std::max(m, u.at(i, j));
  return m;
}

}  // namespace

void SimConfig::validate() const {
  const SimGridSpec& g = grid;
  if (!(g.r_lo >= 0.0 && g.r_hi > g.r_lo && g.z_hi > g.z_lo)) throw DomainError("SimConfig: bad grid box");
  if (!(g.h_min > 0.0 && g.h_max >= g.h_min && g.growth >= 1.0)) throw DomainError("SimConfig: bad grid spacing");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("SimConfig: cfl must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw DomainError("SimConfig: dt_max must be positive");
  if (!(cap_factor > 1.0)) throw DomainError("SimConfig: cap must exceed the initial sup");
  if (!(t_end > 0.0)) throw DomainError("SimConfig: t_end must be positive");
  if (output_every == 0) throw DomainError("SimConfig: output_every must be positive");
  for (const RingInit& r : rings)
    if (!(r.lambda > 0.0 && r.cutoff > 0.0 && r.alpha >= 0.0)) throw DomainError("SimConfig: bad ring");
}

GridPtr make_sim_grid(const SimGridSpec& s, const std::vector<RingInit>& rings) {
  std::vector<double> fr, fz;
  for (const RingInit& r : rings) {
    fr.push_back(r.center.r);
    fz.push_back(r.center.z);
  }
  return make_grid(Axis(graded_edges(s.r_lo, s.r_hi, fr, s.h_min, s.growth, s.h_max)),
                   Axis(graded_edges(s.z_lo, s.z_hi, fz, s.h_min, s.growth, s.h_max)));
}

std::string to_string(SimEvent e) {
  switch (e) {
    case SimEvent::none: return "none";
    case SimEvent::cap: return "cap";
    case SimEvent::resolution: return "resolution";
    case SimEvent::negative_density: return "negative_density";
    case SimEvent::t_end: return "t_end";
    case SimEvent::max_steps: return "max_steps";
  }
  return "none";
}

double sim_mass(const ScalarField2D& u) {
  const Grid2D& g = *u.grid;
  double m = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i) m += u.at(i, j) * g.r().nodes()[i] * g.weight(i, j);
  return 2.0 * kPi * m;
}

Simulator::Simulator(SimConfig cfg) : Simulator(cfg, make_sim_grid(cfg.grid, cfg.rings)) {}

Simulator::Simulator(SimConfig cfg, GridPtr grid) : cfg_(std::move(cfg)), grid_(std::move(grid)) {
  cfg_.validate();
  configure_threads();
  const Grid2D& g = *grid_;
  volume_.resize(g.size());
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i) volume_[g.index(i, j)] = g.r().nodes()[i] * g.weight(i, j);
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i)
      if (j == 0 || j + 1 == g.nz() || i + 1 == g.nr() || (i == 0 && g.r().lo() > 0.0))
        boundary_.push_back(g.index(i, j));
  if (cfg_.chemotaxis && cfg_.potential == PotentialMode::cached_kernel)
    cache_ = std::make_shared<const KernelCache>(grid_, false);
  double sup = 0.0;
  for (const RingInit& r : cfg_.rings) sup = std::max(sup, r.alpha * U_profile(0.0) / (r.lambda * r.lambda));
  initial_sup_ = sup;
}

SimState Simulator::init() const {
  const Grid2D& g = *grid_;
  for (const RingInit& r : cfg_.rings) {
    const double R = 2.0 * r.cutoff;
    if (r.center.r - R < g.r().lo() || r.center.r + R > g.r().hi() || r.center.z - R < g.z().lo() ||
        r.center.z + R > g.z().hi())
      throw CoverageError("Simulator::init: ring support leaves the grid");
  }
  ScalarField2D u = sample(grid_, [&](double rr, double zz) {
    double s = 0.0;
    for (const RingInit& r : cfg_.rings) {
      const double d = std::hypot(rr - r.center.r, zz - r.center.z);
      s += r.alpha / (r.lambda * r.lambda) * U_profile(d / r.lambda) * cutoff_chi0(d / r.cutoff);
    }
    return s;
  });
  return from_density(std::move(u));
}

SimState Simulator::from_density(ScalarField2D u, double t) const {
  if (!u.grid->same_as(*grid_)) throw DomainError("Simulator: density lives on another grid");
  SimState s;
  s.u = std::move(u);
  s.t = t;
  refresh_potential(s);
  return s;
}

void Simulator::refresh_potential(SimState& s) const {
  s.v = ScalarField2D(grid_);
  if (!cfg_.chemotaxis) return;
  if (cache_) {
    cache_->apply(s.u.values, s.v.values);
  } else {
    PotentialOptions opt;
    opt.with_gradient = false;
    opt.require_empty_boundary = false;
    s.v = axisym_potential(s.u, grid_, opt).field;
  }
  if (cfg_.far_field_boundary) {
    const double M = sim_mass(s.u);
    const Grid2D& g = *grid_;
    for (std::size_t k : boundary_) {
      const std::size_t i = k % g.nr(), j = k / g.nr();
      s.v.values[k] = M / (4.0 * kPi * std::hypot(g.r().nodes()[i], g.z().nodes()[j]));
    }
  }
}

void Simulator::face_gradients(const ScalarField2D& v, std::vector<double>& gr, std::vector<double>& gz) const {
  const Grid2D& g = *grid_;
  const std::size_t nr = g.nr(), nz = g.nz();
  const auto& rn = g.r().nodes();
  const auto& zn = g.z().nodes();
  gr.assign((nr - 1) * nz, 0.0);
  gz.assign(nr * (nz - 1), 0.0);
  for (std::size_t j = 0; j < nz; ++j)
    for (std::size_t i = 0; i + 1 < nr; ++i)
      gr[j * (nr - 1) + i] = (v.at(i + 1, j) - v.at(i, j)) / (rn[i + 1] - rn[i]);
  for (std::size_t j = 0; j + 1 < nz; ++j)
    for (std::size_t i = 0; i < nr; ++i) gz[j * nr + i] = (v.at(i, j + 1) - v.at(i, j)) / (zn[j + 1] - zn[j]);
}

double Simulator::stable_dt(const SimState& s) const {
  const Grid2D& g = *grid_;
  const std::size_t nr = g.nr(), nz = g.nz();
  const auto& rw = g.r().widths();
  const auto& zw = g.z().widths();
  const auto& rn = g.r().nodes();
  const auto& zn = g.z().nodes();
  const double h = std::min(*std::min_element(rw.begin(), rw.end()), *std::min_element(zw.begin(), zw.end()));
  std::vector<double> gr, gz;
  face_gradients(s.v, gr, gz);
  double gmax = 0.0;
  for (double x : gr) gmax = std::max(gmax, std::abs(x));
  for (double x : gz) gmax = std::max(gmax, std::abs(x));
  double dt = cfg_.cfl * std::min(h * h / 4.0, gmax > 0.0 ? h / gmax : std::numeric_limits<double>::infinity());

  // Largest explicit outflow rate of any cell; bounding dt by its inverse keeps u >= 0.
  std::vector<double> rate(g.size(), 0.0);
  for (std::size_t j = 0; j < nz; ++j)
    for (std::size_t i = 0; i + 1 < nr; ++i) {
      const double a = gr[j * (nr - 1) + i];
      const double A = g.r().edges()[i + 1] * zw[j];
      const double h = rn[i + 1] - rn[i];
      const FaceCoef c = face_coef(cfg_.flux, a, h);
      rate[g.index(i, j)] += A * c.cL / h;
      rate[g.index(i + 1, j)] += A * c.cR / h;
    }
  for (std::size_t j = 0; j + 1 < nz; ++j)
    for (std::size_t i = 0; i < nr; ++i) {
      const double a = gz[j * nr + i];
      const double A = rn[i] * rw[i];
      const double h = zn[j + 1] - zn[j];
      const FaceCoef c = face_coef(cfg_.flux, a, h);
      rate[g.index(i, j)] += A * c.cL / h;
      rate[g.index(i, j + 1)] += A * c.cR / h;
    }
  double rmax = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) rmax = std::max(rmax, rate[k] / volume_[k]);
  if (cfg_.flux != FluxScheme::centred && rmax > 0.0) dt = std::min(dt, 0.95 / rmax);
  return std::min(dt, cfg_.dt_max);
}

SimState Simulator::step(const SimState& s) const {
  const Grid2D& g = *grid_;
  const std::size_t nr = g.nr(), nz = g.nz();
  const auto& rn = g.r().nodes();
  const auto& zn = g.z().nodes();
  const auto& rw = g.r().widths();
  const auto& zw = g.z().widths();
  const auto& re = g.r().edges();
  SimState out = s;
  double dt = stable_dt(s);
  if (s.t + dt > cfg_.t_end) dt = cfg_.t_end - s.t;
  std::vector<double> gr, gz;
  face_gradients(s.v, gr, gz);
  const std::vector<double>& u = s.u.values;
  auto flux = [&](double a, double h, double uL, double uR) {
    const FaceCoef c = face_coef(cfg_.flux, a, h);
    return (c.cL * uL - c.cR * uR) / h;
  };
  std::vector<double> Fr((nr - 1) * nz), Fz(nr * (nz - 1));
  const long nzl = static_cast<long>(nz);
#pragma omp parallel for schedule(static)
  for (long jl = 0; jl < nzl; ++jl) {
    const std::size_t j = static_cast<std::size_t>(jl);
    for (std::size_t i = 0; i + 1 < nr; ++i) {
      const double uL = u[g.index(i, j)], uR = u[g.index(i + 1, j)];
      const double a = gr[j * (nr - 1) + i];
      Fr[j * (nr - 1) + i] = re[i + 1] * zw[j] * flux(a, rn[i + 1] - rn[i], uL, uR);
    }
    if (j + 1 < nz)
      for (std::size_t i = 0; i < nr; ++i) {
        const double uL = u[g.index(i, j)], uR = u[g.index(i, j + 1)];
        const double a = gz[j * nr + i];
        Fz[j * nr + i] = rn[i] * rw[i] * flux(a, zn[j + 1] - zn[j], uL, uR);
      }
  }
  bool negative = false;
#pragma omp parallel for schedule(static) reduction(|| : negative)
  for (long jl = 0; jl < nzl; ++jl) {
    const std::size_t j = static_cast<std::size_t>(jl);
    for (std::size_t i = 0; i < nr; ++i) {
      double div = 0.0;
      if (i + 1 < nr) div += Fr[j * (nr - 1) + i];
      if (i > 0) div -= Fr[j * (nr - 1) + i - 1];
      if (j + 1 < nz) div += Fz[j * nr + i];
      if (j > 0) div -= Fz[(j - 1) * nr + i];
      const std::size_t k = g.index(i, j);
      out.u.values[k] = u[k] - dt * div / volume_[k];
      if (out.u.values[k] < 0.0) negative = true;
    }
  }
  out.t = s.t + dt;
  out.step = s.step + 1;
  out.dt = dt;
  refresh_potential(out);
  const double sup = sup_of(out.u);
  double h_min = std::min(*std::min_element(rw.begin(), rw.end()), *std::min_element(zw.begin(), zw.end()));
  if (negative)
    out.event = SimEvent::negative_density;
  else if (initial_sup_ > 0.0 && sup >= cfg_.cap_factor * initial_sup_)
    out.event = SimEvent::cap;
  else if (sup > 0.0 && std::sqrt(8.0 / sup) < cfg_.min_cells * h_min)
    out.event = SimEvent::resolution;
  else if (out.t >= cfg_.t_end)
    out.event = SimEvent::t_end;
  else if (out.step >= cfg_.max_steps)
    out.event = SimEvent::max_steps;
  return out;
}

std::string RateSeries::csv() const {
  std::ostringstream os;
  const std::size_t n_rings = rows.empty() ? 0 : rows.front().ring_lambda.size();
  os << "t,sup_u,mass,lambda_est,typeII";
  for (std::size_t k = 0; k < n_rings; ++k) os << ",lambda_ring" << k + 1;
  os << '\n';
  for (const RateRow& r : rows) {
    os << fmt17(r.t) << ',' << fmt17(r.sup_u) << ',' << fmt17(r.mass) << ',' << fmt17(r.lambda_est) << ','
       << (T_star ? fmt17(r.typeII) : std::string("nan"));
    for (std::size_t k = 0; k < n_rings; ++k) os << ',' << fmt17(r.ring_lambda[k]);
    os << '\n';
  }
  return os.str();
}

void RateSeries::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << csv();
  if (!os) throw IoError("write failed: " + path);
}

void RateSeries::set_blowup_time(double T) {
  T_star = T;
  for (RateRow& r : rows) r.typeII = (T - r.t) * r.sup_u;
}

RunResult run(const Simulator& sim, SimState state) {
  const SimConfig& cfg = sim.config();
  RunResult res;
  auto record = [&](const SimState& s) {
    RateRow row;
    row.t = s.t;
    row.sup_u = sup_of(s.u);
    row.mass = sim_mass(s.u);
    row.lambda_est = row.sup_u > 0.0 ? std::sqrt(8.0 / row.sup_u) : std::numeric_limits<double>::infinity();
    if (cfg.rings.size() > 1)
      for (const RingInit& r : cfg.rings) {
        const double m = window_sup(s.u, r.center, 2.0 * r.cutoff);
        row.ring_lambda.push_back(m > 0.0 ? std::sqrt(8.0 / m) : std::numeric_limits<double>::infinity());
      }
    res.series.rows.push_back(std::move(row));
  };
  auto min_of = [](const ScalarField2D& f) { return *std::min_element(f.values.begin(), f.values.end()); };
  res.min_u = min_of(state.u);
  res.initial_sup = sim.initial_sup();
  record(state);
  if (cfg.snapshot_every) res.snapshots.push_back(state);
  double mass = sim_mass(state.u);
  while (!state.terminal()) {
    state = sim.step(state);
    const double m = sim_mass(state.u);
    if (mass > 0.0) res.max_mass_drift = std::max(res.max_mass_drift, std::abs(m - mass) / mass);
    mass = m;
    res.min_u = std::min(res.min_u, min_of(state.u));
    if (state.step % cfg.output_every == 0 || state.terminal()) record(state);
    if (cfg.snapshot_every && (state.step % cfg.snapshot_every == 0 || state.terminal()))
      res.snapshots.push_back(state);
  }
  res.steps = state.step;
  res.event = state.event;
  res.final_state = std::move(state);
  if (res.event == SimEvent::cap || res.event == SimEvent::resolution) {
    try {
      res.series.set_blowup_time(estimate_blowup_time(res.series));
    } catch (const std::exception&) {
    }
  }
  return res;
}

RunResult run(const SimConfig& cfg) {
  const Simulator sim(cfg);
  return run(sim, sim.init());
}

std::vector<double> extract_lambda(const RateSeries& series) {
  std::vector<double> out;
  out.reserve(series.rows.size());
  for (const RateRow& r : series.rows)
    out.push_back(r.sup_u > 0.0 ? std::sqrt(8.0 / r.sup_u) : std::numeric_limits<double>::infinity());
  return out;
}

double estimate_blowup_time(const RateSeries& series, std::size_t tail) {
  const std::size_t n = series.rows.size();
  if (n < 3 || tail < 3) throw InsufficientData("estimate_blowup_time: fewer than 3 rows");
  const std::size_t k0 = n > tail ? n - tail : 0;
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = double(n - k0);
  for (std::size_t k = k0; k < n; ++k) {
    const double t = series.rows[k].t, y = 1.0 / series.rows[k].sup_u;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double a = (m * sty - st * sy) / (m * stt - st * st);
  const double b = (sy - a * st) / m;
  if (!(a < 0.0)) throw DomainError("estimate_blowup_time: 1/sup u is not decreasing");
  return -b / a;
}

std::string to_string(BlowupType b) { return b == BlowupType::type_II_like ? "type-II-like" : "type-I-like"; }

Classification classify(const RateSeries& series, double T_star) {
  std::vector<std::pair<double, double>> tail;  // (T* - t, indicator)
  double tau_min = std::numeric_limits<double>::infinity();
  for (const RateRow& r : series.rows)
    if (T_star - r.t > 0.0) tau_min = std::min(tau_min, T_star - r.t);
  for (const RateRow& r : series.rows) {
    const double tau = T_star - r.t;
    if (tau > 0.0 && tau <= 10.0 * tau_min * (1.0 + 1e-12)) tail.emplace_back(tau, tau * r.sup_u);
  }
  if (tail.size() < 10) throw InsufficientData("classify: fewer than 10 rows in the last decade");
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  Classification c;
  c.tail_rows = tail.size();
  c.growth = lo->second / hi->second;
  c.type = c.growth >= 3.0 ? BlowupType::type_II_like : BlowupType::type_I_like;
  return c;
}

SlopeFit lambda_slope(const RateSeries& series, double T_star, double tau_lo, double tau_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  SlopeFit f;
  for (const RateRow& r : series.rows) {
    const double tau = T_star - r.t;
    if (!(tau >= tau_lo && tau <= tau_hi) || !(r.sup_u > 0.0)) continue;
    const double x = std::log(tau), y = 0.5 * std::log(8.0 / r.sup_u);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    mn = std::min(mn, tau);
    mx = std::max(mx, tau);
    ++f.rows;
  }
  if (f.rows < 2) throw InsufficientData("lambda_slope: fewer than 2 rows in the window");
  const double n = double(f.rows);
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.decades = std::log10(mx / mn);
  return f;
}

BlowupReport blowup_report(const RunResult& r) {
  BlowupReport b;
  b.reached_cap = r.event == SimEvent::cap;
  if (r.initial_sup > 0.0 && !r.series.rows.empty()) b.sup_ratio = r.series.rows.back().sup_u / r.initial_sup;
  b.T_star = r.series.T_star;
  if (!b.T_star) {
    b.detail = "no blow-up time estimate (event " + to_string(r.event) + ")";
    return b;
  }
  const double T = *b.T_star;
  b.tau_end = T - r.series.rows.back().t;
  try {
    b.classification = classify(r.series, T);
    double tau_up = std::numeric_limits<double>::infinity();
    for (const RateRow& row : r.series.rows) {
      const double tau = T - row.t;
      if (tau >= 10.0 * b.tau_end) tau_up = std::min(tau_up, tau);
    }
    b.slope = lambda_slope(r.series, T, b.tau_end, tau_up);
  } catch (const InsufficientData& e) {
    b.detail = e.what();
    return b;
  }
  const bool type2 = b.classification->growth >= 3.0;
  const bool slope_ok = b.slope->slope >= 0.4 && b.slope->slope <= 0.6 && b.slope->decades >= 1.0;
  b.passed = b.reached_cap && type2 && slope_ok;
  b.detail = "event " + to_string(r.event) + ", sup ratio " + fmt17(b.sup_ratio) + ", T* " + fmt17(T) +
             ", growth " + fmt17(b.classification->growth) + " (min 3), slope " + fmt17(b.slope->slope) +
             " over " + fmt17(b.slope->decades) + " decades (range [0.4, 0.6])";
  return b;
}

ScalingReport scaling_check(const SimConfig& cfg, double s) {
  if (!(s > 0.0)) throw DomainError("scaling_check: lambda_scale must be positive");
  ScalingReport rep;
  rep.lambda_scale = s;
  SimConfig base = cfg;
  base.snapshot_every = base.output_every;
  SimConfig scaled = base;
  SimGridSpec& g = scaled.grid;
  g.r_lo /= s;
  g.r_hi /= s;
  g.z_lo /= s;
  g.z_hi /= s;
  g.h_min /= s;
  g.h_max /= s;
  for (RingInit& r : scaled.rings) {
    r.center = {r.center.r / s, r.center.z / s};
    r.lambda /= s;
    r.cutoff /= s;
  }
  scaled.t_end = base.t_end / (s * s);
  scaled.dt_max = base.dt_max / (s * s);

  const RunResult a = run(base);
  const RunResult b = run(scaled);
  rep.mass_ratio = sim_mass(b.snapshots.front().u) / sim_mass(a.snapshots.front().u);
  const std::size_t n = std::min(a.snapshots.size(), b.snapshots.size());
  bool identical = a.snapshots.size() == b.snapshots.size();
  for (std::size_t k = 0; k < n; ++k) {
    const ScalarField2D& ua = a.snapshots[k].u;
    const ScalarField2D& ub = b.snapshots[k].u;
    const double sup = sup_of(ua);
    if (ua.values.size() != ub.values.size()) {
      rep.max_rel_diff = std::max(rep.max_rel_diff, std::abs(s * s * sup - sup_of(ub)) / (s * s * sup));
      identical = false;
      continue;
    }
    for (std::size_t i = 0; i < ua.values.size(); ++i) {
      const double d = s * s * ua.values[i] - ub.values[i];
      if (d != 0.0 || a.snapshots[k].t != s * s * b.snapshots[k].t) identical = false;
      if (sup > 0.0) rep.max_rel_diff = std::max(rep.max_rel_diff, std::abs(d) / (s * s * sup));
    }
    ++rep.compared_times;
  }
  rep.bitwise_identical = identical;

  SimConfig fine = cfg;
  fine.grid.h_min *= 0.5;
  fine.grid.h_max *= 0.5;
  fine.grid.growth = std::sqrt(fine.grid.growth);
  const RunResult c = run(fine);
  const double sa = sup_of(a.final_state.u), sc = sup_of(c.final_state.u);
  rep.self_convergence = sc > 0.0 ? std::abs(sa - sc) / sc : 0.0;
  rep.passed = rep.max_rel_diff <= 5.0 * rep.self_convergence;
  return rep;
}

}  // namespace ringburst
