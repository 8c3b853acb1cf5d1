#include "ringburst/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ringburst/errors.hpp"
#include "ringburst/quadrature.hpp"

namespace ringburst {

namespace {

constexpr double kPi = std::numbers::pi;

void check_ascending(const std::vector<double>& v, const char* what) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) {
      throw DomainError(std::string(what) + ": values must be strictly ascending");
    }
  }
}

std::vector<double> grade_side(double start, double stop, double h, double growth,
                               double h_max) {
  // Edges from `start` towards `stop` (either direction), first width h.
  std::vector<double> out;
  const double dir = stop > start ? 1.0 : -1.0;
  double x = start;
  double w = h;
  while (dir * (stop - x) > 0.0) {
    const double next = x + dir * w;
    if (dir * (stop - next) < 0.5 * std::min(w * growth, h_max)) {
      out.push_back(stop);
      break;
    }
    out.push_back(next);
    x = next;
    w = std::min(w * growth, h_max);
  }
  return out;
}

// Bump (1 - rho^2)^6 on [0, 1] and its plane moments int B dA, int B |y|^2 dA.
constexpr int kBumpPower = 6;
double bump(double rho) {
  if (rho >= 1.0) return 0.0;
  const double s = 1.0 - rho * rho;
  const double s2 = s * s;
  return s2 * s2 * s2;
}
constexpr double bump_m0(double scale) {
  return scale * scale * kPi / (kBumpPower + 1);
}
constexpr double bump_m2(double scale) {
  return scale * scale * scale * scale * kPi / ((kBumpPower + 1) * (kBumpPower + 2));
}

struct Pair {
  double a;
  double b;
};

// a B(rho) + b B(rho/2) with prescribed (m0, m2).
Pair solve_bump_pair(double m0, double m2) {
  const double a11 = bump_m0(1.0), a12 = bump_m0(2.0);
  const double a21 = bump_m2(1.0), a22 = bump_m2(2.0);
  const double det = a11 * a22 - a12 * a21;
  return {(m0 * a22 - a12 * m2) / det, (a11 * m2 - a21 * m0) / det};
}

const Pair kW0 = solve_bump_pair(1.0, 0.0);
const Pair kW2 = solve_bump_pair(0.0, 1.0);

}  // namespace

Axis::Axis(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw DomainError("Axis: need at least one cell");
  check_ascending(edges_, "Axis edges");
  nodes_.resize(edges_.size() - 1);
  widths_.resize(edges_.size() - 1);
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
    nodes_[k] = 0.5 * (edges_[k] + edges_[k + 1]);
    widths_[k] = edges_[k + 1] - edges_[k];
  }
}

Axis::Axis(std::vector<double> edges, std::vector<double> nodes) : Axis(std::move(edges)) {
  if (nodes.size() != nodes_.size()) throw DomainError("Axis: node count mismatch");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!(nodes[k] >= edges_[k] && nodes[k] <= edges_[k + 1])) {
      throw DomainError("Axis: node outside its cell");
    }
  }
  nodes_ = std::move(nodes);
}

Axis Axis::uniform(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) throw DomainError("Axis::uniform: bad range");
  std::vector<double> e(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    e[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
  }
  e.back() = hi;
  return Axis(std::move(e));
}

Axis Axis::graded(double lo, double hi, double focus, double h_min, double growth,
                  double h_max) {
  if (!(hi > lo) || !(h_min > 0.0) || growth < 1.0 || h_max < h_min) {
    throw DomainError("Axis::graded: bad parameters");
  }
  std::vector<double> e;
  if (focus - 0.5 * h_min <= lo) {
    e.push_back(lo);
    for (double x : grade_side(lo, hi, h_min, growth, h_max)) e.push_back(x);
  } else if (focus + 0.5 * h_min >= hi) {
    auto left = grade_side(hi, lo, h_min, growth, h_max);
    e.assign(left.rbegin(), left.rend());
    e.push_back(hi);
  } else {
    const double a = focus - 0.5 * h_min;
    const double b = focus + 0.5 * h_min;
    auto left = grade_side(a, lo, h_min * growth, growth, h_max);
    e.assign(left.rbegin(), left.rend());
    e.push_back(a);
    e.push_back(b);
    for (double x : grade_side(b, hi, h_min * growth, growth, h_max)) e.push_back(x);
  }
  return Axis(std::move(e));
}

Axis Axis::stretched(double lo, double hi, double focus, std::size_t n, double beta) {
  if (n == 0 || !(hi > lo)) throw DomainError("Axis::stretched: bad range");
  if (beta <= 1e-8) return uniform(lo, hi, n);
  const double H = hi - lo;
  const double D = std::clamp(focus - lo, 0.0, H);
  std::vector<double> e(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double eta = static_cast<double>(k) / static_cast<double>(n);
    double x;
    if (D <= 1e-12 * H) {
      x = H * (1.0 + std::tanh(beta * (eta - 1.0)) / std::tanh(beta));
    } else if (D >= H * (1.0 - 1e-12)) {
      x = H * std::tanh(beta * eta) / std::tanh(beta);
    } else {
      const double q = D / H;
      const double A = std::log((1.0 + (std::exp(beta) - 1.0) * q) /
                                (1.0 + (std::exp(-beta) - 1.0) * q)) /
                       (2.0 * beta);
      x = D * (1.0 + std::sinh(beta * (eta - A)) / std::sinh(beta * A));
    }
    e[k] = lo + x;
  }
  e.front() = lo;
  e.back() = hi;
  return Axis(std::move(e));
}

long Axis::locate(double x) const {
  if (x < edges_.front() || x > edges_.back()) return -1;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  long k = static_cast<long>(it - edges_.begin()) - 1;
  return std::min<long>(k, static_cast<long>(size()) - 1);
}

std::size_t Axis::nearest(double x) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.begin()) return 0;
  if (it == nodes_.end()) return size() - 1;
  const std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  return (x - nodes_[k - 1] <= nodes_[k] - x) ? k - 1 : k;
}

Grid2D::Grid2D(Axis r, Axis z) : Grid2D(std::move(r), std::move(z), Kind::cylindrical) {}

Grid2D::Grid2D(Axis r, Axis z, Kind kind)
    : r_(std::move(r)), z_(std::move(z)), kind_(kind) {
  if (kind_ == Kind::cylindrical && r_.lo() < 0.0) {
    throw DomainError("Grid2D: cylindrical grid needs r >= 0");
  }
}

Grid2D Grid2D::plane(Axis x1, Axis x2) {
  return Grid2D(std::move(x1), std::move(x2), Kind::plane);
}

bool Grid2D::same_as(const Grid2D& o) const {
  return kind_ == o.kind_ && r_.edges() == o.r_.edges() && z_.edges() == o.z_.edges();
}

GridPtr make_grid(Axis r, Axis z) {
  return std::make_shared<const Grid2D>(std::move(r), std::move(z));
}

GridPtr make_plane_grid(Axis x1, Axis x2) {
  return std::make_shared<const Grid2D>(Grid2D::plane(std::move(x1), std::move(x2)));
}

ScalarField2D::ScalarField2D(GridPtr g) : grid(std::move(g)) {
  values.assign(grid->size(), 0.0);
}

ScalarField2D::ScalarField2D(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) {
    throw DomainError("ScalarField2D: value count does not match the grid");
  }
}

double ScalarField2D::sup_abs() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

void ScalarField2D::check_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("ScalarField2D: non-finite value");
  }
}

RadialGrid::RadialGrid(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty() || nodes_.size() != weights_.size()) {
    throw DomainError("RadialGrid: nodes and weights must match");
  }
  if (nodes_.front() < 0.0) throw DomainError("RadialGrid: nodes must be >= 0");
  check_ascending(nodes_, "RadialGrid nodes");
}

RadialGrid RadialGrid::from_nodes(std::vector<double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("RadialGrid: need at least two nodes");
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = x[k + 1] - x[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return RadialGrid(std::move(x), std::move(w));
}

RadialGrid RadialGrid::uniform(double rho_max, std::size_t n) {
  if (n == 0 || !(rho_max > 0.0)) throw DomainError("RadialGrid::uniform: bad range");
  std::vector<double> x(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    x[k] = rho_max * static_cast<double>(k) / static_cast<double>(n);
  }
  return from_nodes(std::move(x));
}

RadialGrid RadialGrid::geometric(double h0, double growth, double rho_max) {
  if (!(h0 > 0.0) || growth < 1.0 || !(rho_max > h0)) {
    throw DomainError("RadialGrid::geometric: bad parameters");
  }
  std::vector<double> x{0.0};
  double h = h0;
  while (x.back() + h < rho_max * (1.0 - 1e-12)) {
    x.push_back(x.back() + h);
    h *= growth;
  }
  x.push_back(rho_max);
  return from_nodes(std::move(x));
}

RadialGrid RadialGrid::gauss_panels(const std::vector<double>& breaks, int points) {
  check_ascending(breaks, "gauss_panels breaks");
  std::vector<double> gx(points), gw(points);
  gauss_legendre(points, gx.data(), gw.data());
  std::vector<double> x, w;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double c = 0.5 * (breaks[p] + breaks[p + 1]);
    const double h = 0.5 * (breaks[p + 1] - breaks[p]);
    for (int k = 0; k < points; ++k) {
      x.push_back(c + h * gx[k]);
      w.push_back(h * gw[k]);
    }
  }
  return RadialGrid(std::move(x), std::move(w));
}

RadialProfile::RadialProfile(RadialGridPtr g) : grid(std::move(g)) {
  values.assign(grid->size(), 0.0);
}

RadialProfile::RadialProfile(RadialGridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) {
    throw DomainError("RadialProfile: value count does not match the grid");
  }
}

double integrate_plane(const ScalarField2D& f) {
  const Grid2D& g = *f.grid;
  double s = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) row += g.r().widths()[i] * f.at(i, j);
    s += g.z().widths()[j] * row;
  }
  return s;
}

double integrate_cyl(const ScalarField2D& f) {
  const Grid2D& g = *f.grid;
  if (g.kind() != Grid2D::Kind::cylindrical) {
    throw DomainError("integrate_cyl: grid is not cylindrical");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
      row += g.r().widths()[i] * g.r().nodes()[i] * f.at(i, j);
    }
    s += g.z().widths()[j] * row;
  }
  return 2.0 * kPi * s;
}

Moments moments(const ScalarField2D& f, Point c) {
  const Grid2D& g = *f.grid;
  Moments m;
  for (std::size_t j = 0; j < g.nz(); ++j) {
    const double dz = g.z().nodes()[j] - c.z;
    for (std::size_t i = 0; i < g.nr(); ++i) {
      const double dr = g.r().nodes()[i] - c.r;
      const double w = g.weight(i, j) * f.at(i, j);
      m.m0 += w;
      m.m1_1 += w * dr;
      m.m1_2 += w * dz;
      m.m2 += w * (dr * dr + dz * dz);
    }
  }
  return m;
}

double radial_integral(const RadialProfile& f, int k) {
  const auto& x = f.grid->nodes();
  const auto& w = f.grid->weights();
  double s = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) s += w[n] * std::pow(x[n], 1 + k) * f.values[n];
  return 2.0 * kPi * s;
}

Moments moments(const RadialProfile& f) {
  Moments m;
  m.m0 = radial_integral(f, 0);
  m.m2 = radial_integral(f, 2);
  return m;
}

double W0_value(double rho) { return kW0.a * bump(rho) + kW0.b * bump(0.5 * rho); }
double W2_value(double rho) { return kW2.a * bump(rho) + kW2.b * bump(0.5 * rho); }
double W1_radial(double rho) { return 2.0 / bump_m2(1.0) * bump(rho); }

namespace {
RadialGridPtr default_w_grid() {
  static const RadialGridPtr g =
      std::make_shared<const RadialGrid>(RadialGrid::gauss_panels({0.0, 1.0, 2.0}, 12));
  return g;
}
}  // namespace

RadialProfile make_W0(const RadialGridPtr& g) { return sample(g, W0_value); }
RadialProfile make_W2(const RadialGridPtr& g) { return sample(g, W2_value); }
RadialProfile make_W0() { return make_W0(default_w_grid()); }
RadialProfile make_W2() { return make_W2(default_w_grid()); }

ScalarField2D make_W1(int j, const GridPtr& g) {
  if (j != 1 && j != 2) throw DomainError("make_W1: component must be 1 or 2");
  return sample(g, [j](double y1, double y2) {
    return W1_radial(std::hypot(y1, y2)) * (j == 1 ? y1 : y2);
  });
}

ScalarField2D make_W1(int j) {
  static const GridPtr g = make_plane_grid(Axis::uniform(-1.2, 1.2, 240),
                                           Axis::uniform(-1.2, 1.2, 240));
  return make_W1(j, g);
}

double weighted_norm_weight(double y, const WeightedNormSpec& s, double tau) {
  if (!(tau > std::numbers::e)) throw DomainError("weighted norm: requires tau > e");
  double w = std::pow(tau, s.nu) * std::pow(std::log(tau), s.m) * std::pow(1.0 + y, s.p);
  if (s.eps > 0.0 && y >= std::sqrt(tau)) w *= std::pow(y, s.eps) / std::pow(tau, 0.5 * s.eps);
  return w;
}

double weighted_sup_norm(const ScalarField2D& f, Point c, double scale,
                         const WeightedNormSpec& s, double tau) {
  const Grid2D& g = *f.grid;
  double best = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i) {
      const double y = std::hypot(g.r().nodes()[i] - c.r, g.z().nodes()[j] - c.z) / scale;
      best = std::max(best, std::abs(f.at(i, j)) * weighted_norm_weight(y, s, tau));
    }
  return best;
}

double weighted_sup_norm(const RadialProfile& f, const WeightedNormSpec& s, double tau) {
  double best = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    best = std::max(best, std::abs(f.values[k]) *
                              weighted_norm_weight(f.grid->nodes()[k], s, tau));
  }
  return best;
}

}  // namespace ringburst
