#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace ringburst {

// One tensor axis of a cell-centred grid: nodes sit at cell midpoints and the
// quadrature weight of a node is its cell width (midpoint rule, order 2).
class Axis {
 public:
  Axis() = default;
  explicit Axis(std::vector<double> edges);
  // Explicit nodes, one inside each cell (used when reading snapshots).
  Axis(std::vector<double> edges, std::vector<double> nodes);

  static Axis uniform(double lo, double hi, std::size_t n);
  // Cells of width h_min around `focus`, growing geometrically by `growth`
  // per cell up to h_max; the outermost cells are trimmed to land on lo/hi.
  static Axis graded(double lo, double hi, double focus, double h_min,
                     double growth, double h_max);
  // n cells clustered at `focus` by the two-sided sinh stretching with
  // strength beta (beta -> 0 gives a uniform axis).
  static Axis stretched(double lo, double hi, double focus, std::size_t n,
                        double beta);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& widths() const { return widths_; }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  // Index of the cell containing x, or -1 outside [lo, hi].
  long locate(double x) const;
  // Index of the node nearest to x.
  std::size_t nearest(double x) const;

 private:
  std::vector<double> edges_;
  std::vector<double> nodes_;
  std::vector<double> widths_;
};

class Grid2D {
 public:
  enum class Kind { cylindrical, plane };

  // Cylindrical (r, z) grid; requires r edges >= 0 so every r node is > 0.
  Grid2D(Axis r, Axis z);
  static Grid2D plane(Axis x1, Axis x2);

  Kind kind() const { return kind_; }
  const Axis& r() const { return r_; }
  const Axis& z() const { return z_; }
  std::size_t nr() const { return r_.size(); }
  std::size_t nz() const { return z_.size(); }
  std::size_t size() const { return nr() * nz(); }
  // z-major storage: r varies fastest.
  std::size_t index(std::size_t i, std::size_t j) const { return j * nr() + i; }
  double weight(std::size_t i, std::size_t j) const {
    return r_.widths()[i] * z_.widths()[j];
  }
  bool same_as(const Grid2D& o) const;

 private:
  Grid2D(Axis r, Axis z, Kind kind);
  Axis r_;
  Axis z_;
  Kind kind_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

GridPtr make_grid(Axis r, Axis z);
GridPtr make_plane_grid(Axis x1, Axis x2);

struct Point {
  double r = 0.0;
  double z = 0.0;
};

struct ScalarField2D {
  GridPtr grid;
  std::vector<double> values;

  ScalarField2D() = default;
  explicit ScalarField2D(GridPtr g);
  ScalarField2D(GridPtr g, std::vector<double> v);

  double& at(std::size_t i, std::size_t j) { return values[grid->index(i, j)]; }
  double at(std::size_t i, std::size_t j) const {
    return values[grid->index(i, j)];
  }
  double sup_abs() const;
  void check_finite() const;
};

template <class F>
ScalarField2D sample(const GridPtr& g, F&& f) {
  ScalarField2D out(g);
  const auto& rn = g->r().nodes();
  const auto& zn = g->z().nodes();
  for (std::size_t j = 0; j < g->nz(); ++j)
    for (std::size_t i = 0; i < g->nr(); ++i) out.at(i, j) = f(rn[i], zn[j]);
  return out;
}

class RadialGrid {
 public:
  RadialGrid(std::vector<double> nodes, std::vector<double> weights);
  // Nodes 0, h, ..., rho_max with trapezoid weights.
  static RadialGrid uniform(double rho_max, std::size_t n_intervals);
  // Composite Gauss-Legendre with `points` nodes on each [breaks[k], breaks[k+1]].
  static RadialGrid gauss_panels(const std::vector<double>& breaks, int points);
  // Node 0 plus nodes at h0*(g^k - 1)/(g - 1) up to rho_max (trapezoid weights).
  static RadialGrid geometric(double h0, double growth, double rho_max);
  // Trapezoid weights on arbitrary ascending nodes.
  static RadialGrid from_nodes(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;

struct RadialProfile {
  RadialGridPtr grid;
  std::vector<double> values;

  RadialProfile() = default;
  explicit RadialProfile(RadialGridPtr g);
  RadialProfile(RadialGridPtr g, std::vector<double> v);
};

template <class F>
RadialProfile sample(const RadialGridPtr& g, F&& f) {
  RadialProfile out(g);
  for (std::size_t k = 0; k < g->size(); ++k) out.values[k] = f(g->nodes()[k]);
  return out;
}

struct WeightedNormSpec {
  double nu = 0.0;
  double m = 0.0;
  double p = 1.0;
  double eps = 0.0;
};

struct Moments {
  double m0 = 0.0;
  double m1_1 = 0.0;
  double m1_2 = 0.0;
  double m2 = 0.0;
};

double integrate_plane(const ScalarField2D& f);
double integrate_cyl(const ScalarField2D& f);
Moments moments(const ScalarField2D& f, Point center);

// Plane-measure integrals of a radial profile in R^2: 2 pi int f rho^(1+k).
double radial_integral(const RadialProfile& f, int k = 0);
Moments moments(const RadialProfile& f);

// Compactly supported mollifiers with the prescribed low moments.
double W0_value(double rho);
double W2_value(double rho);
double W1_radial(double rho);  // W_{1,j}(y) = W1_radial(|y|) y_j
RadialProfile make_W0();
RadialProfile make_W2();
RadialProfile make_W0(const RadialGridPtr& g);
RadialProfile make_W2(const RadialGridPtr& g);
ScalarField2D make_W1(int j);
ScalarField2D make_W1(int j, const GridPtr& plane_grid);

double weighted_norm_weight(double y_abs, const WeightedNormSpec& spec,
                            double tau);
// sup |f| times the weight, with y = (x - center) / scale at each node.
double weighted_sup_norm(const ScalarField2D& f, Point center, double scale,
                         const WeightedNormSpec& spec, double tau);
double weighted_sup_norm(const RadialProfile& f, const WeightedNormSpec& spec,
                         double tau);

}  // namespace ringburst
