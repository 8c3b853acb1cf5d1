#pragma once

#include <cstddef>
#include <vector>

#include "ringburst/field.hpp"

namespace ringburst {

struct KernelValue {
  double G = 0.0;   // (1/pi) rho K(k) / R+
  double Gr = 0.0;  // d/dr of G at the target
  double Gz = 0.0;  // d/dz of G at the target
};

// Axisymmetric Newtonian kernel at target (r, z) for a source ring (rho, w).
KernelValue axisym_kernel(double r, double z, double rho, double w, bool with_grad);

struct PotentialDiagnostics {
  std::size_t targets = 0;
  std::size_t sources = 0;
  std::size_t subtracted_targets = 0;  // targets that received the patch correction
  std::size_t far_field_targets = 0;
  double max_patch_log_integral = 0.0;
  double seconds = 0.0;
};

struct PotentialResult {
  ScalarField2D field;
  ScalarField2D grad_r;
  ScalarField2D grad_z;
  PotentialDiagnostics diagnostics;
};

struct PotentialOptions {
  bool with_gradient = true;
  // Targets farther than this multiple of the support radius (measured from
  // the origin) use the monopole far field; 0 disables.
  double far_field_factor = 0.0;
  // CoverageError when the outermost cells carry source values.
  bool require_empty_boundary = true;
};

struct PointValue {
  double v = 0.0;
  double dr = 0.0;
  double dz = 0.0;
};

PotentialResult axisym_potential(const ScalarField2D& f, const GridPtr& targets,
                                 const PotentialOptions& opt = {});
PointValue axisym_potential_at(const ScalarField2D& f, Point x, bool with_grad = false);
// Plane Newtonian potential int -ln|x - x'| f(x') dx' / (2 pi) with the same
// quadrature and singular subtraction as the ring kernel.
PointValue planar_potential_at(const ScalarField2D& f, Point x, bool with_grad = false);

// Linear map from source values to potentials at a fixed target set.
class KernelCache {
 public:
  KernelCache(GridPtr sources, std::vector<Point> targets, bool with_grad = false);
  // Targets are the source nodes themselves.
  explicit KernelCache(GridPtr grid, bool with_grad = false);

  void apply(const std::vector<double>& f, std::vector<double>& v) const;
  void apply_grad(const std::vector<double>& f, std::vector<double>& dr,
                  std::vector<double>& dz) const;
  std::size_t rows() const { return n_targets_; }
  std::size_t cols() const { return n_sources_; }
  std::size_t bytes() const;
  const GridPtr& grid() const { return sources_; }

 private:
  GridPtr sources_;
  std::size_t n_targets_ = 0;
  std::size_t n_sources_ = 0;
  std::vector<double> value_rows_;
  std::vector<double> dr_rows_;
  std::vector<double> dz_rows_;
};

// Logarithmic integral int_P -ln|x - x'| dA' over the rectangle P and its
// gradient with respect to x.
PointValue rect_log_integral(double r, double z, double r0, double r1, double z0,
                             double z1);

// 2D radial Newtonian potential (measure s ds, no 2 pi).
RadialProfile radial_potential_2d(const RadialProfile& f);

struct AngularLog {
  double value = 0.0;
  bool ill_conditioned = false;
};
AngularLog angular_log_identity(double r, double rho);

struct FarField {
  double v = 0.0;
  double dr = 0.0;
  double dz = 0.0;
  double mass = 0.0;
};
// Support radius: largest |(r, z)| over nodes where f is nonzero.
double support_radius(const ScalarField2D& f);
FarField far_field(const ScalarField2D& f, Point x);

}  // namespace ringburst
