#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ringburst/field.hpp"
#include "ringburst/profiles.hpp"

namespace ringburst {

// Value with its (r, z) partial derivatives.
struct Grad2 {
  double v = 0.0;
  double dr = 0.0;
  double dz = 0.0;
};

// Geometric weight of the intermediate region; z is measured from the ring plane.
double omega1(double r, double z, double q1);
Grad2 omega1_jet(double r, double z, double q1);

double calV(double r, double z, double q1);
Grad2 calV_jet(double r, double z, double q1);

// Gamma0((x - xi)/lambda) - 4 ln lambda and its gradient.
Grad2 Gamma0R(const RingParams& p, double r, double z, double t);

// Two-dimensional cutoff error as a function of the distance u to the ring
// centre. lambda = 0 selects the self-similar limit.
double E2d_radial(double u, double lambda, double sigma);
double E2d_selfsimilar(double u, double sigma);
double E2d_error(double r, double z, double t, const RingParams& p);

struct MassPair {
  double M0 = 0.0;  // int E2d u du
  double c0 = 0.0;  // int ln(u / sigma) E2d u du
};
MassPair M0_c0(double lambda, double sigma);
MassPair M0_c0_of_t(double t, const RingParams& p);

struct ExpansionOptions {
  double eps_factor = 0.3;    // inner/intermediate limit eps = eps_factor * q1
  double far_offset = 1.0;    // far limit M_far = far_factor * (q1 + far_offset)
  double far_factor = 10.0;
  double eps(double q1) const { return eps_factor * q1; }
  double m_far(double q1) const { return far_factor * (q1 + far_offset); }
};

struct ExpansionPieces {
  std::function<double(double, double)> Gamma0R;
  std::function<double(double, double)> omega1;
  std::function<double(double, double)> calV;
  double M0 = 0.0;
  double c0 = 0.0;
  double c1_bound = 0.0;  // lambda^2 / (T - t), the envelope of c1
};
ExpansionPieces expansion_pieces(double t, const RingParams& p);

// Main terms of the value expansion; RegionError when |x - xi| > eps.
double v0_expansion(double r, double z, double t, const RingParams& p,
                    const ExpansionOptions& opt = {});

enum class GradRegion { inner, intermediate, bounded, far };
std::string to_string(GradRegion r);

struct GradExpansion {
  GradRegion region = GradRegion::inner;
  double dr = 0.0;
  double dz = 0.0;
  // False in the bounded region, where only an O(1) statement exists.
  bool has_main_term = true;
};
GradRegion classify_grad_region(double r, double z, double t, const RingParams& p,
                                const ExpansionOptions& opt = {});
GradExpansion grad_v0_expansion(double r, double z, double t, const RingParams& p,
                                const ExpansionOptions& opt = {});

struct ComparisonRow {
  std::string region;
  double r = 0.0;
  double z = 0.0;
  double quadrature = 0.0;
  double expansion = 0.0;
  double discrepancy = 0.0;
};
void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows);

// Quadrature potential of u0 against the value expansion at inner targets
// (distances given as multiples of lambda along the ring plane and the axis).
std::vector<ComparisonRow> compare_v0_inner(const RingParams& p, double t,
                                            const std::vector<double>& offsets_over_lambda,
                                            const ExpansionOptions& opt = {},
                                            const AnsatzGridOptions& grid = {});

// Intermediate-region gradient rows; quadrature and expansion hold
// |grad v0 - omega1 grad Gamma0R| / |ln d| and |grad v0| respectively.
std::vector<ComparisonRow> compare_grad_intermediate(const RingParams& p, double t, int n_radii,
                                                     const ExpansionOptions& opt = {},
                                                     const AnsatzGridOptions& grid = {});

// Far-region rows: quadrature |grad v0| against the monopole M/(4 pi |x|^2)
// with M = integrate_cyl(u0); discrepancy is the relative error.
std::vector<ComparisonRow> compare_grad_far(const RingParams& p, double t,
                                            const std::vector<double>& distances,
                                            const AnsatzGridOptions& grid = {});

struct Compare2d3dReport {
  double inner_sup = 0.0;         // sup |grad psi3 - grad psi2|
  double intermediate_sup = 0.0;  // sup |grad psi3 - omega1 grad psi2|
  double far_constant = 0.0;      // sup |grad psi3| |x - xi|
  std::vector<ComparisonRow> rows;
};
// Three-dimensional potential of lambda^-2 phi(|x - xi|/lambda) chi0(|x - xi|/sqrt(delta(T-t)))
// against the planar inverse Laplacian of lambda^-2 phi(|x - xi|/lambda).
Compare2d3dReport compare_2d_3d(const std::function<double(double)>& phi, const RingParams& p,
                                double t, const ExpansionOptions& opt = {},
                                const AnsatzGridOptions& grid = {});

}  // namespace ringburst
