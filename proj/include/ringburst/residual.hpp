#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ringburst/correction.hpp"
#include "ringburst/expansions.hpp"
#include "ringburst/field.hpp"
#include "ringburst/profiles.hpp"

namespace ringburst {

enum class GradSource { quadrature, expansion };

struct ResidualOptions {
  GradSource grad = GradSource::quadrature;
  bool scaled = true;  // report lambda^4 S instead of S
  AnsatzGridOptions source_grid{0.1, 1.06, 0.1, 1.3};
  ExpansionOptions expansion;
};

// Pointwise error operator S(u) = -u_t + Delta u + (1/r) u_r - div(u grad v)
// for u = u0 or u1 = u0 + phi_lambda at a fixed time. Time derivatives are
// taken analytically; grad v0 combines the exact planar radial gradient with
// the difference of the ring and plane quadratures on a common grid.
class ResidualEvaluator {
 public:
  ResidualEvaluator(const RingParams& p, double t, const ResidualOptions& opt = {},
                    const CorrectionRun* run = nullptr);

  struct Terms {
    double dt = 0.0;         // -u_t
    double diffusion = 0.0;  // Delta u + (1/r) u_r
    double drift = 0.0;      // -grad u . grad v
    double reaction = 0.0;   // u^2
    double total() const { return dt + diffusion + drift + reaction; }
  };
  Terms terms(Point x) const;
  double S(Point x) const { return terms(x).total(); }
  // Gradient of the potential of u (v0, plus psi_lambda when corrected).
  std::array<double, 2> grad_v(Point x) const;

  double t() const { return t_; }
  double lambda() const { return lam_; }
  bool corrected() const { return run_ != nullptr; }

 private:
  struct Radial {
    std::vector<double> x;  // geometric breaks
    std::vector<double> m;  // int_0^x f s ds at the breaks
    double center_r = 0.0, center_z = 0.0;
    ScalarField2D field;
  };
  double radial_mass(const Radial& R, double rho, bool phi) const;
  std::array<double, 2> deferred_grad(const Radial& R, Point x, bool phi) const;
  double u0_radial(double rho) const;
  double phi_radial(double rho) const;

  RingParams p_;
  double t_ = 0.0;
  double lam_ = 0.0;
  ResidualOptions opt_;
  const CorrectionRun* run_ = nullptr;
  std::size_t k_ = 0;
  Radial u0_, phi_;
};

struct ResidualField {
  ScalarField2D field;  // S or lambda^4 S
  double t = 0.0;
  RingParams params;
  bool scaled = true;
};

// S(u0) or S(u1) on every node of `grid`. `run` must hold t when correcting.
ResidualField S_of_ansatz(const RingParams& p, double t, const GridPtr& grid,
                          bool include_phi_lambda, const CorrectionRun* run = nullptr,
                          const ResidualOptions& opt = {});

// Sample points on rays about xi(t) with |y| in (0, y_max], n_angles rays.
std::vector<Point> residual_rays(const RingParams& p, double t, double y_max, int n_radii,
                                 int n_angles);

struct ResidualEnvelope {
  std::vector<double> times;
  std::vector<double> C;  // sup |lambda^4 S(u1)| (1+|y|^6) / ln(2+|y|) / e^{-sqrt(2L)}
  std::vector<double> y_at_sup;
  double spread() const;
};
// Fit over the support of chi (|x - xi| < 2 sqrt(delta (T - t))).
ResidualEnvelope residual_envelope(const RingParams& p, const CorrectionRun& run,
                                   const std::vector<double>& times, int n_radii = 48,
                                   int n_angles = 4, const ResidualOptions& opt = {});

struct ResidualMoments {
  double m0 = 0.0;    // int S(u1) chi-tilde dr dz
  double m2 = 0.0;    // int S(u1) chi-tilde |x - (q1(T), 0)|^2 dr dz
  double abs0 = 0.0;  // int |S(u1)| chi-tilde dr dz
  double m1r = 0.0;   // first moments about xi(T)
  double m1z = 0.0;
};
// Polar quadrature about xi(T) over the support of chi-tilde.
ResidualMoments residual_moments(const RingParams& p, double t, const CorrectionRun& run,
                                 int n_panels = 24, int n_angles = 24,
                                 const ResidualOptions& opt = {});

// L[phi] = Delta phi - div(U grad psi) - div(phi grad Gamma0), psi the plane
// potential of phi, in conservative form with zero flux through the outer
// boundary. Radial profiles use the measure s ds; fields use plane coordinates
// centred at the origin.
RadialProfile apply_L(const RadialProfile& phi);
ScalarField2D apply_L(const ScalarField2D& phi);

struct BOptions {
  bool with_cutoff = false;
  double cutoff_radius = 1.0;  // phi is multiplied by chi0(|y| / cutoff_radius)
};
// B[phi] = lambda lambda' (2 phi + y . grad phi).
RadialProfile apply_B(const RadialProfile& phi, double lambda_lambdadot, const BOptions& opt = {});
ScalarField2D apply_B(const ScalarField2D& phi, double lambda_lambdadot, const BOptions& opt = {});

struct OuterBarrier {
  double c0 = 1.0, c1 = 1.0, c2 = 1.0, c3 = 1.0;
  double a = 1.0;
  double b = 0.0;
  double M = 20.0;
  double delta = 1.0;
  static OuterBarrier defaults(const RingParams& p);  // M = 10 (q1 + 1)
};

// The four barrier components phi_0..phi_3 (without the c_i).
std::array<double, 4> outer_barrier_eval(const OuterBarrier& bar, const RingParams& p, double r,
                                         double z, double t);

// Right-hand side weight of the outer norm at (r, z, t).
double outer_source_weight(const OuterBarrier& bar, const RingParams& p, double r, double z,
                           double t);

struct BarrierSample {
  double r = 0.0, z = 0.0, t = 0.0;
  std::array<double, 4> op{};  // (d_t - Delta - (1/r) d_r + grad v0 . grad) phi_i
  double weight = 0.0;
};

struct BarrierReport {
  OuterBarrier barrier;
  std::vector<BarrierSample> samples;
  std::size_t passed = 0;
  double fraction() const {
    return samples.empty() ? 0.0 : double(passed) / double(samples.size());
  }
};

// Samples n_times x n_space deterministic points, applies the discrete
// parabolic operator to each component and chooses c3, then c2, then c1
// (c0 = 1) by doubling while the pass count improves.
BarrierReport barrier_check(const RingParams& p, OuterBarrier bar, int n_times = 10,
                            int n_space = 100, const ExpansionOptions& opt = {});

}  // namespace ringburst
