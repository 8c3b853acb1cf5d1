#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ringburst/field.hpp"
#include "ringburst/potential.hpp"
#include "ringburst/profiles.hpp"

namespace ringburst {

struct CorrectionOptions {
  double eps_T = 0.0;           // start time is -eps_T; 0 selects sqrt(T)
  double dt_factor = 0.02;      // dt <= dt_factor (T - t)
  double dt_max = 1e-3;
  double rho_max_factor = 8.0;  // outer Dirichlet radius rho_max_factor sqrt(eps_T)
  double min_cells_per_lambda = 4.0;
  double start(double T) const;
};

// Source term of the radial correction equation at distance rho from xi(T).
double correction_source(double rho, double t, const RingParams& p);

// Geometric radial grid resolving lambda at t_last with h0 = lambda / 80.
RadialGridPtr correction_grid(const RingParams& p, double t_last,
                              const CorrectionOptions& opt = {});

// Nodal first and second derivatives on ascending nodes starting at 0, with
// d1 = 0 at the origin (even extension).
void radial_derivatives(const std::vector<double>& x, const std::vector<double>& v,
                        std::vector<double>& d1, std::vector<double>& d2);

struct RadialJet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct CorrectionRun {
  RadialGridPtr grid;
  double t_start = 0.0;
  std::vector<double> times;
  std::vector<RadialProfile> profiles;
  std::vector<double> source_norms;  // sup |E| at each stored time
  std::vector<std::vector<double>> d1, d2;  // nodal rho-derivatives per stored time
  std::size_t steps = 0;

  std::size_t index_of(double t) const;
  // Profile value and rho-derivatives at rho for stored time k.
  RadialJet jet(std::size_t k, double rho) const;
};

using RadialSource = std::function<double(double rho, double t)>;

// Implicit Euler for phi_t = phi'' + (5/rho) phi' + source on the radial grid
// with zero data at t_start, phi'(0) = 0 and phi(rho_max) = 0. `max_dt(t)`
// bounds each step.
CorrectionRun solve_radial6(RadialGridPtr grid, const RadialSource& source, double t_start,
                            const std::vector<double>& times,
                            const std::function<double(double)>& max_dt);

CorrectionRun solve_phi_lambda(const RingParams& p, RadialGridPtr grid,
                               const std::vector<double>& times,
                               const CorrectionOptions& opt = {});

// Six-dimensional radial Laplacian of a stored profile at rho.
double laplacian6(const CorrectionRun& run, std::size_t k, double rho);

// phi_lambda = phi6(|x - xi(t)|) chi0(|x - xi(t)| / (2 sqrt(delta (T - t)))) on a grid.
ScalarField2D phi_lambda_field(const CorrectionRun& run, std::size_t k, const RingParams& p,
                               const GridPtr& grid);

struct EnvelopeFit {
  std::vector<double> times;
  std::vector<double> C;
  double spread() const;  // max C / min C
};

// Inner-branch fits over rho <= sqrt(T - t):
// |phi| (lambda^2 + rho^2) / e^{-sqrt(2 |ln(T-t)|)} and
// |phi'| (lambda^2 + rho^2)^2 / (rho e^{-sqrt(2 |ln(T-t)|)}).
EnvelopeFit phi_envelope(const CorrectionRun& run, const RingParams& p);
EnvelopeFit phi_grad_envelope(const CorrectionRun& run, const RingParams& p);

// Potential of phi_lambda at stored time k on the given targets.
PotentialResult psi_lambda(const CorrectionRun& run, std::size_t k, const RingParams& p,
                           const GridPtr& targets);

struct PsiEnvelope {
  double C_inner = 0.0;  // |grad psi| / (e^{-sqrt(2L)} lambda^-1 ln(1 + rhohat)/(1 + rhohat))
  double C_outer = 0.0;  // |grad psi| |x - xi| / (e^{-sqrt(2L)} sqrt(L))
};
PsiEnvelope psi_envelope(const CorrectionRun& run, std::size_t k, const RingParams& p,
                         int n_radii = 16);

// Graded grid covering the support of phi_lambda (radius 4 sqrt(delta (T - t))).
GridPtr correction_field_grid(const RingParams& p, double t, double h_min_factor = 0.1,
                              double growth = 1.06);

}  // namespace ringburst
