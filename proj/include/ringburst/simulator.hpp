#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ringburst/field.hpp"
#include "ringburst/potential.hpp"

namespace ringburst {

// Tensor grid on [r_lo, r_hi] x [z_lo, z_hi]; along each axis the cell width
// is h_min at every ring coordinate and grows by `growth` per cell up to h_max.
struct SimGridSpec {
  double r_lo = 0.4, r_hi = 1.6;
  double z_lo = -0.6, z_hi = 0.6;
  double h_min = 0.0015;
  double growth = 1.3;
  double h_max = 0.1;
};

// u = (alpha / lambda^2) U((x - center) / lambda) chi0(|x - center| / cutoff).
struct RingInit {
  Point center{1.0, 0.0};
  double lambda = 0.1;
  double alpha = 1.5;
  double cutoff = 0.25;
};

enum class PotentialMode { full_kernel, cached_kernel };

// Face flux for u' - u v'. Upwind takes u from the upstream cell; the
// exponentially fitted (Scharfetter-Gummel) flux is upwind for large |v'| h
// and exact on u = C e^v; centred is unlimited and may lose positivity.
enum class FluxScheme { upwind, exponential, centred };

struct SimConfig {
  SimGridSpec grid;
  std::vector<RingInit> rings{RingInit{}};
  double cfl = 0.5;
  double dt_max = 1e-3;
  double cap_factor = 100.0;    // stop when sup u >= cap_factor * initial sup u
  double min_cells = 4.0;       // stop when sqrt(8 / sup u) < min_cells * h_min
  double t_end = 1.0;
  std::size_t max_steps = 1000000;
  std::size_t output_every = 10;
  std::size_t snapshot_every = 0;  // 0 disables snapshots
  PotentialMode potential = PotentialMode::cached_kernel;
  bool chemotaxis = true;          // false forces v = 0 (pure diffusion)
  FluxScheme flux = FluxScheme::exponential;
  bool far_field_boundary = false;  // outermost cells take the monopole value of v

  void validate() const;
};

GridPtr make_sim_grid(const SimGridSpec& spec, const std::vector<RingInit>& rings);

enum class SimEvent { none, cap, resolution, negative_density, t_end, max_steps };
std::string to_string(SimEvent e);

struct SimState {
  ScalarField2D u;
  ScalarField2D v;
  double t = 0.0;
  std::size_t step = 0;
  double dt = 0.0;  // last step taken
  SimEvent event = SimEvent::none;
  bool terminal() const { return event != SimEvent::none; }
};

// Three-dimensional mass 2 pi int u r dr dz in the finite-volume measure.
double sim_mass(const ScalarField2D& u);

class Simulator {
 public:
  explicit Simulator(SimConfig cfg);
  explicit Simulator(SimConfig cfg, GridPtr grid);

  const SimConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }

  // Ring data with v solved once; throws CoverageError if a ring's cutoff
  // support leaves the grid.
  SimState init() const;
  SimState from_density(ScalarField2D u, double t = 0.0) const;
  void refresh_potential(SimState& s) const;
  double stable_dt(const SimState& s) const;
  // One explicit conservative update of u followed by a refresh of v.
  SimState step(const SimState& s) const;
  double initial_sup() const { return initial_sup_; }

 private:
  void face_gradients(const ScalarField2D& v, std::vector<double>& gr, std::vector<double>& gz) const;

  SimConfig cfg_;
  GridPtr grid_;
  std::vector<double> volume_;  // r dr dz per cell
  std::shared_ptr<const KernelCache> cache_;
  std::vector<std::size_t> boundary_;
  double initial_sup_ = 0.0;
};

struct RateRow {
  double t = 0.0;
  double sup_u = 0.0;
  double mass = 0.0;
  double lambda_est = 0.0;
  double typeII = 0.0;                 // (T* - t) sup u once T* is known
  std::vector<double> ring_lambda;     // sqrt(8 / windowed sup) per ring
};

struct RateSeries {
  std::vector<RateRow> rows;
  std::optional<double> T_star;

  void write_csv(const std::string& path) const;
  std::string csv() const;
  // Fills typeII for a given blow-up time estimate.
  void set_blowup_time(double T);
};

struct RunResult {
  RateSeries series;
  std::vector<SimState> snapshots;
  SimState final_state;
  SimEvent event = SimEvent::none;
  std::size_t steps = 0;
  double max_mass_drift = 0.0;  // max relative change of mass over one step
  double min_u = 0.0;           // smallest cell value seen
  double initial_sup = 0.0;     // reference for the cap
};

RunResult run(const SimConfig& cfg);
RunResult run(const Simulator& sim, SimState state);

// lambda_est = sqrt(8 / sup u) per row.
std::vector<double> extract_lambda(const RateSeries& series);

// Time at which the linear fit of 1/sup u over the last `tail` rows vanishes.
double estimate_blowup_time(const RateSeries& series, std::size_t tail = 20);

enum class BlowupType { type_I_like, type_II_like };
std::string to_string(BlowupType b);

struct Classification {
  BlowupType type = BlowupType::type_I_like;
  double growth = 0.0;       // indicator ratio across the last decade of T* - t
  std::size_t tail_rows = 0;
};
// type-II-like iff (T* - t) sup u grows by at least 3x over the last decade of
// T* - t; InsufficientData with fewer than 10 rows in that decade.
Classification classify(const RateSeries& series, double T_star);

struct SlopeFit {
  double slope = 0.0;
  double decades = 0.0;
  std::size_t rows = 0;
};
// Least-squares slope of log lambda_est against log(T* - t) over rows with
// T* - t in [tau_lo, tau_hi].
SlopeFit lambda_slope(const RateSeries& series, double T_star, double tau_lo, double tau_hi);

// Phenomenology of a finished run: T* from the series, the final resolved
// decade T* - t in [tau_end, 10 tau_end] with tau_end = T* - t_last, the
// type-II indicator growth over that decade and the lambda_est slope over the
// same rows, extended to the first row at or beyond 10 tau_end.
struct BlowupReport {
  bool reached_cap = false;
  double sup_ratio = 0.0;  // final sup / initial sup
  std::optional<double> T_star;
  double tau_end = 0.0;
  std::optional<Classification> classification;
  std::optional<SlopeFit> slope;
  bool passed = false;     // cap, growth >= 3, slope in [0.4, 0.6] over >= 1 decade
  std::string detail;
};
BlowupReport blowup_report(const RunResult& r);

struct ScalingReport {
  double lambda_scale = 1.0;
  double max_rel_diff = 0.0;       // sup |lambda^2 u(lambda x, lambda^2 t) - u_s(x, t)| / sup u
  double self_convergence = 0.0;   // relative sup difference between h and h/2 runs
  double mass_ratio = 0.0;         // M_scaled / M
  std::size_t compared_times = 0;
  bool bitwise_identical = false;
  bool passed = false;             // max_rel_diff <= 5 self_convergence
};
ScalingReport scaling_check(const SimConfig& cfg, double lambda_scale);

}  // namespace ringburst
