#pragma once

#include <string>
#include <vector>

#include "ringburst/profiles.hpp"
#include "ringburst/simulator.hpp"

namespace ringburst {

struct ConstantsConfig {
  double delta = 1.0;
  double eps = 0.3;    // inner/intermediate limit as a fraction of q1
  double M = 0.0;      // outer barrier radius; 0 selects 10 (q1 + 1)
  double a = 1.0;
  double b = 0.0;
  double tau0 = 0.0;
  double eps_T = 0.0;  // correction start -eps_T; 0 selects sqrt(T)
};

struct VerifyConfig {
  double T = 0.1;
  CurveSpec lambda = CurveSpec::rate_lambda0();
  CurveSpec alpha = CurveSpec::constant_value(1.0);
  Point xi{1.0, 0.0};
  std::vector<double> taus{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};  // sampled T - t
  std::vector<double> lambdas{1e-2, 3e-3, 1e-3};           // constant-lambda sweep
  double sweep_tau = 4e-3;                                 // T - t of the lambda sweep
  std::vector<double> residual_taus{1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4, 5e-5};
  int barrier_times = 10;
  int barrier_space = 100;
};

// Sections [grid], [rings], [constants], [simulate], [verify] of an INI
// document. Rings are keys ring1, ring2, ... with value "r z lambda alpha cutoff";
// the optional key rings.count must equal the number of ring keys.
struct RunConfig {
  SimGridSpec grid;
  std::vector<RingInit> rings{RingInit{}};
  ConstantsConfig constants;
  SimConfig simulate;  // grid and rings are taken from the sections above
  VerifyConfig verify;

  SimConfig sim_config() const;
  RingParams ring_params() const;

  // Throws IoError on syntax errors, unknown sections or keys and bad values.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
};

}  // namespace ringburst
