#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ringburst/config.hpp"

namespace ringburst {

struct VerifyReport {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> metrics;
  bool passed = false;
  std::string detail;

  double metric(const std::string& key) const;
  // Header and rows as comma-separated text with 17 significant digits,
  // followed by `name,PASS|FAIL,detail`.
  std::string csv() const;
};

// Inner discrepancy of the value expansion over the lambda sweep; passes when
// max/min of the discrepancy band is at most 3.
VerifyReport verify_expansion_v0(const RunConfig& cfg);
// Intermediate gradient constant |grad v0 - omega1 grad Gamma0| / |ln d| over
// the lambda sweep; passes when every constant is within 30% of the median.
VerifyReport verify_grad_v0(const RunConfig& cfg);
// Inner envelope constant of phi_lambda over verify.taus within 30% of the
// median, and manufactured-solution order in dt of at least 0.9.
VerifyReport verify_phi_lambda(const RunConfig& cfg);
// Residual envelope constant over verify.residual_taus; spread at most 5.
VerifyReport verify_residual_envelope(const RunConfig& cfg);
// |m0| / int |S chi| strictly decreasing along verify.residual_taus and the
// log-decay slope of |m2| against sqrt(2 |ln(T - t)|) at least 1.4.
VerifyReport verify_moments(const RunConfig& cfg);
// Barrier supersolution check; passes at >= 99% of the sampled points.
VerifyReport verify_barrier(const RunConfig& cfg);

// Dispatch by name: expansion-v0, grad-v0, phi-lambda, residual-envelope,
// barrier, moments. DomainError for other names.
VerifyReport run_verification(const std::string& which, const RunConfig& cfg);

// Time order of the implicit radial solver on phi = sin(10 t) e^{-rho^2}
// (dt and dt/2 at fixed fine space resolution).
double radial_mms_time_order(double dt = 4e-3);

}  // namespace ringburst
