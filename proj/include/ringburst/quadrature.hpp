#pragma once

#include <functional>

namespace ringburst {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// Adaptive 7/15-point Gauss-Kronrod on [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol = 1e-13,
                              double rel_tol = 1e-12, int max_depth = 40);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace ringburst
