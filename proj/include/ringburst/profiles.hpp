#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ringburst/field.hpp"

namespace ringburst {

struct Constants {
  static constexpr double gamma_euler = 0.57721566490153286061;
};

// Radial closed forms in s = |y|.
double U_profile(double s);
double U_prime(double s);         // dU/ds
double U_second(double s);        // d2U/ds2
double Gamma0(double s);          // ln U
double Gamma0_prime(double s);    // dGamma0/ds
double Gamma0_second(double s);
double Z0(double s);              // 2U + y . grad U
double Z0_prime(double s);
double Z0_second(double s);

inline double U_profile(double y1, double y2) { return U_profile(std::hypot(y1, y2)); }
inline double Z0(double y1, double y2) { return Z0(std::hypot(y1, y2)); }

// Smooth cutoff: 1 on s <= 1, 0 on s >= 2, exp(-1/s) bridge in between.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
double cutoff_chi0(double s);
Jet cutoff_chi0_jet(double s);

// Scalar parameter curve of the form base + coeff * g(T - t) where g is 0,
// (T - t)^exponent, or the leading-order rate lambda0.
struct CurveSpec {
  enum class Kind { constant, power, lambda0 };
  Kind kind = Kind::constant;
  double base = 0.0;
  double coeff = 0.0;
  double exponent = 0.5;

  static CurveSpec constant_value(double v) { return {Kind::constant, v, 0.0, 0.5}; }
  static CurveSpec power_law(double c, double p, double base = 0.0) {
    return {Kind::power, base, c, p};
  }
  static CurveSpec rate_lambda0(double c = 1.0) { return {Kind::lambda0, 0.0, c, 0.5}; }

  double value(double t, double T) const;
  double rate(double t, double T) const;
  std::string to_string() const;
  static CurveSpec parse(const std::string& s);
  bool operator==(const CurveSpec&) const = default;
};

struct RingParams {
  CurveSpec lambda = CurveSpec::rate_lambda0();
  CurveSpec alpha = CurveSpec::constant_value(1.0);
  Point xi_T{1.0, 0.0};       // center at the blow-up time
  Point xi_velocity{0.0, 0.0};  // xi(t) = xi_T + velocity (t - T)
  double T = 1e-3;
  double delta = 1.0;

  double lam(double t) const { return lambda.value(t, T); }
  double lam_dot(double t) const { return lambda.rate(t, T); }
  double alp(double t) const { return alpha.value(t, T); }
  double alp_dot(double t) const { return alpha.rate(t, T); }
  Point xi(double t) const {
    return {xi_T.r + xi_velocity.r * (t - T), xi_T.z + xi_velocity.z * (t - T)};
  }
  Point xi_dot() const { return xi_velocity; }
  // sqrt(delta (T - t)): the cutoff radius scale.
  double cutoff_scale(double t) const;
  bool operator==(const RingParams&) const = default;
};

struct LambdaPair {
  double lambda;
  double lambda_dot;
};

// Leading-order rate 2 e^{-(gamma+2)/2} sqrt(T-t) e^{-sqrt(|ln(T-t)|/2)} and
// the exact derivative of that closed form.
LambdaPair lambda0(double t, double T);

// tau(t) = tau0 + int_0^t lambda(s)^-2 ds.
double tau_of_t(double t, const std::function<double(double)>& lambda, double tau0);

// Scaled cutoffs chi (width sqrt(delta(T-t)) about xi(t)), chi-tilde (twice
// that, about xi(T)) and chi-hat (four times, about xi(t)).
double chi_cut(const RingParams& p, double r, double z, double t);
double chi_tilde(const RingParams& p, double r, double z, double t);
double chi_hat(const RingParams& p, double r, double z, double t);

double ansatz_value(const RingParams& p, double r, double z, double t);
ScalarField2D ansatz_u0(const RingParams& p, double t, const GridPtr& grid);
ScalarField2D ansatz_multi(const std::vector<RingParams>& rings, double t,
                           const GridPtr& grid);
// Throws CoverageError when the cutoff support leaves the grid rectangle.
void check_ansatz_coverage(const RingParams& p, double t, const Grid2D& grid);

struct AnsatzGridOptions {
  double h_min_factor = 0.1;  // smallest cell as a fraction of lambda
  double growth = 1.06;
  double h_max_factor = 0.1;  // largest cell as a fraction of the support radius
  double margin = 1.3;        // box half-width over the support radius
};
// Graded grid focused on xi(t) that covers the ansatz support with a margin.
GridPtr ansatz_grid(const RingParams& p, double t, const AnsatzGridOptions& opt = {});

struct EnvelopeCheck {
  std::string name;
  double worst_ratio = 0.0;
  double first_ratio = 0.0;  // at the largest T - t sampled
  double last_ratio = 0.0;   // at the smallest T - t sampled
  double tail_growth = 0.0;  // max ratio over the last third / max over the first third
  bool violated = false;
};

struct ParamReport {
  std::vector<EnvelopeCheck> checks;
  double lambda_c1 = 0.0;  // min of lambda / (sqrt(T-t) e^{-sqrt(|ln|/2)})
  double lambda_c2 = 0.0;  // max of the same ratio
  bool ok() const;
};

// Samples T - t log-uniformly on [tmin_gap, T] (n points) and checks the
// envelopes; a check is violated when its ratio grows by more than
// `growth_tol` between the first and last thirds of the sweep.
ParamReport validate_params(const RingParams& p, double tmin_gap, int n = 60,
                            double gamma1 = 0.1, double gamma2 = 0.1,
                            double growth_tol = 4.0);

}  // namespace ringburst
