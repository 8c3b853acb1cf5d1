#include "ringburst/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ringburst/errors.hpp"
#include "ringburst/quadrature.hpp"
#include "ringburst/snapshot.hpp"

namespace ringburst {

double U_profile(double s) {
  const double q = 1.0 + s * s;
  return 8.0 / (q * q);
}

double U_prime(double s) {
  const double q = 1.0 + s * s;
  return -32.0 * s / (q * q * q);
}

double U_second(double s) {
  const double q = 1.0 + s * s;
  return (160.0 * s * s - 32.0) / (q * q * q * q);
}

double Gamma0(double s) { return std::log(8.0) - 2.0 * std::log1p(s * s); }

double Gamma0_prime(double s) { return -4.0 * s / (1.0 + s * s); }

double Gamma0_second(double s) {
  const double q = 1.0 + s * s;
  return -4.0 * (1.0 - s * s) / (q * q);
}

double Z0(double s) {
  const double q = 1.0 + s * s;
  return 16.0 * (1.0 - s * s) / (q * q * q);
}

double Z0_prime(double s) {
  const double q = 1.0 + s * s;
  return 64.0 * s * (s * s - 2.0) / (q * q * q * q);
}

double Z0_second(double s) {
  const double s2 = s * s;
  const double q = 1.0 + s2;
  return 64.0 * (-5.0 * s2 * s2 + 17.0 * s2 - 2.0) / (q * q * q * q * q);
}

Jet cutoff_chi0_jet(double s) {
  if (s <= 1.0) return {1.0, 0.0, 0.0};
  if (s >= 2.0) return {0.0, 0.0, 0.0};
  const double a = 2.0 - s;
  const double b = s - 1.0;
  const double A = std::exp(-1.0 / a);
  const double B = std::exp(-1.0 / b);
  const double A1 = -A / (a * a);
  const double B1 = B / (b * b);
  const double A2 = A * (1.0 - 2.0 * a) / (a * a * a * a);
  const double B2 = B * (1.0 - 2.0 * b) / (b * b * b * b);
  const double S = A + B;
  const double S1 = A1 + B1;
  const double N = A1 * B - A * B1;
  const double N1 = A2 * B - A * B2;
  return {A / S, N / (S * S), (N1 * S - 2.0 * N * S1) / (S * S * S)};
}

double cutoff_chi0(double s) { return cutoff_chi0_jet(s).v; }

LambdaPair lambda0(double t, double T) {
  const double tau = T - t;
  if (!(tau > 0.0)) throw DomainError("lambda0: requires t < T");
  static const double pref = 2.0 * std::exp(-(Constants::gamma_euler + 2.0) / 2.0);
  const double lnt = std::log(tau);
  const double L = std::max(std::abs(lnt), 1e-300);
  const double root = std::sqrt(0.5 * L);
  const double lam = pref * std::sqrt(tau) * std::exp(-root);
  const double sgn = lnt < 0.0 ? 1.0 : -1.0;
  const double dlam_dtau = lam / tau * (0.5 + sgn / (4.0 * root));
  return {lam, -dlam_dtau};
}

double CurveSpec::value(double t, double T) const {
  switch (kind) {
    case Kind::constant:
      return base;
    case Kind::power: {
      const double tau = T - t;
      if (!(tau > 0.0) && exponent < 0.0) throw DomainError("curve: t >= T");
      return base + coeff * std::pow(std::max(tau, 0.0), exponent);
    }
    case Kind::lambda0:
      return base + coeff * lambda0(t, T).lambda;
  }
  return base;
}

double CurveSpec::rate(double t, double T) const {
  switch (kind) {
    case Kind::constant:
      return 0.0;
    case Kind::power: {
      const double tau = T - t;
      if (!(tau > 0.0)) throw DomainError("curve: rate requires t < T");
      return -coeff * exponent * std::pow(tau, exponent - 1.0);
    }
    case Kind::lambda0:
      return coeff * lambda0(t, T).lambda_dot;
  }
  return 0.0;
}

std::string CurveSpec::to_string() const {
  switch (kind) {
    case Kind::constant:
      return "constant " + fmt17(base);
    case Kind::power:
      return "power " + fmt17(coeff) + " " + fmt17(exponent) + " " + fmt17(base);
    case Kind::lambda0:
      return "lambda0 " + fmt17(coeff) + " " + fmt17(base);
  }
  return {};
}

CurveSpec CurveSpec::parse(const std::string& s) {
  std::istringstream is(s);
  std::string kind;
  is >> kind;
  std::vector<double> nums;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) throw IoError("curve: malformed number '" + tok + "'");
    nums.push_back(v);
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (nums.size() < lo || nums.size() > hi) {
      throw IoError("curve '" + s + "': wrong number of arguments");
    }
  };
  if (kind == "constant") {
    need(1, 1);
    return constant_value(nums[0]);
  }
  if (kind == "power") {
    need(2, 3);
    return power_law(nums[0], nums[1], nums.size() > 2 ? nums[2] : 0.0);
  }
  if (kind == "lambda0") {
    need(0, 2);
    CurveSpec c = rate_lambda0(nums.empty() ? 1.0 : nums[0]);
    if (nums.size() > 1) c.base = nums[1];
    return c;
  }
  throw IoError("curve: unknown kind '" + kind + "'");
}

double RingParams::cutoff_scale(double t) const {
  const double tau = T - t;
  if (!(tau > 0.0)) throw DomainError("ring: requires t < T");
  return std::sqrt(delta * tau);
}

double tau_of_t(double t, const std::function<double(double)>& lambda, double tau0) {
  if (t == 0.0) return tau0;
  auto f = [&](double s) {
    const double l = lambda(s);
    return 1.0 / (l * l);
  };
  return tau0 + integrate_adaptive(f, 0.0, t, 1e-300, 1e-12, 60).value;
}

double chi_cut(const RingParams& p, double r, double z, double t) {
  const Point c = p.xi(t);
  return cutoff_chi0(std::hypot(r - c.r, z - c.z) / p.cutoff_scale(t));
}

double chi_tilde(const RingParams& p, double r, double z, double t) {
  return cutoff_chi0(std::hypot(r - p.xi_T.r, z - p.xi_T.z) / (2.0 * p.cutoff_scale(t)));
}

double chi_hat(const RingParams& p, double r, double z, double t) {
  const Point c = p.xi(t);
  return cutoff_chi0(std::hypot(r - c.r, z - c.z) / (4.0 * p.cutoff_scale(t)));
}

double ansatz_value(const RingParams& p, double r, double z, double t) {
  const Point c = p.xi(t);
  const double d = std::hypot(r - c.r, z - c.z);
  const double w = p.cutoff_scale(t);
  if (d >= 2.0 * w) return 0.0;
  const double lam = p.lam(t);
  return p.alp(t) / (lam * lam) * U_profile(d / lam) * cutoff_chi0(d / w);
}

void check_ansatz_coverage(const RingParams& p, double t, const Grid2D& g) {
  const Point c = p.xi(t);
  const double R = 2.0 * p.cutoff_scale(t);
  if (c.r - R < g.r().lo() || c.r + R > g.r().hi() || c.z - R < g.z().lo() ||
      c.z + R > g.z().hi()) {
    throw CoverageError("ansatz support leaves the grid");
  }
}

GridPtr ansatz_grid(const RingParams& p, double t, const AnsatzGridOptions& opt) {
  const Point c = p.xi(t);
  const double R = 2.0 * p.cutoff_scale(t);
  const double half = opt.margin * R;
  const double hmin = opt.h_min_factor * p.lam(t);
  const double hmax = std::max(hmin, opt.h_max_factor * R);
  const double r_lo = std::max(0.0, c.r - half);
  return make_grid(Axis::graded(r_lo, c.r + half, c.r, hmin, opt.growth, hmax),
                   Axis::graded(c.z - half, c.z + half, c.z, hmin, opt.growth, hmax));
}

ScalarField2D ansatz_u0(const RingParams& p, double t, const GridPtr& grid) {
  check_ansatz_coverage(p, t, *grid);
  return sample(grid, [&](double r, double z) { return ansatz_value(p, r, z, t); });
}

ScalarField2D ansatz_multi(const std::vector<RingParams>& rings, double t,
                           const GridPtr& grid) {
  if (rings.empty()) return ScalarField2D(grid);
  ScalarField2D out = ansatz_u0(rings[0], t, grid);
  for (std::size_t k = 1; k < rings.size(); ++k) {
    const ScalarField2D add = ansatz_u0(rings[k], t, grid);
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += add.values[n];
  }
  return out;
}

bool ParamReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const EnvelopeCheck& c) { return c.violated; });
}

ParamReport validate_params(const RingParams& p, double tmin_gap, int n, double gamma1,
                            double gamma2, double growth_tol) {
  if (!(tmin_gap > 0.0) || tmin_gap >= p.T || n < 6) {
    throw DomainError("validate_params: need 0 < tmin_gap < T and n >= 6");
  }
  const char* names[] = {"lambda_lambdadot", "xi_dot", "alpha_dot", "lambda_upper",
                         "lambda_lower"};
  std::vector<std::vector<double>> ratios(5);
  ParamReport rep;
  rep.lambda_c1 = INFINITY;
  for (int k = 0; k < n; ++k) {
    const double tau = p.T * std::pow(tmin_gap / p.T, static_cast<double>(k) / (n - 1));
    const double t = p.T - tau;
    const double L = std::abs(std::log(tau));
    const double lam = p.lam(t);
    const double g = lam * p.lam_dot(t);
    const double h = 1e-4 * tau;
    auto gl = [&](double s) { return p.lam(s) * p.lam_dot(s); };
    const double dg = (gl(t + h) - gl(t - h)) / (2.0 * h);
    const double env_l = std::exp(-std::sqrt(2.0 * L));
    ratios[0].push_back((std::abs(g) + tau * std::sqrt(L) * std::abs(dg)) / env_l);
    const Point xd = p.xi_dot();
    ratios[1].push_back(std::hypot(xd.r, xd.z) /
                        (std::exp(-(1.5 + gamma1) * std::sqrt(2.0 * L)) / std::sqrt(tau)));
    ratios[2].push_back(std::abs(p.alp_dot(t)) /
                        (std::exp(-(1.5 - gamma2) * std::sqrt(2.0 * L)) / tau));
    const double env = std::sqrt(tau) * std::exp(-std::sqrt(0.5 * L));
    ratios[3].push_back(lam / env);
    ratios[4].push_back(env / lam);
    rep.lambda_c1 = std::min(rep.lambda_c1, lam / env);
    rep.lambda_c2 = std::max(rep.lambda_c2, lam / env);
  }
  const int third = n / 3;
  for (int c = 0; c < 5; ++c) {
    EnvelopeCheck ec;
    ec.name = names[c];
    const auto& v = ratios[c];
    ec.worst_ratio = *std::max_element(v.begin(), v.end());
    ec.first_ratio = v.front();
    ec.last_ratio = v.back();
    const double head = *std::max_element(v.begin(), v.begin() + third);
    const double tail = *std::max_element(v.end() - third, v.end());
    ec.tail_growth = head > 0.0 ? tail / head : (tail > 0.0 ? INFINITY : 0.0);
    ec.violated = !std::isfinite(ec.worst_ratio) || ec.tail_growth > growth_tol;
    rep.checks.push_back(ec);
  }
  return rep;
}

}  // namespace ringburst
