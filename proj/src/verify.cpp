#include "ringburst/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "ringburst/correction.hpp"
#include "ringburst/errors.hpp"
#include "ringburst/expansions.hpp"
#include "ringburst/residual.hpp"
#include "ringburst/snapshot.hpp"

namespace ringburst {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// All values within +-tol of the median.
bool within_median(const std::vector<double>& v, double tol, double& worst) {
  const double med = median(v);
  worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x / med - 1.0));
  return worst <= tol;
}

ExpansionOptions expansion_options(const RunConfig& cfg) {
  ExpansionOptions o;
  o.eps_factor = cfg.constants.eps;
  return o;
}

CorrectionOptions correction_options(const RunConfig& cfg) {
  CorrectionOptions o;
  o.eps_T = cfg.constants.eps_T;
  return o;
}

RingParams constant_lambda(const RunConfig& cfg, double lam) {
  RingParams p = cfg.ring_params();
  p.lambda = CurveSpec::constant_value(lam);
  return p;
}

std::vector<double> times_of(const RingParams& p, const std::vector<double>& taus) {
  std::vector<double> t;
  for (double tau : taus) t.push_back(p.T - tau);
  std::sort(t.begin(), t.end());
  return t;
}

double log_decay(double T, double t) { return std::sqrt(2.0 * std::abs(std::log(T - t))); }

}  // namespace

double VerifyReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  throw DomainError("no metric " + key + " in report " + name);
}

std::string VerifyReport::csv() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << fmt17(row[k]);
    os << '\n';
  }
  for (const auto& [k, v] : metrics) os << "# " << k << " = " << fmt17(v) << '\n';
  os << name << ',' << (passed ? "PASS" : "FAIL") << ',' << detail << '\n';
  return os.str();
}

VerifyReport verify_expansion_v0(const RunConfig& cfg) {
  VerifyReport r;
  r.name = "expansion-v0";
  r.header = {"lambda", "offset_over_lambda", "quadrature", "expansion", "discrepancy"};
  const ExpansionOptions opt = expansion_options(cfg);
  double lo = 1e300, hi = -1e300;
  for (double lam : cfg.verify.lambdas) {
    const RingParams p = constant_lambda(cfg, lam);
    const std::vector<double> offsets{0.0, 1.0, 10.0};
    const auto rows = compare_v0_inner(p, p.T - cfg.verify.sweep_tau, offsets, opt);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const ComparisonRow& w = rows[k];
      const Point c = p.xi(p.T - cfg.verify.sweep_tau);
      const double off = std::hypot(w.r - c.r, w.z - c.z) / lam;
      r.rows.push_back({lam, off, w.quadrature, w.expansion, w.discrepancy});
      lo = std::min(lo, w.discrepancy);
      hi = std::max(hi, w.discrepancy);
    }
  }
  const double ratio = lo > 0.0 ? hi / lo : INFINITY;
  r.metrics = {{"band_min", lo}, {"band_max", hi}, {"band_ratio", ratio}};
  r.passed = lo > 0.0 && ratio <= 3.0;
  r.detail = "band max/min = " + fmt17(ratio) + " (limit 3)";
  return r;
}

VerifyReport verify_grad_v0(const RunConfig& cfg) {
  VerifyReport r;
  r.name = "grad-v0";
  r.header = {"lambda", "constant"};
  const ExpansionOptions opt = expansion_options(cfg);
  std::vector<double> C;
  for (double lam : cfg.verify.lambdas) {
    const RingParams p = constant_lambda(cfg, lam);
    double worst = 0.0;
    for (const auto& w : compare_grad_intermediate(p, p.T - cfg.verify.sweep_tau, 5, opt))
      worst = std::max(worst, w.discrepancy);
    C.push_back(worst);
    r.rows.push_back({lam, worst});
  }
  double dev = 0.0;
  r.passed = within_median(C, 0.3, dev);
  r.metrics = {{"median", median(C)}, {"max_rel_dev", dev}};
  r.detail = "max deviation from median = " + fmt17(dev) + " (limit 0.3)";
  return r;
}

double radial_mms_time_order(double dt) {
  auto err = [](double step) {
    const double t1 = 0.2;
    auto grid = std::make_shared<const RadialGrid>(RadialGrid::uniform(6.0, 800));
    auto src = [](double rho, double t) {
      const double e = std::exp(-rho * rho);
      return e * (10.0 * std::cos(10.0 * t) - (4.0 * rho * rho - 12.0) * std::sin(10.0 * t));
    };
    const CorrectionRun run = solve_radial6(grid, src, 0.0, {t1}, [step](double) { return step; });
    double e = 0.0;
    const auto& x = grid->nodes();
    for (std::size_t i = 0; i < x.size(); ++i)
      e = std::max(e, std::abs(run.profiles[0].values[i] - std::sin(10.0 * t1) * std::exp(-x[i] * x[i])));
    return e;
  };
  return std::log2(err(dt) / err(0.5 * dt));
}

VerifyReport verify_phi_lambda(const RunConfig& cfg) {
  VerifyReport r;
  r.name = "phi-lambda";
  r.header = {"t", "T_minus_t", "C_phi", "C_grad"};
  const RingParams p = cfg.ring_params();
  const auto times = times_of(p, cfg.verify.taus);
  const CorrectionOptions opt = correction_options(cfg);
  const CorrectionRun run = solve_phi_lambda(p, correction_grid(p, times.back(), opt), times, opt);
  const EnvelopeFit f = phi_envelope(run, p), g = phi_grad_envelope(run, p);
  for (std::size_t k = 0; k < f.times.size(); ++k) r.rows.push_back({f.times[k], p.T - f.times[k], f.C[k], g.C[k]});
  double dev = 0.0;
  const bool stable = within_median(f.C, 0.3, dev);
  const double order = radial_mms_time_order();
  r.metrics = {{"max_rel_dev", dev}, {"mms_time_order", order}};
  r.passed = stable && order >= 0.9;
  r.detail = "envelope deviation = " + fmt17(dev) + " (limit 0.3), dt order = " + fmt17(order) + " (min 0.9)";
  return r;
}

VerifyReport verify_residual_envelope(const RunConfig& cfg) {
  VerifyReport r;
  r.name = "residual-envelope";
  r.header = {"t", "T_minus_t", "C", "y_at_sup"};
  const RingParams p = cfg.ring_params();
  const auto times = times_of(p, cfg.verify.residual_taus);
  const CorrectionOptions opt = correction_options(cfg);
  const CorrectionRun run = solve_phi_lambda(p, correction_grid(p, times.back(), opt), times, opt);
  const ResidualEnvelope env = residual_envelope(p, run, times);
  for (std::size_t k = 0; k < env.times.size(); ++k)
    r.rows.push_back({env.times[k], p.T - env.times[k], env.C[k], env.y_at_sup[k]});
  const double spread = env.spread();
  r.metrics = {{"spread", spread}, {"times", double(env.times.size())}};
  r.passed = std::isfinite(spread) && spread <= 5.0;
  r.detail = "spread = " + fmt17(spread) + " (limit 5)";
  return r;
}

VerifyReport verify_moments(const RunConfig& cfg) {
  VerifyReport r;
  r.name = "moments";
  r.header = {"t", "T_minus_t", "s", "m0", "abs0", "ratio", "m2"};
  const RingParams p = cfg.ring_params();
  const auto times = times_of(p, cfg.verify.residual_taus);
  const CorrectionOptions opt = correction_options(cfg);
  const CorrectionRun run = solve_phi_lambda(p, correction_grid(p, times.back(), opt), times, opt);
  std::vector<double> ratio, s, lm2;
  bool sign_change = false;
  double sign0 = 0.0;
  for (double t : times) {
    const ResidualMoments m = residual_moments(p, t, run, 16, 16);
    const double q = std::abs(m.m0) / m.abs0;
    ratio.push_back(q);
    s.push_back(log_decay(p.T, t));
    lm2.push_back(std::log(std::abs(m.m2)));
    if (sign0 == 0.0) sign0 = m.m2;
    else if (m.m2 * sign0 < 0.0) sign_change = true;
    r.rows.push_back({t, p.T - t, s.back(), m.m0, m.abs0, q, m.m2});
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < ratio.size(); ++k) decreasing = decreasing && ratio[k] < ratio[k - 1];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    sx += s[k];
    sy += lm2[k];
    sxx += s[k] * s[k];
    sxy += s[k] * lm2[k];
  }
  const double slope = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.metrics = {{"ratio_decreasing", decreasing ? 1.0 : 0.0},
               {"m2_slope", slope},
               {"m2_sign_change", sign_change ? 1.0 : 0.0}};
  r.passed = decreasing && !sign_change && slope >= 1.4;
  r.detail = std::string("ratio ") + (decreasing ? "strictly decreasing" : "not monotone") +
             ", m2 decay slope = " + fmt17(slope) + " (min 1.4)" + (sign_change ? ", m2 changes sign" : "");
  return r;
}

VerifyReport verify_barrier(const RunConfig& cfg) {
  VerifyReport r;
  r.name = "barrier";
  r.header = {"t", "r", "z", "weight", "op0", "op1", "op2", "op3", "ok"};
  const RingParams p = cfg.ring_params();
  OuterBarrier bar = OuterBarrier::defaults(p);
  if (cfg.constants.M > 0.0) bar.M = cfg.constants.M;
  bar.a = cfg.constants.a;
  bar.b = cfg.constants.b;
  bar.delta = cfg.constants.delta;
  const BarrierReport rep =
      barrier_check(p, bar, cfg.verify.barrier_times, cfg.verify.barrier_space, expansion_options(cfg));
  const OuterBarrier& b = rep.barrier;
  for (const BarrierSample& smp : rep.samples) {
    const double lhs = b.c0 * smp.op[0] + b.c1 * smp.op[1] + b.c2 * smp.op[2] + b.c3 * smp.op[3];
    r.rows.push_back({smp.t, smp.r, smp.z, smp.weight, smp.op[0], smp.op[1], smp.op[2], smp.op[3],
                      lhs >= 0.5 * smp.weight ? 1.0 : 0.0});
  }
  r.metrics = {{"fraction", rep.fraction()}, {"samples", double(rep.samples.size())},
               {"c0", b.c0}, {"c1", b.c1}, {"c2", b.c2}, {"c3", b.c3}};
  r.passed = rep.fraction() >= 0.99;
  r.detail = "fraction = " + fmt17(rep.fraction()) + " of " + std::to_string(rep.samples.size()) +
             " points (min 0.99)";
  return r;
}

VerifyReport run_verification(const std::string& which, const RunConfig& cfg) {
  if (which == "expansion-v0") return verify_expansion_v0(cfg);
  if (which == "grad-v0") return verify_grad_v0(cfg);
  if (which == "phi-lambda") return verify_phi_lambda(cfg);
  if (which == "residual-envelope") return verify_residual_envelope(cfg);
  if (which == "moments") return verify_moments(cfg);
  if (which == "barrier") return verify_barrier(cfg);
  throw DomainError("unknown verification '" + which + "'");
}

}  // namespace ringburst
