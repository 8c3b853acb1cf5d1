#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ringburst/config.hpp"
#include "ringburst/elliptic.hpp"
#include "ringburst/errors.hpp"
#include "ringburst/field.hpp"
#include "ringburst/parallel.hpp"
#include "ringburst/potential.hpp"
#include "ringburst/simulator.hpp"
#include "ringburst/snapshot.hpp"
#include "ringburst/verify.hpp"

using namespace ringburst;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit { ok = 0, domain = 2, io = 3, fail = 4 };

RunConfig load_config(const std::string& path) { return path.empty() ? RunConfig{} : RunConfig::load(path); }

bool is_binary(const std::string& path) { return fs::path(path).extension() == ".bin"; }

ScalarField2D read_field(const std::string& path) {
  return is_binary(path) ? read_snapshot_bin(path) : read_snapshot_csv(path);
}

void write_field(const ScalarField2D& f, const std::string& path) {
  if (is_binary(path)) write_snapshot_bin(f, path);
  else write_snapshot_csv(f, path);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

int cmd_elliptic(const std::string& mode, double x, int terms) {
  if (mode == "K") {
    std::cout << fmt17(agm_K(x).value) << '\n';
  } else if (mode == "K-series") {
    const EllipticValue s = series_K_near1(x, terms);
    std::cout << "value,remainder_bound,agm\n"
              << fmt17(s.value) << ',' << fmt17(s.remainder_bound.value_or(NAN)) << ','
              << fmt17(agm_K(x).value) << '\n';
  } else if (mode == "imt") {
    std::cout << fmt17(imaginary_modulus_integral(x)) << '\n';
  } else {
    throw DomainError("elliptic: mode must be K, K-series or imt");
  }
  return ok;
}

// Far-field rows at 10x the support radius (measured from the origin).
std::string far_field_report(const ScalarField2D& f) {
  const Grid2D& g = *f.grid;
  double R = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i)
      if (f.at(i, j) != 0.0) R = std::max(R, std::hypot(g.r().nodes()[i], g.z().nodes()[j]));
  const double M = integrate_cyl(f);
  std::ostringstream os;
  os << "r,z,quadrature,monopole,rel_err\n";
  if (R == 0.0) return os.str();
  for (Point x : {Point{10.0 * R, 0.0}, Point{6.0 * R, 8.0 * R}, Point{8.0 * R, -6.0 * R}}) {
    const double v = axisym_potential_at(f, x).v;
    const double m = M / (4.0 * kPi * std::hypot(x.r, x.z));
    os << fmt17(x.r) << ',' << fmt17(x.z) << ',' << fmt17(v) << ',' << fmt17(m) << ','
       << fmt17(m != 0.0 ? std::abs(v - m) / std::abs(m) : std::abs(v)) << '\n';
  }
  return os.str();
}

int cmd_potential(const std::string& input, const std::string& targets, const std::string& out) {
  const ScalarField2D f = read_field(input);
  const GridPtr tg = targets.empty() ? f.grid : read_field(targets).grid;
  const PotentialResult res = axisym_potential(f, tg);
  ensure_dir(out);
  write_field(res.field, (fs::path(out) / (is_binary(input) ? "potential.bin" : "potential.csv")).string());
  const std::string report = far_field_report(f);
  write_text((fs::path(out) / "far_field.csv").string(), report);
  std::cout << report << "# max |v| = " << fmt17(res.field.sup_abs()) << '\n';
  return ok;
}

int cmd_verify(const std::string& which, const RunConfig& cfg, const std::string& out) {
  const VerifyReport r = run_verification(which, cfg);
  const std::string text = r.csv();
  if (!out.empty()) {
    ensure_dir(out);
    write_text((fs::path(out) / (which + ".csv")).string(), text);
  }
  std::cout << text;
  return r.passed ? ok : fail;
}

std::string summary_text(const RunResult& r, const SimConfig& cfg) {
  std::ostringstream os;
  auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  const RateRow& last = r.series.rows.back();
  kv("event", to_string(r.event));
  kv("steps", std::to_string(r.steps));
  kv("t_final", fmt17(last.t));
  kv("initial_sup", fmt17(r.initial_sup));
  kv("final_sup", fmt17(last.sup_u));
  kv("max_mass_drift", fmt17(r.max_mass_drift));
  kv("min_u", fmt17(r.min_u));
  for (std::size_t k = 0; k < last.ring_lambda.size(); ++k)
    kv("lambda_ring" + std::to_string(k + 1), fmt17(last.ring_lambda[k]));
  if (cfg.rings.empty() || r.event != SimEvent::cap) return os.str();
  const BlowupReport b = blowup_report(r);
  kv("sup_ratio", fmt17(b.sup_ratio));
  if (b.T_star) kv("T_star", fmt17(*b.T_star));
  kv("tau_end", fmt17(b.tau_end));
  if (b.classification) {
    kv("class", to_string(b.classification->type));
    kv("typeII_growth", fmt17(b.classification->growth));
  }
  if (b.slope) {
    kv("lambda_slope", fmt17(b.slope->slope));
    kv("slope_decades", fmt17(b.slope->decades));
  }
  kv("phenomenology", b.passed ? "PASS" : "FAIL");
  kv("detail", b.detail);
  return os.str();
}

int cmd_simulate(const RunConfig& cfg, const std::string& out) {
  const SimConfig sc = cfg.sim_config();
  const Simulator sim(sc);
  const RunResult r = run(sim, sim.init());
  const std::string summary = summary_text(r, sc);
  if (!out.empty()) {
    ensure_dir(out);
    r.series.write_csv((fs::path(out) / "series.csv").string());
    if (!r.snapshots.empty()) {
      const fs::path dir = fs::path(out) / "snapshots";
      ensure_dir(dir.string());
      std::ostringstream index;
      index << "file,step,t\n";
      for (const SimState& s : r.snapshots) {
        char name[32];
        std::snprintf(name, sizeof name, "u_%08zu.csv", s.step);
        write_snapshot_csv(s.u, (dir / name).string());
        index << name << ',' << s.step << ',' << fmt17(s.t) << '\n';
      }
      write_text((dir / "index.csv").string(), index.str());
    }
    write_text((fs::path(out) / "summary.txt").string(), summary);
  }
  std::cout << summary;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ring blow-up toolkit for the axisymmetric Keller-Segel system"};
  app.require_subcommand(1);
  std::string config_path, out_dir;

  auto* ell = app.add_subcommand("elliptic", "Complete elliptic integral K and related values");
  std::string mode;
  double x = 0.0;
  int terms = 2;
  ell->add_option("mode", mode, "K | K-series | imt")->required();
  ell->add_option("x", x, "modulus k (K, K-series) or a (imt)")->required();
  ell->add_option("--terms", terms, "retained series terms for K-series");

  auto* pot = app.add_subcommand("potential", "Axisymmetric potential of a density snapshot");
  std::string input, targets;
  pot->add_option("--input", input, "density snapshot (.csv or .bin)")->required();
  pot->add_option("--targets", targets, "snapshot whose grid supplies the targets");
  pot->add_option("--out", out_dir, "output directory")->required();

  auto* ver = app.add_subcommand("verify", "Run one verification and print its report");
  std::string which;
  ver->add_option("--which", which, "expansion-v0 | grad-v0 | phi-lambda | residual-envelope | barrier | moments")
      ->required();
  ver->add_option("--config", config_path, "INI configuration");
  ver->add_option("--out", out_dir, "directory for the report file");

  auto* sim = app.add_subcommand("simulate", "Finite-volume simulation with rate extraction");
  sim->add_option("--config", config_path, "INI configuration");
  sim->add_option("--out", out_dir, "directory for series.csv, snapshots and summary.txt");

  auto* cfg = app.add_subcommand("config", "Print the parsed configuration with defaults filled in");
  cfg->add_option("--config", config_path, "INI configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return io;
  }

  configure_threads();
  try {
    if (ell->parsed()) return cmd_elliptic(mode, x, terms);
    if (pot->parsed()) return cmd_potential(input, targets, out_dir);
    if (ver->parsed()) return cmd_verify(which, load_config(config_path), out_dir);
    if (sim->parsed()) return cmd_simulate(load_config(config_path), out_dir);
    if (cfg->parsed()) {
      std::cout << load_config(config_path).serialize();
      return ok;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return domain;
  }
  return ok;
}
