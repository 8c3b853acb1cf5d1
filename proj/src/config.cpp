#include "ringburst/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include "ringburst/errors.hpp"
#include "ringburst/snapshot.hpp"

namespace ringburst {

namespace {

namespace pt = boost::property_tree;

double to_double(const std::string& key, const std::string& s) {
  const char* b = s.c_str();
  char* e = nullptr;
  const double v = std::strtod(b, &e);
  while (e && (*e == ' ' || *e == '\t')) ++e;
  if (e == b || *e != '\0') throw IoError("config: " + key + " expects a number, got '" + s + "'");
  return v;
}

std::size_t to_count(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v < 0.0 || v != std::floor(v)) throw IoError("config: " + key + " expects a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw IoError("config: " + key + " expects true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream is(t);
  std::vector<double> out;
  std::string w;
  while (is >> w) out.push_back(to_double(key, w));
  return out;
}

std::string list_string(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt17(v[k]);
  return s;
}

std::string b2s(bool b) { return b ? "true" : "false"; }

using Setter = std::function<void(const std::string&)>;
using Getter = std::function<std::string()>;
struct Field {
  Setter set;
  Getter get;
};

template <class T>
Field num(T& x) {
  if constexpr (std::is_same_v<T, double>)
    return {[&x](const std::string& s) { x = to_double("value", s); }, [&x] { return fmt17(x); }};
  else if constexpr (std::is_same_v<T, int>)
    return {[&x](const std::string& s) { x = static_cast<int>(to_count("value", s)); },
            [&x] { return std::to_string(x); }};
  else
    return {[&x](const std::string& s) { x = to_count("value", s); }, [&x] { return std::to_string(x); }};
}

Field flag(bool& x) {
  return {[&x](const std::string& s) { x = to_bool("value", s); }, [&x] { return b2s(x); }};
}

Field curve(CurveSpec& c) {
  return {[&c](const std::string& s) {
            try {
              c = CurveSpec::parse(s);
            } catch (const std::exception& e) {
              throw IoError(std::string("config: bad curve: ") + e.what());
            }
          },
          [&c] { return c.to_string(); }};
}

Field list(std::vector<double>& v) {
  return {[&v](const std::string& s) { v = to_list("value", s); }, [&v] { return list_string(v); }};
}

using Schema = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Field>>>>;

Schema schema(RunConfig& c) {
  SimConfig& s = c.simulate;
  VerifyConfig& v = c.verify;
  ConstantsConfig& k = c.constants;
  Field potential{[&s](const std::string& x) {
                    if (x == "cached") s.potential = PotentialMode::cached_kernel;
                    else if (x == "full") s.potential = PotentialMode::full_kernel;
                    else throw IoError("config: potential expects cached or full");
                  },
                  [&s] { return std::string(s.potential == PotentialMode::cached_kernel ? "cached" : "full"); }};
  Field flux{[&s](const std::string& x) {
               if (x == "exponential") s.flux = FluxScheme::exponential;
               else if (x == "upwind") s.flux = FluxScheme::upwind;
               else if (x == "centred") s.flux = FluxScheme::centred;
               else throw IoError("config: flux expects exponential, upwind or centred");
             },
             [&s] {
               return std::string(s.flux == FluxScheme::exponential ? "exponential"
                                  : s.flux == FluxScheme::upwind    ? "upwind"
                                                                    : "centred");
             }};
  return {
      {"grid",
       {{"r_lo", num(c.grid.r_lo)}, {"r_hi", num(c.grid.r_hi)}, {"z_lo", num(c.grid.z_lo)},
        {"z_hi", num(c.grid.z_hi)}, {"h_min", num(c.grid.h_min)}, {"growth", num(c.grid.growth)},
        {"h_max", num(c.grid.h_max)}}},
      {"constants",
       {{"delta", num(k.delta)}, {"eps", num(k.eps)}, {"M", num(k.M)}, {"a", num(k.a)}, {"b", num(k.b)},
        {"tau0", num(k.tau0)}, {"eps_T", num(k.eps_T)}}},
      {"simulate",
       {{"cfl", num(s.cfl)}, {"dt_max", num(s.dt_max)}, {"cap_factor", num(s.cap_factor)},
        {"min_cells", num(s.min_cells)}, {"t_end", num(s.t_end)}, {"max_steps", num(s.max_steps)},
        {"output_every", num(s.output_every)}, {"snapshot_every", num(s.snapshot_every)},
        {"potential", potential}, {"chemotaxis", flag(s.chemotaxis)}, {"flux", flux},
        {"far_field_boundary", flag(s.far_field_boundary)}}},
      {"verify",
       {{"T", num(v.T)}, {"lambda", curve(v.lambda)}, {"alpha", curve(v.alpha)}, {"xi_r", num(v.xi.r)},
        {"xi_z", num(v.xi.z)}, {"taus", list(v.taus)}, {"lambdas", list(v.lambdas)},
        {"sweep_tau", num(v.sweep_tau)}, {"residual_taus", list(v.residual_taus)},
        {"barrier_times", num(v.barrier_times)}, {"barrier_space", num(v.barrier_space)}}},
  };
}

RingInit parse_ring(const std::string& key, const std::string& s) {
  const auto v = to_list(key, s);
  if (v.size() != 5) throw IoError("config: " + key + " expects 'r z lambda alpha cutoff'");
  return RingInit{{v[0], v[1]}, v[2], v[3], v[4]};
}

}  // namespace

SimConfig RunConfig::sim_config() const {
  SimConfig s = simulate;
  s.grid = grid;
  s.rings = rings;
  return s;
}

RingParams RunConfig::ring_params() const {
  RingParams p;
  p.lambda = verify.lambda;
  p.alpha = verify.alpha;
  p.xi_T = verify.xi;
  p.T = verify.T;
  p.delta = constants.delta;
  return p;
}

RunConfig RunConfig::parse(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  RunConfig c;
  Schema sch = schema(c);
  std::map<std::string, std::map<std::string, Field*>> index;
  for (auto& [sec, fields] : sch)
    for (auto& [key, f] : fields) index[sec][key] = &f;
  for (const auto& [sec, body] : tree) {
    if (!body.data().empty()) throw IoError("config: key '" + sec + "' outside a section");
    if (sec == "rings") {
      c.rings.clear();
      static const std::regex ring_key("ring[0-9]+");
      std::map<long, RingInit> ordered;
      std::optional<std::size_t> count;
      for (const auto& [key, val] : body) {
        if (key == "count") {
          count = to_count("rings.count", val.data());
          continue;
        }
        if (!std::regex_match(key, ring_key)) throw IoError("config: unknown key rings." + key);
        ordered[std::stol(key.substr(4))] = parse_ring(key, val.data());
      }
      if (count && *count != ordered.size()) throw IoError("config: rings.count does not match the ring keys");
      for (const auto& [n, r] : ordered) c.rings.push_back(r);
      continue;
    }
    auto s = index.find(sec);
    if (s == index.end()) throw IoError("config: unknown section [" + sec + "]");
    for (const auto& [key, val] : body) {
      auto f = s->second.find(key);
      if (f == s->second.end()) throw IoError("config: unknown key " + sec + "." + key);
      try {
        f->second->set(val.data());
      } catch (const IoError& e) {
        throw IoError("config: " + sec + "." + key + ": " + e.what());
      }
    }
  }
  try {
    c.sim_config().validate();
  } catch (const DomainError& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  if (!(c.verify.T > 0.0)) throw IoError("config: verify.T must be positive");
  for (const auto* list : {&c.verify.taus, &c.verify.residual_taus})
    for (double tau : *list)
      if (!(tau > 0.0 && tau < c.verify.T)) throw IoError("config: verify taus must lie in (0, T)");
  if (!(c.verify.sweep_tau > 0.0 && c.verify.sweep_tau < c.verify.T))
    throw IoError("config: verify.sweep_tau must lie in (0, T)");
  for (double l : c.verify.lambdas)
    if (!(l > 0.0)) throw IoError("config: verify.lambdas must be positive");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  RunConfig copy = *this;
  std::ostringstream os;
  const Schema sch = schema(copy);
  for (const auto& [sec, fields] : sch) {
    os << '[' << sec << "]\n";
    for (const auto& [key, f] : fields) os << key << " = " << f.get() << '\n';
    os << '\n';
    if (sec == "grid") {
      os << "[rings]\ncount = " << rings.size() << '\n';
      for (std::size_t k = 0; k < rings.size(); ++k) {
        const RingInit& r = rings[k];
        os << "ring" << k + 1 << " = " << fmt17(r.center.r) << ' ' << fmt17(r.center.z) << ' ' << fmt17(r.lambda)
           << ' ' << fmt17(r.alpha) << ' ' << fmt17(r.cutoff) << '\n';
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace ringburst
