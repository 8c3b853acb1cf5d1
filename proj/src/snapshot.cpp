#include "ringburst/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "ringburst/errors.hpp"

namespace ringburst {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream os(path, std::ios::out | std::ios::trunc | mode);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = {}) {
  std::ifstream is(path, std::ios::in | mode);
  if (!is) throw IoError("cannot open " + path);
  return is;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw IoError("malformed number '" + s + "'");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw IoError("malformed number '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ' ';
    s += fmt17(v[k]);
  }
  return s;
}

std::vector<double> edges_from_nodes(const std::vector<double>& x) {
  if (x.size() == 1) return {x[0] - 0.5, x[0] + 0.5};
  std::vector<double> e(x.size() + 1);
  for (std::size_t k = 1; k < x.size(); ++k) e[k] = 0.5 * (x[k - 1] + x[k]);
  e.front() = x.front() - (e[1] - x.front());
  e.back() = x.back() + (x.back() - e[x.size() - 1]);
  return e;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int k = 0; k < 8; ++k) r |= ((v >> (8 * k)) & 0xffu) << (8 * (7 - k));
    return r;
  }
  return v;
}

}  // namespace

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_snapshot_csv(const ScalarField2D& f, const std::string& path) {
  auto os = open_out(path);
  os << "r,z,value\n";
  const Grid2D& g = *f.grid;
  for (std::size_t j = 0; j < g.nz(); ++j)
    for (std::size_t i = 0; i < g.nr(); ++i) {
      os << fmt17(g.r().nodes()[i]) << ',' << fmt17(g.z().nodes()[j]) << ','
         << fmt17(f.at(i, j)) << '\n';
    }
  if (!os) throw IoError("write failed for " + path);
}

ScalarField2D read_snapshot_csv(const std::string& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,z,value", 0) != 0) {
    throw IoError(path + ": expected header r,z,value");
  }
  std::vector<double> r, z, v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      throw IoError(path + ": malformed row '" + line + "'");
    }
    r.push_back(parse_double(a));
    z.push_back(parse_double(b));
    v.push_back(parse_double(c));
  }
  if (v.empty()) throw IoError(path + ": no rows");
  std::size_t nr = 1;
  while (nr < z.size() && z[nr] == z[0]) ++nr;
  if (v.size() % nr != 0) throw IoError(path + ": rows do not form a tensor grid");
  const std::size_t nz = v.size() / nr;
  std::vector<double> rn(r.begin(), r.begin() + static_cast<long>(nr));
  std::vector<double> zn(nz);
  for (std::size_t j = 0; j < nz; ++j) {
    zn[j] = z[j * nr];
    for (std::size_t i = 0; i < nr; ++i) {
      if (r[j * nr + i] != rn[i] || z[j * nr + i] != zn[j]) {
        throw IoError(path + ": rows are not in z-major tensor order");
      }
    }
  }
  auto re = edges_from_nodes(rn);
  if (re.front() < 0.0) re.front() = 0.0;
  try {
    return ScalarField2D(make_grid(Axis(re, rn), Axis(edges_from_nodes(zn), zn)), std::move(v));
  } catch (const DomainError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_snapshot_bin(const ScalarField2D& f, const std::string& path) {
  {
    auto os = open_out(path, std::ios::binary);
    for (double x : f.values) {
      std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(x));
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!os) throw IoError("write failed for " + path);
  }
  auto ms = open_out(path + ".meta");
  const Grid2D& g = *f.grid;
  ms << "format = ringburst-snapshot-1\n";
  ms << "kind = " << (g.kind() == Grid2D::Kind::cylindrical ? "cylindrical" : "plane") << '\n';
  ms << "nr = " << g.nr() << '\n';
  ms << "nz = " << g.nz() << '\n';
  ms << "r_nodes = " << join(g.r().nodes()) << '\n';
  ms << "z_nodes = " << join(g.z().nodes()) << '\n';
  ms << "r_edges = " << join(g.r().edges()) << '\n';
  ms << "z_edges = " << join(g.z().edges()) << '\n';
  if (!ms) throw IoError("write failed for " + path + ".meta");
}

ScalarField2D read_snapshot_bin(const std::string& path) {
  auto ms = open_in(path + ".meta");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(ms, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(path + ".meta: malformed line");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"nr", "nz", "r_nodes", "z_nodes"}) {
    if (!kv.count(key)) throw IoError(path + ".meta: missing " + key);
  }
  const std::size_t nr = static_cast<std::size_t>(parse_double(kv["nr"]));
  const std::size_t nz = static_cast<std::size_t>(parse_double(kv["nz"]));
  const auto rn = parse_list(kv["r_nodes"]);
  const auto zn = parse_list(kv["z_nodes"]);
  if (rn.size() != nr || zn.size() != nz) throw IoError(path + ".meta: node count mismatch");
  auto re = kv.count("r_edges") ? parse_list(kv["r_edges"]) : edges_from_nodes(rn);
  auto ze = kv.count("z_edges") ? parse_list(kv["z_edges"]) : edges_from_nodes(zn);
  const bool plane = kv.count("kind") && kv["kind"] == "plane";
  GridPtr g;
  try {
    g = plane ? make_plane_grid(Axis(re, rn), Axis(ze, zn)) : make_grid(Axis(re, rn), Axis(ze, zn));
  } catch (const DomainError& e) {
    throw IoError(path + ".meta: " + e.what());
  }
  auto is = open_in(path, std::ios::binary);
  std::vector<double> v(nr * nz);
  for (auto& x : v) {
    std::uint64_t bits = 0;
    if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
      throw IoError(path + ": truncated value array");
    }
    x = std::bit_cast<double>(to_le(bits));
  }
  char extra;
  if (is.read(&extra, 1)) throw IoError(path + ": trailing bytes");
  return ScalarField2D(g, std::move(v));
}

void write_radial_csv(const RadialProfile& f, const std::string& path) {
  auto os = open_out(path);
  os << "rho,value\n";
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    os << fmt17(f.grid->nodes()[k]) << ',' << fmt17(f.values[k]) << '\n';
  }
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace ringburst
