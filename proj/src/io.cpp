#include "sdom/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sdom::io {

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw InvalidInput("not a number: '" + s + "'");
  return v;
}

namespace {

std::size_t parse_index(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidInput("not an index: '" + s + "'");
  return std::stoull(s);
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw InvalidInput("not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (s.back() == sep) out.push_back("");
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

/// Splits "key=value"; throws when the key differs.
std::string value_of(const std::string& tok, const std::string& key) {
  const auto eq = tok.find('=');
  if (eq == std::string::npos || tok.substr(0, eq) != key)
    throw InvalidInput("expected '" + key + "=...' but found '" + tok + "'");
  return tok.substr(eq + 1);
}

PointSet parse_ids(const std::string& s) {
  PointSet out;
  for (const auto& t : split(s, ',')) out.push_back(parse_index(t));
  return out;
}

std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ids[i]);
  }
  return s;
}

/// Line reader that skips blanks and '#' comments and collects meta lines.
class Reader {
 public:
  Reader(std::istream& is, Meta* meta) : is_(is), meta_(meta) {}

  bool next(std::vector<std::string>& toks) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      toks = tokens(line);
      if (toks.empty() || toks[0][0] == '#') continue;
      if (toks[0] == "meta") {
        for (std::size_t i = 1; i < toks.size(); ++i) {
          const auto eq = toks[i].find('=');
          if (eq == std::string::npos) fail("malformed meta entry '" + toks[i] + "'");
          if (meta_) (*meta_)[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
        }
        continue;
      }
      return true;
    }
    return false;
  }

  void header(const std::string& kind) {
    std::vector<std::string> t;
    if (!next(t) || t.size() != 2 || t[0] != kind || t[1] != "v1")
      throw InvalidInput("missing header '" + kind + " v1'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& is_;
  Meta* meta_;
  std::size_t line_no_ = 0;
};

void write_header(std::ostream& os, const std::string& kind, const Meta& meta) {
  os << kind << " v1\n";
  if (!meta.empty()) {
    os << "meta";
    for (const auto& [k, v] : meta) os << ' ' << k << '=' << v;
    os << '\n';
  }
}

}  // namespace

void write_space(std::ostream& os, const MetricMeasureSpace& space, const Meta& meta) {
  write_header(os, "space", meta);
  for (PointId x = 0; x < space.size(); ++x) {
    os << "point " << x << " mass=" << fmt(space.mass(x));
    if (space.has_coords()) {
      os << " coords=";
      const auto& c = space.coords()[x];
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << fmt(c[i]);
    }
    os << '\n';
  }
  if (!space.has_coords())
    for (PointId x = 0; x < space.size(); ++x)
      for (PointId y = x + 1; y < space.size(); ++y) os << "dist " << x << ' ' << y << ' ' << fmt(space.dist(x, y)) << '\n';
}

std::string space_text(const MetricMeasureSpace& space) {
  std::ostringstream os;
  write_space(os, space);
  return os.str();
}

MetricMeasureSpace read_space(std::istream& is, Meta* meta, std::size_t max_points) {
  Reader rd(is, meta);
  rd.header("space");
  std::vector<double> masses;
  std::vector<std::vector<double>> coords;
  std::vector<std::tuple<std::size_t, std::size_t, double>> dists;
  std::vector<std::string> t;
  while (rd.next(t)) {
    if (t[0] == "point") {
      if (t.size() < 3 || t.size() > 4) rd.fail("expected 'point <id> mass=<float> [coords=...]'");
      if (parse_index(t[1]) != masses.size()) rd.fail("point ids must be consecutive from 0");
      masses.push_back(parse_double(value_of(t[2], "mass")));
      if (t.size() == 4) {
        std::vector<double> c;
        for (const auto& v : split(value_of(t[3], "coords"), ',')) c.push_back(parse_double(v));
        coords.push_back(std::move(c));
      }
    } else if (t[0] == "dist") {
      if (t.size() != 4) rd.fail("expected 'dist <id1> <id2> <float>'");
      dists.emplace_back(parse_index(t[1]), parse_index(t[2]), parse_double(t[3]));
    } else {
      rd.fail("unknown record '" + t[0] + "'");
    }
  }
  const std::size_t n = masses.size();
  if (n == 0) throw InvalidInput("space file has no points");
  if (n > max_points) throw InvalidInput("space has " + std::to_string(n) + " points, cap is " + std::to_string(max_points));
  if (!coords.empty() && coords.size() != n) throw InvalidInput("coords must be given for every point or none");
  if (!coords.empty() && dists.empty()) return MetricMeasureSpace::from_coords(std::move(coords), std::move(masses), max_points);
  std::vector<double> d(n * n, 0.0);
  std::vector<char> seen(n * n, 0);
  for (const auto& [i, j, v] : dists) {
    if (i >= n || j >= n) throw InvalidInput("dist refers to unknown point");
    if (seen[i * n + j]) throw InvalidInput("duplicate dist entry for " + std::to_string(i) + " " + std::to_string(j));
    seen[i * n + j] = 1;
    d[i * n + j] = v;
    if (!seen[j * n + i]) d[j * n + i] = v;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !seen[i * n + j] && !seen[j * n + i])
        throw InvalidInput("missing dist for pair " + std::to_string(i) + " " + std::to_string(j));
  return MetricMeasureSpace(std::move(masses), std::move(d), std::move(coords), max_points);
}

void write_lattice(std::ostream& os, const Lattice& lattice, const Meta& meta) {
  write_header(os, "lattice", meta);
  const auto& K = lattice.constants();
  os << "constants mode=" << to_string(K.mode) << " C0=" << fmt(K.C0) << " A0=" << fmt(K.A0) << " k_min=" << K.k_min
     << " k_max=" << K.k_max << '\n';
  for (const auto& c : lattice.cells()) {
    os << "cell " << c.id << " k=" << c.level << " z=" << c.center << " r=" << fmt(c.radius)
       << " parent=" << (c.parent ? std::to_string(*c.parent) : "-") << " doubling=" << (c.is_doubling ? 1 : 0)
       << " members=" << join_ids(c.members) << '\n';
  }
}

Lattice read_lattice(std::istream& is, Meta* meta) {
  Reader rd(is, meta);
  rd.header("lattice");
  std::vector<std::string> t;
  if (!rd.next(t) || t[0] != "constants" || t.size() != 6) rd.fail("expected constants line");
  LatticeConstants K;
  K.mode = parse_lattice_mode(value_of(t[1], "mode"));
  K.C0 = parse_double(value_of(t[2], "C0"));
  K.A0 = parse_double(value_of(t[3], "A0"));
  K.k_min = parse_int(value_of(t[4], "k_min"));
  K.k_max = parse_int(value_of(t[5], "k_max"));
  std::vector<Cell> cells;
  while (rd.next(t)) {
    if (t[0] != "cell" || t.size() != 8) rd.fail("expected cell line");
    Cell c;
    c.id = parse_index(t[1]);
    if (c.id != cells.size()) rd.fail("cell ids must be consecutive from 0");
    c.level = parse_int(value_of(t[2], "k"));
    c.center = parse_index(value_of(t[3], "z"));
    c.radius = parse_double(value_of(t[4], "r"));
    const auto par = value_of(t[5], "parent");
    if (par != "-") c.parent = parse_index(par);
    const auto dbl = value_of(t[6], "doubling");
    if (dbl != "0" && dbl != "1") rd.fail("doubling must be 0 or 1");
    c.is_doubling = dbl == "1";
    c.members = parse_ids(value_of(t[7], "members"));
    cells.push_back(std::move(c));
  }
  return Lattice(K, std::move(cells));
}

void write_ftuple(std::ostream& os, const FunctionTuple& f, const Meta& meta) {
  write_header(os, "ftuple", meta);
  for (int i = 0; i < f.m(); ++i)
    for (PointId x = 0; x < f.points(); ++x)
      if (f[i][x] != 0.0) os << 'f' << i + 1 << ' ' << x << ' ' << fmt(f[i][x]) << '\n';
}

namespace {

template <class Fill>
void read_slots(Reader& rd, char prefix, int m, std::size_t n, Fill&& fill) {
  std::vector<std::string> t;
  while (rd.next(t)) {
    if (t.size() != 3 || t[0].size() < 2 || t[0][0] != prefix)
      rd.fail(std::string("expected '") + prefix + "<i> <pid> <value>'");
    const std::size_t slot = parse_index(t[0].substr(1));
    if (slot < 1 || slot > static_cast<std::size_t>(m)) rd.fail("slot " + t[0] + " out of range");
    const std::size_t x = parse_index(t[1]);
    if (x >= n) rd.fail("point " + t[1] + " out of range");
    fill(slot - 1, x, parse_double(t[2]));
  }
}

}  // namespace

FunctionTuple read_ftuple(std::istream& is, int m, std::size_t n, Meta* meta) {
  Reader rd(is, meta);
  rd.header("ftuple");
  FunctionTuple f = FunctionTuple::zeros(m, n);
  read_slots(rd, 'f', m, n, [&](std::size_t i, std::size_t x, double v) {
    if (!std::isfinite(v)) rd.fail("non-finite value");
    f[i][x] = v;
  });
  return f;
}

void write_weights(std::ostream& os, const WeightTuple& w, const Meta& meta) {
  write_header(os, "weights", meta);
  for (int i = 0; i < w.m(); ++i)
    for (PointId x = 0; x < w[i].size(); ++x) os << 'w' << i + 1 << ' ' << x << ' ' << fmt(w[i][x]) << '\n';
}

WeightTuple read_weights(std::istream& is, int m, std::size_t n, Meta* meta) {
  Reader rd(is, meta);
  rd.header("weights");
  WeightTuple w(std::vector<std::vector<double>>(m, std::vector<double>(n, NAN)));
  read_slots(rd, 'w', m, n, [&](std::size_t i, std::size_t x, double v) { w.w[i][x] = v; });
  for (int i = 0; i < m; ++i)
    for (std::size_t x = 0; x < n; ++x)
      if (std::isnan(w.w[i][x]))
        throw InvalidInput("weight w" + std::to_string(i + 1) + " missing at point " + std::to_string(x));
  w.validate(n);
  return w;
}

void write_domination(std::ostream& os, const DominationResult& r, const Meta& meta) {
  write_header(os, "domination", meta);
  os << "root=" << r.root << " alpha=" << fmt(r.alpha) << '\n';
  for (const auto& fam : r.layers) {
    os << "layer " << fam.layer << " coeff=1e-" << 2 * fam.layer << '\n';
    for (std::size_t i = 0; i < fam.cells.size(); ++i)
      os << "Q=" << fam.cells[i] << " E=" << join_ids(fam.E[i]) << '\n';
  }
  os << "Cdom=" << fmt(r.C_dom) << " depth=" << r.depth << '\n';
}

DominationResult read_domination(std::istream& is, Meta* meta) {
  Reader rd(is, meta);
  rd.header("domination");
  DominationResult r;
  std::vector<std::string> t;
  if (!rd.next(t) || t.size() != 2) rd.fail("expected 'root=<id> alpha=<float>'");
  r.root = parse_index(value_of(t[0], "root"));
  r.alpha = parse_double(value_of(t[1], "alpha"));
  bool footer = false;
  while (rd.next(t)) {
    if (footer) rd.fail("content after footer");
    if (t[0] == "layer") {
      if (t.size() != 3) rd.fail("expected 'layer <k> coeff=1e-<2k>'");
      SparseFamily fam;
      fam.layer = parse_int(t[1]);
      fam.alpha = r.alpha;
      if (fam.layer != static_cast<int>(r.layers.size())) rd.fail("layers must be consecutive from 0");
      if (value_of(t[2], "coeff") != "1e-" + std::to_string(2 * fam.layer)) rd.fail("coefficient does not match layer");
      r.layers.push_back(std::move(fam));
    } else if (t[0].rfind("Q=", 0) == 0) {
      if (r.layers.empty() || t.size() != 2) rd.fail("cell line outside a layer block");
      r.layers.back().cells.push_back(parse_index(value_of(t[0], "Q")));
      r.layers.back().E.push_back(parse_ids(value_of(t[1], "E")));
    } else if (t[0].rfind("Cdom=", 0) == 0) {
      if (t.size() != 2) rd.fail("expected 'Cdom=<float> depth=<int>'");
      r.C_dom = parse_double(value_of(t[0], "Cdom"));
      r.depth = parse_int(value_of(t[1], "depth"));
      footer = true;
    } else {
      rd.fail("unknown record '" + t[0] + "'");
    }
  }
  if (!footer) throw InvalidInput("domination file has no footer");
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("write failed for '" + path + "'");
}

}  // namespace sdom::io
