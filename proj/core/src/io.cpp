#include "nlwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlwave/errors.hpp"

namespace nlwave {

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void write_header(std::ostream& os, const Grid& g, double t) {
  os << "# L=" << format_real(g.half_length()) << " N=" << g.size() << " t=" << format_real(t) << '\n';
}

double parse_real(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used == 0 || used != s.size()) {
    throw ConfigError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void write_snapshot(std::ostream& os, const Field& u, double t) {
  const Grid& g = u.grid();
  write_header(os, g, t);
  const auto s = u.samples();
  for (int j = 0; j < g.size(); ++j) {
    os << format_real(g.node(j)) << ',' << format_real(s[static_cast<std::size_t>(j)]) << '\n';
  }
}

void write_snapshot(std::ostream& os, const State& st) {
  const Grid& g = st.grid();
  write_header(os, g, st.t);
  const auto u = st.u.samples();
  const auto v = st.v.samples();
  for (int j = 0; j < g.size(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    os << format_real(g.node(j)) << ',' << format_real(u[k]) << ',' << format_real(v[k]) << '\n';
  }
}

State Snapshot::to_state() const {
  const Grid g(half_length, n_points);
  Field fu = Field::from_samples(g, u);
  Field fv = v.empty() ? Field::zeros(g) : Field::from_samples(g, v);
  return {std::move(fu), std::move(fv), t};
}

Snapshot read_snapshot(std::istream& is) {
  Snapshot snap;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("snapshot: empty input");
  double L = 0.0;
  int N = 0;
  double t = 0.0;
  {
    char lbuf[64], tbuf[64];
    if (std::sscanf(line.c_str(), "# L=%63s N=%d t=%63s", lbuf, &N, tbuf) != 3) {
      throw ConfigError("snapshot: header must read '# L=<float> N=<int> t=<float>'");
    }
    L = parse_real(lbuf, 1);
    t = parse_real(tbuf, 1);
  }
  const Grid grid(L, N);
  snap.half_length = L;
  snap.n_points = N;
  snap.t = t;
  int lineno = 1;
  std::size_t width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (width == 0) width = cells.size();
    if ((cells.size() != 2 && cells.size() != 3) || cells.size() != width) {
      throw ConfigError("snapshot: line " + std::to_string(lineno) + ": expected x,u or x,u,v");
    }
    snap.x.push_back(parse_real(trim(cells[0]), lineno));
    snap.u.push_back(parse_real(trim(cells[1]), lineno));
    if (width == 3) snap.v.push_back(parse_real(trim(cells[2]), lineno));
  }
  if (static_cast<int>(snap.x.size()) != N) {
    throw ConfigError("snapshot: expected " + std::to_string(N) + " rows, found " +
                      std::to_string(snap.x.size()));
  }
  for (int j = 0; j < N; ++j) {
    if (std::abs(snap.x[static_cast<std::size_t>(j)] - grid.node(j)) > 1e-9 * (1.0 + L)) {
      throw ConfigError("snapshot: node " + std::to_string(j) + " does not match the grid");
    }
  }
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open snapshot " + path.string());
  return read_snapshot(is);
}

Kernel read_kernel_csv(std::istream& is, std::string name) {
  std::vector<std::pair<double, double>> table;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) {
      throw ConfigError("kernel table: line " + std::to_string(lineno) + ": expected xi,beta_hat");
    }
    const std::string a = trim(cells[0]);
    if (table.empty() && a == "xi") continue;  // optional header row
    table.emplace_back(parse_real(a, lineno), parse_real(trim(cells[1]), lineno));
  }
  return tabulated_kernel(std::move(name), std::move(table));
}

Kernel read_kernel_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open kernel table " + path.string());
  return read_kernel_csv(is, path.stem().string());
}

void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  os << "t,Xs_norm,Hs_u,Hs_v,hamiltonian,Es,escaped\n";
  for (const auto& r : rows) {
    os << format_real(r.t) << ',' << format_real(r.Xs_norm) << ',' << format_real(r.Hs_u) << ','
       << format_real(r.Hs_v) << ',' << format_real(r.hamiltonian) << ',' << format_real(r.Es) << ','
       << (r.escaped ? 1 : 0) << '\n';
  }
}

void write_sweep(std::ostream& os, const std::vector<SweepResult>& rows) {
  os << "epsilon,p,s,T_esc,product,cap_hit\n";
  for (const auto& r : rows) {
    os << format_real(r.epsilon) << ',' << r.p << ',' << format_real(r.s) << ','
       << format_real(r.T_esc) << ',' << format_real(r.product) << ',' << (r.cap_hit ? 1 : 0)
       << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace nlwave
