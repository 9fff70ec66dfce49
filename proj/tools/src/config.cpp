#include "nlwave/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>

#include "nlwave/diagnostics.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/io.hpp"

namespace nlwave::cli {

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

// Thrown by value parsers and checks; the caller attaches the location.
struct BadValue {
  std::string message;
};

double to_real(const std::string& v, const std::string& key) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw BadValue{key + " expects a real number, got '" + v + "'"};
  }
  return x;
}

template <class Int>
Int to_integer(const std::string& v, const std::string& key) {
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw BadValue{key + " expects an integer, got '" + v + "'"};
  }
  return x;
}

std::vector<double> to_reals(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(to_real(trim(cell), key));
  if (out.empty()) throw BadValue{key + " expects a comma-separated list of reals"};
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table{
      {"command", [](RunConfig& c, const std::string& v) { c.command = v; }},
      {"kernel", [](RunConfig& c, const std::string& v) { c.kernel = v; }},
      {"L", [](RunConfig& c, const std::string& v) { c.L = to_real(v, "L"); }},
      {"N", [](RunConfig& c, const std::string& v) { c.N = to_integer<int>(v, "N"); }},
      {"epsilon", [](RunConfig& c, const std::string& v) { c.epsilon = to_real(v, "epsilon"); }},
      {"p", [](RunConfig& c, const std::string& v) { c.p = to_integer<int>(v, "p"); }},
      {"s", [](RunConfig& c, const std::string& v) { c.s = to_real(v, "s"); }},
      {"dt", [](RunConfig& c, const std::string& v) { c.dt = to_real(v, "dt"); }},
      {"T_cap", [](RunConfig& c, const std::string& v) { c.T_cap = to_real(v, "T_cap"); }},
      {"M", [](RunConfig& c, const std::string& v) { c.M = to_real(v, "M"); }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_integer<std::uint64_t>(v, "seed"); }},
      {"integrator", [](RunConfig& c, const std::string& v) { c.integrator = v; }},
      {"t_end", [](RunConfig& c, const std::string& v) { c.t_end = to_real(v, "t_end"); }},
      {"sample_every", [](RunConfig& c, const std::string& v) { c.sample_every = to_real(v, "sample_every"); }},
      {"initial", [](RunConfig& c, const std::string& v) { c.initial = v; }},
      {"amplitude", [](RunConfig& c, const std::string& v) { c.amplitude = to_real(v, "amplitude"); }},
      {"epsilons", [](RunConfig& c, const std::string& v) { c.epsilons = to_reals(v, "epsilons"); }},
      {"probe", [](RunConfig& c, const std::string& v) { c.probe = v; }},
      {"samples", [](RunConfig& c, const std::string& v) { c.samples = to_integer<int>(v, "samples"); }},
      {"max_mode", [](RunConfig& c, const std::string& v) { c.max_mode = to_integer<int>(v, "max_mode"); }},
      {"fit_window", [](RunConfig& c, const std::string& v) { c.fit_window = to_real(v, "fit_window"); }},
      {"workers", [](RunConfig& c, const std::string& v) { c.workers = to_integer<int>(v, "workers"); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
  };
  return table;
}

const Setter* find_setter(const std::string& key) {
  for (const auto& [k, f] : setters()) {
    if (k == key) return &f;
  }
  return nullptr;
}

bool is_initial_shape(const std::string& v) {
  return v == "gaussian" || v == "sech" || v == "zero" || v == "random";
}

// Checks each key in turn; `where` maps a key to its location text.
void validate(const RunConfig& c, const std::function<std::string(const std::string&)>& where) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(where(key) + msg);
  };
  const auto& cmds = command_names();
  if (c.command.empty()) fail("command", "command is required (" + std::string("one of validate-kernel, simulate, sweep, linearized, probes, crosscheck, nashmoser)"));
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) {
    fail("command", "unknown command '" + c.command + "'");
  }
  try {
    resolve_kernel(c.kernel);
  } catch (const ConfigError& e) {
    fail("kernel", e.what());
  }
  if (!(c.L > 0.0)) fail("L", "L must be positive");
  if (c.N % 2 != 0) fail("N", "N must be even");
  if (c.N < 8) fail("N", "N must be at least 8");
  if (!(c.epsilon > 0.0)) fail("epsilon", "epsilon must be positive");
  if (c.p < 1) fail("p", "p must be a positive integer");
  if (!(c.s >= kS0 + 1.0 - 1e-12)) fail("s", "s must be at least s0 + 1 = 1.6");
  if (c.dt < 0.0) fail("dt", "dt must be nonnegative (0 selects the default)");
  if (!(c.T_cap > 0.0)) fail("T_cap", "T_cap must be positive");
  if (!(c.M > 1.0)) fail("M", "M must exceed 1");
  if (c.integrator != "strang" && c.integrator != "rk4") fail("integrator", "integrator must be strang or rk4");
  if (c.t_end < 0.0) fail("t_end", "t_end must be nonnegative");
  if (!(c.sample_every > 0.0)) fail("sample_every", "sample_every must be positive");
  if (!is_initial_shape(c.initial) && !std::filesystem::exists(c.initial)) {
    fail("initial", "initial must be gaussian, sech, zero, random or an existing snapshot file");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0)) fail("epsilons", "epsilons must all be positive");
  }
  const auto probes = probe_names();
  if (c.probe != "all" && std::find(probes.begin(), probes.end(), c.probe) == probes.end()) {
    fail("probe", "probe must be all, moser, kato, as-21, as-22 or as-23");
  }
  if (c.samples < 1) fail("samples", "samples must be at least 1");
  if (c.max_mode < 1 || c.max_mode >= c.N / 2) fail("max_mode", "max_mode must lie in [1, N/2)");
  if (!(c.fit_window > 0.0)) fail("fit_window", "fit_window must be positive");
  if (c.workers < 0) fail("workers", "workers must be nonnegative");
  if (c.out.empty()) fail("out", "out must be a directory path");
  if (c.command == "crosscheck") {
    const double m = c.N / (2.0 * c.L);
    if (std::abs(m - std::round(m)) > 1e-9 * m || std::round(m) < 1.0) {
      fail("N", "crosscheck needs 1/dx = N/(2L) to be an integer");
    }
  }
}

std::string real_text(double x) { return format_real(x); }

}  // namespace

Kernel resolve_kernel(const std::string& spec) {
  const auto names = builtin_kernel_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return builtin_kernel(spec);
  if (std::filesystem::exists(spec)) return read_kernel_csv(std::filesystem::path(spec));
  return builtin_kernel(spec);  // throws with the list of valid names
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  RunConfig cfg;
  std::map<std::string, std::string> location;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string here = "line " + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(here + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Setter* set = find_setter(key);
    if (set == nullptr) throw ConfigError(here + "unknown key '" + key + "'");
    if (location.count(key) != 0) throw ConfigError(here + "duplicate key '" + key + "'");
    try {
      (*set)(cfg, value);
    } catch (const BadValue& e) {
      throw ConfigError(here + e.message);
    }
    location[key] = here;
  }
  for (const auto& [key, value] : overrides) {
    const Setter* set = find_setter(key);
    if (set == nullptr) throw ConfigError("--" + key + ": unknown key");
    try {
      (*set)(cfg, value);
    } catch (const BadValue& e) {
      throw ConfigError("--" + key + ": " + e.message);
    }
    location[key] = "--" + key + ": ";
  }
  if (location.count("L") == 0) {
    if (cfg.command == "crosscheck") cfg.L = 16.0;
    if (cfg.command == "probes") cfg.L = std::numbers::pi;
  }
  if (location.count("N") == 0 && cfg.command == "probes") cfg.N = 256;

  validate(cfg, [&](const std::string& key) {
    const auto it = location.find(key);
    return it == location.end() ? key + " (default): " : it->second;
  });
  return cfg;
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  std::string eps;
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    eps += (i ? "," : "") + real_text(c.epsilons[i]);
  }
  os << "command = " << c.command << '\n'
     << "kernel = " << c.kernel << '\n'
     << "L = " << real_text(c.L) << '\n'
     << "N = " << c.N << '\n'
     << "epsilon = " << real_text(c.epsilon) << '\n'
     << "p = " << c.p << '\n'
     << "s = " << real_text(c.s) << '\n'
     << "dt = " << real_text(c.dt) << '\n'
     << "T_cap = " << real_text(c.T_cap) << '\n'
     << "M = " << real_text(c.M) << '\n'
     << "seed = " << c.seed << '\n'
     << "integrator = " << c.integrator << '\n'
     << "t_end = " << real_text(c.t_end) << '\n'
     << "sample_every = " << real_text(c.sample_every) << '\n'
     << "initial = " << c.initial << '\n'
     << "amplitude = " << real_text(c.amplitude) << '\n'
     << "epsilons = " << eps << '\n'
     << "probe = " << c.probe << '\n'
     << "samples = " << c.samples << '\n'
     << "max_mode = " << c.max_mode << '\n'
     << "fit_window = " << real_text(c.fit_window) << '\n'
     << "workers = " << c.workers << '\n'
     << "out = " << c.out << '\n';
  return os.str();
}

}  // namespace nlwave::cli
