#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlwave/kernels.hpp"

namespace nlwave::cli {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate-kernel", "simulate",   "sweep",    "linearized",
                                              "probes",          "crosscheck", "nashmoser"};
  return names;
}

struct RunConfig {
  std::string command;
  std::string kernel = "dirac";   // builtin name or path to a xi,beta_hat table
  double L = 20.0;
  int N = 512;
  double epsilon = 0.1;
  int p = 1;
  double s = 2.0;
  double dt = 0.0;                // 0: automatic
  double T_cap = 5.0;
  double M = 10.0;
  std::uint64_t seed = 1;
  std::string integrator = "strang";
  double t_end = 10.0;
  double sample_every = 1.0;
  std::string initial = "gaussian";  // gaussian | sech | zero | random | snapshot path
  double amplitude = 1.0;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::string probe = "all";
  int samples = 1000;
  int max_mode = 12;
  double fit_window = 0.25;
  int workers = 0;
  std::string out = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Overrides applied after the file, keyed like the file (`command`, `out`, `seed`).
using Overrides = std::map<std::string, std::string>;

/// Parses `key = value` lines. Unknown keys, duplicates, malformed values and
/// precondition violations throw ConfigError naming the line. Grid defaults
/// depend on the command (crosscheck: L = 16; probes: L = pi, N = 256).
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

/// Every key on its own line; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& cfg);

/// Builtin kernel or the table at the given path.
Kernel resolve_kernel(const std::string& spec);

}  // namespace nlwave::cli
