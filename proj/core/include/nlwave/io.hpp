#pragma once

// Plain-text persistence: field and state snapshots, custom kernel tables,
// and the diagnostics and sweep ledgers. Reals are written with 17
// significant digits so that values round-trip bit for bit.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlwave/dynamics.hpp"
#include "nlwave/experiments.hpp"

namespace nlwave {

/// Shortest-free fixed format: %.17g.
std::string format_real(double x);

void write_snapshot(std::ostream& os, const Field& u, double t);
void write_snapshot(std::ostream& os, const State& st);

struct Snapshot {
  double half_length = 0.0;
  int n_points = 0;
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> v;  ///< empty for single-field snapshots
  State to_state() const;
};

/// Throws ConfigError on a malformed header, row or node mismatch.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Rows `xi,beta_hat`; blank lines and `#` comments skipped. ConfigError on bad rows.
Kernel read_kernel_csv(const std::filesystem::path& path);
Kernel read_kernel_csv(std::istream& is, std::string name);

struct DiagnosticsRow {
  double t = 0.0;
  double Xs_norm = 0.0;
  double Hs_u = 0.0;
  double Hs_v = 0.0;
  double hamiltonian = 0.0;
  double Es = 0.0;
  bool escaped = false;
};

void write_diagnostics(std::ostream& os, const std::vector<DiagnosticsRow>& rows);
void write_sweep(std::ostream& os, const std::vector<SweepResult>& rows);

/// Writes text to path, creating parent directories. Throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nlwave
