#include "nlwave/cli/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "nlwave/diagnostics.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/experiments.hpp"
#include "nlwave/io.hpp"
#include "nlwave/random_fields.hpp"

#ifndef NLWAVE_VERSION
#define NLWAVE_VERSION "unknown"
#endif

namespace nlwave::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

Json config_echo(const RunConfig& cfg) {
  Json j = Json::object();
  std::istringstream is(to_text(cfg));
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

Json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string csv_text(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

void write_summary(const RunConfig& cfg, const Json& result, const Json& event) {
  Json j;
  j["command"] = cfg.command;
  j["version"] = NLWAVE_VERSION;
  j["config"] = config_echo(cfg);
  j["result"] = result;
  j["event"] = event;
  write_text_file(fs::path(cfg.out) / "summary.json", j.dump(2) + "\n");
}

State make_initial(const RunConfig& cfg, const Grid& grid) {
  const double a = cfg.amplitude;
  if (cfg.initial == "gaussian") return gaussian_state(grid, a);
  if (cfg.initial == "sech") {
    return {Field::from_function(grid, [a](double x) { return a / std::pow(std::cosh(x), 2); }),
            Field::zeros(grid), 0.0};
  }
  if (cfg.initial == "zero") return {Field::zeros(grid), Field::zeros(grid), 0.0};
  if (cfg.initial == "random") {
    auto rng = corpus_rng(cfg.seed, 0);
    const BandLimitedSpec spec{cfg.max_mode, 2.0, a, true};
    Field u = random_bandlimited(grid, rng, spec);
    Field v = random_bandlimited(grid, rng, spec);
    return {std::move(u), std::move(v), 0.0};
  }
  const Snapshot snap = read_snapshot(fs::path(cfg.initial));
  if (snap.n_points != grid.size() || std::abs(snap.half_length - grid.half_length()) > 1e-12) {
    throw ConfigError("snapshot grid does not match L and N of the configuration");
  }
  State st = snap.to_state();
  st.t = 0.0;
  return st;
}

EvolutionParams evolution_params(const RunConfig& cfg) {
  EvolutionParams prm;
  prm.kernel = resolve_kernel(cfg.kernel);
  prm.epsilon = cfg.epsilon;
  prm.power = cfg.p;
  prm.s = cfg.s;
  return prm;
}

int cmd_validate_kernel(const RunConfig& cfg) {
  const Kernel k = resolve_kernel(cfg.kernel);
  const auto rep = validate_kernel(k, Grid(cfg.L, cfg.N));
  Json r;
  r["kernel"] = k.name();
  r["c_estimate"] = real(rep.c_estimate);
  r["c1"] = real(rep.c1);
  r["argmin_xi"] = real(rep.argmin_xi);
  r["elliptic"] = rep.elliptic;
  r["fitted_r"] = real(rep.fitted_r);
  r["declared_r"] = k.declared_r() ? Json(*k.declared_r()) : Json(nullptr);
  write_summary(cfg, r, nullptr);
  return kOk;
}

DiagnosticsRow diagnostics_row(const WaveSystem& sys, const State& st, const RunConfig& cfg) {
  DiagnosticsRow row;
  row.t = st.t;
  row.Hs_u = sobolev_norm(st.u, cfg.s);
  row.Hs_v = sobolev_norm(st.v, cfg.s);
  row.Xs_norm = std::hypot(row.Hs_u, row.Hs_v);
  row.hamiltonian = sys.hamiltonian(st);
  // Linearization weight of the stress: (p+1) u^p.
  const Field w = double(cfg.p + 1) * dealias_power(st.u, cfg.p);
  const double e2 = energy_squared(st.u, st.v, w, sys.params().eps_p(), cfg.s);
  row.Es = e2 >= 0.0 ? std::sqrt(e2) : std::numeric_limits<double>::quiet_NaN();
  return row;
}

int cmd_simulate(const RunConfig& cfg) {
  const Grid grid(cfg.L, cfg.N);
  const WaveSystem sys(grid, evolution_params(cfg));
  const Integrator integrator = parse_integrator(cfg.integrator);
  State st = make_initial(cfg, grid);

  const double dt0 = cfg.dt > 0.0 ? cfg.dt : sys.default_dt();
  const auto substeps = static_cast<long long>(std::ceil(cfg.sample_every / dt0 - 1e-9));
  const double h = cfg.sample_every / static_cast<double>(substeps);
  const auto intervals = static_cast<long long>(std::floor(cfg.t_end / cfg.sample_every + 1e-9));
  const double threshold = cfg.M * std::max(1.0, xs_norm(st, cfg.s));

  std::vector<DiagnosticsRow> rows{diagnostics_row(sys, st, cfg)};
  const fs::path out(cfg.out);
  auto snapshot = [&](long long index) {
    char name[48];
    std::snprintf(name, sizeof(name), "snapshot_%05lld.csv", index);
    write_text_file(out / name, csv_text([&](std::ostream& os) { write_snapshot(os, st); }));
  };
  snapshot(0);

  Json event = nullptr;
  for (long long i = 1; i <= intervals && event.is_null(); ++i) {
    const double t0 = static_cast<double>(i - 1) * cfg.sample_every;
    for (long long n = 1; n <= substeps; ++n) {
      try {
        st = integrator == Integrator::Strang ? sys.step_strang(st, h) : sys.step_rk4(st, h);
      } catch (const BlowupDetected& e) {
        event = {{"type", "blowup"}, {"time", real(t0 + static_cast<double>(n) * h)}, {"message", e.what()}};
        break;
      }
      st.t = t0 + static_cast<double>(n) * h;
      const double norm = xs_norm(st, cfg.s);
      if (!(norm <= threshold)) {
        event = {{"type", "escape"}, {"time", real(st.t)}, {"Xs_norm", real(norm)},
                 {"threshold", real(threshold)}};
        auto row = diagnostics_row(sys, st, cfg);
        row.escaped = true;
        rows.push_back(row);
        break;
      }
    }
    if (event.is_null()) {
      st.t = static_cast<double>(i) * cfg.sample_every;
      rows.push_back(diagnostics_row(sys, st, cfg));
      snapshot(i);
    }
  }
  write_text_file(out / "diagnostics.csv", csv_text([&](std::ostream& os) { write_diagnostics(os, rows); }));

  Json r;
  r["dt"] = h;
  r["steps"] = substeps * intervals;
  r["rows"] = rows.size();
  r["final_t"] = real(rows.back().t);
  r["hamiltonian_initial"] = real(rows.front().hamiltonian);
  r["hamiltonian_final"] = real(rows.back().hamiltonian);
  r["escaped"] = !event.is_null();
  write_summary(cfg, r, event);
  return event.is_null() ? kOk : kRuntimeError;
}

int cmd_sweep(const RunConfig& cfg) {
  SweepConfig sc;
  sc.grid = Grid(cfg.L, cfg.N);
  sc.kernel = resolve_kernel(cfg.kernel);
  sc.p = cfg.p;
  sc.s = cfg.s;
  sc.epsilons = cfg.epsilons;
  sc.T_cap = cfg.T_cap;
  sc.M = cfg.M;
  sc.dt = cfg.dt;
  sc.integrator = parse_integrator(cfg.integrator);
  sc.workers = cfg.workers;
  sc.initial = [&cfg](const Grid& g) { return make_initial(cfg, g); };
  const auto results = longtime_sweep(sc);
  write_text_file(fs::path(cfg.out) / "sweep.csv",
                  csv_text([&](std::ostream& os) { write_sweep(os, results); }));
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  Json points = Json::array();
  for (const auto& x : results) {
    lo = std::min(lo, x.product);
    hi = std::max(hi, x.product);
    points.push_back({{"epsilon", x.epsilon}, {"T_esc", real(x.T_esc)}, {"product", real(x.product)},
                      {"cap_hit", x.cap_hit}, {"blowup", x.blowup}});
  }
  Json r;
  r["points"] = points;
  r["product_ratio"] = real(hi / lo);
  write_summary(cfg, r, nullptr);
  return kOk;
}

int cmd_linearized(const RunConfig& cfg) {
  const Grid grid(cfg.L, cfg.N);
  const double k = std::numbers::pi / cfg.L;
  const double a = cfg.amplitude;
  const Field w = Field::from_function(grid, [k, a](double x) { return a * std::sin(k * x); });
  GrowthFitConfig gc;
  gc.s = cfg.s;
  gc.p = cfg.p;
  gc.epsilons = cfg.epsilons;
  gc.t_end = cfg.fit_window;
  gc.seed = cfg.seed;
  gc.max_mode = std::min(cfg.max_mode, cfg.N / 2 - 1);
  const auto fits = linearized_growth_fit(w, resolve_kernel(cfg.kernel), gc);
  write_text_file(fs::path(cfg.out) / "growth.csv", csv_text([&](std::ostream& os) {
                    os << "epsilon,slope,t_end\n";
                    for (const auto& f : fits) {
                      os << format_real(f.epsilon) << ',' << format_real(f.slope) << ','
                         << format_real(f.t_end) << '\n';
                    }
                  }));
  Json r;
  Json ratios = Json::array();
  for (std::size_t i = 0; i + 1 < fits.size(); ++i) ratios.push_back(real(fits[i].slope / fits[i + 1].slope));
  r["slopes"] = Json::array();
  for (const auto& f : fits) r["slopes"].push_back({{"epsilon", f.epsilon}, {"slope", real(f.slope)}});
  r["successive_ratios"] = ratios;
  write_summary(cfg, r, nullptr);
  return kOk;
}

int cmd_probes(const RunConfig& cfg) {
  ProbeSuiteConfig pc;
  pc.half_length = cfg.L;
  pc.n_points = cfg.N;
  pc.s = cfg.s;
  pc.p = cfg.p;
  pc.samples = cfg.samples;
  pc.seed = cfg.seed;
  pc.max_mode = cfg.max_mode;
  pc.workers = std::max(1, cfg.workers);
  std::vector<std::string> names = cfg.probe == "all" ? probe_names() : std::vector<std::string>{cfg.probe};
  std::vector<ProbeReport> reports;
  for (const auto& n : names) reports.push_back(run_probe_suite(n, pc));
  write_text_file(fs::path(cfg.out) / "probes.csv", csv_text([&](std::ostream& os) {
                    os << "probe,samples,seed,empirical_C,max_ratio_index,max_ratio_input_hash,all_finite\n";
                    for (const auto& r : reports) {
                      os << r.probe << ',' << r.samples << ',' << r.seed << ',' << format_real(r.empirical_C)
                         << ',' << r.max_ratio_index << ',' << r.max_ratio_input_hash << ','
                         << (r.all_finite ? 1 : 0) << '\n';
                    }
                  }));
  Json r = Json::array();
  for (const auto& x : reports) {
    r.push_back({{"probe", x.probe}, {"samples", x.samples}, {"seed", x.seed},
                 {"empirical_C", real(x.empirical_C)},
                 {"max_ratio_index", x.max_ratio_index}, {"max_ratio_input_hash", x.max_ratio_input_hash},
                 {"all_finite", x.all_finite}});
  }
  write_summary(cfg, r, nullptr);
  return kOk;
}

int cmd_crosscheck(const RunConfig& cfg) {
  const Grid grid(cfg.L, cfg.N);
  const State st = make_initial(cfg, grid);
  CrosscheckConfig cc;
  cc.p = cfg.p;
  cc.epsilon = cfg.epsilon;
  cc.t_end = cfg.t_end;
  cc.dt = cfg.dt > 0.0 ? cfg.dt : 0.02;
  cc.samples = std::max(1, static_cast<int>(std::llround(cfg.t_end / cfg.sample_every)));
  const auto coarse = lattice_crosscheck(st.u, st.v, cc);
  cc.dt *= 0.5;
  const auto fine = lattice_crosscheck(st.u, st.v, cc);
  write_text_file(fs::path(cfg.out) / "crosscheck.csv", csv_text([&](std::ostream& os) {
                    os << "t,deviation,deviation_refined\n";
                    for (std::size_t i = 0; i < coarse.rows.size(); ++i) {
                      os << format_real(coarse.rows[i].t) << ',' << format_real(coarse.rows[i].deviation)
                         << ',' << format_real(fine.rows[i].deviation) << '\n';
                    }
                  }));
  Json r;
  r["dt"] = 2.0 * cc.dt;
  r["max_deviation"] = real(coarse.max_deviation);
  r["max_deviation_refined"] = real(fine.max_deviation);
  write_summary(cfg, r, nullptr);
  return kOk;
}

int cmd_nashmoser(const RunConfig& cfg) {
  const auto opt = optimize_pmin();
  const auto six = nash_moser_params(6.0);
  Json r;
  r["D_star"] = opt.D_star;
  r["P_star"] = opt.P_star;
  r["bracket"] = {opt.bracket_lo, opt.bracket_hi};
  r["m"] = six.m;
  r["d1"] = six.d1;
  r["d1_prime"] = six.d1_prime;
  r["delta"] = six.delta;
  r["P_min_at_D6"] = six.P_min;
  write_summary(cfg, r, nullptr);
  return kOk;
}

void write_error(const RunConfig& cfg, const std::string& type, const std::string& message,
                 int code, std::ostream& log) {
  Json j;
  j["error"] = {{"type", type}, {"message", message}};
  j["exit_code"] = code;
  log << j.dump() << '\n';
  try {
    write_text_file(fs::path(cfg.out) / "error.json", j.dump(2) + "\n");
  } catch (const std::exception&) {
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    if (cfg.command == "validate-kernel") return cmd_validate_kernel(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "linearized") return cmd_linearized(cfg);
    if (cfg.command == "probes") return cmd_probes(cfg);
    if (cfg.command == "crosscheck") return cmd_crosscheck(cfg);
    if (cfg.command == "nashmoser") return cmd_nashmoser(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    write_error(cfg, "config", e.what(), kConfigError, log);
    return kConfigError;
  } catch (const BlowupDetected& e) {
    write_error(cfg, "blowup", e.what(), kRuntimeError, log);
    return kRuntimeError;
  } catch (const std::exception& e) {
    write_error(cfg, "runtime", e.what(), kRuntimeError, log);
    return kRuntimeError;
  }
}

}  // namespace nlwave::cli
