#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nlwave/cli/config.hpp"
#include "nlwave/cli/run.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/io.hpp"
#include "testing.hpp"

using namespace nlwave;
using namespace nlwave::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlwave_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string parse_error(const std::string& text, const Overrides& o = {}) {
  try {
    parse_config(text, o);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsFromEmptyFile) {
  const RunConfig c = parse_config("", {{"command", "simulate"}});
  EXPECT_EQ(c.command, "simulate");
  EXPECT_EQ(c.L, 20.0);
  EXPECT_EQ(c.N, 512);
  EXPECT_EQ(c.epsilon, 0.1);
  EXPECT_EQ(c.p, 1);
  EXPECT_EQ(c.s, 2.0);
  EXPECT_EQ(c.kernel, "dirac");
}

TEST(Config, CommandDependentGrid) {
  EXPECT_EQ(parse_config("command = crosscheck").L, 16.0);
  const RunConfig p = parse_config("command = probes");
  EXPECT_EQ(p.L, std::numbers::pi);
  EXPECT_EQ(p.N, 256);
  EXPECT_EQ(parse_config("command = probes\nN = 512").N, 512);
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_EQ(parse_error("# grid\nN = 511\n", {{"command", "simulate"}}), "line 2: N must be even");
  EXPECT_NE(parse_error("command = simulate\nbogus = 1").find("line 2: unknown key 'bogus'"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate\nepsilon = abc").find("line 2: epsilon expects a real"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate\np = 1.5").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate\ns = 1.2").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate\nkernel = foo").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate\nL = 1\nL = 2").find("line 3: duplicate"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate\njunk").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("").find("command is required"), std::string::npos);
  EXPECT_NE(parse_error("command = crosscheck\nL = 20").find("1/dx"), std::string::npos);
  EXPECT_NE(parse_error("command = simulate", {{"seed", "x"}}).find("--seed"), std::string::npos);
}

TEST(Config, KernelSpec) {
  const RunConfig c = parse_config("command = simulate\nkernel = exponential # Example 2\n");
  EXPECT_DOUBLE_EQ(resolve_kernel(c.kernel).beta_hat(2.0), 0.2);
  const fs::path dir = scratch("kernel");
  fs::create_directories(dir);
  const fs::path table = dir / "k.csv";
  write_text_file(table, "xi,beta_hat\n0,1\n1,0.5\n10,0.01\n");
  const RunConfig t = parse_config("command = validate-kernel\nkernel = " + table.string());
  EXPECT_DOUBLE_EQ(resolve_kernel(t.kernel).beta_hat(0.5), 0.75);
  write_text_file(dir / "bad.csv", "0,1\n1,-2\n");
  EXPECT_NE(parse_error("command = simulate\nkernel = " + (dir / "bad.csv").string()).find("line 2"),
            std::string::npos);
}

TEST(Config, EchoRoundTrip) {
  testkit::Gen gen(301);
  for (int trial = 0; trial < 50; ++trial) {
    RunConfig c = parse_config("", {{"command", command_names()[static_cast<std::size_t>(trial) % 7]}});
    c.epsilon = gen.uniform(0.001, 1.0);
    c.p = gen.integer(1, 4);
    c.s = gen.uniform(1.6, 4.0);
    c.dt = gen.uniform(0.0, 0.1);
    c.amplitude = gen.normal();
    c.epsilons = {gen.uniform(0.01, 1), gen.uniform(0.01, 1)};
    c.seed = gen.next();
    const std::string text = to_text(c);
    EXPECT_EQ(parse_config(text), c) << text;
  }
}

TEST(Snapshot, RoundTripBitExact) {
  testkit::Gen gen(307);
  const Grid g(3.7, 64);
  const State st{gen.field(g, 20), gen.field(g, 20), 1.0 / 3.0};
  std::stringstream ss;
  write_snapshot(ss, st);
  const Snapshot snap = read_snapshot(ss);
  EXPECT_EQ(snap.n_points, 64);
  EXPECT_EQ(snap.half_length, 3.7);
  EXPECT_EQ(snap.t, 1.0 / 3.0);
  const State back = snap.to_state();
  for (std::size_t j = 0; j < 64; ++j) {
    EXPECT_EQ(back.u.samples()[j], st.u.samples()[j]);
    EXPECT_EQ(back.v.samples()[j], st.v.samples()[j]);
  }
  std::stringstream single;
  write_snapshot(single, st.u, 0.0);
  EXPECT_TRUE(read_snapshot(single).v.empty());
  std::stringstream bad("# L=1 N=8\n");
  EXPECT_THROW(read_snapshot(bad), ConfigError);
}

TEST(Ledgers, Headers) {
  std::stringstream a, b;
  write_diagnostics(a, {DiagnosticsRow{}});
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "t,Xs_norm,Hs_u,Hs_v,hamiltonian,Es,escaped");
  write_sweep(b, {SweepResult{}});
  EXPECT_EQ(b.str().substr(0, b.str().find('\n')), "epsilon,p,s,T_esc,product,cap_hit");
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

TEST(Run, SimulateZeroDataGivesZeroRows) {
  const fs::path out = scratch("zero");
  RunConfig c = parse_config("command = simulate\ninitial = zero\nt_end = 3\nN = 64\nout = " + out.string());
  std::stringstream log;
  ASSERT_EQ(run(c, log), kOk) << log.str();
  std::ifstream is(out / "diagnostics.csv");
  std::string line;
  std::getline(is, line);
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',')), ",0,0,0,0,0,0");
  }
  EXPECT_EQ(rows, 4);
  EXPECT_TRUE(fs::exists(out / "snapshot_00003.csv"));
}

TEST(Run, NashMoserSummary) {
  const fs::path out = scratch("nm");
  std::stringstream log;
  ASSERT_EQ(run(parse_config("command = nashmoser\nout = " + out.string()), log), kOk);
  const std::string s = slurp(out / "summary.json");
  EXPECT_NE(s.find("\"D_star\": 7.35"), std::string::npos);
  EXPECT_NE(s.find("\"P_star\": 55.34"), std::string::npos);
  EXPECT_NE(s.find("\"P_min_at_D6\": 57.0"), std::string::npos);
}

TEST(Run, EscapeIsReportedAsRuntimeEvent) {
  const fs::path out = scratch("escape");
  std::stringstream log;
  const RunConfig c = parse_config("command = simulate\nN = 128\nepsilon = 1\namplitude = 2\nt_end = 5\nM = 2\nout = " +
                                   out.string());
  EXPECT_EQ(run(c, log), kRuntimeError);
  const std::string s = slurp(out / "summary.json");
  EXPECT_NE(s.find("\"type\": \"escape\""), std::string::npos);
}

TEST(Run, CrosscheckTable) {
  const fs::path out = scratch("cross");
  std::stringstream log;
  ASSERT_EQ(run(parse_config("command = crosscheck\nN = 256\nt_end = 2\nout = " + out.string()), log), kOk);
  const std::string s = slurp(out / "crosscheck.csv");
  EXPECT_EQ(s.substr(0, s.find('\n')), "t,deviation,deviation_refined");
}

TEST(Run, DeterministicOutputs) {
  for (const std::string cmd : {"simulate", "probes", "linearized", "sweep"}) {
    std::string extra = "command = " + cmd + "\nsamples = 40\nt_end = 2\nN = 128\nT_cap = 1\n";
    std::map<std::string, std::string> first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = scratch("det_" + cmd + std::to_string(rep));
      std::stringstream log;
      // Same out path text so the config echo matches.
      const fs::path shared = scratch("det_" + cmd);
      ASSERT_EQ(run(parse_config(extra + "out = " + shared.string()), log), kOk) << log.str();
      for (const auto& e : fs::directory_iterator(shared)) {
        const std::string name = e.path().filename().string();
        if (rep == 0) {
          first[name] = slurp(e.path());
        } else {
          EXPECT_EQ(first[name], slurp(e.path())) << cmd << "/" << name;
        }
      }
      if (rep == 0) EXPECT_FALSE(first.empty());
    }
  }
}
