#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlwave/dynamics.hpp"
#include "nlwave/errors.hpp"
#include "testing.hpp"

using namespace nlwave;
using nlwave::testkit::Gen;
using nlwave::testkit::max_abs_diff;
constexpr double pi = std::numbers::pi;

namespace {

EvolutionParams params(const std::string& kernel, double eps, int p, bool nonlinear = true) {
  EvolutionParams prm;
  prm.kernel = builtin_kernel(kernel);
  prm.epsilon = eps;
  prm.power = p;
  prm.nonlinear = nonlinear;
  return prm;
}

Field fn(const Grid& g, double (*f)(double)) { return Field::from_function(g, f); }

double state_diff(const State& a, const State& b) {
  return std::max(max_abs_diff(a.u, b.u), max_abs_diff(a.v, b.v));
}

FieldPair pair_axpy(double h, const FieldPair& d, const FieldPair& a) {
  return {axpy(h, d.first, a.first), axpy(h, d.second, a.second)};
}

}  // namespace

TEST(Params, Validation) {
  EvolutionParams prm;
  EXPECT_NO_THROW(prm.validate());
  prm.s = 1.5;
  EXPECT_THROW(prm.validate(), ConfigError);
  prm = {};
  prm.epsilon = 0.0;
  EXPECT_THROW(prm.validate(), ConfigError);
  prm = {};
  prm.power = 0;
  EXPECT_THROW(prm.validate(), ConfigError);
}

TEST(LinearPropagate, ZeroStepIsIdentity) {
  Gen gen(81);
  const Grid g(pi, 32);
  const State st{gen.field(g, 10), gen.field(g, 10), 0.0};
  EXPECT_LE(state_diff(linear_propagate(st, 0.0, params("exponential", 0.1, 1), false), st), 1e-15);
}

TEST(LinearPropagate, ExactCosineSolution) {
  const Grid g(pi, 64);
  const State st{fn(g, [](double x) { return std::cos(x); }), Field::zeros(g), 0.0};
  const State out = linear_propagate(st, 1.0, params("dirac", 0.1, 1), false);
  EXPECT_LE(max_abs_diff(out.u, [](double x) { return std::cos(x) * std::cos(1.0); }), 1e-10);
  EXPECT_LE(max_abs_diff(out.v, [](double x) { return -std::sin(x) * std::sin(1.0); }), 1e-10);
  EXPECT_DOUBLE_EQ(out.t, 1.0);
}

TEST(LinearPropagate, ExactSolutionSatisfiesSystem) {
  // Substitution check: the time derivative by a centered difference equals (K v_x, K u_x).
  const Grid g(pi, 64);
  const auto prm = params("exponential", 0.1, 1, false);
  const WaveSystem sys(g, prm);
  Gen gen(83);
  const State st{gen.field(g, 8), gen.field(g, 8), 0.0};
  const double h = 1e-4;
  const State a = sys.linear_propagate(st, 0.7 + h);
  const State b = sys.linear_propagate(st, 0.7 - h);
  const State m = sys.linear_propagate(st, 0.7);
  const Field du = (1.0 / (2 * h)) * (a.u - b.u);
  const Field dv = (1.0 / (2 * h)) * (a.v - b.v);
  EXPECT_LE(max_abs_diff(du, apply_KDx(prm.kernel, m.v)), 1e-6);
  EXPECT_LE(max_abs_diff(dv, apply_KDx(prm.kernel, m.u)), 1e-6);
}

TEST(LinearPropagate, GroupPropertyAndUnitarity) {
  Gen gen(89);
  for (const auto& name : builtin_kernel_names()) {
    for (bool scaled : {false, true}) {
      const Grid g(gen.uniform(2, 20), 64);
      const auto prm = params(name, 0.3, 2);
      const WaveSystem sys(g, prm);
      const State st{gen.field(g, 30), gen.field(g, 30), 0.0};
      const double t1 = gen.uniform(-3, 3);
      const double t2 = gen.uniform(-3, 3);
      const State two = sys.linear_propagate(sys.linear_propagate(st, t1, scaled), t2, scaled);
      const State one = sys.linear_propagate(st, t1 + t2, scaled);
      EXPECT_LE(state_diff(one, two), 1e-12 * (1 + st.u.max_abs() + st.v.max_abs())) << name;
      for (double s : {0.0, 1.0, 2.0}) {
        const State far = sys.linear_propagate(st, 5.0, scaled);
        EXPECT_NEAR(xs_norm(far, s), xs_norm(st, s), 1e-12 * xs_norm(st, s)) << name;
      }
    }
  }
}

TEST(Rhs, Examples) {
  const Grid g(pi, 64);
  const auto prm = params("dirac", 1.0, 1);
  const FieldPair z = nonlinear_rhs({Field::zeros(g), Field::zeros(g), 0.0}, prm);
  EXPECT_EQ(z.first.max_abs(), 0.0);
  EXPECT_EQ(z.second.max_abs(), 0.0);
  const FieldPair a = nonlinear_rhs({fn(g, [](double x) { return std::sin(x); }), Field::zeros(g), 0.0}, prm);
  EXPECT_LE(a.first.max_abs(), 1e-15);
  EXPECT_LE(max_abs_diff(a.second, [](double x) { return std::cos(x) + std::sin(2 * x); }), 1e-12);
  const FieldPair b = nonlinear_rhs({Field::zeros(g), fn(g, [](double x) { return std::cos(x); }), 0.0}, prm);
  EXPECT_LE(max_abs_diff(b.first, [](double x) { return -std::sin(x); }), 1e-12);
  EXPECT_LE(b.second.max_abs(), 1e-15);
}

TEST(Rhs, OverflowSignalsBlowup) {
  const Grid g(pi, 16);
  const auto prm = params("dirac", 1.0, 3);
  const State st{Field::constant(g, 1e100), Field::zeros(g), 2.5};
  try {
    nonlinear_rhs(st, prm);
    FAIL();
  } catch (const BlowupDetected& e) {
    EXPECT_EQ(e.time(), 2.5);
  }
}

TEST(Jacobian, Examples) {
  const Grid g(pi, 64);
  Gen gen(97);
  const FieldPair phi{gen.field(g, 6), gen.field(g, 6)};
  const auto j0 = jacobian_apply({Field::zeros(g), Field::zeros(g), 0.0}, phi, params("dirac", 0.5, 2));
  EXPECT_EQ(j0.second.max_abs(), 0.0);
  const auto j1 = jacobian_apply({fn(g, [](double x) { return std::sin(x); }), Field::zeros(g), 0.0},
                                 {Field::constant(g, 1.0), Field::zeros(g)}, params("dirac", 1.0, 1));
  EXPECT_LE(j1.first.max_abs(), 0.0);
  EXPECT_LE(max_abs_diff(j1.second, [](double x) { return -2 * std::cos(x); }), 1e-12);
  // Only the u-component of the direction enters.
  const State st{gen.field(g, 6), gen.field(g, 6), 0.0};
  const auto prm = params("exponential", 0.5, 2);
  const auto ja = jacobian_apply(st, phi, prm);
  const auto jb = jacobian_apply(st, {phi.first, gen.field(g, 6)}, prm);
  EXPECT_EQ(max_abs_diff(ja.second, jb.second), 0.0);
}

TEST(Jacobian, MatchesCenteredDifferenceAtSecondOrder) {
  Gen gen(101);
  for (int p : {2, 3}) {
    for (const auto& name : builtin_kernel_names()) {
      const Grid g(pi, 64);
      const auto prm = params(name, 0.7, p);
      const WaveSystem sys(g, prm);
      const State u{gen.field(g, 6), gen.field(g, 6), 0.0};
      const FieldPair phi{gen.field(g, 6), gen.field(g, 6)};
      const FieldPair exact = sys.jacobian_apply(u, phi);
      double err[2];
      int i = 0;
      for (double h : {1e-3, 5e-4}) {
        const auto plus = sys.nonlinear_map({axpy(h, phi.first, u.u), axpy(h, phi.second, u.v), 0.0});
        const auto minus = sys.nonlinear_map({axpy(-h, phi.first, u.u), axpy(-h, phi.second, u.v), 0.0});
        const Field fd = (1.0 / (2 * h)) * (plus.second - minus.second);
        err[i++] = max_abs_diff(fd, exact.second);
        EXPECT_LE(max_abs_diff((1.0 / (2 * h)) * (plus.first - minus.first), exact.first), 1e-12);
      }
      EXPECT_GT(err[0] / err[1], 3.5) << name << " p=" << p;
      EXPECT_LT(err[0] / err[1], 4.5) << name << " p=" << p;
    }
  }
}

TEST(Hessian, ExamplesAndSymmetry) {
  const Grid g(pi, 64);
  Gen gen(103);
  const FieldPair phi{gen.field(g, 6), gen.field(g, 6)};
  const FieldPair psi{gen.field(g, 6), gen.field(g, 6)};
  const auto prm1 = params("exponential", 0.4, 1);
  const auto a = hessian_apply({gen.field(g, 6), Field::zeros(g), 0.0}, phi, psi, prm1);
  const auto b = hessian_apply({gen.field(g, 6), gen.field(g, 6), 0.0}, phi, psi, prm1);
  EXPECT_LE(max_abs_diff(a.second, b.second), 1e-14);
  const auto prm3 = params("dirac", 0.4, 3);
  const State u{gen.field(g, 6), gen.field(g, 6), 0.0};
  const Field hp = hessian_apply(u, phi, psi, prm3).second;
  EXPECT_LE(max_abs_diff(hp, hessian_apply(u, psi, phi, prm3).second), 1e-14 * hp.max_abs());
}

TEST(Hessian, MatchesSecondDifferenceAtSecondOrder) {
  Gen gen(107);
  for (int p : {3, 4}) {
    const Grid g(pi, 64);
    const auto prm = params("exponential", 0.6, p);
    const WaveSystem sys(g, prm);
    const State u{gen.field(g, 5), gen.field(g, 5), 0.0};
    const FieldPair phi{gen.field(g, 5), gen.field(g, 5)};
    const FieldPair psi{gen.field(g, 5), gen.field(g, 5)};
    const FieldPair exact = sys.hessian_apply(u, phi, psi);
    double err[2];
    int i = 0;
    for (double h : {1e-2, 5e-3}) {
      auto N = [&](double a, double b) {
        const FieldPair base{u.u, u.v};
        const FieldPair moved = pair_axpy(b, psi, pair_axpy(a, phi, base));
        return sys.nonlinear_map({moved.first, moved.second, 0.0}).second;
      };
      const Field fd = (1.0 / (4 * h * h)) * ((N(h, h) - N(h, -h)) - (N(-h, h) - N(-h, -h)));
      err[i++] = max_abs_diff(fd, exact.second);
    }
    EXPECT_GT(err[0] / err[1], 3.5) << "p=" << p;
    EXPECT_LT(err[0] / err[1], 4.5) << "p=" << p;
  }
}

TEST(Strang, LinearLimitAndContinuity) {
  Gen gen(109);
  const Grid g(5.0, 64);
  const State st{gen.field(g, 10), gen.field(g, 10), 0.0};
  const auto lin = params("exponential", 0.2, 1, false);
  EXPECT_LE(state_diff(step_strang(st, 0.3, lin), linear_propagate(st, 0.3, lin, false)), 1e-14);
  const auto non = params("exponential", 0.2, 1);
  const State tiny = step_strang(st, 1e-8, non);
  EXPECT_LE(std::sqrt(std::pow(sobolev_norm(tiny.u - st.u, 0), 2) + std::pow(sobolev_norm(tiny.v - st.v, 0), 2)),
            1e-6 * xs_norm(st, 0));
  EXPECT_THROW(step_strang(st, 0.0, non), ConfigError);
}

TEST(Strang, SecondOrderAgainstFineReference) {
  const Grid g(10.0, 128);
  const auto prm = params("exponential", 0.3, 1);
  const WaveSystem sys(g, prm);
  const State st{Field::from_function(g, [](double x) { return std::exp(-x * x); }), Field::zeros(g), 0.0};
  auto run = [&](double dt) {
    State s = st;
    for (int n = 0; n < static_cast<int>(std::lround(1.0 / dt)); ++n) s = sys.step_strang(s, dt);
    return s;
  };
  const State ref = run(0.1 / 64);
  const double e1 = state_diff(run(0.1), ref);
  const double e2 = state_diff(run(0.05), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(RK4, LinearFourthOrderAndIdentity) {
  const Grid g(10.0, 64);
  const auto prm = params("exponential", 0.3, 1, false);
  const WaveSystem sys(g, prm);
  Gen gen(113);
  const State st{gen.field(g, 8), gen.field(g, 8), 0.0};
  EXPECT_LE(state_diff(sys.step_rk4(st, 0.0), st), 0.0);
  const State exact = sys.linear_propagate(st, 1.0);
  auto run = [&](double dt) {
    State s = st;
    for (int n = 0; n < static_cast<int>(std::lround(1.0 / dt)); ++n) s = sys.step_rk4(s, dt);
    return s;
  };
  const double e1 = state_diff(run(0.1), exact);
  const double e2 = state_diff(run(0.05), exact);
  EXPECT_NEAR(e1 / e2, 16.0, 2.0);
}

TEST(RK4, AgreesWithStrangToSecondOrder) {
  const Grid g(10.0, 128);
  const auto prm = params("dirac", 0.2, 1);
  const WaveSystem sys(g, prm);
  const State st{Field::from_function(g, [](double x) { return std::exp(-x * x); }), Field::zeros(g), 0.0};
  double prev = 0.0;
  for (double dt : {0.02, 0.01}) {
    State a = st, b = st;
    for (int n = 0; n < static_cast<int>(std::lround(1.0 / dt)); ++n) {
      a = sys.step_strang(a, dt);
      b = sys.step_rk4(b, dt);
    }
    const double d = state_diff(a, b);
    if (prev > 0.0) EXPECT_NEAR(prev / d, 4.0, 0.6);
    prev = d;
  }
}

TEST(Hamiltonian, KnownValueAndLinearConservation) {
  const Grid g(pi, 64);
  const State st{fn(g, [](double x) { return std::sin(x); }), Field::zeros(g), 0.0};
  EXPECT_NEAR(WaveSystem(g, params("dirac", 0.1, 1, false)).hamiltonian(st), pi / 2, 1e-12);
  EXPECT_EQ(WaveSystem(g, params("dirac", 0.1, 1)).hamiltonian({Field::zeros(g), Field::zeros(g), 0.0}), 0.0);
  Gen gen(127);
  const WaveSystem lin(g, params("exponential", 0.1, 1, false));
  const State r{gen.field(g, 20), gen.field(g, 20), 0.0};
  const double h0 = lin.hamiltonian(r);
  EXPECT_NEAR(lin.hamiltonian(lin.linear_propagate(r, 13.7)), h0, 1e-12 * h0);
}

TEST(Linearized, ZeroWeightMatchesPropagator) {
  const Grid g(pi, 32);
  Gen gen(131);
  const auto prm = params("exponential", 0.2, 1);
  LinearizedProblem pb{{Field::zeros(g)}, {Field::zeros(g), Field::zeros(g)}, {gen.field(g, 8), gen.field(g, 8)}};
  const auto traj = solve_linearized(pb, prm, 0.5, 0.01);
  const WaveSystem sys(g, params("exponential", 0.2, 1, false));
  const State init{pb.initial.first, pb.initial.second, 0.0};
  for (std::size_t i = 0; i < traj.states.size(); i += 10) {
    const State exact = sys.linear_propagate(init, traj.states[i].t, true);
    EXPECT_LE(state_diff(traj.states[i], exact), 1e-12);
  }
}

TEST(Linearized, ConstantForcingIntegratesMeanMode) {
  const Grid g(pi, 32);
  const Field c = Field::constant(g, 0.75);
  LinearizedProblem pb{{Field::zeros(g)}, {c, Field::zeros(g)}, {Field::zeros(g), Field::zeros(g)}};
  const auto traj = solve_linearized(pb, params("dirac", 0.1, 1), 2.0, 0.1);
  for (const auto& st : traj.states) {
    EXPECT_LE(max_abs_diff(st.u, [&](double) { return 0.75 * st.t; }), 1e-12);
    EXPECT_LE(st.v.max_abs(), 1e-12);
  }
}

TEST(Linearized, SampledWeightInterpolates) {
  const Grid g(pi, 16);
  LinearizedProblem pb{{Field::constant(g, 0.0), Field::constant(g, 1.0), Field::constant(g, 3.0)},
                       {Field::zeros(g), Field::zeros(g)},
                       {Field::zeros(g), Field::zeros(g)}};
  EXPECT_NEAR(pb.w_at(0.05, 0.1).samples()[0], 0.5, 1e-15);
  EXPECT_NEAR(pb.w_at(0.15, 0.1).samples()[0], 2.0, 1e-15);
  EXPECT_THROW(pb.w_at(0.3, 0.1), RangeError);
}

TEST(Linearized, FrozenWeightGrowthBound) {
  const Grid g(pi, 64);
  Gen gen(137);
  const Field w = fn(g, [](double x) { return std::sin(x); });
  const auto prm = params("dirac", 0.05, 1);
  LinearizedProblem pb{{w}, {Field::zeros(g), Field::zeros(g)}, {gen.field(g, 6), gen.field(g, 6)}};
  const auto traj = solve_linearized(pb, prm, 1.0, 0.25 * prm.eps_p() / g.max_wavenumber());
  double C = 0.0;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    C = std::max(C, std::log(traj.energy[i] / traj.energy[0]) / traj.states[i].t);
  }
  EXPECT_TRUE(std::isfinite(C));
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    EXPECT_LE(traj.energy[i], std::exp(C * traj.states[i].t) * traj.energy[0] * (1 + 1e-12));
  }
}

TEST(InitialData, Conversion) {
  const Grid g(pi, 32);
  Gen gen(139);
  const Field u0 = gen.field(g, 8);
  const Field w0 = gen.field(g, 8);
  const State d = convert_initial_data(u0, DisplacementRate{w0}, builtin_kernel("dirac"));
  EXPECT_LE(max_abs_diff(d.v, w0), 1e-14);
  const Field s = fn(g, [](double x) { return std::sin(x); });
  const Kernel e = builtin_kernel("exponential");
  const State x = convert_initial_data(u0, DisplacementRate{s}, e);
  EXPECT_LE(max_abs_diff(x.v, [](double y) { return std::sqrt(2.0) * std::sin(y); }), 1e-12);
  EXPECT_LE(max_abs_diff(apply_KDx(e, x.v), derivative(s)), 1e-10);
  const State direct = convert_initial_data(u0, DirectVelocity{w0}, builtin_kernel("triangular"));
  EXPECT_LE(max_abs_diff(direct.v, w0), 0.0);
}

TEST(InitialData, NonEllipticPointsToDirectVelocity) {
  const Grid g(8.0, 64);
  try {
    convert_initial_data(Field::zeros(g), DisplacementRate{fn(g, [](double x) { return std::sin(x); })},
                         builtin_kernel("triangular"));
    FAIL();
  } catch (const NonElliptic& e) {
    EXPECT_NE(std::string(e.what()).find("v0 directly"), std::string::npos);
  }
}

TEST(Lattice, StencilExamples) {
  const Grid g(4.0, 32);  // 1/dx = 4
  std::vector<double> delta(32, 0.0);
  delta[10] = 1.0;
  const Field out = lattice_laplacian(Field::from_samples(g, delta));
  EXPECT_EQ(out.samples()[10], -2.0);
  EXPECT_EQ(out.samples()[6], 1.0);
  EXPECT_EQ(out.samples()[14], 1.0);
  EXPECT_EQ(out.samples()[11], 0.0);
  EXPECT_EQ(lattice_laplacian(Field::constant(g, 3.0)).max_abs(), 0.0);
  EXPECT_THROW(lattice_laplacian(Field::zeros(Grid(pi, 32))), ConfigError);
}

TEST(Lattice, ModeEigenvalueAndTriangularEquivalence) {
  const Grid g(8.0, 128);
  for (int k : {1, 5, 17, 40}) {
    const double xi = g.wavenumber(k);
    const Field c = Field::from_function(g, [xi](double x) { return std::cos(xi * x); });
    EXPECT_LE(max_abs_diff(lattice_laplacian(c), (2 * std::cos(xi) - 2) * c), 1e-12);
  }
  Gen gen(149);
  const Field z = gen.field(g, 60);
  EXPECT_LE(max_abs_diff(lattice_laplacian(z), apply_beta_dxx(builtin_kernel("triangular"), z)), 1e-12);
}
