#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdcr/errors.hpp"
#include "cdcr/sd_solver.hpp"
#include "oracles.hpp"

using namespace cdcr;

namespace {

constexpr double kL = 0.4;

ActuationProfile force_step(double value) { return ActuationProfile(InputMode::Force, ActuationProfile::Step{value, 0.0}); }

SdOptions short_run(double t_end, int nodes = 101) {
  SdOptions o;
  o.nodes = nodes;
  o.t_end = t_end;
  return o;
}

}  // namespace

TEST(CouplingSweep, MatchesDenseSolve) {
  std::mt19937 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int N : {3, 4, 9, 41, 120}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> th(N), tt(N), d(N), A(N), r(N);
      for (int k = 0; k < N; ++k) {
        th[k] = 1.5 * n(rng);
        tt[k] = 3.0 * n(rng);
        d[k] = 0.05 * u(rng);
        A[k] = u(rng);
        r[k] = n(rng);
      }
      const double h = 1.0 / (N - 1);
      const double rho = 7.0;
      CouplingSweep sweep;
      sweep.factor(th, d, A, h, rho);
      std::vector<double> a;
      sweep.solve(r, tt, a);
      const auto ref = oracle::dense_coupling_solve(th, tt, d, A, h, rho, r);
      double scale = 0.0;
      for (double v : ref) scale = std::max(scale, std::abs(v));
      EXPECT_EQ(a[0], 0.0);
      for (int k = 0; k < N; ++k) EXPECT_NEAR(a[k], ref[k], 1e-10 * scale) << "N = " << N << " k = " << k;

      std::vector<double> a0;
      sweep.solve(r, {}, a0);
      const auto ref0 = oracle::dense_coupling_solve(th, {}, d, A, h, rho, r);
      for (int k = 0; k < N; ++k) EXPECT_NEAR(a0[k], ref0[k], 1e-10 * scale);
    }
  }
}

TEST(CouplingSweep, RealisticScales) {
  // Solver-sized coefficients: d = rho I, A ~ 1e-5, N = 201.
  const int N = 201;
  const auto model = build_case_model(CaseId::Case2);
  const double rho = model.material().density;
  const double h = kL / (N - 1);
  std::vector<double> th(N), tt(N), d(N), A(N), r(N);
  for (int k = 0; k < N; ++k) {
    const double s = k * h;
    th[k] = -2.0 * s + std::sin(8.0 * s);
    tt[k] = 0.5 * std::cos(5.0 * s);
    d[k] = rho * model.second_moment(s);
    A[k] = model.area(s);
    r[k] = 1e-3 * std::cos(3.0 * s);
  }
  CouplingSweep sweep;
  sweep.factor(th, d, A, h, rho);
  std::vector<double> a;
  sweep.solve(r, tt, a);
  const auto ref = oracle::dense_coupling_solve(th, tt, d, A, h, rho, r);
  double scale = 0.0;
  for (double v : ref) scale = std::max(scale, std::abs(v));
  for (int k = 0; k < N; ++k) EXPECT_NEAR(a[k], ref[k], 1e-9 * scale);
}

TEST(FiniteDifference, RestHasZeroAcceleration) {
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case1).with_load({0.0, 0.0}), short_run(0.1));
  const auto a = solver.pde_accel(solver.initial_state(), InputMode::Force, 0.0);
  for (double v : a) EXPECT_EQ(v, 0.0);
}

TEST(FiniteDifference, UniformArcIsStatic) {
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case1).with_load({0.0, 0.0}), short_run(0.1, 201));
  const double dF = 1.0;
  const double kappa = -dF * 0.11 / (2.0 * 2e9 * 1.26e-11);
  auto st = solver.initial_state();
  for (std::size_t k = 0; k < st.theta.size(); ++k) st.theta[k] = kappa * solver.nodes()[k];
  const auto a = solver.pde_accel(st, InputMode::Force, dF);
  // A unit drive on the unbent rod as the acceleration scale.
  const auto a_ref = solver.pde_accel(solver.initial_state(), InputMode::Force, dF);
  double scale = 0.0;
  for (double v : a_ref) scale = std::max(scale, std::abs(v));
  for (double v : a) EXPECT_LE(std::abs(v), 1e-9 * scale);
  // Displacement mode with lambda = -Delta_F is the same state.
  const auto b = solver.pde_accel(st, InputMode::Displacement, -dF);
  for (double v : b) EXPECT_LE(std::abs(v), 1e-9 * scale);
  EXPECT_NEAR(solver.tendon_displacement(st.theta), 0.5 * 0.11 * kappa * kL, 1e-15);
}

TEST(FiniteDifference, AccelerationScalesInverselyWithDensity) {
  const auto model = build_case_model(CaseId::Case3);
  MaterialParams heavy = model.material();
  heavy.density *= 2.0;
  // Keep the load fixed so only inertia changes.
  const FiniteDifferenceSolver a(model, short_run(0.1)), b(model.with_material(heavy), short_run(0.1));
  auto st = a.initial_state();
  for (std::size_t k = 0; k < st.theta.size(); ++k) st.theta[k] = -0.8 * std::sin(3.0 * a.nodes()[k]);
  const auto x = a.pde_accel(st, InputMode::Force, 2.0);
  const auto y = b.pde_accel(st, InputMode::Force, 2.0);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(y[k], 0.5 * x[k], 1e-10 * std::abs(x[k]) + 1e-300);
}

TEST(FiniteDifference, BaseStaysClamped) {
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case2), short_run(0.05));
  auto st = solver.initial_state();
  for (int k = 0; k < 500; ++k) {
    st = solver.step(st, force_step(5.0));
    ASSERT_EQ(st.theta[0], 0.0);
    ASSERT_EQ(st.theta_t[0], 0.0);
  }
  EXPECT_LT(st.theta.back(), 0.0);
}

TEST(FiniteDifference, UnforcedStaysAtRest) {
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case1).with_load({0.0, 0.0}), short_run(0.2));
  const auto rec = solver.simulate(force_step(0.0));
  ASSERT_TRUE(rec.converged());
  for (const auto& s : rec.samples) {
    EXPECT_NEAR(s.tip_x, kL, 1e-15);
    EXPECT_EQ(s.tip_y, 0.0);
  }
}

TEST(FiniteDifference, DisplacementProjectionHoldsConstraint) {
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case3), short_run(0.1));
  const ActuationProfile ramp(InputMode::Displacement, ActuationProfile::Linear{0.008, 0.0});
  auto st = solver.initial_state();
  StepInfo info;
  for (int k = 0; k < 2000; ++k) {
    st = solver.step(st, ramp, &info);
    ASSERT_NEAR(solver.tendon_displacement(st.theta), ramp(st.t), 1e-12);
  }
  EXPECT_GT(info.lambda, 0.0);
}

TEST(FiniteDifference, RecordLayout) {
  SdOptions o = short_run(0.1);
  o.sample_interval = 0.01;
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case1), o);
  const auto rec = solver.simulate(force_step(1.0), "case1_step");
  EXPECT_EQ(rec.solver, "sd");
  EXPECT_EQ(rec.size(), 11u);
  EXPECT_NEAR(rec.samples.back().t, 0.1, 1e-12);
  EXPECT_EQ(rec.shapes.back().size(), 101u);
  // Tip curvature comes from the moment condition.
  EXPECT_NEAR(rec.shapes.back().kappa.back(), -0.5 * 1.0 * 0.11 / (2e9 * 1.26e-11), 1e-12);
}

TEST(FiniteDifference, InvalidOptions) {
  const auto model = build_case_model(CaseId::Case1);
  SdOptions o;
  o.nodes = 2;
  EXPECT_THROW(FiniteDifferenceSolver(model, o), ConfigError);
  o = SdOptions{};
  o.dt = 0.0;
  EXPECT_THROW(FiniteDifferenceSolver(model, o), ConfigError);
  const FiniteDifferenceSolver ok(model, short_run(0.1));
  GridState bad;
  bad.theta.assign(5, 0.0);
  bad.theta_t.assign(5, 0.0);
  EXPECT_THROW(ok.pde_accel(bad, InputMode::Force, 0.0), ConfigError);
}

TEST(FiniteDifference, NonConvergenceIsReported) {
  // dt far beyond the explicit stiffness limit.
  SdOptions o = short_run(2.0, 201);
  o.dt = 0.05;
  o.sample_interval = 0.05;
  o.divergence_limit = 50.0;
  const FiniteDifferenceSolver solver(build_case_model(CaseId::Case1), o);
  const auto rec = solver.simulate(force_step(-50.0));
  EXPECT_FALSE(rec.converged());
  ASSERT_FALSE(rec.samples.empty());
  EXPECT_TRUE(rec.samples.back().flagged);
}
