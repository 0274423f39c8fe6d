#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdcr/errors.hpp"
#include "cdcr/galerkin.hpp"
#include "oracles.hpp"

using namespace cdcr;

namespace {

constexpr double kL = 0.4;

SolverOptions raw_options(int order, Fidelity fidelity) {
  SolverOptions o;
  o.order = order;
  o.basis = BasisKind::RawMonomial;
  o.fidelity = fidelity;
  return o;
}

RobotModel unloaded(CaseId id = CaseId::Case1) { return build_case_model(id).with_load({0.0, 0.0}); }

ActuationProfile force_step(double value) { return ActuationProfile(InputMode::Force, ActuationProfile::Step{value, 0.0}); }

Eigen::VectorXd random_vector(std::mt19937& rng, int m, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::VectorXd v(m);
  for (int j = 0; j < m; ++j) v(j) = n(rng);
  return v;
}

}  // namespace

TEST(GalerkinAssembly, MassMatchesSymbolic) {
  const auto model = build_case_model(CaseId::Case1);
  const GalerkinSolver solver(model, raw_options(4, Fidelity::ConsistentWeakForm));
  const double rho = model.material().density;
  const auto& M = solver.assembly().mass();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(M(i, j) / (rho * 1.26e-11 * kL / (i + j + 3)), 1.0, 1e-12);
  const auto& D = solver.assembly().damping();
  EXPECT_NEAR(D(0, 0), 16.0 * kL / 3.0, 1e-12);
  EXPECT_NEAR(solver.assembly().stiffness()(0, 0), 2e9 * 1.26e-11 / kL, 1e-12);
}

TEST(GalerkinAssembly, RestStateTerms) {
  const auto model = build_case_model(CaseId::Case1);
  const GalerkinSolver solver(model, raw_options(1, Fidelity::ConsistentWeakForm));
  const auto& a = solver.assembly();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  EXPECT_NEAR(a.coupling_matrix(zero)(0, 0), 1.26e-5 * std::pow(kL, 3) / 20.0, 1e-20);
  EXPECT_NEAR(a.load_vector(zero)(0), 1.4794 * kL * kL / 6.0, 1e-14);
  EXPECT_NEAR(a.load_vector(zero)(0), 0.039451, 1e-6);
  EXPECT_EQ(a.coriolis(zero, zero)(0), 0.0);
  EXPECT_NEAR(a.tendon_gradient()(0), 0.5 * 0.11, 1e-15);
}

TEST(GalerkinAssembly, MassSpdForBuiltinCases) {
  for (auto id : {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4})
    for (auto kind : {BasisKind::RawMonomial, BasisKind::Orthonormal})
      for (int m = 1; m <= 8; ++m) {
        SolverOptions o;
        o.order = m;
        o.basis = kind;
        const GalerkinSolver solver(build_case_model(id), o);
        Eigen::LLT<Eigen::MatrixXd> llt(solver.assembly().mass());
        EXPECT_EQ(llt.info(), Eigen::Success);
      }
}

TEST(GalerkinAssemblyProperty, MatchesNestedQuadratureOracle) {
  std::mt19937 rng(17);
  for (auto id : {CaseId::Case1, CaseId::Case2, CaseId::Case3}) {
    const auto model = build_case_model(id).with_load({0.37, 1.4794});
    for (int m = 1; m <= 2; ++m) {
      SolverOptions o;
      o.order = m;
      const GalerkinSolver solver(model, o);
      for (int trial = 0; trial < 20; ++trial) {
        const oracle::Field f{&solver.basis(), random_vector(rng, m, 0.8), random_vector(rng, m, 2.0)};
        const auto K = oracle::brute_K(model, f);
        const auto h = oracle::brute_h(model, f);
        const auto q = oracle::brute_fQ(model, f);
        GalerkinAssembly::StateTerms t;
        solver.assembly().evaluate(f.c, f.c_t, t);
        EXPECT_LE((t.K - K).norm(), 1e-8 * K.norm());
        // h vanishes identically for m = 1 (c_t^T h = 0), so scale by K |c_t|^2 as well.
        const double h_scale = std::max(h.norm(), K.norm() * f.c_t.squaredNorm());
        EXPECT_LE((t.h - h).norm(), 1e-8 * h_scale);
        EXPECT_LE((t.f_q - q).norm(), 1e-8 * q.norm());
      }
    }
  }
}

TEST(GalerkinAssemblyProperty, CouplingSymmetricAndScalesWithArea) {
  const auto base = build_case_model(CaseId::Case1);
  const RobotModel doubled(base.length(), base.second_moment_profile(), GeometryProfile::constant(2.0 * 1.26e-5),
                           base.spacing_profile(), base.material(), base.load());
  SolverOptions o;
  o.order = 5;
  const GalerkinSolver a(base, o), b(doubled, o);
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd c = random_vector(rng, 5, 0.5);
    const Eigen::MatrixXd K = a.assembly().coupling_matrix(c);
    EXPECT_LE((K - K.transpose()).norm(), 1e-12 * K.norm());
    EXPECT_LE((b.assembly().coupling_matrix(c) - 2.0 * K).norm(), 1e-12 * K.norm());
  }
}

TEST(GalerkinAssemblyProperty, CoriolisEvenInVelocity) {
  SolverOptions o;
  o.order = 4;
  const GalerkinSolver solver(build_case_model(CaseId::Case2), o);
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd c = random_vector(rng, 4, 0.5);
    const Eigen::VectorXd ct = random_vector(rng, 4, 1.0);
    const auto& a = solver.assembly();
    EXPECT_LE((a.coriolis(c, ct) - a.coriolis(c, -ct)).norm(), 1e-14 * a.coriolis(c, ct).norm());
    EXPECT_EQ(a.coriolis(c, Eigen::VectorXd::Zero(4)).norm(), 0.0);
  }
}

TEST(Galerkin, ActuationCoefficient) {
  EXPECT_DOUBLE_EQ(actuation_coefficient(InputMode::Force, 3.0, 0.0), -1.5);
  EXPECT_DOUBLE_EQ(actuation_coefficient(InputMode::Displacement, 0.02, 1.2), 0.6);
  EXPECT_EQ(actuation_coefficient(InputMode::Force, 0.0, 7.0), 0.0);
}

TEST(Galerkin, ClosedFormMultiplier) {
  const double EI = 2e9 * 1.26e-11;
  EXPECT_NEAR(closed_form_multiplier(EI, 0.11, 1.0, 2.5, 0.0, 0.055, 1e-8), 1.14545, 1e-5);
  EXPECT_EQ(closed_form_multiplier(EI, 0.11, 0.0, 0.0, 0.0, 0.0, 1e-8), 0.0);
  // 0/0 limit handled through the tip moment balance.
  EXPECT_NEAR(closed_form_multiplier(EI, 0.11, 1e-3, 2.5, 0.0, 1e-9, 1e-8), 2.0 * EI * 2.5 / 0.11, 1e-12);
}

TEST(Galerkin, LiteralActuationLoad) {
  const auto model = build_case_model(CaseId::Case1);
  const GalerkinSolver solver(model, raw_options(1, Fidelity::Literal));
  StepInfo info;
  solver.step(solver.initial_state(), force_step(3.0), &info);
  EXPECT_DOUBLE_EQ(info.gamma, -1.5);
  EXPECT_NEAR(info.rhs(0) - solver.assembly().load_vector(Eigen::VectorXd::Zero(1))(0), -0.033, 1e-12);
}

TEST(Galerkin, ConsistentActuationLoad) {
  const auto model = build_case_model(CaseId::Case3);
  const GalerkinSolver solver(model, raw_options(3, Fidelity::ConsistentWeakForm));
  StepInfo info;
  solver.step(solver.initial_state(), force_step(3.0), &info);
  const Eigen::VectorXd fq = solver.assembly().load_vector(Eigen::VectorXd::Zero(3));
  // Gamma (W(L) phi(L) - int W_s phi), with the integral by independent quadrature.
  for (int j = 0; j < 3; ++j) {
    const double int_ws_phi = oracle::integrate(
        [&](double s) { return model.spacing_slope(s) * std::pow(s / kL, j + 1); }, 0.0, kL);
    EXPECT_NEAR(info.rhs(j) - fq(j), -1.5 * (0.01 - int_ws_phi), 1e-12);
  }
}

TEST(Galerkin, FirstStepByHand) {
  const auto model = build_case_model(CaseId::Case1);
  auto o = raw_options(1, Fidelity::ConsistentWeakForm);
  o.dt = 1e-3;
  const GalerkinSolver solver(model, o);
  const double rho = model.material().density;
  const double I = 1.26e-11, A = 1.26e-5;
  const double a = rho * I * kL / 3.0 + rho * A * std::pow(kL, 3) / 20.0 + 1e-3 * 16.0 * kL / 3.0 +
                   1e-6 * 2e9 * I / kL;
  const double b = 1.4794 * kL * kL / 6.0 - 1.5 * 0.11;
  const auto next = solver.step(solver.initial_state(), force_step(3.0));
  EXPECT_NEAR(next.c_tt(0), b / a, 1e-10 * std::abs(b / a));
  EXPECT_NEAR(next.c_t(0), 1e-3 * b / a, 1e-13 * std::abs(b / a));
  EXPECT_NEAR(next.c(0), 1e-6 * b / a, 1e-16 * std::abs(b / a));
  EXPECT_DOUBLE_EQ(next.t, 1e-3);
}

TEST(Galerkin, StepSolvesItsSystem) {
  SolverOptions o;
  o.order = 6;
  const GalerkinSolver solver(build_case_model(CaseId::Case2), o);
  const ActuationProfile sin(InputMode::Force, ActuationProfile::OffsetSinusoid{5.0, 3.0, 2.0 * kPi, 1.0});
  auto state = solver.initial_state();
  StepInfo info;
  for (int k = 0; k < 300; ++k) {
    state = solver.step(state, sin, &info);
    const Eigen::VectorXd res = info.system * state.c_tt - info.rhs;
    ASSERT_LE(res.norm(), 1e-10 * info.rhs.norm());
  }
}

TEST(Galerkin, UnforcedStaysAtRest) {
  SolverOptions o;
  o.t_end = 1.0;
  const GalerkinSolver solver(unloaded(), o);
  const auto rec = solver.simulate(force_step(0.0), "rest");
  ASSERT_TRUE(rec.converged());
  for (const auto& c : rec.states) EXPECT_EQ(c.norm(), 0.0);
  for (const auto& s : rec.samples) {
    EXPECT_NEAR(s.tip_x, kL, 1e-15);
    EXPECT_EQ(s.tip_y, 0.0);
  }
}

TEST(Galerkin, StaticSolutionIsUniformArc) {
  // With no load, the steady state of the weak form is S c = Gamma 2 g.
  const auto model = unloaded();
  const GalerkinSolver solver(model, raw_options(4, Fidelity::ConsistentWeakForm));
  const auto& a = solver.assembly();
  const Eigen::VectorXd c = a.stiffness().ldlt().solve(-0.5 * 2.0 * a.tendon_gradient());
  const double kappa = -0.11 / (2.0 * 2e9 * 1.26e-11);
  for (double s : {0.05, 0.2, 0.37}) EXPECT_NEAR(solver.basis().derivatives(s).dot(c), kappa, 1e-9);
}

TEST(Galerkin, ZeroHorizon) {
  SolverOptions o;
  o.t_end = 0.0;
  const GalerkinSolver solver(build_case_model(CaseId::Case1), o);
  const auto rec = solver.simulate(force_step(3.0), "case1_step");
  EXPECT_TRUE(rec.converged());
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_EQ(rec.samples[0].t, 0.0);
  EXPECT_NEAR(rec.samples[0].tip_x, kL, 1e-15);
  EXPECT_EQ(rec.samples[0].tip_y, 0.0);
}

TEST(Galerkin, SampleCount) {
  SolverOptions o;
  o.t_end = 0.5;
  o.output_stride = 10;
  const GalerkinSolver solver(build_case_model(CaseId::Case1), o);
  const auto rec = solver.simulate(force_step(1.0));
  EXPECT_EQ(rec.size(), 51u);
  EXPECT_NEAR(rec.samples.back().t, 0.5, 1e-12);
  EXPECT_EQ(rec.shapes.size(), rec.size());
  EXPECT_EQ(rec.shapes[3].size(), 101u);
}

TEST(Galerkin, NonConvergenceIsReported) {
  SolverOptions o;
  o.dt = 0.05;
  o.t_end = 3.0;
  o.fidelity = Fidelity::Literal;
  o.divergence_limit = 50.0;
  const GalerkinSolver solver(build_case_model(CaseId::Case1), o);
  const auto rec = solver.simulate(force_step(-1e5), "blowup");
  EXPECT_FALSE(rec.converged());
  EXPECT_FALSE(rec.failure.empty());
  ASSERT_FALSE(rec.samples.empty());
  EXPECT_TRUE(rec.samples.back().flagged);
  for (std::size_t k = 0; k + 1 < rec.size(); ++k) EXPECT_FALSE(rec.samples[k].flagged);
  for (const auto& s : rec.samples) {
    EXPECT_TRUE(std::isfinite(s.tip_x));
    EXPECT_TRUE(std::isfinite(s.tip_y));
  }
  EXPECT_LT(rec.samples.back().t, 3.0);
}

TEST(Galerkin, InvalidOptions) {
  const auto model = build_case_model(CaseId::Case1);
  SolverOptions o;
  o.dt = -1.0;
  EXPECT_THROW(GalerkinSolver(model, o), ConfigError);
  o = SolverOptions{};
  o.order = 0;
  EXPECT_THROW(GalerkinSolver(model, o), ConfigError);
  o = SolverOptions{};
  o.t_end = 0.5e-3;
  EXPECT_THROW(GalerkinSolver(model, o), ConfigError);
  EXPECT_THROW(parse_fidelity("approximate"), ConfigError);
  EXPECT_EQ(parse_fidelity("literal"), Fidelity::Literal);
  EXPECT_EQ(parse_multiplier_rule("closed_form"), MultiplierRule::ClosedForm);
}

TEST(GalerkinDisplacement, ProjectionHoldsConstraint) {
  SolverOptions o;
  const GalerkinSolver solver(build_case_model(CaseId::Case1), o);
  const ActuationProfile ramp(InputMode::Displacement, ActuationProfile::Linear{0.008, 0.0});
  auto state = solver.initial_state();
  StepInfo info;
  const auto& g = solver.assembly().tendon_gradient();
  for (int k = 0; k < 500; ++k) {
    state = solver.step(state, ramp, &info);
    ASSERT_NEAR(g.dot(state.c), ramp(state.t), 1e-12);
  }
  EXPECT_GT(info.lambda, 0.0);
  EXPECT_DOUBLE_EQ(info.gamma, 0.5 * info.lambda);
}

TEST(GalerkinDisplacement, ClosedFormRuleRuns) {
  SolverOptions o;
  o.t_end = 0.5;
  o.multiplier = MultiplierRule::ClosedForm;
  const GalerkinSolver solver(build_case_model(CaseId::Case1), o);
  const ActuationProfile ramp(InputMode::Displacement, ActuationProfile::Linear{0.008, 0.0});
  const auto rec = solver.simulate(ramp, "caseA");
  EXPECT_EQ(rec.multiplier_history.size(), 500u);
  for (const auto& s : rec.samples) EXPECT_EQ(s.lambda, s.lambda_closed);
}

TEST(GalerkinEnergy, NonIncreasingUnderConstantInput) {
  SolverOptions o;
  o.t_end = 2.0;
  o.dt = 1e-4;
  o.output_stride = 20;
  const auto model = build_case_model(CaseId::Case1);
  const GalerkinSolver solver(model, o);
  const double dF = 3.0;
  const auto rec = solver.simulate(force_step(dF));
  ASSERT_TRUE(rec.converged());
  double prev = INFINITY;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    const auto& s = rec.samples[k];
    const double H = s.energy.mechanical() + dF * s.delta_l;
    EXPECT_LE(H, prev + 1e-6) << "t = " << s.t;
    prev = H;
  }
}
