#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdcr/actuation.hpp"
#include "cdcr/errors.hpp"
#include "cdcr/model.hpp"

using namespace cdcr;
using P = ActuationProfile;

namespace {
constexpr double kTwoPi = 2.0 * kPi;
}

TEST(Actuation, SpotValues) {
  const P sin1(InputMode::Force, P::OffsetSinusoid{1.5, 0.3, kTwoPi, 1.0});
  EXPECT_DOUBLE_EQ(sin1(1.0), 1.5);
  EXPECT_NEAR(sin1(1.25), 1.2, 1e-12);

  const P caseD(InputMode::Displacement, P::DecayingSinusoid{0.046, 0.12, 0.35, kTwoPi, 4.0, 0.046});
  EXPECT_DOUBLE_EQ(caseD(5.0), 0.046);
  EXPECT_NEAR(caseD(0.25), 0.046 - 0.12 * std::exp(-0.0875), 1e-15);

  const P caseA(InputMode::Displacement, P::Linear{0.008, 0.0});
  EXPECT_EQ(caseA(0.0), 0.0);
  EXPECT_DOUBLE_EQ(caseA(2.5), 0.02);

  const P step(InputMode::Force, P::Step{3.0, 0.0});
  EXPECT_EQ(step(0.5), 3.0);
  EXPECT_EQ(step(0.0), 3.0);

  const P late(InputMode::Force, P::Step{2.0, 1.0});
  EXPECT_EQ(late(0.999), 0.0);
  EXPECT_EQ(late(1.0), 2.0);

  const P case4(InputMode::Displacement, P::Linear{0.048, 1.0});
  EXPECT_DOUBLE_EQ(case4(0.0), -0.048);
  EXPECT_DOUBLE_EQ(case4(2.0), 0.048);
}

TEST(Actuation, RampThenSinusoidContinuity) {
  const P c(InputMode::Displacement, P::RampThenSinusoid{0.04, 2.0, 0.08, 0.018, kTwoPi});
  EXPECT_NEAR(c(2.0 - 1e-12), 0.08, 1e-12);
  EXPECT_DOUBLE_EQ(c(2.0), 0.08);
  EXPECT_NEAR(c(2.25), 0.098, 1e-15);
  EXPECT_DOUBLE_EQ(c(1.0), 0.04);
}

TEST(Actuation, DecayingSinusoidContinuity) {
  const P d(InputMode::Displacement, P::DecayingSinusoid{0.046, 0.12, 0.35, kTwoPi, 4.0, 0.046});
  EXPECT_NEAR(d(4.0 - 1e-12), 0.046, 1e-10);
  EXPECT_EQ(d(4.0), 0.046);
}

TEST(Actuation, Tabulated) {
  const P t(InputMode::Force, P::Tabulated{{0.0, 1.0, 3.0}, {0.0, 2.0, -2.0}});
  EXPECT_DOUBLE_EQ(t(0.5), 1.0);
  EXPECT_DOUBLE_EQ(t(2.0), 0.0);
  EXPECT_DOUBLE_EQ(t(10.0), -2.0);
  EXPECT_DOUBLE_EQ(t(1.0), 2.0);
  EXPECT_THROW(P(InputMode::Force, P::Tabulated{{0.0, 0.0}, {1.0, 2.0}}), ConfigError);
  EXPECT_THROW(P(InputMode::Force, P::Tabulated{{}, {}}), ConfigError);
}

TEST(Actuation, InvalidParameters) {
  EXPECT_THROW(P(InputMode::Force, P::DecayingSinusoid{0.0, 1.0, -0.1, 1.0, 1.0, 0.0}), ConfigError);
  EXPECT_THROW(P(InputMode::Force, P::Linear{std::nan(""), 0.0}), ConfigError);
  EXPECT_THROW(P(InputMode::Force, P::OffsetSinusoid{1.0, INFINITY, 1.0, 0.0}), ConfigError);
  EXPECT_THROW(parse_input_mode("torque"), ConfigError);
  EXPECT_EQ(parse_input_mode("displacement"), InputMode::Displacement);
}

TEST(Actuation, AntagonisticPair) {
  EXPECT_EQ(antagonistic_pair(0.016), std::make_pair(0.016, -0.016));
  const auto [a, b] = antagonistic_pair(0.0);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
  EXPECT_EQ(antagonistic_pair(-0.01), std::make_pair(-0.01, 0.01));
}

TEST(ActuationProperty, ContinuousExceptStep) {
  const std::vector<P> profiles = {
      P(InputMode::Force, P::Linear{3.16, 0.0}),
      P(InputMode::Force, P::OffsetSinusoid{5.0, 3.0, kTwoPi, 1.0}),
      P(InputMode::Displacement, P::RampThenSinusoid{0.04, 2.0, 0.08, 0.018, kTwoPi}),
      P(InputMode::Displacement, P::DecayingSinusoid{0.046, 0.12, 0.35, kTwoPi, 4.0, 0.046}),
      P(InputMode::Force, P::Tabulated{{0.0, 1.0, 2.0, 5.0}, {0.0, 1.0, 0.5, 3.0}}),
  };
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  const double eps = 1e-9;
  for (const auto& p : profiles) {
    for (int k = 0; k < 200000; ++k) {
      const double t = u(rng);
      ASSERT_LT(std::abs(p(t + eps) - p(t)), 1e-6) << p.kind_name() << " t = " << t;
    }
  }
}
