#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdcr/errors.hpp"
#include "cdcr/model.hpp"

using namespace cdcr;

namespace {

RobotModel with_spacing(GeometryProfile W) {
  const auto base = build_case_model(CaseId::Case1);
  return RobotModel(base.length(), base.second_moment_profile(), base.area_profile(), std::move(W), base.material(),
                    base.load());
}

}  // namespace

TEST(Model, BaselineConstants) {
  const auto m = build_case_model(CaseId::Case1);
  EXPECT_DOUBLE_EQ(m.length(), 0.4);
  EXPECT_DOUBLE_EQ(m.second_moment(0.13), 1.26e-11);
  EXPECT_DOUBLE_EQ(m.area(0.31), 1.26e-5);
  EXPECT_DOUBLE_EQ(m.spacing(0.2), 0.11);
  EXPECT_DOUBLE_EQ(m.spacing_slope(0.2), 0.0);
  EXPECT_DOUBLE_EQ(m.material().youngs_modulus, 2e9);
  EXPECT_DOUBLE_EQ(m.material().damping, 16.0);
  EXPECT_DOUBLE_EQ(m.load().q_y, 1.4794);
  EXPECT_DOUBLE_EQ(m.load().q_x, 0.0);
  EXPECT_NEAR(m.material().density, 1.4794 / (1.26e-5 * 9.81), 1e-9);
  EXPECT_NEAR(m.material().density, 1.1968e4, 1.0);
}

TEST(Model, TaperedSection) {
  const auto m = build_case_model(CaseId::Case2);
  EXPECT_NEAR(m.second_moment(0.0), kPi / 64.0 * std::pow(0.006, 4), 1e-24);
  EXPECT_NEAR(m.second_moment(0.0), 6.3617e-11, 1e-15);
  EXPECT_NEAR(m.area(0.4), kPi / 4.0 * 0.005 * 0.005, 1e-18);
  EXPECT_NEAR(m.area(0.4), 1.9635e-5, 1e-9);
  EXPECT_DOUBLE_EQ(m.spacing(0.3), 0.11);

  const auto flat = GeometryProfile::diameter_taper(0.004, 0.004, SectionProperty::SecondMoment);
  for (double s : {0.0, 0.1, 0.4}) EXPECT_NEAR(flat.value(s, 0.4), kPi / 64.0 * std::pow(0.004, 4), 1e-25);
  const auto flat_a = GeometryProfile::diameter_taper(0.004, 0.004, SectionProperty::Area);
  EXPECT_NEAR(flat_a.value(0.27, 0.4), kPi / 4.0 * 0.004 * 0.004, 1e-18);
}

TEST(Model, CubicSpacing) {
  const auto m = build_case_model(CaseId::Case3);
  EXPECT_NEAR(m.spacing(0.4), 0.01, 1e-15);
  EXPECT_NEAR(m.spacing(0.0), 0.04, 1e-15);
  EXPECT_NEAR(m.spacing_slope(0.4), -0.225, 1e-12);
  EXPECT_DOUBLE_EQ(m.spacing_slope(0.0), 0.0);
  EXPECT_DOUBLE_EQ(m.second_moment(0.2), 1.26e-11);
}

TEST(Model, Case4FollowsCase1) { EXPECT_EQ(build_case_model(CaseId::Case4), build_case_model(CaseId::Case1)); }

TEST(Model, CumulativeLoad) {
  const auto m = build_case_model(CaseId::Case1);
  auto [qx0, qy0] = m.cumulative_load(0.0);
  EXPECT_NEAR(qy0, 0.59176, 1e-12);
  EXPECT_DOUBLE_EQ(qx0, 0.0);
  EXPECT_NEAR(m.cumulative_load(0.2).second, 0.29588, 1e-12);
  auto [qxL, qyL] = m.cumulative_load(0.4);
  EXPECT_EQ(qxL, 0.0);
  EXPECT_EQ(qyL, 0.0);
  double prev = qy0;
  for (int k = 1; k <= 100; ++k) {
    const double q = m.cumulative_load(0.4 * k / 100).second;
    EXPECT_LE(q, prev);
    prev = q;
  }
}

TEST(Model, DomainChecks) {
  const auto m = build_case_model(CaseId::Case1);
  EXPECT_THROW(m.second_moment(0.41), DomainError);
  EXPECT_THROW(m.area(-0.01), DomainError);
  EXPECT_THROW(m.spacing(0.5), DomainError);
  EXPECT_THROW(m.spacing_slope(-1.0), DomainError);
  EXPECT_THROW(m.cumulative_load(0.400001), DomainError);
  EXPECT_NO_THROW(m.spacing(0.4));
}

TEST(Model, CaseIds) {
  EXPECT_EQ(parse_case_id("case3"), CaseId::Case3);
  EXPECT_EQ(to_string(CaseId::Case2), "case2");
  EXPECT_THROW(parse_case_id("case9"), ConfigError);
}

TEST(Model, InvalidParameters) {
  const auto base = build_case_model(CaseId::Case1);
  MaterialParams bad = base.material();
  bad.youngs_modulus = 0.0;
  EXPECT_THROW(base.with_material(bad), ConfigError);
  bad = base.material();
  bad.damping = -1.0;
  EXPECT_THROW(base.with_material(bad), ConfigError);
  EXPECT_THROW(with_spacing(GeometryProfile::cubic_spacing(0.02, 0.03)), ConfigError);  // W(L) < 0
  EXPECT_THROW(GeometryProfile::tabulated({0.0, 0.2, 0.1}, {1, 1, 1}), ConfigError);
  EXPECT_THROW(with_spacing(GeometryProfile::tabulated({0.0, 0.2}, {0.1, 0.1})), ConfigError);  // short table
  EXPECT_THROW(base.with_load({std::nan(""), 0.0}), ConfigError);
  EXPECT_NO_THROW(base.with_load({-2.0, -1.0}));
}

TEST(ModelProperty, ProfilesPositiveOnBuiltinCases) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.4);
  for (auto id : {CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4}) {
    const auto m = build_case_model(id);
    for (int k = 0; k < 1000; ++k) {
      const double s = u(rng);
      ASSERT_GT(m.second_moment(s), 0.0);
      ASSERT_GT(m.area(s), 0.0);
      ASSERT_GT(m.spacing(s), 0.0);
    }
  }
}

TEST(ModelProperty, TabulatedSlopeMatchesAnalytic) {
  const double L = 0.4;
  const auto cubic = GeometryProfile::cubic_spacing(0.04, 0.03);
  std::vector<double> s, v;
  for (int k = 0; k <= 200; ++k) {
    s.push_back(L * k / 200);
    v.push_back(cubic.value(s.back(), L));
  }
  const auto tab = GeometryProfile::tabulated(s, v);
  for (int k = 5; k <= 195; k += 5) {
    const double exact = cubic.derivative(s[k], L);
    const double got = tab.derivative(s[k], L);
    if (std::abs(exact) < 1e-3) {
      EXPECT_NEAR(got, exact, 1e-9);
    } else {
      EXPECT_NEAR(got / exact, 1.0, 1e-6) << "s = " << s[k];
    }
  }
}
