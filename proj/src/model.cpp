#include "cdcr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cdcr/errors.hpp"

namespace cdcr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double taper_diameter(const GeometryProfile::DiameterTaper& t, double s, double length) {
  return t.d0 + (t.d1 - t.d0) * s / length;
}

double linear_interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

// Derivative of the Lagrange interpolant through a window of up to five
// neighbouring samples; exact for polynomial tables up to degree four.
double local_derivative(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  const std::size_t width = std::min<std::size_t>(5, n);
  const auto nearest = static_cast<std::size_t>(
      std::min_element(xs.begin(), xs.end(),
                       [x](double a, double b) { return std::abs(a - x) < std::abs(b - x); }) -
      xs.begin());
  std::size_t first = nearest >= width / 2 ? nearest - width / 2 : 0;
  first = std::min(first, n - width);

  double result = 0.0;
  for (std::size_t j = first; j < first + width; ++j) {
    double dl = 0.0;
    for (std::size_t k = first; k < first + width; ++k) {
      if (k == j) continue;
      double term = 1.0 / (xs[j] - xs[k]);
      for (std::size_t m = first; m < first + width; ++m) {
        if (m == j || m == k) continue;
        term *= (x - xs[m]) / (xs[j] - xs[m]);
      }
      dl += term;
    }
    result += ys[j] * dl;
  }
  return result;
}

}  // namespace

GeometryProfile GeometryProfile::tabulated(std::vector<double> s, std::vector<double> values) {
  if (s.size() != values.size() || s.size() < 2) {
    throw ConfigError("tabulated profile needs at least two (s, value) samples of equal length");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw ConfigError("tabulated profile arc lengths must be strictly increasing");
  }
  return GeometryProfile(Tabulated{std::move(s), std::move(values)});
}

double GeometryProfile::value(double s, double length) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [&](const DiameterTaper& t) {
            const double d = taper_diameter(t, s, length);
            return t.property == SectionProperty::SecondMoment ? kPi / 64.0 * std::pow(d, 4)
                                                               : kPi / 4.0 * d * d;
          },
          [&](const CubicSpacing& c) { return c.w0 - c.w1 * std::pow(s / length, 3); },
          [&](const Tabulated& t) { return linear_interpolate(t.s, t.values, s); },
      },
      kind_);
}

double GeometryProfile::derivative(double s, double length) const {
  return std::visit(
      Overloaded{
          [](const Constant&) { return 0.0; },
          [&](const DiameterTaper& t) {
            const double d = taper_diameter(t, s, length);
            const double dd = (t.d1 - t.d0) / length;
            return t.property == SectionProperty::SecondMoment ? kPi / 16.0 * d * d * d * dd
                                                               : kPi / 2.0 * d * dd;
          },
          [&](const CubicSpacing& c) { return -3.0 * c.w1 * s * s / (length * length * length); },
          [&](const Tabulated& t) { return local_derivative(t.s, t.values, s); },
      },
      kind_);
}

void GeometryProfile::validate(double length, std::string_view name) const {
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << "profile " << name << ": " << why;
    throw ConfigError(os.str());
  };
  if (const auto* t = std::get_if<Tabulated>(&kind_)) {
    const double tol = 1e-12 * length;
    if (t->s.front() > tol || t->s.back() < length - tol) fail("table does not cover [0, L]");
    for (double v : t->values) {
      if (!(v > 0.0) || !std::isfinite(v)) fail("table value must be positive and finite");
    }
  }
  constexpr int kSamples = 1000;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = length * i / kSamples;
    const double v = value(s, length);
    if (!(v > 0.0) || !std::isfinite(v)) fail("value must be positive on [0, L]");
  }
}

CaseId parse_case_id(std::string_view name) {
  if (name == "case1") return CaseId::Case1;
  if (name == "case2") return CaseId::Case2;
  if (name == "case3") return CaseId::Case3;
  if (name == "case4") return CaseId::Case4;
  throw ConfigError("unknown case id '" + std::string(name) + "'");
}

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::Case1: return "case1";
    case CaseId::Case2: return "case2";
    case CaseId::Case3: return "case3";
    case CaseId::Case4: return "case4";
  }
  return "case?";
}

RobotModel::RobotModel(double length, GeometryProfile second_moment, GeometryProfile area,
                       GeometryProfile spacing, MaterialParams material, DistributedLoad load)
    : length_(length),
      profile_I_(std::move(second_moment)),
      profile_A_(std::move(area)),
      profile_W_(std::move(spacing)),
      material_(material),
      load_(load) {
  if (!(length_ > 0.0) || !std::isfinite(length_)) throw ConfigError("length must be positive");
  if (!(material_.youngs_modulus > 0.0)) throw ConfigError("youngs_modulus must be positive");
  if (!(material_.density > 0.0)) throw ConfigError("density must be positive");
  if (!(material_.damping >= 0.0)) throw ConfigError("damping must be non-negative");
  if (!std::isfinite(load_.q_x) || !std::isfinite(load_.q_y)) throw ConfigError("load must be finite");
  profile_I_.validate(length_, "I");
  profile_A_.validate(length_, "A");
  profile_W_.validate(length_, "W");
}

void RobotModel::check_domain(double s) const {
  const double tol = 1e-12 * length_;
  if (!(s >= -tol && s <= length_ + tol)) {
    std::ostringstream os;
    os << "arc length " << s << " outside [0, " << length_ << "]";
    throw DomainError(os.str());
  }
}

double RobotModel::second_moment(double s) const {
  check_domain(s);
  return profile_I_.value(s, length_);
}

double RobotModel::second_moment_slope(double s) const {
  check_domain(s);
  return profile_I_.derivative(s, length_);
}

double RobotModel::area(double s) const {
  check_domain(s);
  return profile_A_.value(s, length_);
}

double RobotModel::spacing(double s) const {
  check_domain(s);
  return profile_W_.value(s, length_);
}

double RobotModel::spacing_slope(double s) const {
  check_domain(s);
  return profile_W_.derivative(s, length_);
}

std::pair<double, double> RobotModel::cumulative_load(double s) const {
  check_domain(s);
  const double remaining = std::max(0.0, length_ - s);
  return {load_.q_x * remaining, load_.q_y * remaining};
}

RobotModel RobotModel::with_material(MaterialParams material) const {
  return RobotModel(length_, profile_I_, profile_A_, profile_W_, material, load_);
}

RobotModel RobotModel::with_load(DistributedLoad load) const {
  return RobotModel(length_, profile_I_, profile_A_, profile_W_, material_, load);
}

RobotModel build_case_model(CaseId id) {
  using namespace baseline;
  const MaterialParams material{kYoungsModulus, kDensity, kDamping};
  const DistributedLoad load{kLoadX, kLoadY};
  auto I = GeometryProfile::constant(kSecondMoment);
  auto A = GeometryProfile::constant(kArea);
  auto W = GeometryProfile::constant(kSpacing);
  switch (id) {
    case CaseId::Case1:
    case CaseId::Case4:
      break;
    case CaseId::Case2:
      I = GeometryProfile::diameter_taper(kTaperBase, kTaperTip, SectionProperty::SecondMoment);
      A = GeometryProfile::diameter_taper(kTaperBase, kTaperTip, SectionProperty::Area);
      break;
    case CaseId::Case3:
      W = GeometryProfile::cubic_spacing(kCubicW0, kCubicW1);
      break;
    default:
      throw ConfigError("unknown case id");
  }
  return RobotModel(kLength, I, A, W, material, load);
}

}  // namespace cdcr
