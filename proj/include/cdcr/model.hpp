#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cdcr {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kGravity = 9.81;

struct MaterialParams {
  double youngs_modulus = 0.0;  // Pa
  double density = 0.0;         // kg/m^3
  double damping = 0.0;         // N*m*s/rad, viscous coefficient on theta_t

  bool operator==(const MaterialParams&) const = default;
};

/// Which cross-section property a diameter taper produces.
enum class SectionProperty { SecondMoment, Area };

/// Spatial profile of a geometric quantity along the backbone.
///
/// Profiles are evaluated against the backbone length L they belong to; the
/// owning RobotModel supplies L and performs the [0, L] domain check.
class GeometryProfile {
 public:
  struct Constant {
    double value;
    bool operator==(const Constant&) const = default;
  };
  /// Circular section whose diameter varies linearly from d0 (base) to d1 (tip).
  struct DiameterTaper {
    double d0;
    double d1;
    SectionProperty property;
    bool operator==(const DiameterTaper&) const = default;
  };
  /// w0 - w1 (s/L)^3
  struct CubicSpacing {
    double w0;
    double w1;
    bool operator==(const CubicSpacing&) const = default;
  };
  /// Piecewise-linear table; arc lengths strictly increasing and covering [0, L].
  struct Tabulated {
    std::vector<double> s;
    std::vector<double> values;
    bool operator==(const Tabulated&) const = default;
  };

  using Kind = std::variant<Constant, DiameterTaper, CubicSpacing, Tabulated>;

  GeometryProfile() : kind_(Constant{1.0}) {}
  explicit GeometryProfile(Kind kind) : kind_(std::move(kind)) {}

  static GeometryProfile constant(double value) { return GeometryProfile(Constant{value}); }
  static GeometryProfile diameter_taper(double d0, double d1, SectionProperty property) {
    return GeometryProfile(DiameterTaper{d0, d1, property});
  }
  static GeometryProfile cubic_spacing(double w0, double w1) {
    return GeometryProfile(CubicSpacing{w0, w1});
  }
  static GeometryProfile tabulated(std::vector<double> s, std::vector<double> values);

  double value(double s, double length) const;
  double derivative(double s, double length) const;

  /// Throws ConfigError unless the profile is positive on [0, L] (checked on a
  /// dense sample plus the table nodes) and, for tables, covers [0, L].
  void validate(double length, std::string_view name) const;

  const Kind& kind() const { return kind_; }
  bool operator==(const GeometryProfile&) const = default;

 private:
  Kind kind_;
};

/// Uniform distributed load (N/m); positive components act along +x / +y.
struct DistributedLoad {
  double q_x = 0.0;
  double q_y = 0.0;
  bool operator==(const DistributedLoad&) const = default;
};

enum class CaseId { Case1, Case2, Case3, Case4 };

CaseId parse_case_id(std::string_view name);
std::string_view to_string(CaseId id);

/// Planar tendon-driven backbone: geometry profiles, material and loading.
/// Immutable once constructed.
class RobotModel {
 public:
  RobotModel(double length, GeometryProfile second_moment, GeometryProfile area,
             GeometryProfile spacing, MaterialParams material, DistributedLoad load);

  double length() const { return length_; }
  const MaterialParams& material() const { return material_; }
  const DistributedLoad& load() const { return load_; }
  const GeometryProfile& second_moment_profile() const { return profile_I_; }
  const GeometryProfile& area_profile() const { return profile_A_; }
  const GeometryProfile& spacing_profile() const { return profile_W_; }

  double second_moment(double s) const;        // I(s), m^4
  double second_moment_slope(double s) const;  // I_s(s), m^3
  double area(double s) const;                 // A(s), m^2
  double spacing(double s) const;              // W(s), m
  double spacing_slope(double s) const;        // W_s(s)

  /// (Q_x(s), Q_y(s)) = integral of the load from s to L.
  std::pair<double, double> cumulative_load(double s) const;

  double bending_stiffness(double s) const { return material_.youngs_modulus * second_moment(s); }

  RobotModel with_material(MaterialParams material) const;
  RobotModel with_load(DistributedLoad load) const;

  bool operator==(const RobotModel&) const = default;

 private:
  void check_domain(double s) const;

  double length_;
  GeometryProfile profile_I_;
  GeometryProfile profile_A_;
  GeometryProfile profile_W_;
  MaterialParams material_;
  DistributedLoad load_;
};

// Baseline robot parameters.
namespace baseline {
inline constexpr double kLength = 0.40;
inline constexpr double kDiameter = 0.004;
inline constexpr double kYoungsModulus = 2e9;
inline constexpr double kSpacing = 0.11;
inline constexpr double kSecondMoment = 1.26e-11;
inline constexpr double kArea = 1.26e-5;
inline constexpr double kLoadY = 1.4794;
inline constexpr double kLoadX = 0.0;
inline constexpr double kDamping = 16.0;
inline constexpr double kTaperBase = 0.006;
inline constexpr double kTaperTip = 0.005;
inline constexpr double kCubicW0 = 0.04;
inline constexpr double kCubicW1 = 0.03;

/// Lumped density that makes the gravity load consistent with the inertia:
/// q_y / (A g).
inline constexpr double kDensity = kLoadY / (kArea * kGravity);
}  // namespace baseline

RobotModel build_case_model(CaseId id);

}  // namespace cdcr
