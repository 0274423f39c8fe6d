#pragma once

#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cdcr {

enum class InputMode { Force, Displacement };

InputMode parse_input_mode(std::string_view name);
std::string_view to_string(InputMode mode);

/// Time-varying actuation: differential cable force Delta_F(t) [N] in force
/// mode, or cable displacement Delta_l(t) [m] in displacement mode.
class ActuationProfile {
 public:
  /// slope * (t - t_shift)
  struct Linear {
    double slope;
    double t_shift = 0.0;
    bool operator==(const Linear&) const = default;
  };
  /// offset - amplitude * sin(omega * (t - t_shift))
  struct OffsetSinusoid {
    double offset;
    double amplitude;
    double omega;
    double t_shift;
    bool operator==(const OffsetSinusoid&) const = default;
  };
  /// height * u(t - t0), right-continuous: u(0) = 1.
  struct Step {
    double height;
    double t0;
    bool operator==(const Step&) const = default;
  };
  /// slope * t before t_switch, then offset + amplitude * sin(omega * (t - t_switch)).
  struct RampThenSinusoid {
    double slope;
    double t_switch;
    double offset;
    double amplitude;
    double omega;
    bool operator==(const RampThenSinusoid&) const = default;
  };
  /// offset - amplitude * exp(-decay_rate * t) * sin(omega * t) before t_cut, then hold.
  struct DecayingSinusoid {
    double offset;
    double amplitude;
    double decay_rate;
    double omega;
    double t_cut;
    double hold;
    bool operator==(const DecayingSinusoid&) const = default;
  };
  /// Linear interpolation, clamped outside the sampled range.
  struct Tabulated {
    std::vector<double> t;
    std::vector<double> values;
    bool operator==(const Tabulated&) const = default;
  };

  using Kind = std::variant<Linear, OffsetSinusoid, Step, RampThenSinusoid, DecayingSinusoid, Tabulated>;

  ActuationProfile(InputMode mode, Kind kind);

  double operator()(double t) const { return evaluate(t); }
  double evaluate(double t) const;

  InputMode mode() const { return mode_; }
  const Kind& kind() const { return kind_; }
  std::string_view kind_name() const;

  bool operator==(const ActuationProfile&) const = default;

 private:
  InputMode mode_;
  Kind kind_;
};

/// Antagonistic cable pair: (Delta_l1, Delta_l2) = (delta, -delta).
constexpr std::pair<double, double> antagonistic_pair(double delta) { return {delta, -delta}; }

}  // namespace cdcr
