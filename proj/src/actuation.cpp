#include "cdcr/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdcr/errors.hpp"

namespace cdcr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

void validate(const ActuationProfile::Kind& kind) {
  std::visit(
      Overloaded{
          [](const ActuationProfile::Linear& p) {
            if (!finite({p.slope, p.t_shift})) throw ConfigError("linear profile: non-finite parameter");
          },
          [](const ActuationProfile::OffsetSinusoid& p) {
            if (!finite({p.offset, p.amplitude, p.omega, p.t_shift}))
              throw ConfigError("offset_sinusoid profile: non-finite parameter");
          },
          [](const ActuationProfile::Step& p) {
            if (!finite({p.height, p.t0})) throw ConfigError("step profile: non-finite parameter");
          },
          [](const ActuationProfile::RampThenSinusoid& p) {
            if (!finite({p.slope, p.t_switch, p.offset, p.amplitude, p.omega}))
              throw ConfigError("ramp_then_sinusoid profile: non-finite parameter");
          },
          [](const ActuationProfile::DecayingSinusoid& p) {
            if (!finite({p.offset, p.amplitude, p.decay_rate, p.omega, p.t_cut, p.hold}))
              throw ConfigError("decaying_sinusoid profile: non-finite parameter");
            if (p.decay_rate < 0.0) throw ConfigError("decaying_sinusoid profile: decay_rate must be >= 0");
          },
          [](const ActuationProfile::Tabulated& p) {
            if (p.t.size() != p.values.size() || p.t.empty())
              throw ConfigError("tabulated profile: need matching, non-empty time and value columns");
            for (std::size_t i = 1; i < p.t.size(); ++i) {
              if (!(p.t[i] > p.t[i - 1])) throw ConfigError("tabulated profile: times must be strictly increasing");
            }
            for (std::size_t i = 0; i < p.t.size(); ++i) {
              if (!finite({p.t[i], p.values[i]})) throw ConfigError("tabulated profile: non-finite sample");
            }
          },
      },
      kind);
}

}  // namespace

InputMode parse_input_mode(std::string_view name) {
  if (name == "force") return InputMode::Force;
  if (name == "displacement") return InputMode::Displacement;
  throw ConfigError("unknown input mode '" + std::string(name) + "'");
}

std::string_view to_string(InputMode mode) {
  return mode == InputMode::Force ? "force" : "displacement";
}

ActuationProfile::ActuationProfile(InputMode mode, Kind kind) : mode_(mode), kind_(std::move(kind)) {
  validate(kind_);
}

double ActuationProfile::evaluate(double t) const {
  return std::visit(
      Overloaded{
          [t](const Linear& p) { return p.slope * (t - p.t_shift); },
          [t](const OffsetSinusoid& p) { return p.offset - p.amplitude * std::sin(p.omega * (t - p.t_shift)); },
          [t](const Step& p) { return t >= p.t0 ? p.height : 0.0; },
          [t](const RampThenSinusoid& p) {
            return t < p.t_switch ? p.slope * t : p.offset + p.amplitude * std::sin(p.omega * (t - p.t_switch));
          },
          [t](const DecayingSinusoid& p) {
            return t < p.t_cut ? p.offset - p.amplitude * std::exp(-p.decay_rate * t) * std::sin(p.omega * t)
                               : p.hold;
          },
          [t](const Tabulated& p) {
            if (t <= p.t.front()) return p.values.front();
            if (t >= p.t.back()) return p.values.back();
            const auto hi = static_cast<std::size_t>(std::upper_bound(p.t.begin(), p.t.end(), t) - p.t.begin());
            const std::size_t lo = hi - 1;
            const double w = (t - p.t[lo]) / (p.t[hi] - p.t[lo]);
            return p.values[lo] + w * (p.values[hi] - p.values[lo]);
          },
      },
      kind_);
}

std::string_view ActuationProfile::kind_name() const {
  return std::visit(Overloaded{
                        [](const Linear&) { return std::string_view("linear"); },
                        [](const OffsetSinusoid&) { return std::string_view("offset_sinusoid"); },
                        [](const Step&) { return std::string_view("step"); },
                        [](const RampThenSinusoid&) { return std::string_view("ramp_then_sinusoid"); },
                        [](const DecayingSinusoid&) { return std::string_view("decaying_sinusoid"); },
                        [](const Tabulated&) { return std::string_view("tabulated"); },
                    },
                    kind_);
}

}  // namespace cdcr
