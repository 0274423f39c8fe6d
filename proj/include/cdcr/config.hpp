#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cdcr/actuation.hpp"
#include "cdcr/basis.hpp"
#include "cdcr/galerkin.hpp"
#include "cdcr/model.hpp"
#include "cdcr/scenarios.hpp"

namespace cdcr {

/// Run configuration read from INI-style text.
///
///   [run]       scenario, solver, fidelity, output_dir, output_stride, horizon, repeats
///   [galerkin]  order, dt, basis, panels, points_per_panel, lambda_epsilon, multiplier
///   [sd]        nodes, dt
///   [model]     case, q_x, q_y, damping, youngs_modulus, density
///   [profile]   mode, kind, <kind parameters> | t, values | file
///
/// A [profile] section defines an inline scenario named by `scenario`;
/// otherwise `scenario` must be a builtin id.
struct RunConfig {
  std::string scenario = "case1_linear";
  SolverChoice solver = SolverChoice::Both;
  Fidelity fidelity = Fidelity::ConsistentWeakForm;
  std::string output_dir = "out";
  int output_stride = 10;
  std::optional<double> horizon;
  int repeats = 3;

  int order = 6;
  double dt = 1e-3;
  BasisKind basis = BasisKind::Orthonormal;
  int panels = 16;
  int points_per_panel = 5;
  double lambda_epsilon = 1e-8;
  MultiplierRule multiplier = MultiplierRule::ConstraintProjection;

  int sd_nodes = 201;
  double sd_dt = 2e-5;

  std::optional<CaseId> model_case;
  std::optional<double> q_x;
  std::optional<double> q_y;
  std::optional<double> damping;
  std::optional<double> youngs_modulus;
  std::optional<double> density;

  std::optional<ActuationProfile> profile;
  std::string profile_file;  // tabulated profile read at scenario build time
  InputMode profile_mode = InputMode::Force;

  bool has_inline_profile() const { return profile.has_value() || !profile_file.empty(); }
  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError: "line N: ..." for syntax problems and
/// "invalid <key>: ..." for values that fail validation.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Throws ConfigError naming the offending key.
void validate_config(const RunConfig& config);

/// Resolves the scenario with every override applied. Relative profile files
/// are resolved against `base_dir`.
Scenario build_scenario(const RunConfig& config, const std::string& base_dir = ".");

}  // namespace cdcr
