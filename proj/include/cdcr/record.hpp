#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "cdcr/actuation.hpp"
#include "cdcr/kinematics.hpp"

namespace cdcr {

enum class RunStatus { Completed, NonConvergence };

/// One recorded output sample.
struct RecordSample {
  double t = 0.0;
  double tip_x = 0.0;
  double tip_y = 0.0;
  double theta_tip = 0.0;
  double delta_l = 0.0;       // tendon displacement reconstructed from the shape
  double input = 0.0;         // commanded Delta_F [N] or Delta_l [m]
  double gamma = 0.0;         // boundary actuation coefficient
  double lambda = 0.0;        // multiplier applied (displacement mode)
  double lambda_closed = 0.0; // closed-form multiplier from the state (diagnostic)
  EnergyBreakdown energy;
  bool flagged = false;       // last valid sample of a run that did not converge
};

/// Time series produced by either solver for one scenario.
struct SimulationRecord {
  std::string scenario_id;
  std::string solver;  // "galerkin" or "sd"
  InputMode mode = InputMode::Force;
  double length = 0.0;

  std::vector<RecordSample> samples;
  std::vector<BackboneShape> shapes;    // one per sample, on the output grid
  std::vector<Eigen::VectorXd> states;  // modal coefficients or nodal angles
  // (t, lambda) at every step of a displacement-mode run.
  std::vector<std::pair<double, double>> multiplier_history;

  double compute_seconds = 0.0;
  RunStatus status = RunStatus::Completed;
  std::string failure;

  bool converged() const { return status == RunStatus::Completed; }
  std::size_t size() const { return samples.size(); }
};

}  // namespace cdcr
