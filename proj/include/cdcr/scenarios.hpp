#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdcr/actuation.hpp"
#include "cdcr/galerkin.hpp"
#include "cdcr/model.hpp"
#include "cdcr/record.hpp"
#include "cdcr/sd_solver.hpp"

namespace cdcr {

struct Scenario {
  std::string id;
  RobotModel model;
  ActuationProfile profile;
  double horizon;
  SolverOptions galerkin;
  SdOptions sd;
};

/// Solver options with the horizon applied and the SD sampling aligned to the
/// Galerkin output stride.
Scenario make_scenario(std::string id, RobotModel model, ActuationProfile profile, double horizon);

/// Force-input Cases 1-3 (linear, sinusoidal, step), the two displacement
/// Case-4 runs, and Cases A-D.
std::vector<Scenario> builtin_suite();
std::vector<std::string> builtin_ids();
/// Throws ConfigError for unknown ids.
Scenario find_scenario(std::string_view id);

enum class SolverChoice { Galerkin, Sd, Both };
SolverChoice parse_solver_choice(std::string_view name);
std::string_view to_string(SolverChoice choice);

SimulationRecord run_galerkin(const Scenario& scenario);
SimulationRecord run_sd(const Scenario& scenario);

struct RecordMetrics {
  double tip_rmse = 0.0;       // m
  double max_tip_error = 0.0;  // m
  double shape_rmse = 0.0;     // rad
  std::size_t samples = 0;     // common timestamps used
};

/// Both records are resampled by linear interpolation onto the union of their
/// timestamps inside the shared time support. Shape RMSE uses the recorded
/// shapes (which must share a sample count) and is 0 when either has none.
RecordMetrics compare_records(const SimulationRecord& a, const SimulationRecord& b);

/// (t_ref - t_test) / t_ref.
double speedup(double t_ref, double t_test);

struct BenchmarkRow {
  std::string scenario_id;
  std::optional<double> t_ref;   // SD median seconds; empty when NC
  std::optional<double> t_test;  // Galerkin median seconds; empty when NC
  std::optional<double> value;   // speedup
  SimulationRecord reference_record;  // from the last SD repeat
  SimulationRecord test_record;       // from the last Galerkin repeat
};

struct SpeedupReport {
  std::vector<BenchmarkRow> rows;
  std::optional<double> mean;  // over rows without NC

  void write_csv(std::ostream& os) const;
  void write_table(std::ostream& os) const;
};

/// Runs each scenario `repeats` times per solver, discards the first repeat
/// as warmup and takes the median of the rest.
SpeedupReport run_benchmark(const std::vector<Scenario>& suite, int repeats);

/// Reference timing row for one case/input (seconds).
struct ReferenceTiming {
  std::string_view scenario_id;
  double sd;
  double galerkin;
  double dgvs;
};
const std::vector<ReferenceTiming>& reference_timings();

}  // namespace cdcr
