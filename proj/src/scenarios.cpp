#include "cdcr/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include "cdcr/errors.hpp"

namespace cdcr {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kForceHorizon = 3.0;
constexpr double kDisplacementHorizon = 5.0;

ActuationProfile force_linear(double slope) {
  return ActuationProfile(InputMode::Force, ActuationProfile::Linear{slope, 0.0});
}

ActuationProfile force_sinusoid(double offset, double amplitude) {
  return ActuationProfile(InputMode::Force, ActuationProfile::OffsetSinusoid{offset, amplitude, kTwoPi, 1.0});
}

ActuationProfile force_step(double height) {
  return ActuationProfile(InputMode::Force, ActuationProfile::Step{height, 0.0});
}

}  // namespace

Scenario make_scenario(std::string id, RobotModel model, ActuationProfile profile, double horizon) {
  if (!(horizon > 0.0)) throw ConfigError("scenario horizon must be positive");
  SolverOptions g;
  g.t_end = horizon;
  SdOptions sd;
  sd.t_end = horizon;
  sd.sample_interval = g.dt * g.output_stride;
  return Scenario{std::move(id), std::move(model), std::move(profile), horizon, g, sd};
}

std::vector<Scenario> builtin_suite() {
  const RobotModel c1 = build_case_model(CaseId::Case1);
  const RobotModel c2 = build_case_model(CaseId::Case2);
  const RobotModel c3 = build_case_model(CaseId::Case3);
  const double h = kForceHorizon;
  std::vector<Scenario> suite;
  suite.push_back(make_scenario("case1_linear", c1, force_linear(1.0), h));
  suite.push_back(make_scenario("case1_sin", c1, force_sinusoid(1.5, 0.3), h));
  suite.push_back(make_scenario("case1_step", c1, force_step(3.0), h));
  suite.push_back(make_scenario("case2_linear", c2, force_linear(2.75), h));
  suite.push_back(make_scenario("case2_sin", c2, force_sinusoid(5.0, 3.0), h));
  suite.push_back(make_scenario("case2_step", c2, force_step(13.75), h));
  suite.push_back(make_scenario("case3_linear", c3, force_linear(3.16), h));
  suite.push_back(make_scenario("case3_sin", c3, force_sinusoid(5.0, 3.0), h));
  suite.push_back(make_scenario("case3_step", c3, force_step(8.0), h));

  const ActuationProfile case4(InputMode::Displacement, ActuationProfile::Linear{0.048, 1.0});
  suite.push_back(make_scenario("case4_classic", c1, case4, h));
  suite.push_back(make_scenario("case4_nonuniform", c2, case4, h));

  const double hd = kDisplacementHorizon;
  suite.push_back(make_scenario(
      "caseA", c1, ActuationProfile(InputMode::Displacement, ActuationProfile::Linear{0.008, 0.0}), hd));
  suite.push_back(
      make_scenario("caseB", c1, ActuationProfile(InputMode::Displacement, ActuationProfile::Step{0.14, 0.0}), hd));
  suite.push_back(make_scenario(
      "caseC", c1,
      ActuationProfile(InputMode::Displacement, ActuationProfile::RampThenSinusoid{0.04, 2.0, 0.08, 0.018, kTwoPi}),
      hd));
  suite.push_back(make_scenario(
      "caseD", c1,
      ActuationProfile(InputMode::Displacement,
                       ActuationProfile::DecayingSinusoid{0.046, 0.12, 0.35, kTwoPi, 4.0, 0.046}),
      hd));
  return suite;
}

std::vector<std::string> builtin_ids() {
  std::vector<std::string> ids;
  for (const auto& s : builtin_suite()) ids.push_back(s.id);
  return ids;
}

Scenario find_scenario(std::string_view id) {
  for (auto& s : builtin_suite())
    if (s.id == id) return s;
  throw ConfigError("unknown scenario '" + std::string(id) + "'");
}

SolverChoice parse_solver_choice(std::string_view name) {
  if (name == "galerkin") return SolverChoice::Galerkin;
  if (name == "sd") return SolverChoice::Sd;
  if (name == "both") return SolverChoice::Both;
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

std::string_view to_string(SolverChoice choice) {
  switch (choice) {
    case SolverChoice::Galerkin: return "galerkin";
    case SolverChoice::Sd: return "sd";
    case SolverChoice::Both: return "both";
  }
  return "both";
}

SimulationRecord run_galerkin(const Scenario& scenario) {
  return GalerkinSolver(scenario.model, scenario.galerkin).simulate(scenario.profile, scenario.id);
}

SimulationRecord run_sd(const Scenario& scenario) {
  return FiniteDifferenceSolver(scenario.model, scenario.sd).simulate(scenario.profile, scenario.id);
}

// ---------------------------------------------------------------------------

namespace {

struct Interpolated {
  double tip_x;
  double tip_y;
  std::vector<double> theta;
};

Interpolated interpolate(const SimulationRecord& r, double t, bool with_shape) {
  const auto& smp = r.samples;
  auto it = std::lower_bound(smp.begin(), smp.end(), t, [](const RecordSample& a, double v) { return a.t < v; });
  std::size_t hi = static_cast<std::size_t>(it - smp.begin());
  if (hi >= smp.size()) hi = smp.size() - 1;
  std::size_t lo = hi > 0 ? hi - 1 : 0;
  double f = 0.0;
  if (smp[hi].t == t || hi == 0) {
    lo = hi;
  } else {
    f = (t - smp[lo].t) / (smp[hi].t - smp[lo].t);
  }
  Interpolated out;
  out.tip_x = (1.0 - f) * smp[lo].tip_x + f * smp[hi].tip_x;
  out.tip_y = (1.0 - f) * smp[lo].tip_y + f * smp[hi].tip_y;
  if (with_shape) {
    const auto& a = r.shapes[lo].theta;
    const auto& b = r.shapes[hi].theta;
    out.theta.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out.theta[k] = (1.0 - f) * a[k] + f * b[k];
  }
  return out;
}

}  // namespace

RecordMetrics compare_records(const SimulationRecord& a, const SimulationRecord& b) {
  if (!a.scenario_id.empty() && !b.scenario_id.empty() && a.scenario_id != b.scenario_id)
    throw ConfigError("cannot compare records of different scenarios ('" + a.scenario_id + "' vs '" +
                      b.scenario_id + "')");
  if (a.samples.empty() || b.samples.empty()) throw DomainError("cannot compare empty records");
  const double lo = std::max(a.samples.front().t, b.samples.front().t);
  const double hi = std::min(a.samples.back().t, b.samples.back().t);
  if (lo > hi) throw DomainError("records have disjoint time supports");

  std::vector<double> times;
  for (const auto* r : {&a, &b})
    for (const auto& s : r->samples)
      if (s.t >= lo && s.t <= hi) times.push_back(s.t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }),
              times.end());

  const bool with_shape = a.shapes.size() == a.samples.size() && b.shapes.size() == b.samples.size() &&
                          !a.shapes.empty() && a.shapes.front().theta.size() == b.shapes.front().theta.size() &&
                          !a.shapes.front().theta.empty();
  RecordMetrics m;
  double tip_sq = 0.0;
  double shape_sq = 0.0;
  std::size_t shape_count = 0;
  for (double t : times) {
    const auto pa = interpolate(a, t, with_shape);
    const auto pb = interpolate(b, t, with_shape);
    const double e = std::hypot(pa.tip_x - pb.tip_x, pa.tip_y - pb.tip_y);
    tip_sq += e * e;
    m.max_tip_error = std::max(m.max_tip_error, e);
    if (with_shape) {
      for (std::size_t k = 0; k < pa.theta.size(); ++k) {
        const double d = pa.theta[k] - pb.theta[k];
        shape_sq += d * d;
      }
      shape_count += pa.theta.size();
    }
  }
  m.samples = times.size();
  m.tip_rmse = std::sqrt(tip_sq / static_cast<double>(times.size()));
  m.shape_rmse = shape_count ? std::sqrt(shape_sq / static_cast<double>(shape_count)) : 0.0;
  return m;
}

double speedup(double t_ref, double t_test) {
  if (!(t_ref > 0.0)) throw DomainError("speedup needs a positive reference time");
  return (t_ref - t_test) / t_ref;
}

// ---------------------------------------------------------------------------

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class Run>
std::optional<double> timed(int repeats, Run run, SimulationRecord& last) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    last = run();
    if (!last.converged()) return std::nullopt;
    if (r > 0) times.push_back(last.compute_seconds);
  }
  return median(times);
}

std::string cell(const std::optional<double>& v, int precision) {
  if (!v) return "NC";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(precision) << *v;
  return os.str();
}

}  // namespace

SpeedupReport run_benchmark(const std::vector<Scenario>& suite, int repeats) {
  if (repeats < 3) throw ConfigError("repeats must be >= 3");
  SpeedupReport report;
  double sum = 0.0;
  int count = 0;
  for (const auto& sc : suite) {
    BenchmarkRow row;
    row.scenario_id = sc.id;
    row.t_ref = timed(repeats, [&] { return run_sd(sc); }, row.reference_record);
    row.t_test = timed(repeats, [&] { return run_galerkin(sc); }, row.test_record);
    if (row.t_ref && row.t_test && *row.t_ref > 0.0) {
      row.value = speedup(*row.t_ref, *row.t_test);
      sum += *row.value;
      ++count;
    }
    report.rows.push_back(std::move(row));
  }
  if (count > 0) report.mean = sum / count;
  return report;
}

void SpeedupReport::write_csv(std::ostream& os) const {
  os << "scenario,sd_seconds,galerkin_seconds,speedup\n";
  for (const auto& r : rows)
    os << r.scenario_id << ',' << cell(r.t_ref, 6) << ',' << cell(r.t_test, 6) << ',' << cell(r.value, 6) << '\n';
  os << "mean,,," << cell(mean, 6) << '\n';
}

void SpeedupReport::write_table(std::ostream& os) const {
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.scenario_id.size());
  const auto line = [&](std::string_view a, std::string_view b, std::string_view c, std::string_view d) {
    os << std::left << std::setw(static_cast<int>(w) + 2) << a << std::right << std::setw(12) << b << std::setw(14)
       << c << std::setw(10) << d << '\n';
  };
  line("Scenario", "SD [s]", "Galerkin [s]", "Speedup");
  os << std::string(w + 38, '-') << '\n';
  for (const auto& r : rows) line(r.scenario_id, cell(r.t_ref, 3), cell(r.t_test, 3), cell(r.value, 4));
  os << std::string(w + 38, '-') << '\n';
  line("mean", "", "", cell(mean, 4));
  os << "NC denotes non-convergence.\n";
}

const std::vector<ReferenceTiming>& reference_timings() {
  static const std::vector<ReferenceTiming> table = {
      {"case1_linear", 2.662, 0.213, 0.523}, {"case1_sin", 2.278, 0.107, 0.425}, {"case1_step", 1.557, 0.088, 0.242},
      {"case2_linear", 2.218, 0.142, 0.209}, {"case2_sin", 2.022, 0.078, 0.276}, {"case2_step", 1.445, 0.070, 0.130},
      {"case3_linear", 2.743, 0.113, 0.406}, {"case3_sin", 2.246, 0.121, 0.331}, {"case3_step", 1.270, 0.081, 0.144},
  };
  return table;
}

}  // namespace cdcr
