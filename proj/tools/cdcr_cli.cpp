#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "cdcr/config.hpp"
#include "cdcr/errors.hpp"
#include "cdcr/io.hpp"
#include "cdcr/scenarios.hpp"

namespace {

using namespace cdcr;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNc = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
  std::string config;
  std::string scenario;
  std::string solver;
  std::string fidelity;
  std::string out;
};

RunConfig resolve_config(const CommonFlags& f, std::string& base_dir) {
  RunConfig cfg;
  base_dir = ".";
  if (!f.config.empty()) {
    cfg = load_config(f.config);
    base_dir = std::filesystem::path(f.config).parent_path().string();
    if (base_dir.empty()) base_dir = ".";
  }
  if (!f.scenario.empty()) {
    cfg.scenario = f.scenario;
    if (f.config.empty() || !cfg.has_inline_profile()) {
      cfg.profile.reset();
      cfg.profile_file.clear();
    }
  }
  if (!f.solver.empty()) cfg.solver = parse_solver_choice(f.solver);
  if (!f.fidelity.empty()) cfg.fidelity = parse_fidelity(f.fidelity);
  if (!f.out.empty()) cfg.output_dir = f.out;
  validate_config(cfg);
  return cfg;
}

void report(const SimulationRecord& r) {
  const auto& last = r.samples.back();
  std::cout << r.solver << ' ' << r.scenario_id << ": " << r.samples.size() << " samples, t = " << last.t
            << " s, tip = (" << last.tip_x << ", " << last.tip_y << ") m, compute " << r.compute_seconds << " s";
  if (!r.converged()) std::cout << "  [NC: " << r.failure << ']';
  std::cout << '\n';
}

void emit(const SimulationRecord& r, const std::string& dir) {
  const std::string stem = (std::filesystem::path(dir) / (r.scenario_id + "_" + r.solver)).string();
  write_record_csv(r, stem + ".csv");
  write_record_svg(r, stem + ".svg");
}

void print_metrics(const RecordMetrics& m) {
  std::cout << "tip_rmse = " << m.tip_rmse << " m, max_tip_error = " << m.max_tip_error
            << " m, shape_rmse = " << m.shape_rmse << " rad (" << m.samples << " common samples)\n";
}

// Returns true when every record converged.
bool run_one(const Scenario& sc, SolverChoice choice, const std::string& out) {
  std::vector<SimulationRecord> recs;
  if (choice != SolverChoice::Sd) recs.push_back(run_galerkin(sc));
  if (choice != SolverChoice::Galerkin) recs.push_back(run_sd(sc));
  bool ok = true;
  for (const auto& r : recs) {
    report(r);
    emit(r, out);
    ok = ok && r.converged();
  }
  if (recs.size() == 2) {
    std::cout << "galerkin vs sd: ";
    print_metrics(compare_records(recs[0], recs[1]));
  }
  return ok;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_scenario) {
  cmd->add_option("--config", f.config, "INI run configuration");
  if (with_scenario) cmd->add_option("--scenario", f.scenario, "builtin scenario id");
  cmd->add_option("--solver", f.solver, "galerkin | sd | both");
  cmd->add_option("--fidelity", f.fidelity, "literal | consistent");
  cmd->add_option("--out", f.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar tendon-driven continuum robot dynamics"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "simulate one scenario");
  add_common(run, run_flags, true);

  CommonFlags suite_flags;
  auto* suite = app.add_subcommand("suite", "simulate every builtin scenario");
  add_common(suite, suite_flags, false);

  CommonFlags bench_flags;
  int repeats = 0;
  std::vector<std::string> bench_ids;
  auto* bench = app.add_subcommand("bench", "time Galerkin against SD");
  bench->add_option("--config", bench_flags.config, "INI run configuration");
  bench->add_option("--scenario", bench_ids, "scenario ids (default: force-input Cases 1-3)");
  bench->add_option("--repeats", repeats, "timed repeats per solver (>= 3, first discarded)");
  bench->add_option("--out", bench_flags.out, "output directory");

  std::vector<std::string> compare_files;
  auto* compare = app.add_subcommand("compare", "metrics between two record CSV files");
  compare->add_option("files", compare_files, "two record CSV files")->expected(2)->required();

  app.add_subcommand("list", "list builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("list")) {
      for (const auto& sc : builtin_suite())
        std::cout << sc.id << "  (" << to_string(sc.profile.mode()) << ", " << sc.profile.kind_name() << ", "
                  << sc.horizon << " s)\n";
      return kExitOk;
    }
    if (*run) {
      std::string base;
      const RunConfig cfg = resolve_config(run_flags, base);
      const Scenario sc = build_scenario(cfg, base);
      return run_one(sc, cfg.solver, cfg.output_dir) ? kExitOk : kExitNc;
    }
    if (*suite) {
      std::string base;
      RunConfig cfg = resolve_config(suite_flags, base);
      bool ok = true;
      for (const auto& id : builtin_ids()) {
        RunConfig c = cfg;
        c.scenario = id;
        c.profile.reset();
        c.profile_file.clear();
        ok = run_one(build_scenario(c, base), cfg.solver, cfg.output_dir) && ok;
      }
      return ok ? kExitOk : kExitNc;
    }
    if (*bench) {
      std::string base;
      RunConfig cfg = resolve_config(bench_flags, base);
      if (repeats != 0) cfg.repeats = repeats;
      validate_config(cfg);
      if (bench_ids.empty())
        bench_ids = {"case1_linear", "case1_sin", "case1_step", "case2_linear", "case2_sin",
                     "case2_step",   "case3_linear", "case3_sin", "case3_step"};
      std::vector<Scenario> scenarios;
      for (const auto& id : bench_ids) {
        RunConfig c = cfg;
        c.scenario = id;
        c.profile.reset();
        c.profile_file.clear();
        scenarios.push_back(build_scenario(c, base));
      }
      const SpeedupReport rep = run_benchmark(scenarios, cfg.repeats);
      rep.write_table(std::cout);
      std::cout << "\nReference timings (SD / Galerkin / D-GVS seconds):\n";
      for (const auto& r : reference_timings())
        std::cout << "  " << r.scenario_id << ": " << r.sd << " / " << r.galerkin << " / " << r.dgvs
                  << "  speedup vs SD " << speedup(r.sd, r.galerkin) << ", vs D-GVS " << speedup(r.dgvs, r.galerkin)
                  << '\n';
      std::ostringstream csv;
      rep.write_csv(csv);
      write_text_file((std::filesystem::path(cfg.output_dir) / "bench.csv").string(), csv.str());
      bool nc = false;
      for (const auto& r : rep.rows) nc = nc || !r.value;
      return nc ? kExitNc : kExitOk;
    }
    if (*compare) {
      const SimulationRecord a = read_record_csv(compare_files[0]);
      const SimulationRecord b = read_record_csv(compare_files[1]);
      SimulationRecord a2 = a, b2 = b;
      a2.scenario_id.clear();
      b2.scenario_id.clear();
      print_metrics(compare_records(a2, b2));
      return kExitOk;
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitNc;
  }
  return kExitOk;
}
