#include "cdcr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <deque>
#include <map>
#include <sstream>
#include <vector>

#include "cdcr/errors.hpp"
#include "cdcr/io.hpp"

namespace cdcr {

namespace {

struct Entry {
  std::string value;
  int line;
};
using Section = std::map<std::string, Entry>;

const std::vector<std::string_view> kSections = {"run", "galerkin", "sd", "model", "profile"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string line_error(int line, const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double to_double(const Entry& e, std::string_view key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  if (!e.value.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError(line_error(e.line, "invalid number '" + e.value + "' for " + std::string(key)));
  return v;
}

int to_int(const Entry& e, std::string_view key) {
  int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError(line_error(e.line, "invalid integer '" + e.value + "' for " + std::string(key)));
  return v;
}

std::vector<double> to_list(const Entry& e, std::string_view key) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    out.push_back(to_double(Entry{std::string(item), e.line}, key));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

/// Consumes keys from one section; leftover keys are reported as unknown.
class Reader {
 public:
  Reader(std::string name, Section sec) : name_(std::move(name)), sec_(std::move(sec)) {}

  const Entry* take(const std::string& key) {
    auto it = sec_.find(key);
    if (it == sec_.end()) return nullptr;
    taken_.push_back(it->second);
    sec_.erase(it);
    return &taken_.back();
  }
  bool has(const std::string& key) const { return sec_.count(key) > 0; }

  template <class F>
  void with(const std::string& key, F f) {
    if (const Entry* e = take(key)) f(*e);
  }
  double required_double(const std::string& key, int section_line) {
    const Entry* e = take(key);
    if (!e) throw ConfigError(line_error(section_line, "missing " + key + " in [" + name_ + "]"));
    return to_double(*e, key);
  }
  double optional_double(const std::string& key, double fallback) {
    const Entry* e = take(key);
    return e ? to_double(*e, key) : fallback;
  }
  void finish() const {
    if (!sec_.empty()) {
      const auto& [key, e] = *sec_.begin();
      throw ConfigError(line_error(e.line, "unknown key '" + key + "' in [" + name_ + "]"));
    }
  }

 private:
  std::string name_;
  Section sec_;
  std::deque<Entry> taken_;
};

template <class Parse>
auto parse_named(const Entry& e, std::string_view key, Parse parse) {
  try {
    return parse(e.value);
  } catch (const ConfigError& err) {
    throw ConfigError(line_error(e.line, "invalid " + std::string(key) + ": " + err.what()));
  }
}

ActuationProfile build_profile(Reader& r, InputMode mode, const std::string& kind, int line) {
  using P = ActuationProfile;
  P::Kind k = P::Linear{0.0, 0.0};
  if (kind == "linear") {
    k = P::Linear{r.required_double("slope", line), r.optional_double("t_shift", 0.0)};
  } else if (kind == "offset_sinusoid") {
    const double offset = r.required_double("offset", line);
    const double amplitude = r.required_double("amplitude", line);
    const double omega = r.required_double("omega", line);
    k = P::OffsetSinusoid{offset, amplitude, omega, r.optional_double("t_shift", 0.0)};
  } else if (kind == "step") {
    k = P::Step{r.required_double("height", line), r.optional_double("t0", 0.0)};
  } else if (kind == "ramp_then_sinusoid") {
    const double slope = r.required_double("slope", line);
    const double t_switch = r.required_double("t_switch", line);
    const double offset = r.required_double("offset", line);
    const double amplitude = r.required_double("amplitude", line);
    k = P::RampThenSinusoid{slope, t_switch, offset, amplitude, r.required_double("omega", line)};
  } else if (kind == "decaying_sinusoid") {
    const double offset = r.required_double("offset", line);
    const double amplitude = r.required_double("amplitude", line);
    const double decay = r.required_double("decay_rate", line);
    const double omega = r.required_double("omega", line);
    const double t_cut = r.required_double("t_cut", line);
    k = P::DecayingSinusoid{offset, amplitude, decay, omega, t_cut, r.required_double("hold", line)};
  } else if (kind == "tabulated") {
    const Entry* t = r.take("t");
    const Entry* v = r.take("values");
    if (!t || !v) throw ConfigError(line_error(line, "tabulated profile needs t and values (or file)"));
    k = P::Tabulated{to_list(*t, "t"), to_list(*v, "values")};
  } else {
    throw ConfigError(line_error(line, "invalid kind: unknown profile kind '" + kind + "'"));
  }
  try {
    return P(mode, std::move(k));
  } catch (const ConfigError& e) {
    throw ConfigError(line_error(line, std::string("invalid [profile]: ") + e.what()));
  }
}

void write_list(std::ostream& os, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_double(v[i]);
}

bool plain_token(const std::string& s) {
  return !s.empty() && trim(s) == s && s.find_first_of("#\n=[]") == std::string::npos;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
  std::vector<std::string> headers;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line_error(line, "malformed section header"));
      const std::string name(trim(s.substr(1, s.size() - 2)));
      if (std::find(kSections.begin(), kSections.end(), name) == kSections.end())
        throw ConfigError(line_error(line, "unknown section [" + name + "]"));
      if (std::find(headers.begin(), headers.end(), name) != headers.end())
        throw ConfigError(line_error(line, "duplicate section [" + name + "]"));
      headers.push_back(name);
      if (!section_lines.count(name)) section_lines[name] = line;
      sections[name];
      current = name;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_error(line, "expected 'key = value'"));
    std::string key(trim(s.substr(0, eq)));
    const std::string value(trim(s.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_error(line, "empty key"));
    std::string section = current.empty() ? "run" : current;
    // Shorthand numeric options accepted in [run].
    if (section == "run") {
      static const std::vector<std::string> galerkin_keys = {"dt", "order", "basis", "panels", "points_per_panel",
                                                             "lambda_epsilon", "multiplier"};
      if (std::find(galerkin_keys.begin(), galerkin_keys.end(), key) != galerkin_keys.end()) {
        section = "galerkin";
      } else if (key == "sd_dt" || key == "dt_sd") {
        section = "sd";
        key = "dt";
      } else if (key == "sd_nodes") {
        section = "sd";
        key = "nodes";
      }
    }
    auto& sec = sections[section];
    if (sec.count(key)) throw ConfigError(line_error(line, "duplicate key '" + key + "'"));
    sec[key] = Entry{value, line};
    if (!section_lines.count(section)) section_lines[section] = line;
  }

  RunConfig cfg;
  {
    Reader r("run", sections["run"]);
    r.with("scenario", [&](const Entry& e) { cfg.scenario = e.value; });
    r.with("solver", [&](const Entry& e) { cfg.solver = parse_named(e, "solver", parse_solver_choice); });
    r.with("fidelity", [&](const Entry& e) { cfg.fidelity = parse_named(e, "fidelity", parse_fidelity); });
    r.with("output_dir", [&](const Entry& e) { cfg.output_dir = e.value; });
    r.with("output_stride", [&](const Entry& e) { cfg.output_stride = to_int(e, "output_stride"); });
    r.with("horizon", [&](const Entry& e) { cfg.horizon = to_double(e, "horizon"); });
    r.with("repeats", [&](const Entry& e) { cfg.repeats = to_int(e, "repeats"); });
    r.finish();
  }
  {
    Reader r("galerkin", sections["galerkin"]);
    r.with("order", [&](const Entry& e) { cfg.order = to_int(e, "order"); });
    r.with("dt", [&](const Entry& e) { cfg.dt = to_double(e, "dt"); });
    r.with("basis", [&](const Entry& e) { cfg.basis = parse_named(e, "basis", parse_basis_kind); });
    r.with("panels", [&](const Entry& e) { cfg.panels = to_int(e, "panels"); });
    r.with("points_per_panel", [&](const Entry& e) { cfg.points_per_panel = to_int(e, "points_per_panel"); });
    r.with("lambda_epsilon", [&](const Entry& e) { cfg.lambda_epsilon = to_double(e, "lambda_epsilon"); });
    r.with("multiplier",
           [&](const Entry& e) { cfg.multiplier = parse_named(e, "multiplier", parse_multiplier_rule); });
    r.finish();
  }
  {
    Reader r("sd", sections["sd"]);
    r.with("nodes", [&](const Entry& e) { cfg.sd_nodes = to_int(e, "nodes"); });
    r.with("dt", [&](const Entry& e) { cfg.sd_dt = to_double(e, "dt"); });
    r.finish();
  }
  {
    Reader r("model", sections["model"]);
    r.with("case", [&](const Entry& e) { cfg.model_case = parse_named(e, "case", parse_case_id); });
    r.with("q_x", [&](const Entry& e) { cfg.q_x = to_double(e, "q_x"); });
    r.with("q_y", [&](const Entry& e) { cfg.q_y = to_double(e, "q_y"); });
    r.with("damping", [&](const Entry& e) { cfg.damping = to_double(e, "damping"); });
    r.with("youngs_modulus", [&](const Entry& e) { cfg.youngs_modulus = to_double(e, "youngs_modulus"); });
    r.with("density", [&](const Entry& e) { cfg.density = to_double(e, "density"); });
    r.finish();
  }
  if (section_lines.count("profile")) {
    const int line0 = section_lines["profile"];
    Reader r("profile", sections["profile"]);
    r.with("mode", [&](const Entry& e) { cfg.profile_mode = parse_named(e, "mode", parse_input_mode); });
    const Entry* kind = r.take("kind");
    if (!kind) throw ConfigError(line_error(line0, "missing kind in [profile]"));
    const std::string kind_name = kind->value;
    const int kind_line = kind->line;
    if (kind_name == "tabulated" && r.has("file")) {
      cfg.profile_file = r.take("file")->value;
    } else {
      cfg.profile = build_profile(r, cfg.profile_mode, kind_name, kind_line);
    }
    r.finish();
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  const auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("invalid " + key + ": " + why);
  };
  const auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be a positive finite number");
  };
  if (c.scenario.empty() ||
      !std::all_of(c.scenario.begin(), c.scenario.end(),
                   [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'; }))
    fail("scenario", "ids use letters, digits, '_' and '-'");
  if (!c.has_inline_profile()) {
    const auto ids = builtin_ids();
    if (std::find(ids.begin(), ids.end(), c.scenario) == ids.end())
      fail("scenario", "unknown builtin id '" + c.scenario + "'");
  }
  if (!plain_token(c.output_dir)) fail("output_dir", "must be a non-empty path without '#', '=' or brackets");
  if (c.output_stride < 1) fail("output_stride", "must be >= 1");
  if (c.horizon) positive("horizon", *c.horizon);
  if (c.repeats < 3) fail("repeats", "must be >= 3");
  if (c.order < 1 || c.order > 20) fail("order", "must be in [1, 20]");
  positive("dt", c.dt);
  if (c.horizon && *c.horizon < c.dt) fail("horizon", "must be at least one step (dt)");
  if (c.panels < 1 || c.panels > 4096) fail("panels", "must be in [1, 4096]");
  if (c.points_per_panel < 2 || c.points_per_panel > 12) fail("points_per_panel", "must be in [2, 12]");
  positive("lambda_epsilon", c.lambda_epsilon);
  if (c.sd_nodes < 51 || c.sd_nodes > 100001) fail("nodes", "must be in [51, 100001]");
  positive("sd dt", c.sd_dt);
  if (c.q_x && !std::isfinite(*c.q_x)) fail("q_x", "must be finite");
  if (c.q_y && !std::isfinite(*c.q_y)) fail("q_y", "must be finite");
  if (c.damping && (!(*c.damping >= 0.0) || !std::isfinite(*c.damping))) fail("damping", "must be >= 0");
  if (c.youngs_modulus) positive("youngs_modulus", *c.youngs_modulus);
  if (c.density) positive("density", *c.density);
  if (c.profile && c.profile->mode() != c.profile_mode) fail("mode", "profile mode mismatch");
  if (!c.profile_file.empty() && !plain_token(c.profile_file)) fail("file", "must be a path without '#'");
  if (c.profile && !c.profile_file.empty()) fail("file", "give either a file or inline parameters");
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[run]\n";
  os << "scenario = " << c.scenario << '\n';
  os << "solver = " << to_string(c.solver) << '\n';
  os << "fidelity = " << to_string(c.fidelity) << '\n';
  os << "output_dir = " << c.output_dir << '\n';
  os << "output_stride = " << c.output_stride << '\n';
  if (c.horizon) os << "horizon = " << format_double(*c.horizon) << '\n';
  os << "repeats = " << c.repeats << '\n';

  os << "\n[galerkin]\n";
  os << "order = " << c.order << '\n';
  os << "dt = " << format_double(c.dt) << '\n';
  os << "basis = " << to_string(c.basis) << '\n';
  os << "panels = " << c.panels << '\n';
  os << "points_per_panel = " << c.points_per_panel << '\n';
  os << "lambda_epsilon = " << format_double(c.lambda_epsilon) << '\n';
  os << "multiplier = " << to_string(c.multiplier) << '\n';

  os << "\n[sd]\n";
  os << "nodes = " << c.sd_nodes << '\n';
  os << "dt = " << format_double(c.sd_dt) << '\n';

  if (c.model_case || c.q_x || c.q_y || c.damping || c.youngs_modulus || c.density) {
    os << "\n[model]\n";
    if (c.model_case) os << "case = " << to_string(*c.model_case) << '\n';
    const auto opt = [&](const char* key, const std::optional<double>& v) {
      if (v) os << key << " = " << format_double(*v) << '\n';
    };
    opt("q_x", c.q_x);
    opt("q_y", c.q_y);
    opt("damping", c.damping);
    opt("youngs_modulus", c.youngs_modulus);
    opt("density", c.density);
  }

  if (c.has_inline_profile()) {
    os << "\n[profile]\n";
    os << "mode = " << to_string(c.profile_mode) << '\n';
    if (!c.profile) {
      os << "kind = tabulated\nfile = " << c.profile_file << '\n';
    } else {
      os << "kind = " << c.profile->kind_name() << '\n';
      const auto kv = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
      using P = ActuationProfile;
      std::visit(
          [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, P::Linear>) {
              kv("slope", p.slope);
              kv("t_shift", p.t_shift);
            } else if constexpr (std::is_same_v<T, P::OffsetSinusoid>) {
              kv("offset", p.offset);
              kv("amplitude", p.amplitude);
              kv("omega", p.omega);
              kv("t_shift", p.t_shift);
            } else if constexpr (std::is_same_v<T, P::Step>) {
              kv("height", p.height);
              kv("t0", p.t0);
            } else if constexpr (std::is_same_v<T, P::RampThenSinusoid>) {
              kv("slope", p.slope);
              kv("t_switch", p.t_switch);
              kv("offset", p.offset);
              kv("amplitude", p.amplitude);
              kv("omega", p.omega);
            } else if constexpr (std::is_same_v<T, P::DecayingSinusoid>) {
              kv("offset", p.offset);
              kv("amplitude", p.amplitude);
              kv("decay_rate", p.decay_rate);
              kv("omega", p.omega);
              kv("t_cut", p.t_cut);
              kv("hold", p.hold);
            } else {
              os << "t = ";
              write_list(os, p.t);
              os << "\nvalues = ";
              write_list(os, p.values);
              os << '\n';
            }
          },
          c.profile->kind());
    }
  }
  return os.str();
}

Scenario build_scenario(const RunConfig& config, const std::string& base_dir) {
  validate_config(config);
  std::optional<Scenario> builtin;
  if (!config.has_inline_profile()) builtin = find_scenario(config.scenario);

  RobotModel model = config.model_case ? build_case_model(*config.model_case)
                     : builtin          ? builtin->model
                                        : build_case_model(CaseId::Case1);
  MaterialParams mat = model.material();
  if (config.damping) mat.damping = *config.damping;
  if (config.youngs_modulus) mat.youngs_modulus = *config.youngs_modulus;
  if (config.density) mat.density = *config.density;
  model = model.with_material(mat);
  DistributedLoad load = model.load();
  if (config.q_x) load.q_x = *config.q_x;
  if (config.q_y) load.q_y = *config.q_y;
  model = model.with_load(load);

  std::optional<ActuationProfile> profile;
  if (builtin) {
    profile = builtin->profile;
  } else if (config.profile) {
    profile = config.profile;
  } else {
    std::filesystem::path p(config.profile_file);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    profile = load_profile_csv(p.string(), config.profile_mode);
  }

  double horizon = config.horizon ? *config.horizon
                   : builtin      ? builtin->horizon
                                  : (profile->mode() == InputMode::Force ? 3.0 : 5.0);
  Scenario sc = make_scenario(config.scenario, std::move(model), *profile, horizon);
  sc.galerkin.dt = config.dt;
  sc.galerkin.order = config.order;
  sc.galerkin.basis = config.basis;
  sc.galerkin.panels = config.panels;
  sc.galerkin.points_per_panel = config.points_per_panel;
  sc.galerkin.lambda_epsilon = config.lambda_epsilon;
  sc.galerkin.multiplier = config.multiplier;
  sc.galerkin.fidelity = config.fidelity;
  sc.galerkin.output_stride = config.output_stride;
  sc.galerkin.validate();
  sc.sd.nodes = config.sd_nodes;
  sc.sd.dt = config.sd_dt;
  sc.sd.multiplier = config.multiplier;
  sc.sd.lambda_epsilon = config.lambda_epsilon;
  sc.sd.sample_interval = std::max(config.sd_dt, config.dt * config.output_stride);
  sc.sd.validate();
  return sc;
}

}  // namespace cdcr
