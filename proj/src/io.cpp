#include "cdcr/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdcr/errors.hpp"

namespace cdcr {

namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_number(std::string_view s, double& v) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

double field(const std::vector<std::string>& cols, std::size_t i, const std::string& path, int line) {
  double v = 0.0;
  if (i >= cols.size() || !parse_number(cols[i], v))
    throw IoError(path + ":" + std::to_string(line) + ": malformed number");
  return v;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string shapes_path(const std::string& record_path) {
  std::filesystem::path p(record_path);
  const std::string stem = p.stem().string();
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (stem + "_shapes" + ext)).string();
}

void write_record_csv(const SimulationRecord& record, const std::string& path) {
  {
    auto out = open_out(path);
    out << kRecordHeader << '\n';
    for (const auto& s : record.samples) {
      const double cols[] = {s.t,
                             s.tip_x,
                             s.tip_y,
                             s.theta_tip,
                             s.delta_l,
                             s.gamma,
                             s.energy.rotational,
                             s.energy.translational_x,
                             s.energy.translational_y,
                             s.energy.bending};
      for (double v : cols) out << format_number(v) << ',';
      out << (s.flagged ? 1 : 0) << '\n';
    }
    check_written(out, path);
  }
  if (record.shapes.empty()) return;
  const std::string sp = shapes_path(path);
  auto out = open_out(sp);
  out << kShapeHeader << '\n';
  for (std::size_t i = 0; i < record.shapes.size() && i < record.samples.size(); ++i) {
    const auto& sh = record.shapes[i];
    const std::string t = format_number(record.samples[i].t);
    for (std::size_t k = 0; k < sh.size(); ++k)
      out << t << ',' << format_number(sh.s[k]) << ',' << format_number(sh.x[k]) << ',' << format_number(sh.y[k])
          << ',' << format_number(sh.theta[k]) << '\n';
  }
  check_written(out, sp);
}

SimulationRecord read_record_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  SimulationRecord rec;
  rec.scenario_id = std::filesystem::path(path).stem().string();
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw IoError(path + ": unexpected header");
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto c = split_csv(line);
    if (c.size() != 11) throw IoError(path + ":" + std::to_string(n) + ": expected 11 columns");
    RecordSample s;
    s.t = field(c, 0, path, n);
    s.tip_x = field(c, 1, path, n);
    s.tip_y = field(c, 2, path, n);
    s.theta_tip = field(c, 3, path, n);
    s.delta_l = field(c, 4, path, n);
    s.gamma = field(c, 5, path, n);
    s.energy.rotational = field(c, 6, path, n);
    s.energy.translational_x = field(c, 7, path, n);
    s.energy.translational_y = field(c, 8, path, n);
    s.energy.bending = field(c, 9, path, n);
    s.flagged = field(c, 10, path, n) != 0.0;
    rec.samples.push_back(s);
  }
  if (!rec.samples.empty() && rec.samples.back().flagged) rec.status = RunStatus::NonConvergence;

  const std::string sp = shapes_path(path);
  std::ifstream shp(sp);
  if (!shp) return rec;
  if (!std::getline(shp, line)) return rec;
  n = 1;
  std::size_t idx = 0;
  while (std::getline(shp, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto c = split_csv(line);
    if (c.size() != 5) throw IoError(sp + ":" + std::to_string(n) + ": expected 5 columns");
    const double t = field(c, 0, sp, n);
    if (rec.shapes.empty() || std::abs(t - rec.samples[idx].t) > 0.0) {
      if (!rec.shapes.empty()) ++idx;
      if (idx >= rec.samples.size()) throw IoError(sp + ": more shapes than samples");
      rec.shapes.emplace_back();
    }
    auto& sh = rec.shapes.back();
    sh.s.push_back(field(c, 1, sp, n));
    sh.x.push_back(field(c, 2, sp, n));
    sh.y.push_back(field(c, 3, sp, n));
    sh.theta.push_back(field(c, 4, sp, n));
  }
  if (rec.shapes.size() != rec.samples.size()) throw IoError(sp + ": shape count does not match samples");
  rec.length = rec.shapes.empty() ? 0.0 : rec.shapes.front().s.back();
  return rec;
}

ActuationProfile load_profile_csv(const std::string& path, InputMode mode) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile '" + path + "'");
  ActuationProfile::Tabulated tab;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto c = split_csv(line);
    double t = 0.0, v = 0.0;
    if (c.size() != 2 || !parse_number(c[0], t) || !parse_number(c[1], v)) {
      if (tab.t.empty() && n == 1) continue;  // header
      throw IoError(path + ":" + std::to_string(n) + ": expected two numeric columns");
    }
    tab.t.push_back(t);
    tab.values.push_back(v);
  }
  try {
    return ActuationProfile(mode, std::move(tab));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_shape_svg(const std::vector<BackboneShape>& shapes, const std::vector<double>& times, double length,
                     const std::string& path) {
  if (shapes.empty()) throw ConfigError("no shapes to plot");
  if (times.size() != shapes.size()) throw ConfigError("need one time label per shape");
  if (!(length > 0.0)) throw ConfigError("plot length must be positive");
  const std::string L = format_number(length);
  const std::string L2 = format_number(2.0 * length);
  const std::string font = format_number(length / 20.0);
  const std::string stroke = format_number(length / 250.0);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-" << L << " -" << L << ' ' << L2 << ' ' << L2
     << "\" width=\"600\" height=\"600\">\n";
  os << "<rect x=\"-" << L << "\" y=\"-" << L << "\" width=\"" << L2 << "\" height=\"" << L2
     << "\" fill=\"white\"/>\n";
  os << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << stroke << "\">\n";
  const std::size_t n = shapes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int shade = n > 1 ? static_cast<int>(200.0 * static_cast<double>(i) / static_cast<double>(n - 1)) : 0;
    os << "<polyline stroke=\"rgb(" << shade << ",60," << 200 - shade << ")\" points=\"";
    const auto& sh = shapes[i];
    for (std::size_t k = 0; k < sh.x.size(); ++k)
      os << (k ? " " : "") << format_number(sh.x[k]) << ',' << format_number(sh.y[k]);
    os << "\"/>\n";
  }
  os << "</g>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sh = shapes[i];
    const double x = sh.x.empty() ? 0.0 : sh.x.back();
    const double y = sh.y.empty() ? 0.0 : sh.y.back();
    os << "<text x=\"" << format_number(x) << "\" y=\"" << format_number(-y) << "\" font-size=\"" << font
       << "\">t=" << format_number(times[i]) << " s</text>\n";
  }
  os << "</svg>\n";
  write_text_file(path, os.str());
}

void write_record_svg(const SimulationRecord& record, const std::string& path, int count) {
  if (record.shapes.empty()) throw ConfigError("record has no shapes");
  const std::size_t n = record.shapes.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(count, 1)), n);
  std::vector<BackboneShape> pick;
  std::vector<double> times;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = k > 1 ? i * (n - 1) / (k - 1) : n - 1;
    pick.push_back(record.shapes[idx]);
    times.push_back(record.samples[idx].t);
  }
  const double L = record.length > 0.0 ? record.length : pick.front().s.back();
  write_shape_svg(pick, times, L, path);
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  check_written(out, path);
}

}  // namespace cdcr
