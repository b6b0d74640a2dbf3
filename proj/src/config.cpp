#include "geomctl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "geomctl/commands.hpp"
#include "geomctl/errors.hpp"

namespace geomctl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_number(std::string_view token, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ConfigError(where + ": not a number: '" + std::string(token) + "'");
  }
  return v;
}

// Tracks which keys were read so leftovers can be reported.
class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    auto v = doc_.get(section, key);
    if (v) used_.insert(section + "." + key);
    return v;
  }

  std::string text(const std::string& section, const std::string& key) {
    auto v = raw(section, key);
    if (!v) throw ConfigError("missing required key " + section + "." + key);
    return *v;
  }

  std::optional<double> optional_number(const std::string& section, const std::string& key) {
    auto v = raw(section, key);
    if (!v) return std::nullopt;
    return parse_number(trim(*v), section + "." + key);
  }

  double number(const std::string& section, const std::string& key) {
    auto v = optional_number(section, key);
    if (!v) throw ConfigError("missing required key " + section + "." + key);
    return *v;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key,
                              const std::string& text) {
    std::vector<double> out;
    for (auto tok : split_ws(text)) out.push_back(parse_number(tok, section + "." + key));
    return out;
  }

  std::optional<Vec3> optional_vec3(const std::string& section, const std::string& key) {
    auto v = raw(section, key);
    if (!v) return std::nullopt;
    const auto xs = numbers(section, key, *v);
    if (xs.size() != 3) throw ConfigError(section + "." + key + ": expected 3 numbers");
    return Vec3(xs[0], xs[1], xs[2]);
  }

  void check_all_used() const {
    for (const auto& section : doc_.sections()) {
      for (const auto& key : doc_.keys(section)) {
        if (!used_.count(section + "." + key)) throw ConfigError("unknown key " + section + "." + key);
      }
    }
  }

 private:
  const ConfigDocument& doc_;
  std::set<std::string> used_;
};

Mat3 read_inertia(Reader& r) {
  const std::string text = r.text("vehicle", "inertia");
  const auto xs = r.numbers("vehicle", "inertia", text);
  if (xs.size() == 3) return Vec3(xs[0], xs[1], xs[2]).asDiagonal().toDenseMatrix();
  if (xs.size() == 9) {
    Mat3 J;
    J << xs[0], xs[1], xs[2], xs[3], xs[4], xs[5], xs[6], xs[7], xs[8];
    return J;
  }
  throw ConfigError("vehicle.inertia: expected 3 (diagonal) or 9 (row-major) numbers");
}

Mat3 read_rotation(Reader& r, const std::string& section) {
  const auto R = r.raw(section, "R");
  const auto rotvec = r.optional_vec3(section, "rotation_vector");
  if (R && rotvec) throw ConfigError(section + ": give either R or rotation_vector, not both");
  if (rotvec) return exp_so3(*rotvec);
  if (!R) return Mat3::Identity();
  const auto xs = r.numbers(section, "R", *R);
  if (xs.size() != 9) throw ConfigError(section + ".R: expected 9 numbers (row-major)");
  Mat3 m;
  m << xs[0], xs[1], xs[2], xs[3], xs[4], xs[5], xs[6], xs[7], xs[8];
  if (!is_rotation(m, 1e-9)) throw ConfigError(section + ".R: not a rotation matrix");
  return m;
}

FlightMode read_mode(Reader& r, const std::string& section) {
  FlightMode mode;
  mode.t_start = r.number(section, "start");
  mode.t_end = r.number(section, "end");
  const std::string type(trim(r.text(section, "type")));
  if (type == "attitude") {
    const std::string command(trim(r.text(section, "command")));
    AttitudeMode att;
    if (command == "flip") {
      att.command = attitude_command_flip;
      att.omega_d_max = kFlipOmegaMax;
    } else if (command == "euler321") {
      att.command = euler321_command;
      att.omega_d_max = kEulerOmegaMax;
    } else if (command == "hold") {
      const AttitudeCommand held{read_rotation(r, section), Vec3::Zero(), Vec3::Zero()};
      att.command = [held](double) { return held; };
    } else {
      throw ConfigError(section + ".command: unknown attitude command '" + command +
                        "' (flip, euler321, hold)");
    }
    att.thrust = r.optional_number(section, "thrust");
    if (auto w = r.optional_number(section, "omega_d_max")) att.omega_d_max = *w;
    mode.mode = std::move(att);
  } else if (type == "position") {
    const std::string command(trim(r.raw(section, "command").value_or("setpoint")));
    if (command != "setpoint") {
      throw ConfigError(section + ".command: unknown position command '" + command + "' (setpoint)");
    }
    const Vec3 x_d = r.optional_vec3(section, "x_d").value_or(Vec3::Zero());
    const Vec3 b1d = r.optional_vec3(section, "b1d").value_or(Vec3::UnitX());
    PositionMode pos;
    pos.command = [x_d, b1d](double) { return setpoint_command(x_d, b1d); };
    pos.accel_force_max = r.optional_number(section, "accel_force_max");
    pos.omega_c_max = r.optional_number(section, "omega_c_max").value_or(0.0);
    mode.mode = std::move(pos);
  } else {
    throw ConfigError(section + ".type: expected attitude or position, got '" + type + "'");
  }
  return mode;
}

LoadedConfig build(const ConfigDocument& doc) {
  static const std::set<std::string> kSections{"vehicle", "disturbance", "gains", "bounds",
                                               "initial", "integration", "output"};
  std::vector<std::pair<int, std::string>> mode_sections;
  for (const auto& s : doc.sections()) {
    if (s.rfind("mode.", 0) == 0) {
      const std::string idx = s.substr(5);
      int n = 0;
      const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), n);
      if (ec != std::errc() || ptr != idx.data() + idx.size() || idx.empty()) {
        throw ConfigError("section [" + s + "]: mode sections are [mode.N] with integer N");
      }
      mode_sections.emplace_back(n, s);
    } else if (!kSections.count(s)) {
      throw ConfigError("unknown section [" + s + "]");
    }
  }
  if (mode_sections.empty()) throw ConfigError("config defines no [mode.N] section");
  std::sort(mode_sections.begin(), mode_sections.end());

  Reader r(doc);
  const QuadrotorParams params(r.number("vehicle", "mass"), read_inertia(r),
                               r.number("vehicle", "arm_length"),
                               r.number("vehicle", "torque_coeff"),
                               r.optional_number("vehicle", "gravity").value_or(9.81));

  Disturbance dist;
  dist.delta_x = r.optional_vec3("disturbance", "delta_x").value_or(Vec3::Zero());
  dist.delta_R = r.optional_vec3("disturbance", "delta_R").value_or(Vec3::Zero());

  PositionGains g;
  g.k_x = r.number("gains", "k_x");
  g.k_v = r.number("gains", "k_v");
  g.k_i = r.number("gains", "k_i");
  g.c1 = r.number("gains", "c1");
  g.sigma = r.number("gains", "sigma");
  g.att.k_R = r.number("gains", "k_R");
  g.att.k_Omega = r.number("gains", "k_Omega");
  g.att.k_I = r.number("gains", "k_I");
  g.att.c2 = r.number("gains", "c2");

  RigidBodyState initial;
  initial.x = r.optional_vec3("initial", "x").value_or(Vec3::Zero());
  initial.v = r.optional_vec3("initial", "v").value_or(Vec3::Zero());
  initial.R = read_rotation(r, "initial");
  initial.Omega = r.optional_vec3("initial", "Omega").value_or(Vec3::Zero());

  Scenario sc{.params = params,
              .dist = dist,
              .gains = g,
              .bounds = {},
              .modes = {},
              .initial = initial,
              .t_final = r.number("integration", "t_final"),
              .dt = r.optional_number("integration", "dt").value_or(1e-3)};
  if (auto rates = r.raw("integration", "rates")) {
    const std::string_view v = trim(*rates);
    if (v == "analytic") {
      sc.rates = RateSource::kAnalytic;
    } else if (v == "finite_difference") {
      sc.rates = RateSource::kFiniteDifference;
    } else {
      throw ConfigError("integration.rates: expected analytic or finite_difference");
    }
  }
  for (const auto& [n, section] : mode_sections) sc.modes.push_back(read_mode(r, section));

  sc.bounds = scenario_bounds(sc, r.optional_number("bounds", "psi1").value_or(0.9),
                              r.optional_number("bounds", "psi2").value_or(1.9),
                              r.optional_number("bounds", "e_x_max").value_or(1.0));
  if (auto v = r.optional_number("bounds", "B1")) sc.bounds.B1 = *v;
  if (auto v = r.optional_number("bounds", "B2")) sc.bounds.B2 = *v;
  if (auto v = r.optional_number("bounds", "delta_x")) sc.bounds.delta_x = *v;

  LoadedConfig out{std::move(sc), std::nullopt};
  if (auto csv = r.raw("output", "csv")) out.csv_path = std::string(trim(*csv));
  r.check_all_used();
  return out;
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      if (doc.has_section(section)) throw ConfigError(where + ": duplicate section [" + section + "]");
      doc.data_.push_back({section, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (doc.get(section, key)) throw ConfigError(where + ": duplicate key " + section + "." + key);
    doc.set(section, key, std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

void ConfigDocument::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "': expected section.key=value");
  }
  const std::string_view path = trim(assignment.substr(0, eq));
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == path.size()) {
    throw ConfigError("override '" + std::string(assignment) + "': expected section.key=value");
  }
  set(std::string(path.substr(0, dot)), std::string(path.substr(dot + 1)),
      std::string(trim(assignment.substr(eq + 1))));
}

void ConfigDocument::set(const std::string& section, const std::string& key, std::string value) {
  auto it = std::find_if(data_.begin(), data_.end(), [&](const auto& s) { return s.first == section; });
  if (it == data_.end()) {
    data_.push_back({section, {}});
    it = std::prev(data_.end());
  }
  auto& entries = it->second;
  auto kv = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
  if (kv == entries.end()) {
    entries.emplace_back(key, std::move(value));
  } else {
    kv->second = std::move(value);
  }
}

bool ConfigDocument::has_section(const std::string& section) const {
  return std::any_of(data_.begin(), data_.end(), [&](const auto& s) { return s.first == section; });
}

std::vector<std::string> ConfigDocument::sections() const {
  std::vector<std::string> out;
  for (const auto& s : data_) out.push_back(s.first);
  return out;
}

std::vector<std::string> ConfigDocument::keys(const std::string& section) const {
  std::vector<std::string> out;
  for (const auto& s : data_) {
    if (s.first != section) continue;
    for (const auto& e : s.second) out.push_back(e.first);
  }
  return out;
}

std::optional<std::string> ConfigDocument::get(const std::string& section,
                                               const std::string& key) const {
  for (const auto& s : data_) {
    if (s.first != section) continue;
    for (const auto& e : s.second) {
      if (e.first == key) return e.second;
    }
  }
  return std::nullopt;
}

LoadedConfig build_scenario(const ConfigDocument& doc) {
  try {
    return build(doc);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid value: ") + e.what());
  }
}

LoadedConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ConfigDocument doc = ConfigDocument::parse(buf.str());
  for (const auto& o : overrides) doc.apply_override(o);
  return build_scenario(doc);
}

}  // namespace geomctl
