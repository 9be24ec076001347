#include "fullbody/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace fullbody {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<double> parse_numbers(const std::string& value, std::size_t expected,
                                  const std::string& what) {
  std::istringstream in(value);
  std::vector<double> out;
  double v = 0.0;
  while (in >> v) {
    if (!std::isfinite(v)) {
      throw ConfigError(what + ": value is not finite");
    }
    out.push_back(v);
  }
  if (!in.eof()) {
    throw ConfigError(what + ": could not parse '" + value + "' as numbers");
  }
  if (expected != 0 && out.size() != expected) {
    throw ConfigError(what + ": expected " + std::to_string(expected) +
                      " numbers, got " + std::to_string(out.size()));
  }
  return out;
}

double parse_scalar(const std::string& value, const std::string& what) {
  return parse_numbers(value, 1, what)[0];
}

Vec3 parse_vec3(const std::string& value, const std::string& what) {
  const auto v = parse_numbers(value, 3, what);
  return Vec3(v[0], v[1], v[2]);
}

Mat3 parse_mat3(const std::string& value, const std::string& what) {
  if (trim(value) == "identity") {
    return Mat3::Identity();
  }
  const auto v = parse_numbers(value, 9, what);
  Mat3 m;
  m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
  return m;
}

Mat3 parse_inertia(const std::string& value, const std::string& what) {
  const auto v = parse_numbers(value, 0, what);
  if (v.size() == 3) {
    return Vec3(v[0], v[1], v[2]).asDiagonal();
  }
  if (v.size() == 9) {
    Mat3 m;
    m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
    return m;
  }
  throw ConfigError(what + ": inertia takes 3 diagonal or 9 row-major numbers");
}

const std::set<std::string> kRunKeys = {
    "units",   "integrator",     "h",          "t_final", "sample_every",
    "tolerance", "max_iterations", "min_separation", "out",   "X0",
    "V0",      "Omega10",        "R0",         "x20",     "v20",
    "Omega20", "R20",            "G",          "ref_length"};

const std::set<std::string> kBodyKeys = {"mass", "length", "inertia", "point"};

struct BodySpec {
  double mass = 0.0;
  bool has_length = false;
  double length = 0.0;
  std::vector<PointMass> points;
  bool has_inertia = false;
  Mat3 inertia = Mat3::Zero();
};

BodySpec read_body(const RawConfig& raw, const std::string& section) {
  if (raw.sections.find(section) == raw.sections.end()) {
    throw ConfigError("missing [" + section + "] section");
  }
  BodySpec spec;
  bool has_mass = false;
  for (const auto& [key, value] : raw.sections.at(section)) {
    if (kBodyKeys.find(key) == kBodyKeys.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
    if (key == "mass") {
      spec.mass = parse_scalar(value, section + ".mass");
      has_mass = true;
    } else if (key == "length") {
      spec.length = parse_scalar(value, section + ".length");
      spec.has_length = true;
    } else if (key == "inertia") {
      spec.inertia = parse_inertia(value, section + ".inertia");
      spec.has_inertia = true;
    } else {  // point = x y z fraction
      const auto v = parse_numbers(value, 4, section + ".point");
      spec.points.push_back({Vec3(v[0], v[1], v[2]), v[3]});
    }
  }
  if (!has_mass) {
    throw ConfigError("[" + section + "] needs a mass");
  }
  if (spec.has_length == !spec.points.empty()) {
    throw ConfigError("[" + section + "] needs either a length or point entries");
  }
  return spec;
}

BodyModel build_body(const BodySpec& spec, double mass_scale, double length_scale) {
  const double mass = spec.mass / mass_scale;
  std::optional<InertiaPair> inertia;
  if (spec.has_inertia) {
    inertia = InertiaPair::from_standard(
        Mat3(spec.inertia / (mass_scale * length_scale * length_scale)));
  }
  if (spec.has_length) {
    const double length = spec.length / length_scale;
    return inertia ? dumbbell_model(mass, length, *inertia)
                   : dumbbell_model(mass, length);
  }
  std::vector<PointMass> points = spec.points;
  for (PointMass& p : points) {
    p.offset /= length_scale;
  }
  return inertia ? BodyModel(mass, std::move(points), *inertia)
                 : BodyModel(mass, std::move(points));
}

}  // namespace

Integrator integrator_from_name(std::string_view name) {
  static const std::array<std::pair<std::string_view, Integrator>, 7> table = {{
      {"lgvi-inertial-h", Integrator::LgviInertialH},
      {"lgvi-inertial-l", Integrator::LgviInertialL},
      {"lgvi-relative-h", Integrator::LgviRelativeH},
      {"lgvi-relative-l", Integrator::LgviRelativeL},
      {"rk4-inertial", Integrator::Rk4Inertial},
      {"rk4-relative", Integrator::Rk4Relative},
      {"lgvi-yoshida4", Integrator::LgviYoshida4},
  }};
  for (const auto& [n, i] : table) {
    if (n == name) {
      return i;
    }
  }
  throw ConfigError("unknown integrator '" + std::string(name) + "'");
}

std::string_view integrator_name(Integrator integrator) {
  switch (integrator) {
    case Integrator::LgviInertialH: return "lgvi-inertial-h";
    case Integrator::LgviInertialL: return "lgvi-inertial-l";
    case Integrator::LgviRelativeH: return "lgvi-relative-h";
    case Integrator::LgviRelativeL: return "lgvi-relative-l";
    case Integrator::Rk4Inertial: return "rk4-inertial";
    case Integrator::Rk4Relative: return "rk4-relative";
    case Integrator::LgviYoshida4: return "lgvi-yoshida4";
  }
  throw Error("unreachable integrator name");
}

bool integrator_is_relative(Integrator integrator) {
  switch (integrator) {
    case Integrator::LgviRelativeH:
    case Integrator::LgviRelativeL:
    case Integrator::Rk4Relative:
    case Integrator::LgviYoshida4:
      return true;
    default:
      return false;
  }
}

bool integrator_is_lgvi(Integrator integrator) {
  switch (integrator) {
    case Integrator::Rk4Inertial:
    case Integrator::Rk4Relative:
      return false;
    default:
      return true;
  }
}

const std::string* RawConfig::find(const std::string& section,
                                   const std::string& key) const {
  const auto it = sections.find(section);
  if (it == sections.end()) {
    return nullptr;
  }
  const std::string* found = nullptr;
  for (const auto& [k, v] : it->second) {
    if (k == key) {
      found = &v;
    }
  }
  return found;
}

std::vector<std::string> RawConfig::find_all(const std::string& section,
                                             const std::string& key) const {
  std::vector<std::string> out;
  const auto it = sections.find(section);
  if (it == sections.end()) {
    return out;
  }
  for (const auto& [k, v] : it->second) {
    if (k == key) {
      out.push_back(v);
    }
  }
  return out;
}

RawConfig parse_config_text(std::string_view text) {
  RawConfig raw;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      }
      raw.sections[section];
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }
    raw.sections[section].emplace_back(key, value);
  }
  return raw;
}

RawConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

RelativeStateH initial_state(const BodyPair& pair, const Vec3& X0, const Vec3& V0,
                             const Vec3& Omega10, const Mat3& R0, const Vec3& x20,
                             const Vec3& v20, const Vec3& Omega20, const Mat3& R20) {
  RelativeStateH s;
  s.X = X0;
  s.R = R0;
  s.Gamma = pair.reduced_mass() * V0;
  // Pi = J_R Omega with Omega = R Omega_1 collapses to R J_1 Omega_1.
  s.Pi = R0 * (pair.first.inertia().standard() * Omega10);
  s.Pi2 = pair.second.inertia().standard() * Omega20;
  s.x2 = x20;
  s.gamma2 = pair.second.mass() * v20;
  s.R2 = R20;
  return s;
}

SimConfig normalize(const RawConfig& raw) {
  if (raw.sections.find("run") == raw.sections.end()) {
    throw ConfigError("missing [run] section");
  }
  for (const auto& [section, entries] : raw.sections) {
    if (section != "run" && section != "body1" && section != "body2") {
      throw ConfigError("unknown section [" + section + "]");
    }
    if (section == "run") {
      for (const auto& [key, value] : entries) {
        if (kRunKeys.find(key) == kRunKeys.end()) {
          throw ConfigError("unknown key '" + key + "' in [run]");
        }
      }
    }
  }

  const auto get = [&raw](const std::string& key) { return raw.find("run", key); };
  const auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = get(key);
    if (v == nullptr) {
      throw ConfigError("[run] is missing required key '" + key + "'");
    }
    return *v;
  };

  const std::string units = get("units") ? *get("units") : "normalized";
  if (units != "normalized" && units != "physical") {
    throw ConfigError("units must be 'normalized' or 'physical'");
  }
  const bool physical = units == "physical";

  Vec3 x0 = parse_vec3(require("X0"), "run.X0");
  Vec3 v0 = parse_vec3(require("V0"), "run.V0");
  Vec3 omega10 = get("Omega10") ? parse_vec3(*get("Omega10"), "run.Omega10")
                                : Vec3::Zero();
  Mat3 r0 = get("R0") ? parse_mat3(*get("R0"), "run.R0") : Mat3::Identity();
  Vec3 x20 = get("x20") ? parse_vec3(*get("x20"), "run.x20") : Vec3::Zero();
  Vec3 v20 = get("v20") ? parse_vec3(*get("v20"), "run.v20") : Vec3::Zero();
  Vec3 omega20 = get("Omega20") ? parse_vec3(*get("Omega20"), "run.Omega20")
                                : Vec3::Zero();
  Mat3 r20 = get("R20") ? parse_mat3(*get("R20"), "run.R20") : Mat3::Identity();

  double h = parse_scalar(require("h"), "run.h");
  double t_final = parse_scalar(require("t_final"), "run.t_final");

  const BodySpec spec1 = read_body(raw, "body1");
  const BodySpec spec2 = read_body(raw, "body2");
  if (!(spec1.mass > 0.0) || !(spec2.mass > 0.0)) {
    if (physical) {
      throw InvalidPhysicalUnits("masses must be positive");
    }
    throw ConfigError("masses must be positive");
  }

  double mass_scale = 1.0;
  double length_scale = 1.0;
  double time_scale = 1.0;
  double gravity = 0.0;

  if (physical) {
    const double g_phys = parse_scalar(require("G"), "run.G");
    if (!(g_phys > 0.0)) {
      throw InvalidPhysicalUnits("gravitational constant must be positive");
    }
    double ref_length = get("ref_length")
                            ? parse_scalar(*get("ref_length"), "run.ref_length")
                            : std::hypot(x0.x(), x0.y());
    if (!(ref_length > 0.0)) {
      throw InvalidPhysicalUnits("reference length must be positive");
    }
    const double total = spec1.mass + spec2.mass;
    mass_scale = spec1.mass * spec2.mass / total;
    length_scale = ref_length;
    time_scale = std::sqrt(length_scale * length_scale * length_scale /
                           (g_phys * total));
    if (!std::isfinite(time_scale) || !(time_scale > 0.0)) {
      throw InvalidPhysicalUnits("time scale is not finite");
    }
  }

  const double velocity_scale = length_scale / time_scale;
  x0 /= length_scale;
  x20 /= length_scale;
  v0 /= velocity_scale;
  v20 /= velocity_scale;
  omega10 *= time_scale;
  omega20 *= time_scale;
  h /= time_scale;
  t_final /= time_scale;

  BodyModel body1 = build_body(spec1, mass_scale, length_scale);
  BodyModel body2 = build_body(spec2, mass_scale, length_scale);

  if (const std::string* g = get("G"); g != nullptr && !physical) {
    gravity = parse_scalar(*g, "run.G");
  } else {
    gravity = normalized_gravity(body1.mass(), body2.mass());
  }

  SimConfig cfg{BodyPair{std::move(body1), std::move(body2), gravity},
                RelativeStateH{}};
  if (const std::string* v = get("min_separation")) {
    cfg.pair.min_separation = parse_scalar(*v, "run.min_separation") / length_scale;
  }
  cfg.initial = initial_state(cfg.pair, x0, v0, omega10, r0, x20, v20, omega20, r20);
  cfg.h = h;
  cfg.t_final = t_final;
  cfg.integrator = get("integrator") ? integrator_from_name(*get("integrator"))
                                     : Integrator::LgviRelativeH;
  if (const std::string* v = get("tolerance")) {
    cfg.solver.tolerance = parse_scalar(*v, "run.tolerance");
  }
  if (const std::string* v = get("max_iterations")) {
    cfg.solver.max_iterations =
        static_cast<int>(parse_scalar(*v, "run.max_iterations"));
  }
  if (const std::string* v = get("sample_every")) {
    cfg.sample_every = static_cast<int>(parse_scalar(*v, "run.sample_every"));
    if (cfg.sample_every < 1) {
      throw ConfigError("sample_every must be at least 1");
    }
  }
  if (const std::string* v = get("out")) {
    cfg.out_dir = *v;
  }
  cfg.units = UnitScales{mass_scale, length_scale, time_scale};

  if (!(cfg.h > 0.0)) {
    throw ConfigError("h must be positive");
  }
  if (cfg.t_final < 0.0) {
    throw ConfigError("t_final must be non-negative");
  }
  if (!(cfg.solver.tolerance > 0.0) || cfg.solver.max_iterations < 1) {
    throw ConfigError("solver tolerance must be positive and max_iterations >= 1");
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  return normalize(parse_config_file(path));
}

SimConfig SimConfig::two_dumbbell_flyby() {
  const InertiaPair j1 =
      InertiaPair::from_standard(Vec3(0.0004, 0.0238, 0.0238).asDiagonal());
  const InertiaPair j2 =
      InertiaPair::from_standard(Vec3(0.0030, 0.1905, 0.1905).asDiagonal());
  BodyPair pair{dumbbell_model(1.5, 0.25, j1), dumbbell_model(3.0, 0.5, j2),
                normalized_gravity(1.5, 3.0)};

  SimConfig cfg{pair, RelativeStateH{}};
  cfg.initial = initial_state(cfg.pair, Vec3(1.0, 0.0, 0.3), Vec3(0.0, 1.0, 0.0),
                              Vec3(0.0, 0.0, 9.0), Mat3::Identity(),
                              Vec3(-0.33, 0.0, -0.1), Vec3(0.0, -0.33, 0.0),
                              Vec3::Zero(), Mat3::Identity());
  cfg.h = 1e-3;
  cfg.t_final = 12.0;
  cfg.integrator = Integrator::LgviRelativeH;
  cfg.sample_every = 10;
  return cfg;
}

PhysicalConfig denormalize(const SimConfig& cfg) {
  const UnitScales& u = cfg.units;
  const double velocity = u.length / u.time;

  PhysicalConfig out;
  const double m1 = cfg.pair.first.mass() * u.mass;
  const double m2 = cfg.pair.second.mass() * u.mass;
  out.masses = {m1, m2};
  out.ref_length = u.length;
  out.gravity = u.length * u.length * u.length / (u.time * u.time * (m1 + m2));

  const auto dumbbell_length = [&](const BodyModel& b) {
    double half = 0.0;
    for (const PointMass& p : b.point_masses()) {
      half = std::max(half, p.offset.norm());
    }
    return b.point_masses().size() == 2 ? 2.0 * half * u.length
                                        : std::numeric_limits<double>::quiet_NaN();
  };
  out.lengths = {dumbbell_length(cfg.pair.first), dumbbell_length(cfg.pair.second)};

  const RelativeStateH& s = cfg.initial;
  const double m_red = cfg.pair.reduced_mass();
  out.X0 = s.X * u.length;
  out.V0 = (s.Gamma / m_red) * velocity;
  // Omega_1 in the body-1 frame: J_1^{-1} R^T Pi.
  out.Omega10 = omega_from_momentum(cfg.pair.first.inertia().standard(),
                                    Vec3(s.R.transpose() * s.Pi)) /
                u.time;
  out.Omega20 = omega_from_momentum(cfg.pair.second.inertia().standard(), s.Pi2) /
                u.time;
  out.R0 = s.R;
  out.R20 = s.R2;
  out.x20 = s.x2 * u.length;
  out.v20 = (s.gamma2 / cfg.pair.second.mass()) * velocity;
  out.h = cfg.h * u.time;
  out.t_final = cfg.t_final * u.time;
  return out;
}

}  // namespace fullbody
