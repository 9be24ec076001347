#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fullbody/lgvi.hpp"
#include "fullbody/state.hpp"

namespace fullbody {

enum class Integrator {
  LgviInertialH,
  LgviInertialL,
  LgviRelativeH,
  LgviRelativeL,
  Rk4Inertial,
  Rk4Relative,
  LgviYoshida4,
};

Integrator integrator_from_name(std::string_view name);
std::string_view integrator_name(Integrator integrator);
bool integrator_is_relative(Integrator integrator);
bool integrator_is_lgvi(Integrator integrator);

/// Parsed key = value config text, grouped by [section], order-preserving
/// within a section (the `point` key repeats).
struct RawConfig {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

  const std::string* find(const std::string& section, const std::string& key) const;
  std::vector<std::string> find_all(const std::string& section,
                                    const std::string& key) const;
};

RawConfig parse_config_text(std::string_view text);
RawConfig parse_config_file(const std::filesystem::path& path);

/// Physical value per normalized unit, for each base dimension. Unity when
/// the input was already normalized.
struct UnitScales {
  double mass = 1.0;
  double length = 1.0;
  double time = 1.0;
};

/// A fully normalized, ready-to-run configuration. All quantities are in
/// normalized units: masses in units of the reduced mass, lengths in units of
/// the reference separation, time scaled so an orbit at unit distance has a
/// period of order one.
struct SimConfig {
  SimConfig(BodyPair pair, RelativeStateH initial)
      : pair(std::move(pair)), initial(std::move(initial)) {}

  BodyPair pair;
  RelativeStateH initial;
  double h = 1e-3;
  double t_final = 1.0;
  Integrator integrator = Integrator::LgviRelativeH;
  SolverConfig solver;
  int sample_every = 10;
  std::string out_dir = "out";
  UnitScales units;

  /// The shipped default: two dumbbells with 1:2 mass and length ratios on a
  /// positive-energy flyby, integrated in relative coordinates.
  static SimConfig two_dumbbell_flyby();
};

/// Builds the relative Hamiltonian initial state from the configuration
/// variables as given in a run file: relative position/velocity/attitude of
/// body 1 plus body 2's inertial motion.
RelativeStateH initial_state(const BodyPair& pair, const Vec3& X0, const Vec3& V0,
                             const Vec3& Omega10, const Mat3& R0, const Vec3& x20,
                             const Vec3& v20, const Vec3& Omega20, const Mat3& R20);

/// Validates a raw config and converts it to normalized units. Inputs carry
/// `units = normalized` (pass-through) or `units = physical`, in which case
/// masses are rescaled by the reduced mass, lengths by the reference length,
/// and time by sqrt(G (m1 + m2) / l^3).
SimConfig normalize(const RawConfig& raw);
SimConfig load_config(const std::filesystem::path& path);

/// Inverse of `normalize` for round-trips and output metadata: reconstructs
/// the physical-unit quantities from a normalized config and its unit scales.
struct PhysicalConfig {
  double gravity = 1.0;
  double ref_length = 1.0;
  std::vector<double> masses;
  std::vector<double> lengths;  // dumbbell lengths, NaN when point-list bodies
  Vec3 X0, V0, Omega10, x20, v20, Omega20;
  Mat3 R0, R20;
  double h = 0.0, t_final = 0.0;
};
PhysicalConfig denormalize(const SimConfig& cfg);

}  // namespace fullbody
