#pragma once

#include <vector>

#include "fullbody/potential.hpp"

namespace fullbody {

// Attitudes are stored as plain matrices. The variational steppers keep them
// on the rotation group by construction; the raw Runge-Kutta comparison path
// deliberately lets them drift, so no constructor gate is applied here.

/// One body's state in momentum variables: position, attitude, linear
/// momentum (inertial frame), angular momentum (body frame).
struct BodyStateH {
  Vec3 x = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 gamma = Vec3::Zero();
  Vec3 Pi = Vec3::Zero();
};

/// One body's state in velocity variables.
struct BodyStateL {
  Vec3 x = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 v = Vec3::Zero();
  Vec3 Omega = Vec3::Zero();
};

struct InertialStateH {
  std::vector<BodyStateH> bodies;
};

struct InertialStateL {
  std::vector<BodyStateL> bodies;
};

/// Two-body state in relative coordinates, momentum variables. X and R place
/// body 1 relative to body 2 (expressed in the body-2 frame); Pi is body 1's
/// angular momentum expressed in the body-2 frame, Pi2 body 2's own. The
/// (x2, gamma2, R2) block reconstructs body 2's inertial motion.
struct RelativeStateH {
  Vec3 X = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 Gamma = Vec3::Zero();
  Vec3 Pi = Vec3::Zero();
  Vec3 Pi2 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
  Vec3 gamma2 = Vec3::Zero();
  Mat3 R2 = Mat3::Identity();
};

/// Velocity-variable version of the relative state.
struct RelativeStateL {
  Vec3 X = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 V = Vec3::Zero();
  Vec3 Omega = Vec3::Zero();
  Vec3 Omega2 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
  Vec3 v2 = Vec3::Zero();
  Mat3 R2 = Mat3::Identity();
};

/// Solve J w = pi for w. Exact zero momentum maps to zero angular velocity
/// even when J is singular (spherically degenerate bodies); a singular J with
/// nonzero momentum fails loudly.
Vec3 omega_from_momentum(const Mat3& J, const Vec3& pi);

// Velocity <-> momentum conversions. The angular conversion uses the standard
// moment of inertia in whatever frame the angular variable lives in (body
// frame inertially; J_R = R J_1 R^T for the relative body-1 variable).
InertialStateH to_hamiltonian(const NBodySystem& sys, const InertialStateL& s);
InertialStateL to_lagrangian(const NBodySystem& sys, const InertialStateH& s);
RelativeStateH to_hamiltonian(const BodyPair& pair, const RelativeStateL& s);
RelativeStateL to_lagrangian(const BodyPair& pair, const RelativeStateH& s);

// Frame maps between the two-body inertial state (bodies [0], [1]) and the
// relative state. These are exact, mutually inverse transformations.
RelativeStateH reduce(const BodyPair& pair, const InertialStateH& s);
InertialStateH reconstruct(const BodyPair& pair, const RelativeStateH& s);
RelativeStateL reduce(const BodyPair& pair, const InertialStateL& s);
InertialStateL reconstruct(const BodyPair& pair, const RelativeStateL& s);

// ---------------------------------------------------------------------------
// Time-derivative carriers and the linear operations the RK4 driver needs.

struct BodyDotH {
  Vec3 x = Vec3::Zero();
  Mat3 R = Mat3::Zero();
  Vec3 gamma = Vec3::Zero();
  Vec3 Pi = Vec3::Zero();
};

struct BodyDotL {
  Vec3 x = Vec3::Zero();
  Mat3 R = Mat3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 Omega = Vec3::Zero();
};

struct InertialDotH {
  std::vector<BodyDotH> bodies;
};

struct InertialDotL {
  std::vector<BodyDotL> bodies;
};

struct RelativeDotH {
  Vec3 X = Vec3::Zero();
  Mat3 R = Mat3::Zero();
  Vec3 Gamma = Vec3::Zero();
  Vec3 Pi = Vec3::Zero();
  Vec3 Pi2 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
  Vec3 gamma2 = Vec3::Zero();
  Mat3 R2 = Mat3::Zero();
};

struct RelativeDotL {
  Vec3 X = Vec3::Zero();
  Mat3 R = Mat3::Zero();
  Vec3 V = Vec3::Zero();
  Vec3 Omega = Vec3::Zero();
  Vec3 Omega2 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
  Vec3 v2 = Vec3::Zero();
  Mat3 R2 = Mat3::Zero();
};

InertialDotH operator+(const InertialDotH& a, const InertialDotH& b);
InertialDotH operator*(double a, const InertialDotH& d);
InertialDotL operator+(const InertialDotL& a, const InertialDotL& b);
InertialDotL operator*(double a, const InertialDotL& d);
RelativeDotH operator+(const RelativeDotH& a, const RelativeDotH& b);
RelativeDotH operator*(double a, const RelativeDotH& d);
RelativeDotL operator+(const RelativeDotL& a, const RelativeDotL& b);
RelativeDotL operator*(double a, const RelativeDotL& d);

/// state + a * dot, applied to every stored component including the raw
/// attitude entries.
InertialStateH advanced(const InertialStateH& s, double a, const InertialDotH& d);
InertialStateL advanced(const InertialStateL& s, double a, const InertialDotL& d);
RelativeStateH advanced(const RelativeStateH& s, double a, const RelativeDotH& d);
RelativeStateL advanced(const RelativeStateL& s, double a, const RelativeDotL& d);

}  // namespace fullbody
