#pragma once

#include <functional>
#include <random>

#include "fullbody/config.hpp"
#include "fullbody/lgvi.hpp"
#include "fullbody/potential.hpp"

namespace fullbody::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng());
}

inline Vec3 random_vec3(double scale = 1.0) {
  return Vec3(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale));
}

inline Vec3 random_unit() {
  Vec3 v = random_vec3();
  while (v.norm() < 1e-3) {
    v = random_vec3();
  }
  return v.normalized();
}

inline Mat3 random_rotation_matrix(double max_angle = 3.0) {
  return rodrigues_exp(uniform(0.0, max_angle) * random_unit()).matrix();
}

inline Mat3 random_symmetric(double scale = 1.0) {
  const Mat3 a = (Mat3() << random_vec3(scale), random_vec3(scale), random_vec3(scale))
                     .finished();
  return 0.5 * (a + a.transpose());
}

/// Symmetric positive definite with eigenvalues in [lo, hi].
inline Mat3 random_spd(double lo = 0.1, double hi = 1.0) {
  const Mat3 q = random_rotation_matrix();
  const Vec3 eig(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  return q * eig.asDiagonal() * q.transpose();
}

/// A rigid body of n points with the center of mass exactly at the origin.
inline BodyModel random_body(int n_points, double mass, double extent = 0.3) {
  std::vector<PointMass> points(n_points);
  double total = 0.0;
  for (PointMass& p : points) {
    p.offset = random_vec3(extent);
    p.fraction = uniform(0.5, 1.5);
    total += p.fraction;
  }
  Vec3 center = Vec3::Zero();
  for (PointMass& p : points) {
    p.fraction /= total;
    center += p.fraction * p.offset;
  }
  for (PointMass& p : points) {
    p.offset -= center;
  }
  return BodyModel(mass, std::move(points));
}

/// The shipped two-dumbbell configuration.
inline SimConfig flyby_config() { return SimConfig::two_dumbbell_flyby(); }

/// Two spheres (degenerate dumbbells) in normalized units; circular orbit of
/// radius 1 and period 2*pi when started at X = e1, V = e2.
inline BodyPair kepler_pair() {
  return BodyPair{dumbbell_model(1.5, 0.0), dumbbell_model(3.0, 0.0),
                  normalized_gravity(1.5, 3.0)};
}

/// Central finite difference of a scalar function along one coordinate.
inline double central_diff(const std::function<double(double)>& f, double x0,
                           double step) {
  return (f(x0 + step) - f(x0 - step)) / (2.0 * step);
}

inline RelativeStateH random_relative_state(const BodyPair& pair) {
  RelativeStateH s;
  s.X = random_vec3(0.5) + Vec3(1.5, 0, 0);
  s.R = random_rotation_matrix();
  s.Gamma = random_vec3(0.5);
  // Momenta from moderate angular velocities in the frames they live in.
  const Mat3 j_r = s.R * pair.first.inertia().standard() * s.R.transpose();
  s.Pi = j_r * random_vec3(2.0);
  s.Pi2 = pair.second.inertia().standard() * random_vec3(2.0);
  s.x2 = random_vec3(0.5);
  s.gamma2 = random_vec3(0.5);
  s.R2 = random_rotation_matrix();
  return s;
}

}  // namespace fullbody::testing
