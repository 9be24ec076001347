#pragma once

#include <Eigen/Dense>

#include "fullbody/errors.hpp"

namespace fullbody {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Hat map: the skew-symmetric matrix S(v) with S(v) w = v x w.
Mat3 hat(const Vec3& v);

/// Inverse of the hat map. Requires the input to be skew-symmetric within
/// 1e-10 (relative to max(1, ||m||_F)); throws NonSkewInput otherwise.
/// Returns the vector of the skew part, so hat(vee(m)) equals (m - m^T)/2.
Vec3 vee(const Mat3& m);

/// Unchecked variant of vee for matrices that are skew by construction.
Vec3 vee_unchecked(const Mat3& m);

/// Frobenius norm of I - R^T R. Zero for exact rotations.
double orthogonality_error(const Mat3& r);

/// A 3x3 matrix validated as a member of the rotation group at construction:
/// orthogonality_error <= 1e-12 and positive determinant. The gate is applied
/// once; composition of validated rotations is trusted and never
/// re-orthogonalized.
class Rotation {
public:
  static constexpr double kOrthogonalityGate = 1e-12;

  /// Validates group membership; throws NotARotation on failure.
  explicit Rotation(const Mat3& r);

  static Rotation identity();

  const Mat3& matrix() const { return m_; }

  Rotation transposed() const { return Rotation(Mat3(m_.transpose()), Trusted{}); }

  Rotation operator*(const Rotation& other) const {
    return Rotation(Mat3(m_ * other.m_), Trusted{});
  }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }

private:
  struct Trusted {};
  Rotation(const Mat3& r, Trusted) : m_(r) {}

  Mat3 m_;
};

/// Closed-form exponential exp(S(f)) of a rotation vector.
/// Small angles (||f|| < 1e-8) use the Taylor coefficients
/// sin x/x = 1 - x^2/6 and (1 - cos x)/x^2 = 1/2 - x^2/24 so the map stays
/// C^2 through f = 0.
Rotation rodrigues_exp(const Vec3& f);

/// The two Rodrigues coefficients (sin x/x, (1-cos x)/x^2) at x = ||f||.
/// Exposed because the implicit-step solver shares them.
void rodrigues_coefficients(double x, double& sinc, double& versine_over_x2);

}  // namespace fullbody
