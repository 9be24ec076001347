#include "fullbody/so3.hpp"

#include <cmath>

namespace fullbody {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  // clang-format off
  m <<     0.0, -v.z(),  v.y(),
        v.z(),     0.0, -v.x(),
       -v.y(),  v.x(),     0.0;
  // clang-format on
  return m;
}

Vec3 vee_unchecked(const Mat3& m) {
  return 0.5 * Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Vec3 vee(const Mat3& m) {
  const double symmetric_residual = 0.5 * (m + m.transpose()).norm();
  if (!(symmetric_residual <= 1e-10 * std::max(1.0, m.norm()))) {
    throw NonSkewInput("vee: input is not skew-symmetric (residual " +
                       std::to_string(symmetric_residual) + ")");
  }
  return vee_unchecked(m);
}

double orthogonality_error(const Mat3& r) {
  return (Mat3::Identity() - r.transpose() * r).norm();
}

Rotation::Rotation(const Mat3& r) : m_(r) {
  const double err = orthogonality_error(r);
  if (!(err <= kOrthogonalityGate)) {
    throw NotARotation("matrix is off the rotation group: ||I - R^T R|| = " +
                       std::to_string(err));
  }
  if (!(r.determinant() > 0.0)) {
    throw NotARotation("matrix has non-positive determinant");
  }
}

Rotation Rotation::identity() { return Rotation(Mat3::Identity(), Trusted{}); }

void rodrigues_coefficients(double x, double& sinc, double& versine_over_x2) {
  if (x < 1e-8) {
    const double x2 = x * x;
    sinc = 1.0 - x2 / 6.0;
    versine_over_x2 = 0.5 - x2 / 24.0;
  } else {
    sinc = std::sin(x) / x;
    const double s = std::sin(0.5 * x);
    versine_over_x2 = 2.0 * s * s / (x * x);
  }
}

Rotation rodrigues_exp(const Vec3& f) {
  double a = 0.0;
  double b = 0.0;
  rodrigues_coefficients(f.norm(), a, b);
  const Mat3 s = hat(f);
  return Rotation(Mat3(Mat3::Identity() + a * s + b * (s * s)));
}

}  // namespace fullbody
