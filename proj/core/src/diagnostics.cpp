#include "fullbody/diagnostics.hpp"

#include <algorithm>

namespace fullbody {

DiagnosticsRecord diagnostics_relative(const BodyPair& pair, const RelativeStateH& s,
                                       double t) {
  const double m1 = pair.first.mass();
  const double m2 = pair.second.mass();
  const double m = pair.reduced_mass();

  const Vec3 V = s.Gamma / m;
  const Vec3 V2 = s.R2.transpose() * (s.gamma2 / m2);
  const Mat3 j_r = s.R * pair.first.inertia().standard() * s.R.transpose();
  const Vec3 omega = omega_from_momentum(j_r, s.Pi);
  const Vec3 omega2 =
      omega_from_momentum(pair.second.inertia().standard(), s.Pi2);

  DiagnosticsRecord rec;
  rec.t = t;
  rec.T_trans = 0.5 * m1 * (V + V2).squaredNorm() + 0.5 * m2 * V2.squaredNorm();
  rec.T_rot = 0.5 * omega.dot(s.Pi) + 0.5 * omega2.dot(s.Pi2);
  rec.U = eval_relative(pair, s.X, s.R).U;
  rec.E = rec.T_trans + rec.T_rot + rec.U;
  rec.gamma_T = s.R2 * (m1 * (V + V2) + m2 * V2);
  // Angular momentum about the inertial origin: the center-of-mass term
  // m X x V + J_R Omega + J_2 Omega2 (in the body-2 frame) plus the transport
  // term x_com x gamma_T, which vanishes when the total momentum is zero.
  const Vec3 pi_com = s.R2 * (m * s.X.cross(V) + s.Pi + s.Pi2);
  const Vec3 x_com = s.x2 + (m1 / (m1 + m2)) * (s.R2 * s.X);
  rec.pi_T = pi_com + x_com.cross(rec.gamma_T);
  rec.orth_err_max =
      std::max(orthogonality_error(s.R), orthogonality_error(s.R2));
  return rec;
}

DiagnosticsRecord diagnostics_inertial(const NBodySystem& sys, const InertialStateH& s,
                                       double t) {
  const std::size_t n = s.bodies.size();
  std::vector<Vec3> x(n);
  std::vector<Mat3> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = s.bodies[i].x;
    r[i] = s.bodies[i].R;
  }

  DiagnosticsRecord rec;
  rec.t = t;
  rec.U = eval_inertial(sys, x, r).U;
  for (std::size_t i = 0; i < n; ++i) {
    const BodyStateH& b = s.bodies[i];
    const double mass = sys.bodies[i].mass();
    const Vec3 omega =
        omega_from_momentum(sys.bodies[i].inertia().standard(), b.Pi);
    rec.T_trans += 0.5 * b.gamma.squaredNorm() / mass;
    rec.T_rot += 0.5 * omega.dot(b.Pi);
    rec.gamma_T += b.gamma;
    rec.pi_T += b.x.cross(b.gamma) + b.R * b.Pi;
    rec.orth_err_max = std::max(rec.orth_err_max, orthogonality_error(b.R));
  }
  rec.E = rec.T_trans + rec.T_rot + rec.U;
  return rec;
}

}  // namespace fullbody
