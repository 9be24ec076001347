#include "fullbody/continuous.hpp"

namespace fullbody {

namespace {

std::pair<std::vector<Vec3>, std::vector<Mat3>> split_configs(const InertialStateL& s) {
  std::vector<Vec3> x(s.bodies.size());
  std::vector<Mat3> r(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    x[i] = s.bodies[i].x;
    r[i] = s.bodies[i].R;
  }
  return {std::move(x), std::move(r)};
}

std::pair<std::vector<Vec3>, std::vector<Mat3>> split_configs(const InertialStateH& s) {
  std::vector<Vec3> x(s.bodies.size());
  std::vector<Mat3> r(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    x[i] = s.bodies[i].x;
    r[i] = s.bodies[i].R;
  }
  return {std::move(x), std::move(r)};
}

Vec3 solve_inertia(const Mat3& J, const Vec3& rhs) {
  if (rhs.isZero(0.0)) {
    return Vec3::Zero();
  }
  Eigen::FullPivLU<Mat3> lu(J);
  if (!lu.isInvertible()) {
    throw SingularInertia("singular moment of inertia in the equations of motion");
  }
  return lu.solve(rhs);
}

}  // namespace

InertialDotL deriv_inertial_lagrangian(const NBodySystem& sys, const InertialStateL& s) {
  const auto [x, r] = split_configs(s);
  const InertialPotentialEval u = eval_inertial(sys, x, r);

  InertialDotL dot;
  dot.bodies.resize(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const BodyStateL& b = s.bodies[i];
    const Mat3& J = sys.bodies[i].inertia().standard();
    const Vec3 moment = moment_inertial(b.R, u.dU_dR[i]);
    dot.bodies[i].x = b.v;
    dot.bodies[i].v = -u.dU_dx[i] / sys.bodies[i].mass();
    dot.bodies[i].Omega = solve_inertia(J, moment - b.Omega.cross(J * b.Omega));
    dot.bodies[i].R = b.R * hat(b.Omega);
  }
  return dot;
}

InertialDotH deriv_inertial_hamiltonian(const NBodySystem& sys, const InertialStateH& s) {
  const auto [x, r] = split_configs(s);
  const InertialPotentialEval u = eval_inertial(sys, x, r);

  InertialDotH dot;
  dot.bodies.resize(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const BodyStateH& b = s.bodies[i];
    const Vec3 omega = omega_from_momentum(sys.bodies[i].inertia().standard(), b.Pi);
    dot.bodies[i].x = b.gamma / sys.bodies[i].mass();
    dot.bodies[i].gamma = -u.dU_dx[i];
    dot.bodies[i].Pi = moment_inertial(b.R, u.dU_dR[i]) - omega.cross(b.Pi);
    dot.bodies[i].R = b.R * hat(omega);
  }
  return dot;
}

RelativeDotL deriv_relative_lagrangian(const BodyPair& pair, const RelativeStateL& s) {
  const PotentialEval u = eval_relative(pair, s.X, s.R);
  const Vec3 moment = moment_relative(s.R, u.dU_dR);
  const double m = pair.reduced_mass();
  const Mat3& J1 = pair.first.inertia().standard();
  const Mat3& J2 = pair.second.inertia().standard();

  RelativeDotL dot;
  dot.R = (hat(s.Omega) - hat(s.Omega2)) * s.R;
  dot.X = s.V - s.Omega2.cross(s.X);
  dot.V = -u.dU_dX / m - s.Omega2.cross(s.V);

  // d/dt(J_R Omega) = -M - Omega2 x (J_R Omega) with
  // J_R = R J_1 R^T differentiated through the attitude kinematics.
  const Mat3 j_r = s.R * J1 * s.R.transpose();
  const Mat3 j_r_dot = dot.R * J1 * s.R.transpose() + s.R * J1 * dot.R.transpose();
  const Vec3 pi = j_r * s.Omega;
  dot.Omega = solve_inertia(j_r, -moment - s.Omega2.cross(pi) - j_r_dot * s.Omega);

  dot.Omega2 =
      solve_inertia(J2, s.X.cross(u.dU_dX) + moment - s.Omega2.cross(J2 * s.Omega2));

  dot.x2 = s.v2;
  dot.v2 = s.R2 * u.dU_dX / pair.second.mass();
  dot.R2 = s.R2 * hat(s.Omega2);
  return dot;
}

RelativeDotH deriv_relative_hamiltonian(const BodyPair& pair, const RelativeStateH& s) {
  const PotentialEval u = eval_relative(pair, s.X, s.R);
  const Vec3 moment = moment_relative(s.R, u.dU_dR);
  const double m = pair.reduced_mass();
  const Mat3 j_r = s.R * pair.first.inertia().standard() * s.R.transpose();
  const Vec3 omega = omega_from_momentum(j_r, s.Pi);
  const Vec3 omega2 = omega_from_momentum(pair.second.inertia().standard(), s.Pi2);

  RelativeDotH dot;
  dot.X = s.Gamma / m - omega2.cross(s.X);
  dot.R = (hat(omega) - hat(omega2)) * s.R;
  dot.Gamma = -u.dU_dX - omega2.cross(s.Gamma);
  dot.Pi = -moment - omega2.cross(s.Pi);
  dot.Pi2 = s.X.cross(u.dU_dX) + moment - omega2.cross(s.Pi2);
  dot.x2 = s.gamma2 / pair.second.mass();
  dot.gamma2 = s.R2 * u.dU_dX;
  dot.R2 = s.R2 * hat(omega2);
  return dot;
}

}  // namespace fullbody
