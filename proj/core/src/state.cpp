#include "fullbody/state.hpp"

#include <cmath>

namespace fullbody {

Vec3 omega_from_momentum(const Mat3& J, const Vec3& pi) {
  if (pi.isZero(0.0)) {
    return Vec3::Zero();
  }
  Eigen::FullPivLU<Mat3> lu(J);
  if (!lu.isInvertible()) {
    throw SingularInertia(
        "moment of inertia is singular but the angular momentum is nonzero");
  }
  return lu.solve(pi);
}

InertialStateH to_hamiltonian(const NBodySystem& sys, const InertialStateL& s) {
  InertialStateH out;
  out.bodies.resize(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const BodyStateL& b = s.bodies[i];
    out.bodies[i] = {b.x, b.R, sys.bodies[i].mass() * b.v,
                     sys.bodies[i].inertia().standard() * b.Omega};
  }
  return out;
}

InertialStateL to_lagrangian(const NBodySystem& sys, const InertialStateH& s) {
  InertialStateL out;
  out.bodies.resize(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const BodyStateH& b = s.bodies[i];
    out.bodies[i] = {b.x, b.R, b.gamma / sys.bodies[i].mass(),
                     omega_from_momentum(sys.bodies[i].inertia().standard(), b.Pi)};
  }
  return out;
}

RelativeStateH to_hamiltonian(const BodyPair& pair, const RelativeStateL& s) {
  RelativeStateH out;
  out.X = s.X;
  out.R = s.R;
  out.Gamma = pair.reduced_mass() * s.V;
  const Mat3 j_r = s.R * pair.first.inertia().standard() * s.R.transpose();
  out.Pi = j_r * s.Omega;
  out.Pi2 = pair.second.inertia().standard() * s.Omega2;
  out.x2 = s.x2;
  out.gamma2 = pair.second.mass() * s.v2;
  out.R2 = s.R2;
  return out;
}

RelativeStateL to_lagrangian(const BodyPair& pair, const RelativeStateH& s) {
  RelativeStateL out;
  out.X = s.X;
  out.R = s.R;
  out.V = s.Gamma / pair.reduced_mass();
  const Mat3 j_r = s.R * pair.first.inertia().standard() * s.R.transpose();
  out.Omega = omega_from_momentum(j_r, s.Pi);
  out.Omega2 = omega_from_momentum(pair.second.inertia().standard(), s.Pi2);
  out.x2 = s.x2;
  out.v2 = s.gamma2 / pair.second.mass();
  out.R2 = s.R2;
  return out;
}

RelativeStateH reduce(const BodyPair& pair, const InertialStateH& s) {
  if (s.bodies.size() != 2) {
    throw Error("reduce: expected a two-body state");
  }
  const BodyStateH& b1 = s.bodies[0];
  const BodyStateH& b2 = s.bodies[1];
  const double m1 = pair.first.mass();
  const double m2 = pair.second.mass();

  RelativeStateH out;
  const Mat3 r2t = b2.R.transpose();
  out.X = r2t * (b1.x - b2.x);
  out.R = r2t * b1.R;
  out.Gamma = r2t * ((m2 * b1.gamma - m1 * b2.gamma) / (m1 + m2));
  out.Pi = out.R * b1.Pi;
  out.Pi2 = b2.Pi;
  out.x2 = b2.x;
  out.gamma2 = b2.gamma;
  out.R2 = b2.R;
  return out;
}

InertialStateH reconstruct(const BodyPair& pair, const RelativeStateH& s) {
  const double m1 = pair.first.mass();
  const double m2 = pair.second.mass();
  const double m = pair.reduced_mass();

  InertialStateH out;
  out.bodies.resize(2);
  BodyStateH& b1 = out.bodies[0];
  BodyStateH& b2 = out.bodies[1];
  b2.x = s.x2;
  b2.R = s.R2;
  b2.gamma = s.gamma2;
  b2.Pi = s.Pi2;
  b1.x = s.x2 + s.R2 * s.X;
  b1.R = s.R2 * s.R;
  // v1 = v2 + R2 V with V = Gamma / m.
  b1.gamma = m1 * (s.gamma2 / m2 + s.R2 * (s.Gamma / m));
  b1.Pi = s.R.transpose() * s.Pi;
  return out;
}

RelativeStateL reduce(const BodyPair&, const InertialStateL& s) {
  if (s.bodies.size() != 2) {
    throw Error("reduce: expected a two-body state");
  }
  const BodyStateL& b1 = s.bodies[0];
  const BodyStateL& b2 = s.bodies[1];

  RelativeStateL out;
  const Mat3 r2t = b2.R.transpose();
  out.X = r2t * (b1.x - b2.x);
  out.R = r2t * b1.R;
  out.V = r2t * (b1.v - b2.v);
  out.Omega = out.R * b1.Omega;
  out.Omega2 = b2.Omega;
  out.x2 = b2.x;
  out.v2 = b2.v;
  out.R2 = b2.R;
  return out;
}

InertialStateL reconstruct(const BodyPair&, const RelativeStateL& s) {
  InertialStateL out;
  out.bodies.resize(2);
  BodyStateL& b1 = out.bodies[0];
  BodyStateL& b2 = out.bodies[1];
  b2.x = s.x2;
  b2.R = s.R2;
  b2.v = s.v2;
  b2.Omega = s.Omega2;
  b1.x = s.x2 + s.R2 * s.X;
  b1.R = s.R2 * s.R;
  b1.v = s.v2 + s.R2 * s.V;
  b1.Omega = s.R.transpose() * s.Omega;
  return out;
}

InertialDotH operator+(const InertialDotH& a, const InertialDotH& b) {
  InertialDotH out = a;
  for (std::size_t i = 0; i < out.bodies.size(); ++i) {
    out.bodies[i].x += b.bodies[i].x;
    out.bodies[i].R += b.bodies[i].R;
    out.bodies[i].gamma += b.bodies[i].gamma;
    out.bodies[i].Pi += b.bodies[i].Pi;
  }
  return out;
}

InertialDotH operator*(double a, const InertialDotH& d) {
  InertialDotH out = d;
  for (auto& b : out.bodies) {
    b.x *= a;
    b.R *= a;
    b.gamma *= a;
    b.Pi *= a;
  }
  return out;
}

InertialDotL operator+(const InertialDotL& a, const InertialDotL& b) {
  InertialDotL out = a;
  for (std::size_t i = 0; i < out.bodies.size(); ++i) {
    out.bodies[i].x += b.bodies[i].x;
    out.bodies[i].R += b.bodies[i].R;
    out.bodies[i].v += b.bodies[i].v;
    out.bodies[i].Omega += b.bodies[i].Omega;
  }
  return out;
}

InertialDotL operator*(double a, const InertialDotL& d) {
  InertialDotL out = d;
  for (auto& b : out.bodies) {
    b.x *= a;
    b.R *= a;
    b.v *= a;
    b.Omega *= a;
  }
  return out;
}

RelativeDotH operator+(const RelativeDotH& a, const RelativeDotH& b) {
  RelativeDotH out = a;
  out.X += b.X;
  out.R += b.R;
  out.Gamma += b.Gamma;
  out.Pi += b.Pi;
  out.Pi2 += b.Pi2;
  out.x2 += b.x2;
  out.gamma2 += b.gamma2;
  out.R2 += b.R2;
  return out;
}

RelativeDotH operator*(double a, const RelativeDotH& d) {
  RelativeDotH out = d;
  out.X *= a;
  out.R *= a;
  out.Gamma *= a;
  out.Pi *= a;
  out.Pi2 *= a;
  out.x2 *= a;
  out.gamma2 *= a;
  out.R2 *= a;
  return out;
}

RelativeDotL operator+(const RelativeDotL& a, const RelativeDotL& b) {
  RelativeDotL out = a;
  out.X += b.X;
  out.R += b.R;
  out.V += b.V;
  out.Omega += b.Omega;
  out.Omega2 += b.Omega2;
  out.x2 += b.x2;
  out.v2 += b.v2;
  out.R2 += b.R2;
  return out;
}

RelativeDotL operator*(double a, const RelativeDotL& d) {
  RelativeDotL out = d;
  out.X *= a;
  out.R *= a;
  out.V *= a;
  out.Omega *= a;
  out.Omega2 *= a;
  out.x2 *= a;
  out.v2 *= a;
  out.R2 *= a;
  return out;
}

InertialStateH advanced(const InertialStateH& s, double a, const InertialDotH& d) {
  InertialStateH out = s;
  for (std::size_t i = 0; i < out.bodies.size(); ++i) {
    out.bodies[i].x += a * d.bodies[i].x;
    out.bodies[i].R += a * d.bodies[i].R;
    out.bodies[i].gamma += a * d.bodies[i].gamma;
    out.bodies[i].Pi += a * d.bodies[i].Pi;
  }
  return out;
}

InertialStateL advanced(const InertialStateL& s, double a, const InertialDotL& d) {
  InertialStateL out = s;
  for (std::size_t i = 0; i < out.bodies.size(); ++i) {
    out.bodies[i].x += a * d.bodies[i].x;
    out.bodies[i].R += a * d.bodies[i].R;
    out.bodies[i].v += a * d.bodies[i].v;
    out.bodies[i].Omega += a * d.bodies[i].Omega;
  }
  return out;
}

RelativeStateH advanced(const RelativeStateH& s, double a, const RelativeDotH& d) {
  RelativeStateH out = s;
  out.X += a * d.X;
  out.R += a * d.R;
  out.Gamma += a * d.Gamma;
  out.Pi += a * d.Pi;
  out.Pi2 += a * d.Pi2;
  out.x2 += a * d.x2;
  out.gamma2 += a * d.gamma2;
  out.R2 += a * d.R2;
  return out;
}

RelativeStateL advanced(const RelativeStateL& s, double a, const RelativeDotL& d) {
  RelativeStateL out = s;
  out.X += a * d.X;
  out.R += a * d.R;
  out.V += a * d.V;
  out.Omega += a * d.Omega;
  out.Omega2 += a * d.Omega2;
  out.x2 += a * d.x2;
  out.v2 += a * d.v2;
  out.R2 += a * d.R2;
  return out;
}

}  // namespace fullbody
