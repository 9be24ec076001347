#include "fullbody/potential.hpp"

#include <cmath>
#include <cstddef>

namespace fullbody {

namespace {

// Kahan-compensated accumulator; engaged for larger point sets where plain
// summation would erode the 1e-13 diagnostics level.
template <typename T>
struct Compensated {
  T sum;
  T carry;

  explicit Compensated(const T& zero) : sum(zero), carry(zero) {}

  void add(const T& value) {
    const T y = value - carry;
    const T t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

[[noreturn]] void throw_overlap(double distance) {
  throw BodiesOverlap("point masses closer than the minimum separation (distance " +
                          std::to_string(distance) + ")",
                      distance);
}

}  // namespace

NBodySystem to_system(const BodyPair& pair) {
  return NBodySystem{{pair.first, pair.second}, pair.gravity, pair.min_separation};
}

PotentialEval eval_relative(const BodyPair& pair, const Vec3& X, const Mat3& R) {
  const std::vector<PointMass>& p1 = pair.first.point_masses();
  const std::vector<PointMass>& p2 = pair.second.point_masses();
  const double mass_product = pair.gravity * pair.first.mass() * pair.second.mass();
  const bool compensate = p1.size() * p2.size() > 64;

  Compensated<double> u(0.0);
  Compensated<Vec3> du_dx(Vec3::Zero());
  Compensated<Mat3> du_dr(Mat3::Zero());
  PotentialEval out;

  for (const PointMass& b : p2) {
    for (const PointMass& a : p1) {
      const Vec3 d = X + R * a.offset - b.offset;
      const double dist = d.norm();
      if (dist < pair.min_separation) {
        throw_overlap(dist);
      }
      const double k = mass_product * a.fraction * b.fraction;
      const double inv = 1.0 / dist;
      const double inv3 = inv * inv * inv;
      const double u_term = -k * inv;
      const Vec3 g_term = k * inv3 * d;
      const Mat3 r_term = g_term * a.offset.transpose();
      if (compensate) {
        u.add(u_term);
        du_dx.add(g_term);
        du_dr.add(r_term);
      } else {
        out.U += u_term;
        out.dU_dX += g_term;
        out.dU_dR += r_term;
      }
    }
  }
  if (compensate) {
    out.U = u.sum;
    out.dU_dX = du_dx.sum;
    out.dU_dR = du_dr.sum;
  }
  return out;
}

InertialPotentialEval eval_inertial(const NBodySystem& sys,
                                    std::span<const Vec3> x,
                                    std::span<const Mat3> R) {
  const std::size_t n = sys.bodies.size();
  if (n == 0 || x.size() != n || R.size() != n) {
    throw Error("eval_inertial: positions/attitudes must match the body count");
  }

  InertialPotentialEval out;
  out.dU_dx.assign(n, Vec3::Zero());
  out.dU_dR.assign(n, Mat3::Zero());

  std::size_t pair_terms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pair_terms += sys.bodies[i].point_masses().size() *
                    sys.bodies[j].point_masses().size();
    }
  }
  const bool compensate = pair_terms > 64;

  Compensated<double> u(0.0);
  std::vector<Compensated<Vec3>> du_dx(n, Compensated<Vec3>(Vec3::Zero()));
  std::vector<Compensated<Mat3>> du_dr(n, Compensated<Mat3>(Mat3::Zero()));

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double mass_product =
          sys.gravity * sys.bodies[i].mass() * sys.bodies[j].mass();
      for (const PointMass& a : sys.bodies[i].point_masses()) {
        const Vec3 pa = x[i] + R[i] * a.offset;
        for (const PointMass& b : sys.bodies[j].point_masses()) {
          const Vec3 d = pa - x[j] - R[j] * b.offset;
          const double dist = d.norm();
          if (dist < sys.min_separation) {
            throw_overlap(dist);
          }
          const double k = mass_product * a.fraction * b.fraction;
          const double inv = 1.0 / dist;
          const double inv3 = inv * inv * inv;
          const Vec3 g = k * inv3 * d;
          if (compensate) {
            u.add(-k * inv);
            du_dx[i].add(g);
            du_dx[j].add(-g);
            du_dr[i].add(g * a.offset.transpose());
            du_dr[j].add(-g * b.offset.transpose());
          } else {
            out.U += -k * inv;
            out.dU_dx[i] += g;
            out.dU_dx[j] -= g;
            out.dU_dR[i] += g * a.offset.transpose();
            out.dU_dR[j] -= g * b.offset.transpose();
          }
        }
      }
    }
  }
  if (compensate) {
    out.U = u.sum;
    for (std::size_t i = 0; i < n; ++i) {
      out.dU_dx[i] = du_dx[i].sum;
      out.dU_dR[i] = du_dr[i].sum;
    }
  }
  return out;
}

Vec3 moment_inertial(const Mat3& R, const Mat3& dU_dR) {
  Vec3 m = Vec3::Zero();
  for (int p = 0; p < 3; ++p) {
    m += Vec3(R.row(p)).cross(Vec3(dU_dR.row(p)));
  }
  return m;
}

Vec3 moment_relative(const Mat3& R, const Mat3& dU_dR) {
  Vec3 m = Vec3::Zero();
  for (int p = 0; p < 3; ++p) {
    m += Vec3(R.col(p)).cross(Vec3(dU_dR.col(p)));
  }
  return m;
}

}  // namespace fullbody
