#pragma once

#include <span>
#include <vector>

#include "fullbody/body.hpp"

namespace fullbody {

/// Mutual potential value and its first derivatives in relative coordinates.
struct PotentialEval {
  double U = 0.0;
  Vec3 dU_dX = Vec3::Zero();
  Mat3 dU_dR = Mat3::Zero();
};

/// The two-body system in relative coordinates: body 1 described relative to
/// body 2. `gravity` is the gravitational constant in the working units.
struct BodyPair {
  BodyModel first;
  BodyModel second;
  double gravity;
  double min_separation = 1e-9;

  double reduced_mass() const {
    return first.mass() * second.mass() / (first.mass() + second.mass());
  }
};

/// An n-body system in inertial coordinates.
struct NBodySystem {
  std::vector<BodyModel> bodies;
  double gravity;
  double min_separation = 1e-9;
};

NBodySystem to_system(const BodyPair& pair);

/// Gravitational constant that makes sqrt(G (m1 + m2) / l^3) = 1, the time
/// scale used by the normalized two-body configuration.
inline double normalized_gravity(double m1, double m2) { return 1.0 / (m1 + m2); }

/// Potential of the pair as a function of the relative configuration,
/// U(X, R) = -sum_{p,q} k_pq / ||X + R rho_1q - rho_2p||, with analytic
/// dU/dX and the componentwise matrix derivative dU/dR. Throws BodiesOverlap
/// when any point pair comes closer than min_separation. R need not be
/// orthogonal; the formulas extend smoothly off the group.
PotentialEval eval_relative(const BodyPair& pair, const Vec3& X, const Mat3& R);

struct InertialPotentialEval {
  double U = 0.0;
  std::vector<Vec3> dU_dx;
  std::vector<Mat3> dU_dR;
};

/// Pairwise point-mass potential of n bodies with positions x_i and attitudes
/// R_i, plus the componentwise partials with respect to every position and
/// attitude entry. A single body has no pair interactions and yields zero.
InertialPotentialEval eval_inertial(const NBodySystem& sys,
                                    std::span<const Vec3> x,
                                    std::span<const Mat3> R);

/// Gravity-gradient moment in the inertial formulation: the sum of cross
/// products of the ROWS of R with the rows of dU/dR. Equals
/// vee((dU/dR)^T R - R^T dU/dR).
Vec3 moment_inertial(const Mat3& R, const Mat3& dU_dR);

/// Gravity-gradient moment in the relative formulation: the sum of cross
/// products of the COLUMNS of R with the columns of dU/dR. Equals
/// vee((dU/dR) R^T - R (dU/dR)^T). The two conventions are not interchangeable.
Vec3 moment_relative(const Mat3& R, const Mat3& dU_dR);

}  // namespace fullbody
