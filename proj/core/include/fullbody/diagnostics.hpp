#pragma once

#include "fullbody/state.hpp"

namespace fullbody {

/// Conserved-quantity observables at one trajectory sample. The energy is
/// reported with its translational/rotational/potential split; gamma_T is the
/// total linear momentum and pi_T the total angular momentum, both in the
/// inertial frame. pi_T is referenced to the inertial origin, which
/// coincides with the center-of-mass angular momentum whenever gamma_T = 0.
struct DiagnosticsRecord {
  double t = 0.0;
  double E = 0.0;
  double T_trans = 0.0;
  double T_rot = 0.0;
  double U = 0.0;
  Vec3 gamma_T = Vec3::Zero();
  Vec3 pi_T = Vec3::Zero();
  double orth_err_max = 0.0;
};

DiagnosticsRecord diagnostics_relative(const BodyPair& pair, const RelativeStateH& s,
                                       double t = 0.0);

DiagnosticsRecord diagnostics_inertial(const NBodySystem& sys, const InertialStateH& s,
                                       double t = 0.0);

}  // namespace fullbody
