#pragma once

#include <utility>

#include "fullbody/state.hpp"

namespace fullbody {

// Right-hand sides of the continuous equations of motion, one per
// formulation. All are pure functions of the state; attitude derivatives are
// tangent to the rotation group (R S(Omega) inertially, (S(Omega) -
// S(Omega2)) R in relative coordinates).

InertialDotL deriv_inertial_lagrangian(const NBodySystem& sys, const InertialStateL& s);
InertialDotH deriv_inertial_hamiltonian(const NBodySystem& sys, const InertialStateH& s);
RelativeDotL deriv_relative_lagrangian(const BodyPair& pair, const RelativeStateL& s);
RelativeDotH deriv_relative_hamiltonian(const BodyPair& pair, const RelativeStateH& s);

/// Classical four-stage Runge-Kutta step applied to every stored component,
/// including the nine raw attitude entries. No projection back onto the
/// rotation group is performed, so attitudes drift off the group; that is the
/// behavior this reference integrator exists to exhibit.
template <typename State, typename Deriv>
State rk4_step(Deriv&& deriv, const State& s, double h) {
  const auto k1 = deriv(s);
  const auto k2 = deriv(advanced(s, 0.5 * h, k1));
  const auto k3 = deriv(advanced(s, 0.5 * h, k2));
  const auto k4 = deriv(advanced(s, h, k3));
  return advanced(s, h / 6.0, k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace fullbody
