#pragma once

#include <vector>

#include "fullbody/state.hpp"

namespace fullbody {

struct SolverConfig {
  double tolerance = 1e-15;
  int max_iterations = 50;
};

/// Result of one implicit rotation-increment solve: the group element F, its
/// rotation vector f with F = exp(S(f)), and the Newton iteration count.
struct StepIncrement {
  Rotation F;
  Vec3 f;
  int iterations_used;
};

/// Aggregated solver effort over a run.
struct StepStats {
  long long newton_iterations = 0;
  long long solves = 0;
  int max_iterations_single = 0;

  void absorb(const StepIncrement& inc) {
    newton_iterations += inc.iterations_used;
    solves += 1;
    if (inc.iterations_used > max_iterations_single) {
      max_iterations_single = inc.iterations_used;
    }
  }
};

/// Solves F J_d - J_d F^T = S(g) for F in the rotation group, by Newton
/// iteration on the equivalent vector equation g = G(f),
///   G(f) = (sin|f|/|f|) J f + ((1-cos|f|)/|f|^2) f x J f,  J = tr(J_d) I - J_d,
/// starting from the small-angle linearization f0 = J^{-1} g. The iteration
/// stops once ||g - G(f)|| < tolerance (or at the floating-point floor when
/// the tolerance is below what the magnitudes of g and J can represent).
/// g = 0 returns the identity without touching J. Requires ||J^{-1} g|| < pi;
/// a larger value means the time step asks for more than half a turn per step
/// and is rejected as NoConvergence.
StepIncrement solve_implicit_F(const Mat3& J_d, const Vec3& g,
                               const SolverConfig& cfg = {});

/// Forward map G(f) and its Jacobian, exposed for verification.
Vec3 implicit_forward_map(const Mat3& J, const Vec3& f);
Mat3 implicit_forward_map_jacobian(const Mat3& J, const Vec3& f);

// ---------------------------------------------------------------------------
// Discrete maps. Each advances one time step h and keeps every attitude in
// the rotation group by multiplicative updates only.

InertialStateH step_inertial_hamiltonian(const NBodySystem& sys,
                                         const InertialStateH& s, double h,
                                         const SolverConfig& cfg = {},
                                         StepStats* stats = nullptr);

RelativeStateH step_relative_hamiltonian(const BodyPair& pair,
                                         const RelativeStateH& s, double h,
                                         const SolverConfig& cfg = {},
                                         StepStats* stats = nullptr);

/// Configuration-space point of the inertial formulation.
struct InertialConfig {
  std::vector<Vec3> x;
  std::vector<Mat3> R;
};

/// Configuration-space point of the relative formulation, with the body-2
/// reconstruction variables that advance alongside it.
struct RelativeConfig {
  Vec3 X = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Mat3 R2 = Mat3::Identity();
  Vec3 x2 = Vec3::Zero();
};

/// Two-point recursion (q_{k-1}, q_k) -> q_{k+1} of the discrete
/// Euler-Lagrange equations in inertial coordinates.
InertialConfig step_inertial_lagrangian(const NBodySystem& sys,
                                        const InertialConfig& prev,
                                        const InertialConfig& cur, double h,
                                        const SolverConfig& cfg = {},
                                        StepStats* stats = nullptr);

RelativeConfig step_relative_lagrangian(const BodyPair& pair,
                                        const RelativeConfig& prev,
                                        const RelativeConfig& cur, double h,
                                        const SolverConfig& cfg = {},
                                        StepStats* stats = nullptr);

struct InertialMomenta {
  std::vector<Vec3> gamma;
  std::vector<Vec3> Pi;
};

struct RelativeMomenta {
  Vec3 Gamma = Vec3::Zero();
  Vec3 Pi = Vec3::Zero();
  Vec3 Pi2 = Vec3::Zero();
  Vec3 gamma2 = Vec3::Zero();
};

/// Discrete fiber derivative: momenta at step k such that the one-step
/// momentum map started from (q_k, p_k) reproduces q_{k+1}.
InertialMomenta legendre_to_momenta(const NBodySystem& sys, const InertialConfig& qk,
                                    const InertialConfig& qk1, double h);

/// The other leg of the discrete fiber derivative: momenta at step k+1.
InertialMomenta legendre_to_momenta_next(const NBodySystem& sys,
                                         const InertialConfig& qk,
                                         const InertialConfig& qk1, double h);

RelativeMomenta legendre_to_momenta_relative(const BodyPair& pair,
                                             const RelativeConfig& qk,
                                             const RelativeConfig& qk1, double h);

RelativeMomenta legendre_to_momenta_relative_next(const BodyPair& pair,
                                                  const RelativeConfig& qk,
                                                  const RelativeConfig& qk1,
                                                  double h);

InertialConfig config_of(const InertialStateH& s);
RelativeConfig config_of(const RelativeStateH& s);
InertialStateH assemble_state(const InertialConfig& q, const InertialMomenta& p);
RelativeStateH assemble_state(const RelativeConfig& q, const RelativeMomenta& p);

// ---------------------------------------------------------------------------
// Composition of a self-adjoint base step into higher order.

/// Substep weights of a composition method. Weights must sum to 1.
class CompositionScheme {
public:
  explicit CompositionScheme(std::vector<double> weights);

  /// Three-stage fourth-order symmetric composition,
  /// w1 = w3 = 1/(2 - 2^(1/3)), w2 = -2^(1/3)/(2 - 2^(1/3)).
  static CompositionScheme yoshida4();

  /// The trivial scheme {1}: composing reproduces the base step exactly.
  static CompositionScheme single();

  const std::vector<double>& weights() const { return weights_; }

private:
  std::vector<double> weights_;
};

/// Applies `step(state, w_i * h)` across the scheme. The base step must be a
/// self-adjoint (symmetric) method for the composed order to increase;
/// negative intermediate substeps are expected and legal.
template <typename State, typename StepFn>
State composed_step(StepFn&& step, const State& s, double h,
                    const CompositionScheme& scheme) {
  State cur = s;
  for (double w : scheme.weights()) {
    cur = step(cur, w * h);
  }
  return cur;
}

}  // namespace fullbody
