#include "fullbody/lgvi.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "fullbody/inertia.hpp"

namespace fullbody {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bodies with an exactly zero nonstandard inertia carry no attitude dynamics;
// their step increment is the identity provided the rotational impulse is
// zero up to roundoff. A genuine impulse on such a body is a modeling error.
StepIncrement solve_increment(const Mat3& j_d, const Vec3& g, double h,
                              const SolverConfig& cfg, StepStats* stats) {
  StepIncrement inc = [&] {
    if (j_d.isZero(0.0)) {
      if (g.norm() > 1e-10 * std::max(1.0, std::abs(h))) {
        throw SingularInertia(
            "nonzero rotational impulse on a body with zero moment of inertia");
      }
      return StepIncrement{Rotation::identity(), Vec3::Zero(), 0};
    }
    return solve_implicit_F(j_d, g, cfg);
  }();
  if (stats != nullptr) {
    stats->absorb(inc);
  }
  return inc;
}

}  // namespace

Vec3 implicit_forward_map(const Mat3& J, const Vec3& f) {
  double a = 0.0;
  double b = 0.0;
  rodrigues_coefficients(f.norm(), a, b);
  const Vec3 jf = J * f;
  return a * jf + b * f.cross(jf);
}

Mat3 implicit_forward_map_jacobian(const Mat3& J, const Vec3& f) {
  const double x = f.norm();
  const double x2 = x * x;
  double a = 0.0;
  double b = 0.0;
  rodrigues_coefficients(x, a, b);
  double c1 = 0.0;  // d/dx (sin x / x) / x
  double c3 = 0.0;  // d/dx ((1 - cos x)/x^2) / x
  if (x < 1e-2) {
    c1 = -1.0 / 3.0 + x2 / 30.0;
    c3 = -1.0 / 12.0 + x2 / 180.0;
  } else {
    const double s = std::sin(0.5 * x);
    c1 = (x * std::cos(x) - std::sin(x)) / (x2 * x);
    c3 = (x * std::sin(x) - 4.0 * s * s) / (x2 * x2);
  }
  const Vec3 jf = J * f;
  const Vec3 fxjf = f.cross(jf);
  return c1 * (jf * f.transpose()) + a * J + c3 * (fxjf * f.transpose()) +
         b * (hat(f) * J - hat(jf));
}

StepIncrement solve_implicit_F(const Mat3& J_d, const Vec3& g, const SolverConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) {
    throw Error("solver tolerance must be positive");
  }
  if (cfg.max_iterations < 1) {
    throw Error("solver needs an iteration budget of at least 1");
  }
  const double asym = 0.5 * (J_d - J_d.transpose()).norm();
  if (!(asym <= 1e-10 * std::max(1.0, J_d.norm()))) {
    throw NonSymmetricInput("solve_implicit_F: J_d is not symmetric");
  }
  if (g.isZero(0.0)) {
    return {Rotation::identity(), Vec3::Zero(), 0};
  }

  const Mat3 j_d = 0.5 * (J_d + J_d.transpose());
  const Mat3 J = std_from_nonstd(j_d);
  Eigen::FullPivLU<Mat3> lu(J);
  if (!lu.isInvertible()) {
    throw SingularJacobian(
        "solve_implicit_F: standard moment of inertia is singular");
  }

  Vec3 f = lu.solve(g);
  if (!(f.norm() < kPi)) {
    throw NoConvergence("rotation increment outside the capture basin: |J^-1 g| = " +
                            std::to_string(f.norm()),
                        0, std::numeric_limits<double>::infinity());
  }

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const double floor =
      32.0 * kEps * (J.norm() * std::max(f.norm(), 1e-9) + g.norm());
  // The error in f is the residual amplified by 1 / sigma_min(J). For very
  // anisotropic inertia the requested tolerance on the residual would leave
  // too coarse an increment, so the target tightens accordingly (never below
  // the floating-point floor of the map evaluation). 1 / |J^-1|_F bounds
  // sigma_min from below and falls out of the factorization already at hand.
  const double sigma_min = 1.0 / lu.inverse().norm();
  const double target =
      std::min(cfg.tolerance, std::max(1e-13 * sigma_min * f.norm(), floor));

  Vec3 best_f = f;
  double best_rn = (g - implicit_forward_map(J, f)).norm();
  int used = 0;
  int stale = 0;
  while (best_rn >= target) {
    if (stale >= 2 && best_rn <= 8.0 * floor) {
      break;  // at the numeric floor; more iterations cannot help
    }
    if (used == cfg.max_iterations) {
      if (best_rn < cfg.tolerance || best_rn <= 8.0 * floor) {
        break;
      }
      throw NoConvergence("implicit rotation solve did not reach tolerance " +
                              std::to_string(cfg.tolerance),
                          used, best_rn);
    }
    const Mat3 grad = implicit_forward_map_jacobian(J, f);
    Eigen::FullPivLU<Mat3> grad_lu(grad);
    if (!grad_lu.isInvertible()) {
      throw SingularJacobian("Newton Jacobian is singular");
    }
    f += grad_lu.solve(g - implicit_forward_map(J, f));
    ++used;
    const double rn = (g - implicit_forward_map(J, f)).norm();
    if (rn < best_rn) {
      best_rn = rn;
      best_f = f;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return {rodrigues_exp(best_f), best_f, used};
}

InertialStateH step_inertial_hamiltonian(const NBodySystem& sys,
                                         const InertialStateH& s, double h,
                                         const SolverConfig& cfg, StepStats* stats) {
  const std::size_t n = s.bodies.size();
  std::vector<Vec3> x_k(n);
  std::vector<Mat3> r_k(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_k[i] = s.bodies[i].x;
    r_k[i] = s.bodies[i].R;
  }
  const InertialPotentialEval u_k = eval_inertial(sys, x_k, r_k);

  InertialStateH next;
  next.bodies.resize(n);
  std::vector<Vec3> m_k(n);
  std::vector<Mat3> f_k(n);
  std::vector<Vec3> x_k1(n);
  std::vector<Mat3> r_k1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BodyStateH& b = s.bodies[i];
    const double mass = sys.bodies[i].mass();
    m_k[i] = moment_inertial(b.R, u_k.dU_dR[i]);
    x_k1[i] = b.x + (h / mass) * b.gamma - (0.5 * h * h / mass) * u_k.dU_dx[i];
    const Vec3 g = h * (b.Pi + 0.5 * h * m_k[i]);
    const StepIncrement inc =
        solve_increment(sys.bodies[i].inertia().nonstandard(), g, h, cfg, stats);
    f_k[i] = inc.F.matrix();
    r_k1[i] = b.R * f_k[i];
  }

  const InertialPotentialEval u_k1 = eval_inertial(sys, x_k1, r_k1);
  for (std::size_t i = 0; i < n; ++i) {
    const BodyStateH& b = s.bodies[i];
    const Vec3 m_k1 = moment_inertial(r_k1[i], u_k1.dU_dR[i]);
    next.bodies[i].x = x_k1[i];
    next.bodies[i].R = r_k1[i];
    next.bodies[i].gamma = b.gamma - 0.5 * h * (u_k.dU_dx[i] + u_k1.dU_dx[i]);
    next.bodies[i].Pi =
        f_k[i].transpose() * (b.Pi + 0.5 * h * m_k[i]) + 0.5 * h * m_k1;
  }
  return next;
}

RelativeStateH step_relative_hamiltonian(const BodyPair& pair,
                                         const RelativeStateH& s, double h,
                                         const SolverConfig& cfg, StepStats* stats) {
  const double m = pair.reduced_mass();
  const double m2 = pair.second.mass();
  const Mat3& j_d1 = pair.first.inertia().nonstandard();
  const Mat3& j_d2 = pair.second.inertia().nonstandard();

  const PotentialEval u_k = eval_relative(pair, s.X, s.R);
  const Vec3 m_k = moment_relative(s.R, u_k.dU_dR);
  const Vec3 xu_k = s.X.cross(u_k.dU_dX);

  // The two implicit solves are decoupled: body 2's increment first, then
  // body 1's relative increment against the rotated inertia R J_d1 R^T.
  const StepIncrement inc_f2 = solve_increment(
      j_d2, h * (s.Pi2 + 0.5 * h * xu_k + 0.5 * h * m_k), h, cfg, stats);
  const Mat3 j_dr_k = s.R * j_d1 * s.R.transpose();
  const StepIncrement inc_f =
      solve_increment(j_dr_k, h * (s.Pi - 0.5 * h * m_k), h, cfg, stats);
  const Mat3& f = inc_f.F.matrix();
  const Mat3 f2t = inc_f2.F.matrix().transpose();

  RelativeStateH next;
  next.X = f2t * (s.X + (h / m) * s.Gamma - (0.5 * h * h / m) * u_k.dU_dX);
  next.R = f2t * (f * s.R);
  next.R2 = s.R2 * inc_f2.F.matrix();
  next.x2 = s.x2 + (h / m2) * s.gamma2 + (0.5 * h * h / m2) * (s.R2 * u_k.dU_dX);

  const PotentialEval u_k1 = eval_relative(pair, next.X, next.R);
  const Vec3 m_k1 = moment_relative(next.R, u_k1.dU_dR);
  const Vec3 xu_k1 = next.X.cross(u_k1.dU_dX);

  next.Gamma = f2t * (s.Gamma - 0.5 * h * u_k.dU_dX) - 0.5 * h * u_k1.dU_dX;
  next.Pi = f2t * (s.Pi - 0.5 * h * m_k) - 0.5 * h * m_k1;
  next.Pi2 = f2t * (s.Pi2 + 0.5 * h * (xu_k + m_k)) + 0.5 * h * (xu_k1 + m_k1);
  next.gamma2 = s.gamma2 + 0.5 * h * (s.R2 * u_k.dU_dX) +
                0.5 * h * (next.R2 * u_k1.dU_dX);
  return next;
}

InertialConfig step_inertial_lagrangian(const NBodySystem& sys,
                                        const InertialConfig& prev,
                                        const InertialConfig& cur, double h,
                                        const SolverConfig& cfg, StepStats* stats) {
  const std::size_t n = cur.x.size();
  const InertialPotentialEval u_k = eval_inertial(sys, cur.x, cur.R);

  InertialConfig next;
  next.x.resize(n);
  next.R.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3& j_d = sys.bodies[i].inertia().nonstandard();
    const Vec3 m_k = moment_inertial(cur.R[i], u_k.dU_dR[i]);
    const Mat3 f_prev = prev.R[i].transpose() * cur.R[i];
    const Mat3 skew_g = j_d * f_prev - f_prev.transpose() * j_d + h * h * hat(m_k);
    const StepIncrement inc =
        solve_increment(j_d, vee_unchecked(skew_g), h, cfg, stats);
    // Summed form of the two-point recursion: the parasitic roundoff mode of
    // 2 x_k - x_{k-1} grows quadratically with the step count, the increment
    // form only picks up rounding at the scale of the per-step displacement.
    next.x[i] = cur.x[i] + ((cur.x[i] - prev.x[i]) -
                            (h * h / sys.bodies[i].mass()) * u_k.dU_dx[i]);
    next.R[i] = cur.R[i] * inc.F.matrix();
  }
  return next;
}

RelativeConfig step_relative_lagrangian(const BodyPair& pair,
                                        const RelativeConfig& prev,
                                        const RelativeConfig& cur, double h,
                                        const SolverConfig& cfg, StepStats* stats) {
  const double m = pair.reduced_mass();
  const double m2 = pair.second.mass();
  const Mat3& j_d1 = pair.first.inertia().nonstandard();
  const Mat3& j_d2 = pair.second.inertia().nonstandard();

  const PotentialEval u_k = eval_relative(pair, cur.X, cur.R);
  const Vec3 m_k = moment_relative(cur.R, u_k.dU_dR);

  const Mat3 f2_prev = prev.R2.transpose() * cur.R2;
  const Mat3 f_prev = f2_prev * cur.R * prev.R.transpose();
  const Mat3 j_dr_prev = prev.R * j_d1 * prev.R.transpose();
  const Mat3 j_dr_cur = cur.R * j_d1 * cur.R.transpose();

  // Skew parts transported as vectors: vee(F^T S F) = F^T vee(S).
  const Vec3 g1 =
      f2_prev.transpose() *
          vee_unchecked(f_prev * j_dr_prev - j_dr_prev * f_prev.transpose()) -
      h * h * m_k;
  const StepIncrement inc_f = solve_increment(j_dr_cur, g1, h, cfg, stats);

  const Vec3 g2 =
      f2_prev.transpose() *
          vee_unchecked(f2_prev * j_d2 - j_d2 * f2_prev.transpose()) +
      h * h * (cur.X.cross(u_k.dU_dX) + m_k);
  const StepIncrement inc_f2 = solve_increment(j_d2, g2, h, cfg, stats);

  const Mat3 f2t = inc_f2.F.matrix().transpose();
  RelativeConfig next;
  // Increment form of the two-point recursions (see the inertial map).
  next.X = f2t * (cur.X + ((cur.X - f2_prev.transpose() * prev.X) -
                           (h * h / m) * u_k.dU_dX));
  next.R = f2t * (inc_f.F.matrix() * cur.R);
  next.R2 = cur.R2 * inc_f2.F.matrix();
  next.x2 =
      cur.x2 + ((cur.x2 - prev.x2) + (h * h / m2) * (cur.R2 * u_k.dU_dX));
  return next;
}

InertialMomenta legendre_to_momenta(const NBodySystem& sys, const InertialConfig& qk,
                                    const InertialConfig& qk1, double h) {
  const std::size_t n = qk.x.size();
  const InertialPotentialEval u_k = eval_inertial(sys, qk.x, qk.R);

  InertialMomenta out;
  out.gamma.resize(n);
  out.Pi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3& j_d = sys.bodies[i].inertia().nonstandard();
    const Mat3 f = qk.R[i].transpose() * qk1.R[i];
    out.gamma[i] = (sys.bodies[i].mass() / h) * (qk1.x[i] - qk.x[i]) +
                   0.5 * h * u_k.dU_dx[i];
    out.Pi[i] = vee_unchecked(f * j_d - j_d * f.transpose()) / h -
                0.5 * h * moment_inertial(qk.R[i], u_k.dU_dR[i]);
  }
  return out;
}

InertialMomenta legendre_to_momenta_next(const NBodySystem& sys,
                                         const InertialConfig& qk,
                                         const InertialConfig& qk1, double h) {
  const std::size_t n = qk.x.size();
  const InertialPotentialEval u_k1 = eval_inertial(sys, qk1.x, qk1.R);

  InertialMomenta out;
  out.gamma.resize(n);
  out.Pi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3& j_d = sys.bodies[i].inertia().nonstandard();
    const Mat3 f = qk.R[i].transpose() * qk1.R[i];
    out.gamma[i] = (sys.bodies[i].mass() / h) * (qk1.x[i] - qk.x[i]) -
                   0.5 * h * u_k1.dU_dx[i];
    out.Pi[i] =
        vee_unchecked(f.transpose() * (f * j_d - j_d * f.transpose()) * f) / h +
        0.5 * h * moment_inertial(qk1.R[i], u_k1.dU_dR[i]);
  }
  return out;
}

RelativeMomenta legendre_to_momenta_relative(const BodyPair& pair,
                                             const RelativeConfig& qk,
                                             const RelativeConfig& qk1, double h) {
  const Mat3& j_d1 = pair.first.inertia().nonstandard();
  const Mat3& j_d2 = pair.second.inertia().nonstandard();
  const PotentialEval u_k = eval_relative(pair, qk.X, qk.R);
  const Vec3 m_k = moment_relative(qk.R, u_k.dU_dR);

  const Mat3 f2 = qk.R2.transpose() * qk1.R2;
  const Mat3 f = f2 * qk1.R * qk.R.transpose();
  const Mat3 j_dr = qk.R * j_d1 * qk.R.transpose();

  RelativeMomenta out;
  out.Gamma = (pair.reduced_mass() / h) * (f2 * qk1.X - qk.X) + 0.5 * h * u_k.dU_dX;
  out.Pi = vee_unchecked(f * j_dr - j_dr * f.transpose()) / h + 0.5 * h * m_k;
  out.Pi2 = vee_unchecked(f2 * j_d2 - j_d2 * f2.transpose()) / h -
            0.5 * h * (qk.X.cross(u_k.dU_dX) + m_k);
  out.gamma2 = (pair.second.mass() / h) * (qk1.x2 - qk.x2) -
               0.5 * h * (qk.R2 * u_k.dU_dX);
  return out;
}

RelativeMomenta legendre_to_momenta_relative_next(const BodyPair& pair,
                                                  const RelativeConfig& qk,
                                                  const RelativeConfig& qk1,
                                                  double h) {
  const Mat3& j_d1 = pair.first.inertia().nonstandard();
  const Mat3& j_d2 = pair.second.inertia().nonstandard();
  const PotentialEval u_k1 = eval_relative(pair, qk1.X, qk1.R);
  const Vec3 m_k1 = moment_relative(qk1.R, u_k1.dU_dR);

  const Mat3 f2 = qk.R2.transpose() * qk1.R2;
  const Mat3 f = f2 * qk1.R * qk.R.transpose();
  const Mat3 j_dr = qk.R * j_d1 * qk.R.transpose();

  RelativeMomenta out;
  out.Gamma = (pair.reduced_mass() / h) * (qk1.X - f2.transpose() * qk.X) -
              0.5 * h * u_k1.dU_dX;
  out.Pi = vee_unchecked(f2.transpose() * (f * j_dr - j_dr * f.transpose()) * f2) / h -
           0.5 * h * m_k1;
  out.Pi2 =
      vee_unchecked(f2.transpose() * (f2 * j_d2 - j_d2 * f2.transpose()) * f2) / h +
      0.5 * h * (qk1.X.cross(u_k1.dU_dX) + m_k1);
  out.gamma2 = (pair.second.mass() / h) * (qk1.x2 - qk.x2) +
               0.5 * h * (qk1.R2 * u_k1.dU_dX);
  return out;
}

InertialConfig config_of(const InertialStateH& s) {
  InertialConfig q;
  q.x.resize(s.bodies.size());
  q.R.resize(s.bodies.size());
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    q.x[i] = s.bodies[i].x;
    q.R[i] = s.bodies[i].R;
  }
  return q;
}

RelativeConfig config_of(const RelativeStateH& s) {
  return RelativeConfig{s.X, s.R, s.R2, s.x2};
}

InertialStateH assemble_state(const InertialConfig& q, const InertialMomenta& p) {
  InertialStateH s;
  s.bodies.resize(q.x.size());
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    s.bodies[i] = {q.x[i], q.R[i], p.gamma[i], p.Pi[i]};
  }
  return s;
}

RelativeStateH assemble_state(const RelativeConfig& q, const RelativeMomenta& p) {
  RelativeStateH s;
  s.X = q.X;
  s.R = q.R;
  s.Gamma = p.Gamma;
  s.Pi = p.Pi;
  s.Pi2 = p.Pi2;
  s.x2 = q.x2;
  s.gamma2 = p.gamma2;
  s.R2 = q.R2;
  return s;
}

CompositionScheme::CompositionScheme(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw Error("composition scheme needs at least one substep");
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error("composition weights sum to " + std::to_string(sum) +
                ", expected 1 (consistency)");
  }
}

CompositionScheme CompositionScheme::yoshida4() {
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w2 = 1.0 - 2.0 * w1;  // equals -cbrt(2)/(2 - cbrt(2))
  return CompositionScheme({w1, w2, w1});
}

CompositionScheme CompositionScheme::single() { return CompositionScheme({1.0}); }

}  // namespace fullbody
