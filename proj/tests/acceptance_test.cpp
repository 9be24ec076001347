// Acceptance suite: one test per criterion, each printing a PASS/FAIL line
// with its wall time. Tolerances are pinned here, not configurable.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "fullbody/continuous.hpp"
#include "fullbody/diagnostics.hpp"
#include "fullbody/lgvi.hpp"
#include "fullbody/simulation.hpp"
#include "test_util.hpp"

namespace fullbody {
namespace {

using testing::flyby_config;
using testing::kepler_pair;
using testing::random_body;
using testing::random_rotation_matrix;
using testing::random_spd;
using testing::random_symmetric;
using testing::random_unit;
using testing::random_vec3;
using testing::uniform;

class Criterion : public ::testing::Test {
protected:
  void SetUp() override { start_ = std::chrono::steady_clock::now(); }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  void finish(int number, const char* name, double limit_seconds) {
    const double t = elapsed();
    const bool ok = !HasFailure() && t < limit_seconds;
    std::printf("[ACCEPTANCE] criterion %d (%s): %s in %.2f s (limit %.0f s)\n",
                number, name, ok ? "PASS" : "FAIL", t, limit_seconds);
    std::fflush(stdout);
    EXPECT_LT(t, limit_seconds) << "criterion " << number << " over its budget";
  }

private:
  std::chrono::steady_clock::time_point start_;
};

TEST_F(Criterion, 1_IdentitySuite) {
  for (int i = 0; i < 1000; ++i) {
    Mat3 a;
    Mat3 b;
    a << random_vec3().transpose(), random_vec3().transpose(),
        random_vec3().transpose();
    b << random_vec3().transpose(), random_vec3().transpose(),
        random_vec3().transpose();
    const double t = (a * b).trace();
    ASSERT_NEAR((b * a).trace(), t, 1e-13);
    ASSERT_NEAR((b.transpose() * a.transpose()).trace(), t, 1e-13);
    ASSERT_NEAR((a.transpose() * b.transpose()).trace(), t, 1e-13);

    const Mat3 p = hat(random_vec3());
    const Mat3 q = random_symmetric();
    ASSERT_NEAR((p * q).trace(), 0.0, 1e-13);

    const Vec3 x = random_vec3();
    const Vec3 y = random_vec3();
    ASSERT_EQ((hat(x).transpose() + hat(x)).norm(), 0.0);
    ASSERT_LT((hat(x.cross(y)) - (hat(x) * hat(y) - hat(y) * hat(x))).norm(), 1e-13);
    ASSERT_LT((hat(x.cross(y)) - (y * x.transpose() - x * y.transpose())).norm(),
              1e-13);

    const Mat3 r = random_rotation_matrix();
    ASSERT_LT((hat(r * x) - r * hat(x) * r.transpose()).norm(), 1e-13);
    ASSERT_LT((hat(x).transpose() * hat(x) -
               (x.squaredNorm() * Mat3::Identity() - x * x.transpose()))
                  .norm(),
              1e-13);

    const Mat3 j_d = random_symmetric();
    const Mat3 j = std_from_nonstd(j_d);
    const Vec3 w = random_vec3();
    ASSERT_LT((hat(j * w) - hat(w) * j_d - j_d * hat(w)).norm(), 1e-13);
  }
  finish(1, "identity suite", 1.0);
}

TEST_F(Criterion, 2_GradientOracle) {
  const double step = 1e-6;
  const BodyPair dumbbells = flyby_config().pair;
  const BodyPair clouds{random_body(6, 1.3), random_body(4, 2.4),
                        normalized_gravity(1.3, 2.4)};
  for (int i = 0; i < 100; ++i) {
    const BodyPair& pair = (i % 2 == 0) ? dumbbells : clouds;
    const Vec3 x = random_vec3(0.5) + Vec3(1.8, 0, 0);
    const Mat3 r = random_rotation_matrix();
    const PotentialEval u = eval_relative(pair, x, r);

    for (int c = 0; c < 3; ++c) {
      Vec3 p = x;
      Vec3 m = x;
      p(c) += step;
      m(c) -= step;
      const double fd =
          (eval_relative(pair, p, r).U - eval_relative(pair, m, r).U) / (2 * step);
      ASSERT_NEAR(u.dU_dX(c), fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        Mat3 p = r;
        Mat3 m = r;
        p(a, b) += step;
        m(a, b) -= step;
        const double fd =
            (eval_relative(pair, x, p).U - eval_relative(pair, x, m).U) / (2 * step);
        ASSERT_NEAR(u.dU_dR(a, b), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }

    // Jacobian of the implicit solver's forward map.
    const Mat3 j = std_from_nonstd(random_spd(0.05, 1.0));
    const Vec3 f = uniform(0.0, 1.5) * random_unit();
    const Mat3 grad = implicit_forward_map_jacobian(j, f);
    for (int c = 0; c < 3; ++c) {
      Vec3 p = f;
      Vec3 m = f;
      p(c) += step;
      m(c) -= step;
      const Vec3 fd =
          (implicit_forward_map(j, p) - implicit_forward_map(j, m)) / (2 * step);
      ASSERT_LT((grad.col(c) - fd).norm() / fd.norm(), 1e-6);
    }
  }
  finish(2, "gradient oracle", 5.0);
}

TEST_F(Criterion, 3_ImplicitSolver) {
  std::vector<int> iterations;
  for (int i = 0; i < 1000; ++i) {
    const Mat3 j_d = random_spd(0.05, 1.0);
    const Mat3 j = std_from_nonstd(j_d);
    const Vec3 f_star = uniform(0.0, 1.0) * random_unit();
    const Vec3 g = implicit_forward_map(j, f_star);
    const StepIncrement inc = solve_implicit_F(j_d, g);
    ASSERT_LT((inc.f - f_star).norm(), 1e-12);
    const Mat3 residual =
        inc.F.matrix() * j_d - j_d * inc.F.matrix().transpose() - hat(g);
    ASSERT_LT(residual.norm(), 1e-13);
    iterations.push_back(inc.iterations_used);
  }
  std::sort(iterations.begin(), iterations.end());
  EXPECT_LE(iterations[iterations.size() / 2], 4);
  EXPECT_LE(iterations.back(), 8);
  std::printf("  newton iterations over 1000 solves: median %d, max %d\n",
              iterations[iterations.size() / 2], iterations.back());
  finish(3, "implicit solver", 2.0);
}

TEST_F(Criterion, 4_FlybyRun) {
  const SimConfig cfg = flyby_config();  // lgvi-relative-h, h = 1e-3, t = 12
  const RunResult result = run(cfg);

  EXPECT_LE(result.summary.max_orth_err, 1e-12);
  EXPECT_LE(result.summary.max_energy_dev, 1e-5);
  EXPECT_LE(result.summary.max_gamma_dev, 1e-12);
  EXPECT_LE(result.summary.max_pi_dev, 1e-10 * result.summary.pi0_norm);

  // No secular energy trend, assessed on the run extended tenfold so each
  // decile spans a full flyby-sized window: the bounded error oscillation
  // must not grow once the encounter is past.
  SimConfig extended = cfg;
  extended.t_final = 10.0 * cfg.t_final;
  const RunResult long_run = run(extended);
  EXPECT_LE(long_run.summary.decile_energy_dev[9],
            2.0 * long_run.summary.decile_energy_dev[0]);
  EXPECT_GT(long_run.summary.decile_energy_dev[0], 0.0);
  std::printf(
      "  max|E-E0| %.3e (<= 1e-5), orth %.3e (<= 1e-12), gamma %.3e, "
      "pi rel %.3e; 10x-run decile ratio %.2f (<= 2)\n",
      result.summary.max_energy_dev, result.summary.max_orth_err,
      result.summary.max_gamma_dev,
      result.summary.max_pi_dev / result.summary.pi0_norm,
      long_run.summary.decile_energy_dev[9] /
          long_run.summary.decile_energy_dev[0]);
  finish(4, "two-dumbbell flyby conservation", 30.0);
}

TEST_F(Criterion, 5_RungeKuttaContrast) {
  SimConfig cfg = flyby_config();
  const CompareReport report = compare(cfg);
  // Orthogonality drift at least four orders of magnitude above the
  // variational run's.
  EXPECT_GE(report.rk4.max_orth_err, 1e4 * report.lgvi.max_orth_err);

  // Positive linear-fit growth trend of the drift along the RK4 trajectory.
  RelativeStateH s = cfg.initial;
  std::vector<double> errs;
  const int steps = static_cast<int>(std::llround(cfg.t_final / cfg.h));
  for (int k = 0; k < steps; ++k) {
    s = rk4_step(
        [&](const RelativeStateH& y) { return deriv_relative_hamiltonian(cfg.pair, y); },
        s, cfg.h);
    if (k % 200 == 199) {
      errs.push_back(std::max(orthogonality_error(s.R), orthogonality_error(s.R2)));
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += errs[i];
    sxx += x * x;
    sxy += x * errs[i];
  }
  const double n = static_cast<double>(errs.size());
  EXPECT_GT((n * sxy - sx * sy) / (n * sxx - sx * sx), 0.0);
  std::printf("  orth drift: rk4 %.3e vs lgvi %.3e (ratio %.0f, >= 1e4)\n",
              report.rk4.max_orth_err, report.lgvi.max_orth_err,
              report.rk4.max_orth_err / report.lgvi.max_orth_err);
  finish(5, "Runge-Kutta contrast", 30.0);
}

TEST_F(Criterion, 6_CrossFormEquivalence) {
  SimConfig cfg = flyby_config();
  cfg.t_final = 2.0;
  const NBodySystem sys = to_system(cfg.pair);
  const double h = cfg.h;
  const int steps = static_cast<int>(std::llround(cfg.t_final / h));

  // Four chains advancing the same initial state, consistently initialized
  // through the discrete fiber derivative and the reduction maps.
  RelativeStateH rel = cfg.initial;
  InertialStateH in = reconstruct(cfg.pair, cfg.initial);

  RelativeConfig rel_qa = config_of(rel);
  InertialConfig in_qa = config_of(in);
  RelativeConfig rel_qb;  // set after the first step
  InertialConfig in_qb;

  double max_dev = 0.0;
  const auto account = [&max_dev](const InertialStateH& ref, const Vec3& x1,
                                  const Mat3& r1, const Vec3& x2, const Mat3& r2) {
    max_dev = std::max(max_dev, (ref.bodies[0].x - x1).norm());
    max_dev = std::max(max_dev, (ref.bodies[0].R - r1).norm());
    max_dev = std::max(max_dev, (ref.bodies[1].x - x2).norm());
    max_dev = std::max(max_dev, (ref.bodies[1].R - r2).norm());
  };

  for (int k = 1; k <= steps; ++k) {
    rel = step_relative_hamiltonian(cfg.pair, rel, h);
    in = step_inertial_hamiltonian(sys, in, h);

    RelativeConfig rel_qc;
    InertialConfig in_qc;
    if (k == 1) {
      rel_qc = config_of(rel);
      in_qc = config_of(in);
    } else {
      rel_qc = step_relative_lagrangian(cfg.pair, rel_qa, rel_qb, h);
      in_qc = step_inertial_lagrangian(sys, in_qa, in_qb, h);
      rel_qa = rel_qb;
      in_qa = in_qb;
    }
    rel_qb = rel_qc;
    in_qb = in_qc;

    // Reference trajectory: the relative Hamiltonian map, reconstructed.
    const InertialStateH ref = reconstruct(cfg.pair, rel);
    account(ref, in.bodies[0].x, in.bodies[0].R, in.bodies[1].x, in.bodies[1].R);
    account(ref, Vec3(rel_qc.x2 + rel_qc.R2 * rel_qc.X), Mat3(rel_qc.R2 * rel_qc.R),
            rel_qc.x2, rel_qc.R2);
    account(ref, in_qc.x[0], in_qc.R[0], in_qc.x[1], in_qc.R[1]);
  }
  EXPECT_LT(max_dev, 1e-8);
  std::printf("  pointwise inertial-frame deviation across the four maps: %.3e"
              " (<= 1e-8)\n",
              max_dev);
  finish(6, "cross-form equivalence", 20.0);
}

TEST_F(Criterion, 7_OrderOfAccuracy) {
  SimConfig cfg = flyby_config();
  cfg.t_final = 2.0;

  cfg.integrator = Integrator::LgviRelativeH;
  const ConvergenceReport base = converge(cfg, {4e-3, 2e-3, 1e-3, 5e-4});
  EXPECT_NEAR(base.slope, 2.0, 0.1);

  cfg.integrator = Integrator::LgviYoshida4;
  const ConvergenceReport composed = converge(cfg, {4e-3, 2e-3, 1e-3});
  EXPECT_NEAR(composed.slope, 4.0, 0.3);

  cfg.integrator = Integrator::Rk4Inertial;
  const ConvergenceReport rk = converge(cfg, {4e-3, 2e-3, 1e-3});
  EXPECT_NEAR(rk.slope, 4.0, 0.3);
  std::printf("  slopes: base %.3f (2.0 +- 0.1), composed %.3f (4.0 +- 0.3), "
              "rk4 %.3f (4.0 +- 0.3)\n",
              base.slope, composed.slope, rk.slope);
  finish(7, "order of accuracy", 120.0);
}

TEST_F(Criterion, 8_FreeBodyAndKeplerDegenerations) {
  // Torque-free rigid body: momentum norm conserved through 10^4 steps,
  // energy bounded.
  {
    const Mat3 j = Vec3(0.11, 0.21, 0.31).asDiagonal();
    const NBodySystem sys{
        {BodyModel(1.3, {{Vec3::Zero(), 1.0}}, InertiaPair::from_standard(j))}, 1.0};
    InertialStateH s;
    s.bodies.push_back({Vec3::Zero(), Mat3::Identity(), Vec3::Zero(),
                        Vec3(0.2, -0.1, 0.25)});
    const double pi0 = s.bodies[0].Pi.norm();
    const double e0 = diagnostics_inertial(sys, s).E;
    double max_pi_drift = 0.0;
    double max_e_dev = 0.0;
    for (int k = 0; k < 10000; ++k) {
      s = step_inertial_hamiltonian(sys, s, 1e-3);
      max_pi_drift = std::max(max_pi_drift, std::abs(s.bodies[0].Pi.norm() - pi0));
      max_e_dev =
          std::max(max_e_dev, std::abs(diagnostics_inertial(sys, s).E - e0));
    }
    EXPECT_LT(max_pi_drift, 1e-13);
    EXPECT_LT(max_e_dev, 1e-6);  // bounded, near machine level for this flow
  }

  // Point bodies on a circular orbit: the trajectory closes to 1e-4 per
  // period at h = 1e-3.
  {
    const BodyPair pair = kepler_pair();
    RelativeStateH s;
    s.X = Vec3(1, 0, 0);
    s.Gamma = Vec3(0, 1, 0);  // reduced mass 1, circular speed 1, period 2 pi
    const double h = 1e-3;
    const long long n = std::llround(2.0 * M_PI / h);
    for (long long k = 0; k < n; ++k) {
      s = step_relative_hamiltonian(pair, s, h);
    }
    const double t_end = static_cast<double>(n) * h;
    const Vec3 expected(std::cos(t_end), std::sin(t_end), 0.0);
    EXPECT_LT((s.X - expected).norm(), 1e-4);
  }
  finish(8, "free-body and point-mass degenerations", 10.0);
}

}  // namespace
}  // namespace fullbody
