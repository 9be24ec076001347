#include "fullbody/so3.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fullbody/inertia.hpp"
#include "test_util.hpp"

namespace fullbody {
namespace {

using testing::random_rotation_matrix;
using testing::random_symmetric;
using testing::random_unit;
using testing::random_vec3;
using testing::uniform;

// Independent oracle: 30-term truncated series of exp(A).
Mat3 exp_series(const Mat3& a, int terms) {
  Mat3 sum = Mat3::Identity();
  Mat3 term = Mat3::Identity();
  for (int k = 1; k <= terms; ++k) {
    term = Mat3(term * a / static_cast<double>(k));
    sum += term;
  }
  return sum;
}

Vec3 cross_oracle(const Vec3& a, const Vec3& b) {
  return Vec3(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
              a.x() * b.y() - a.y() * b.x());
}

TEST(Hat, ZeroMapsToZeroMatrix) {
  EXPECT_TRUE(hat(Vec3::Zero()).isZero(0.0));
}

TEST(Hat, DefiningCrossProductCondition) {
  const Vec3 result = hat(Vec3(1, 0, 0)) * Vec3(0, 1, 0);
  EXPECT_NEAR((result - Vec3(0, 0, 1)).norm(), 0.0, 0.0);
}

TEST(Hat, MatchesComponentwiseCrossProduct) {
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = random_vec3();
    const Vec3 w = random_vec3();
    EXPECT_EQ((hat(v) * w - cross_oracle(v, w)).norm(), 0.0);
  }
}

TEST(Hat, SkewSymmetry) {
  for (int i = 0; i < 100; ++i) {
    const Vec3 v = random_vec3();
    EXPECT_EQ((hat(v).transpose() + hat(v)).norm(), 0.0);
  }
}

TEST(Vee, RoundTripsHat) {
  EXPECT_EQ(vee(Mat3::Zero()).norm(), 0.0);
  EXPECT_EQ((vee(hat(Vec3(1, 2, 3))) - Vec3(1, 2, 3)).norm(), 0.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 v = random_vec3(5.0);
    EXPECT_EQ((vee(hat(v)) - v).norm(), 0.0);
  }
}

TEST(Vee, RejectsNonSkewInput) {
  Mat3 m = Mat3::Identity();
  EXPECT_THROW(vee(m), NonSkewInput);
  m = hat(Vec3(1, 2, 3));
  m(0, 1) += 1e-6;
  EXPECT_THROW(vee(m), NonSkewInput);
}

TEST(Vee, ReturnsSkewPart) {
  const Mat3 skew = hat(Vec3(0.3, -0.7, 0.2));
  const Mat3 contaminated = skew + 1e-12 * random_symmetric();
  EXPECT_LT((vee(contaminated) - Vec3(0.3, -0.7, 0.2)).norm(), 1e-11);
}

TEST(RodriguesExp, IdentityAtZero) {
  EXPECT_EQ((rodrigues_exp(Vec3::Zero()).matrix() - Mat3::Identity()).norm(), 0.0);
}

TEST(RodriguesExp, QuarterTurnAboutE3) {
  const Rotation r = rodrigues_exp(Vec3(0, 0, M_PI / 2));
  EXPECT_LT((r * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(RodriguesExp, MatchesTruncatedSeries) {
  // 20 terms are ample for |f| <= 1.5 (tail below 1e-15).
  for (int i = 0; i < 200; ++i) {
    const Vec3 f = uniform(0.0, 1.5) * random_unit();
    EXPECT_LT((rodrigues_exp(f).matrix() - exp_series(hat(f), 20)).norm(), 1e-13);
  }
  // Larger angles against a longer series.
  for (int i = 0; i < 200; ++i) {
    const Vec3 f = uniform(0.0, 3.1) * random_unit();
    EXPECT_LT((rodrigues_exp(f).matrix() - exp_series(hat(f), 30)).norm(), 1e-13);
  }
}

TEST(RodriguesExp, SmallAngleBranch) {
  for (const double angle : {1e-12, 1e-9, 5e-9, 2e-8, 1e-6}) {
    const Vec3 f = angle * random_unit();
    EXPECT_LT((rodrigues_exp(f).matrix() - exp_series(hat(f), 8)).norm(), 1e-15);
    EXPECT_LT(orthogonality_error(rodrigues_exp(f).matrix()), 1e-15);
  }
}

TEST(RodriguesExp, StaysOnTheGroup) {
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = rodrigues_exp(uniform(0.0, 3.1) * random_unit()).matrix();
    EXPECT_LT(orthogonality_error(r), 1e-14);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-14);
  }
}

TEST(OrthogonalityError, KnownValues) {
  EXPECT_EQ(orthogonality_error(Mat3::Identity()), 0.0);
  // ||I - (1.01)^2 I||_F = 0.0201 sqrt(3)
  EXPECT_NEAR(orthogonality_error(Mat3(1.01 * Mat3::Identity())),
              0.0201 * std::sqrt(3.0), 1e-15);
}

TEST(Rotation, GateRejectsOffGroupMatrices) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = 1.0 + 1e-10;
  EXPECT_THROW(Rotation{m}, NotARotation);
  // Orthogonal with determinant -1 (a reflection).
  EXPECT_THROW(Rotation{Mat3(Vec3(1, 1, -1).asDiagonal())}, NotARotation);
  EXPECT_NO_THROW(Rotation{Mat3::Identity()});
}

// --- the matrix/vector identities used throughout -------------------------

TEST(Identities, TraceProductSymmetries) {
  for (int i = 0; i < 1000; ++i) {
    Mat3 a;
    Mat3 b;
    a << random_vec3(), random_vec3(), random_vec3();
    b << random_vec3(), random_vec3(), random_vec3();
    const double t = (a * b).trace();
    EXPECT_NEAR((b * a).trace(), t, 1e-13);
    EXPECT_NEAR((b.transpose() * a.transpose()).trace(), t, 1e-13);
    EXPECT_NEAR((a.transpose() * b.transpose()).trace(), t, 1e-13);
  }
}

TEST(Identities, TraceOfSkewTimesSymmetricVanishes) {
  for (int i = 0; i < 1000; ++i) {
    const Mat3 p = hat(random_vec3());
    const Mat3 q = random_symmetric();
    EXPECT_NEAR((p * q).trace(), 0.0, 1e-13);
  }
}

TEST(Identities, HatOfCrossProduct) {
  // S(x cross y) = S(x)S(y) - S(y)S(x) = y x^T - x y^T
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = random_vec3();
    const Vec3 y = random_vec3();
    const Mat3 lhs = hat(x.cross(y));
    EXPECT_LT((lhs - (hat(x) * hat(y) - hat(y) * hat(x))).norm(), 1e-13);
    EXPECT_LT((lhs - (y * x.transpose() - x * y.transpose())).norm(), 1e-13);
  }
}

TEST(Identities, HatConjugation) {
  // S(R x) = R S(x) R^T
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = random_rotation_matrix();
    const Vec3 x = random_vec3();
    EXPECT_LT((hat(r * x) - r * hat(x) * r.transpose()).norm(), 1e-13);
  }
}

TEST(Identities, HatTransposeTimesHat) {
  // S(x)^T S(x) = (x.x) I - x x^T
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = random_vec3();
    const Mat3 expected = x.squaredNorm() * Mat3::Identity() - x * x.transpose();
    EXPECT_LT((hat(x).transpose() * hat(x) - expected).norm(), 1e-13);
  }
}

// --- inertia conversions ----------------------------------------------------

TEST(Inertia, StdFromNonstdKnownValues) {
  EXPECT_LT((std_from_nonstd(Mat3::Identity()) - Mat3(2.0 * Mat3::Identity())).norm(),
            1e-15);
  const Mat3 j = std_from_nonstd(Vec3(1.0, 2.0, 3.0).asDiagonal());
  EXPECT_LT((j - Mat3(Vec3(5.0, 4.0, 3.0).asDiagonal())).norm(), 1e-15);
}

TEST(Inertia, AngularMomentumCommutationIdentity) {
  // S(J w) = S(w) J_d + J_d S(w) with J = tr(J_d) I - J_d.
  for (int i = 0; i < 1000; ++i) {
    const Mat3 j_d = random_symmetric();
    const Mat3 j = std_from_nonstd(j_d);
    const Vec3 w = random_vec3();
    const Mat3 residual = hat(j * w) - hat(w) * j_d - j_d * hat(w);
    EXPECT_LT(residual.norm(), 1e-13);
  }
}

TEST(Inertia, NonstdFromStdInvertsAndMatchesHandComputation) {
  EXPECT_LT((nonstd_from_std(Mat3(2.0 * Mat3::Identity())) - Mat3::Identity()).norm(),
            1e-15);

  // Hand-check oracle tr(J)/2 I - J on the heavier dumbbell's inertia.
  const Mat3 j2 = Vec3(0.0030, 0.1905, 0.1905).asDiagonal();
  const double half_trace = 0.5 * (0.0030 + 0.1905 + 0.1905);
  const Mat3 expected = Vec3(half_trace - 0.0030, half_trace - 0.1905,
                             half_trace - 0.1905)
                            .asDiagonal();
  EXPECT_LT((nonstd_from_std(j2) - expected).norm(), 1e-16);
  EXPECT_LT((expected - Mat3(Vec3(0.1890, 0.0015, 0.0015).asDiagonal())).norm(),
            1e-15);

  for (int i = 0; i < 200; ++i) {
    const Mat3 j = random_symmetric();
    EXPECT_LT((std_from_nonstd(nonstd_from_std(j)) - j).norm(), 1e-14);
  }
}

TEST(Inertia, RejectsNonSymmetricInput) {
  Mat3 m = Mat3::Identity();
  m(0, 1) = 0.1;
  EXPECT_THROW(std_from_nonstd(m), NonSymmetricInput);
  EXPECT_THROW(nonstd_from_std(m), NonSymmetricInput);
  EXPECT_THROW(InertiaPair::from_nonstandard(m), NonSymmetricInput);
}

TEST(Inertia, PairKeepsBothFormsConsistent) {
  for (int i = 0; i < 100; ++i) {
    const Mat3 j_d = testing::random_spd();
    const InertiaPair pair = InertiaPair::from_nonstandard(j_d);
    EXPECT_LT((pair.standard() - std_from_nonstd(j_d)).norm(), 1e-15);
    const InertiaPair back = InertiaPair::from_standard(pair.standard());
    EXPECT_LT((back.nonstandard() - j_d).norm(), 1e-14);
  }
}

}  // namespace
}  // namespace fullbody
