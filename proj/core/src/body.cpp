#include "fullbody/body.hpp"

#include <cmath>
#include <utility>

namespace fullbody {

namespace {

Mat3 nonstd_inertia_of(double mass, const std::vector<PointMass>& points) {
  Mat3 j_d = Mat3::Zero();
  for (const PointMass& p : points) {
    j_d += p.fraction * (p.offset * p.offset.transpose());
  }
  return mass * j_d;
}

}  // namespace

BodyModel::BodyModel(double mass, std::vector<PointMass> points)
    : BodyModel(mass, std::move(points), std::optional<InertiaPair>{}) {}

BodyModel::BodyModel(double mass, std::vector<PointMass> points,
                     const InertiaPair& inertia)
    : BodyModel(mass, std::move(points), std::optional<InertiaPair>{inertia}) {}

BodyModel::BodyModel(double mass, std::vector<PointMass> points,
                     std::optional<InertiaPair> inertia)
    : mass_(mass),
      points_(std::move(points)),
      inertia_(inertia ? *inertia
                       : InertiaPair::from_nonstandard(nonstd_inertia_of(mass, points_))),
      overridden_(inertia.has_value()) {
  if (!(mass_ > 0.0)) {
    throw NonPositiveMass("body mass must be positive, got " + std::to_string(mass_));
  }
  if (points_.empty()) {
    throw Error("body needs at least one point mass");
  }

  double total = 0.0;
  Vec3 weighted_center = Vec3::Zero();
  double scale = 0.0;
  for (const PointMass& p : points_) {
    total += p.fraction;
    weighted_center += p.fraction * p.offset;
    scale = std::max(scale, p.offset.norm());
  }
  if (std::abs(total - 1.0) > 1e-14 * points_.size()) {
    throw Error("point mass fractions sum to " + std::to_string(total) +
                ", expected 1");
  }
  if (weighted_center.norm() > 1e-14 * std::max(1.0, scale)) {
    throw Error("body frame origin is off the center of mass by " +
                std::to_string(weighted_center.norm()));
  }
  if (!overridden_) {
    const double residual = (inertia_.nonstandard() - nonstd_inertia_of(mass_, points_)).norm();
    if (residual > 1e-12 * std::max(1.0, inertia_.nonstandard().norm())) {
      throw Error("derived inertia is inconsistent with the point masses");
    }
  }
}

Mat3 BodyModel::point_mass_nonstd_inertia() const {
  return nonstd_inertia_of(mass_, points_);
}

BodyModel dumbbell_model(double mass, double length) {
  if (!(mass > 0.0)) {
    throw NonPositiveMass("dumbbell mass must be positive, got " + std::to_string(mass));
  }
  if (length < 0.0) {
    throw Error("dumbbell length must be non-negative");
  }
  const Vec3 tip(0.5 * length, 0.0, 0.0);
  return BodyModel(mass, {{tip, 0.5}, {-tip, 0.5}});
}

BodyModel dumbbell_model(double mass, double length, const InertiaPair& inertia) {
  if (!(mass > 0.0)) {
    throw NonPositiveMass("dumbbell mass must be positive, got " + std::to_string(mass));
  }
  if (length < 0.0) {
    throw Error("dumbbell length must be non-negative");
  }
  const Vec3 tip(0.5 * length, 0.0, 0.0);
  return BodyModel(mass, {{tip, 0.5}, {-tip, 0.5}}, inertia);
}

}  // namespace fullbody
