#pragma once

#include <optional>
#include <vector>

#include "fullbody/inertia.hpp"
#include "fullbody/so3.hpp"

namespace fullbody {

/// One mass point of a rigid body, in the body-fixed frame.
struct PointMass {
  Vec3 offset;      // from the body's center of mass
  double fraction;  // share of the total mass
};

/// A rigid body modeled as a finite collection of point masses. The body
/// frame origin sits at the center of mass, so the weighted offsets must sum
/// to zero. The inertia is derived from the point masses unless an explicit
/// pair is supplied; an override is the normal way to account for mass
/// elements with self-inertia (e.g. rigid spheres), which gravitate exactly
/// like point masses but carry extra moment of inertia.
class BodyModel {
public:
  BodyModel(double mass, std::vector<PointMass> points);
  BodyModel(double mass, std::vector<PointMass> points, const InertiaPair& inertia);

  double mass() const { return mass_; }
  const std::vector<PointMass>& point_masses() const { return points_; }
  const InertiaPair& inertia() const { return inertia_; }
  bool inertia_overridden() const { return overridden_; }

  /// Nonstandard moment of inertia implied by the point masses alone,
  /// mass * sum_p fraction_p offset_p offset_p^T.
  Mat3 point_mass_nonstd_inertia() const;

private:
  BodyModel(double mass, std::vector<PointMass> points,
            std::optional<InertiaPair> inertia);

  double mass_;
  std::vector<PointMass> points_;
  InertiaPair inertia_;
  bool overridden_;
};

/// Two equal point masses joined by a massless rod of the given length,
/// aligned with the first body axis.
BodyModel dumbbell_model(double mass, double length);

/// Same shape, with the moment of inertia replaced by user-specified values.
BodyModel dumbbell_model(double mass, double length, const InertiaPair& inertia);

}  // namespace fullbody
