#pragma once

#include "fullbody/so3.hpp"

namespace fullbody {

/// Standard moment of inertia from the nonstandard one:
/// J = tr(J_d) I - J_d. The result satisfies
/// S(J w) = S(w) J_d + J_d S(w) for every w.
Mat3 std_from_nonstd(const Mat3& j_d);

/// Inverse relation, J_d = tr(J)/2 I - J.
Mat3 nonstd_from_std(const Mat3& j);

/// A body's nonstandard/standard moment-of-inertia matrices, kept consistent
/// with each other. Both are symmetric; a degenerate axis (zero eigenvalue of
/// the standard matrix) is allowed, as for an ideal dumbbell.
class InertiaPair {
public:
  static InertiaPair from_nonstandard(const Mat3& j_d);
  static InertiaPair from_standard(const Mat3& j);

  const Mat3& nonstandard() const { return j_d_; }
  const Mat3& standard() const { return j_; }

private:
  InertiaPair(const Mat3& j_d, const Mat3& j) : j_d_(j_d), j_(j) {}

  Mat3 j_d_;
  Mat3 j_;
};

}  // namespace fullbody
