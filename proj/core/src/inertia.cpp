#include "fullbody/inertia.hpp"

#include <cmath>

namespace fullbody {

namespace {

void require_symmetric(const Mat3& a, const char* who, double tol) {
  const double residual = 0.5 * (a - a.transpose()).norm();
  if (!(residual <= tol * std::max(1.0, a.norm()))) {
    throw NonSymmetricInput(std::string(who) + ": input is not symmetric (residual " +
                            std::to_string(residual) + ")");
  }
}

Mat3 symmetrized(const Mat3& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

Mat3 std_from_nonstd(const Mat3& j_d) {
  require_symmetric(j_d, "std_from_nonstd", 1e-13);
  return j_d.trace() * Mat3::Identity() - j_d;
}

Mat3 nonstd_from_std(const Mat3& j) {
  require_symmetric(j, "nonstd_from_std", 1e-13);
  return 0.5 * j.trace() * Mat3::Identity() - j;
}

InertiaPair InertiaPair::from_nonstandard(const Mat3& j_d) {
  require_symmetric(j_d, "InertiaPair", 1e-14);
  const Mat3 sym = symmetrized(j_d);
  return InertiaPair(sym, std_from_nonstd(sym));
}

InertiaPair InertiaPair::from_standard(const Mat3& j) {
  require_symmetric(j, "InertiaPair", 1e-14);
  const Mat3 sym = symmetrized(j);
  return InertiaPair(nonstd_from_std(sym), sym);
}

}  // namespace fullbody
