#include "geomctl/so3.hpp"

#include <algorithm>
#include <cmath>

#include "geomctl/errors.hpp"

namespace geomctl {

Mat3 hat(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return S;
}

Vec3 vee(const Mat3& A) {
  const Mat3 sym = 0.5 * (A + A.transpose());
  if (sym.norm() > 1e-6) {
    throw ValidationError("vee: matrix is not skew-symmetric (|sym part| = " +
                          std::to_string(sym.norm()) + ")");
  }
  const Mat3 skew = 0.5 * (A - A.transpose());
  return {skew(2, 1), skew(0, 2), skew(1, 0)};
}

Mat3 exp_so3(const Vec3& v) {
  const double theta2 = v.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < 1e-6) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 K = hat(v);
  return Mat3::Identity() + a * K + b * K * K;
}

Vec3 dexp_inv(const Vec3& theta, const Vec3& omega) {
  const Vec3 c1 = theta.cross(omega);
  return omega + 0.5 * c1 + theta.cross(c1) / 12.0;
}

bool is_rotation(const Mat3& R, double tol) {
  if (!R.allFinite()) return false;
  const double ortho = (R.transpose() * R - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Mat3 project_to_so3(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 D = Mat3::Identity();
  D(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * D * svd.matrixV().transpose();
}

double error_function(const Mat3& R, const Mat3& Rd) {
  const double psi = 0.5 * (3.0 - (Rd.transpose() * R).trace());
  return std::clamp(psi, 0.0, 2.0);
}

Vec3 error_vector(const Mat3& R, const Mat3& Rd) {
  const Mat3 RdtR = Rd.transpose() * R;
  return 0.5 * vee(RdtR - RdtR.transpose());
}

Vec3 angular_velocity_error(const Mat3& R, const Mat3& Rd, const Vec3& Omega,
                            const Vec3& Omega_d) {
  return Omega - R.transpose() * Rd * Omega_d;
}

Vec3 normalized_projection(const Vec3& b1d, const Vec3& b3c) {
  if (b1d.cross(b3c).norm() <= 1e-6) {
    throw ParallelInputError("normalized_projection: heading is parallel to the thrust axis");
  }
  const Vec3 p = b1d - b1d.dot(b3c) * b3c;
  return p / p.norm();
}

}  // namespace geomctl
