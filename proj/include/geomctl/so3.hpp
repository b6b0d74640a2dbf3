#pragma once

#include <Eigen/Dense>

namespace geomctl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Skew-symmetric matrix with hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. The input is symmetrized first (0.5 * (A - A^T)); an input
/// whose symmetric part has Frobenius norm above 1e-6 throws ValidationError.
Vec3 vee(const Mat3& A);

/// Rodrigues formula. Below |v| = 1e-6 the coefficients come from their
/// Taylor series to avoid 0/0.
Mat3 exp_so3(const Vec3& v);

/// Right Jacobian inverse of exp, truncated after the double commutator.
/// Maps a body angular velocity to the rate of the exponential coordinates
/// theta in R = R0 * exp(theta). Accurate to O(|theta|^3), which is enough
/// for a fourth order Munthe-Kaas step.
Vec3 dexp_inv(const Vec3& theta, const Vec3& omega);

/// True when |R^T R - I| <= tol and |det R - 1| <= tol.
bool is_rotation(const Mat3& R, double tol = 1e-9);

/// Nearest rotation in the Frobenius sense (polar decomposition via SVD).
Mat3 project_to_so3(const Mat3& M);

/// Attitude error function Psi = 0.5 tr(I - Rd^T R), clamped to [0, 2].
double error_function(const Mat3& R, const Mat3& Rd);

/// e_R = 0.5 vee(Rd^T R - R^T Rd).
Vec3 error_vector(const Mat3& R, const Mat3& Rd);

/// e_Omega = Omega - R^T Rd Omega_d.
Vec3 angular_velocity_error(const Mat3& R, const Mat3& Rd, const Vec3& Omega,
                            const Vec3& Omega_d);

/// Component of b1d orthogonal to the unit vector b3c, renormalized.
/// Throws ParallelInputError when |b1d x b3c| <= 1e-6.
Vec3 normalized_projection(const Vec3& b1d, const Vec3& b3c);

}  // namespace geomctl
