#pragma once

#include "geomctl/so3.hpp"
#include "geomctl/vehicle.hpp"

namespace geomctl {

/// Gains of the attitude PID. k_R and k_Omega must be positive; k_I and c2
/// may be zero, which disables (or leaves unweighted) the integral action.
struct AttitudeGains {
  double k_R = 0.0;
  double k_Omega = 0.0;
  double k_I = 0.0;
  double c2 = 0.0;

  void validate() const;
};

/// Smooth attitude reference with dR_d/dt = R_d hat(Omega_d).
struct AttitudeCommand {
  Mat3 R_d = Mat3::Identity();
  Vec3 Omega_d = Vec3::Zero();
  Vec3 Omega_d_dot = Vec3::Zero();
};

struct AttitudeErrors {
  double psi = 0.0;
  Vec3 e_R = Vec3::Zero();
  Vec3 e_Omega = Vec3::Zero();
};

AttitudeErrors attitude_errors(const RigidBodyState& s, const AttitudeCommand& cmd);

/// d(e_I)/dt = e_Omega + c2 e_R.
Vec3 integral_rate(const Vec3& e_R, const Vec3& e_Omega, const AttitudeGains& g);

/// Control moment
///   M = -k_R e_R - k_Omega e_Omega - k_I e_I
///       + hat(R^T R_d Omega_d) J R^T R_d Omega_d + J R^T R_d dOmega_d.
/// The gyroscopic term Omega x J Omega is left uncancelled.
Vec3 control_moment(const RigidBodyState& s, const AttitudeCommand& cmd, const Vec3& e_I,
                    const AttitudeGains& g, const Mat3& J);

}  // namespace geomctl
