#include "geomctl/attitude_controller.hpp"

#include "geomctl/errors.hpp"

namespace geomctl {

void AttitudeGains::validate() const {
  if (!(k_R > 0.0) || !(k_Omega > 0.0)) {
    throw ValidationError("attitude gains k_R and k_Omega must be positive");
  }
  if (!(k_I >= 0.0) || !(c2 >= 0.0)) {
    throw ValidationError("attitude gains k_I and c2 must be non-negative");
  }
}

AttitudeErrors attitude_errors(const RigidBodyState& s, const AttitudeCommand& cmd) {
  return {error_function(s.R, cmd.R_d), error_vector(s.R, cmd.R_d),
          angular_velocity_error(s.R, cmd.R_d, s.Omega, cmd.Omega_d)};
}

Vec3 integral_rate(const Vec3& e_R, const Vec3& e_Omega, const AttitudeGains& g) {
  return e_Omega + g.c2 * e_R;
}

Vec3 control_moment(const RigidBodyState& s, const AttitudeCommand& cmd, const Vec3& e_I,
                    const AttitudeGains& g, const Mat3& J) {
  const AttitudeErrors err = attitude_errors(s, cmd);
  const Mat3 RtRd = s.R.transpose() * cmd.R_d;
  const Vec3 w = RtRd * cmd.Omega_d;
  return -g.k_R * err.e_R - g.k_Omega * err.e_Omega - g.k_I * e_I + w.cross(J * w) +
         J * (RtRd * cmd.Omega_d_dot);
}

}  // namespace geomctl
