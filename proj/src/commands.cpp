#include "geomctl/commands.hpp"

#include <cmath>
#include <numbers>

namespace geomctl {

using std::numbers::pi;

AttitudeCommand attitude_command_flip(double t) {
  const Mat3 yaw = exp_so3(pi * t * Vec3::UnitZ());
  const Mat3 pitch = exp_so3(4.0 * pi * t * Vec3::UnitY());
  AttitudeCommand cmd;
  cmd.R_d = yaw * pitch;
  // Omega_d = pitch^T (pi e3) + 4 pi e2, and d/dt pitch^T = -hat(4 pi e2) pitch^T.
  const Vec3 yaw_rate_body = pitch.transpose() * (pi * Vec3::UnitZ());
  cmd.Omega_d = yaw_rate_body + 4.0 * pi * Vec3::UnitY();
  cmd.Omega_d_dot = -(4.0 * pi * Vec3::UnitY()).cross(yaw_rate_body);
  return cmd;
}

Mat3 euler321_rotation(double roll, double pitch, double yaw) {
  return exp_so3(yaw * Vec3::UnitZ()) * exp_so3(pitch * Vec3::UnitY()) *
         exp_so3(roll * Vec3::UnitX());
}

AttitudeCommand euler321_attitude(const Vec3& angles, const Vec3& rates, const Vec3& accels) {
  const double sph = std::sin(angles.x()), cph = std::cos(angles.x());
  const double sth = std::sin(angles.y()), cth = std::cos(angles.y());
  const double dph = rates.x(), dth = rates.y(), dps = rates.z();
  const double ddph = accels.x(), ddth = accels.y(), ddps = accels.z();

  AttitudeCommand cmd;
  cmd.R_d = euler321_rotation(angles.x(), angles.y(), angles.z());
  cmd.Omega_d = Vec3(dph - dps * sth,
                     dth * cph + dps * sph * cth,
                     -dth * sph + dps * cph * cth);
  cmd.Omega_d_dot = Vec3(
      ddph - ddps * sth - dps * dth * cth,
      ddth * cph - dth * dph * sph + ddps * sph * cth + dps * dph * cph * cth -
          dps * dth * sph * sth,
      -ddth * sph - dth * dph * cph + ddps * cph * cth - dps * dph * sph * cth -
          dps * dth * cph * sth);
  return cmd;
}

AttitudeCommand euler321_command(double t) {
  const double amp = pi / 9.0;
  const double s = std::sin(pi * t);
  const double c = std::cos(pi * t);
  const Vec3 angles(amp * s, amp * c, 0.0);
  const Vec3 rates(amp * pi * c, -amp * pi * s, 0.0);
  const Vec3 accels(-amp * pi * pi * s, -amp * pi * pi * c, 0.0);
  return euler321_attitude(angles, rates, accels);
}

PositionCommand setpoint_command(const Vec3& x_d, const Vec3& b1d) {
  PositionCommand cmd;
  cmd.x_d = x_d;
  cmd.b1d = b1d;
  return cmd;
}

}  // namespace geomctl
