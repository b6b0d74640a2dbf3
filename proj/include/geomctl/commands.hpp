#pragma once

#include <cmath>
#include <numbers>

#include "geomctl/attitude_controller.hpp"
#include "geomctl/position_controller.hpp"

namespace geomctl {

/// Flip: R_d(t) = exp(pi t hat(e3)) exp(4 pi t hat(e2)), one full pitch turn
/// combined with a quarter yaw turn over 0.4 s. Rates are analytic.
AttitudeCommand attitude_command_flip(double t);

/// |Omega_d| of the flip is constant: |pi R2^T e3 + 4 pi e2| = pi sqrt(17).
inline const double kFlipOmegaMax = std::numbers::pi * std::sqrt(17.0);

/// R = Rz(yaw) Ry(pitch) Rx(roll).
Mat3 euler321_rotation(double roll, double pitch, double yaw);

/// Attitude command from 3-2-1 Euler angles and their first two derivatives.
AttitudeCommand euler321_attitude(const Vec3& angles, const Vec3& rates, const Vec3& accels);

/// roll = (pi/9) sin(pi t), pitch = (pi/9) cos(pi t), yaw = 0.
AttitudeCommand euler321_command(double t);

/// |Omega_d| of euler321_command is constant: pi^2 / 9.
inline const double kEulerOmegaMax = std::numbers::pi * std::numbers::pi / 9.0;

/// Fixed hover point with heading reference b1d.
PositionCommand setpoint_command(const Vec3& x_d, const Vec3& b1d);

}  // namespace geomctl
