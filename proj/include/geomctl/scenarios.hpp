#pragma once

#include "geomctl/simulation.hpp"

namespace geomctl {

/// Vehicle of the flip example: J = diag(0.43, 0.43, 1.02) 1e-2 kg m^2,
/// m = 0.755 kg, d = 0.169 m, c_tau_f = 0.0132 m.
QuadrotorParams reference_quadrotor();

/// delta_x = [-0.5, 0.2, 1] N, delta_R = [0.2, -0.1, -0.02] N m.
Disturbance reference_disturbance();

/// k_x 12.8, k_v 4.22, k_i 1.28, k_R 0.65, k_Omega 0.11, k_I 0.06,
/// c1 3.6, c2 0.8, sigma 1.
PositionGains reference_gains();

/// Zero-thrust flip for t < 0.4 followed by hovering at the origin with
/// b1d = e2 until t = 4. With integral = false, k_i and k_I are zeroed.
Scenario flip_scenario(bool integral = true, double dt = 1e-3);

/// Attitude-only tracking of euler321_command from hover.
Scenario euler_attitude_scenario(double duration = 4.0, double dt = 1e-3);

/// Stiffer gains that pass every position-mode condition for the reference
/// vehicle on the domain used by small_error_hover_scenario:
/// k_x 25, k_v 12, k_i 1.28, c1 0.5, sigma 1, k_R 40, k_Omega 8, k_I 0.06, c2 0.3.
PositionGains certified_gains();

/// Hover at the origin (b1d = e1) with certified_gains and the reference
/// disturbances, starting 7 cm off target and 2 degrees off the computed
/// attitude. Bounds: psi1 0.005, e_x_max 0.2, |Omega_c| <= 4 rad/s.
Scenario small_error_hover_scenario(double duration = 5.0, double dt = 1e-3);

}  // namespace geomctl
