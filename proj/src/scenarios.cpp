#include "geomctl/scenarios.hpp"

#include "geomctl/commands.hpp"

namespace geomctl {

namespace {

constexpr double kPsi1 = 0.9;
constexpr double kPsi2 = 1.9;
constexpr double kExMax = 1.0;

}  // namespace

QuadrotorParams reference_quadrotor() {
  return QuadrotorParams(0.755, Vec3(0.43e-2, 0.43e-2, 1.02e-2).asDiagonal().toDenseMatrix(),
                         0.169, 0.0132);
}

Disturbance reference_disturbance() {
  return {Vec3(-0.5, 0.2, 1.0), Vec3(0.2, -0.1, -0.02)};
}

PositionGains reference_gains() {
  PositionGains g;
  g.k_x = 12.8;
  g.k_v = 4.22;
  g.k_i = 1.28;
  g.c1 = 3.6;
  g.sigma = 1.0;
  g.att = {0.65, 0.11, 0.06, 0.8};
  return g;
}

Scenario flip_scenario(bool integral, double dt) {
  Scenario sc{.params = reference_quadrotor(),
              .dist = reference_disturbance(),
              .gains = reference_gains(),
              .bounds = {},
              .modes = {},
              .initial = {},
              .t_final = 4.0,
              .dt = dt};
  if (!integral) {
    sc.gains.k_i = 0.0;
    sc.gains.att.k_I = 0.0;
  }
  // The flip is flown ballistically: no collective thrust while the body turns over.
  sc.modes.push_back({AttitudeMode{attitude_command_flip, 0.0, kFlipOmegaMax}, 0.0, 0.4});
  sc.modes.push_back(
      {PositionMode{[](double) { return setpoint_command(Vec3::Zero(), Vec3::UnitY()); },
                    std::nullopt, 0.0},
       0.4, 4.0});
  sc.bounds = scenario_bounds(sc, kPsi1, kPsi2, kExMax);
  return sc;
}

Scenario euler_attitude_scenario(double duration, double dt) {
  Scenario sc{.params = reference_quadrotor(),
              .dist = reference_disturbance(),
              .gains = reference_gains(),
              .bounds = {},
              .modes = {},
              .initial = {},
              .t_final = duration,
              .dt = dt};
  sc.modes.push_back({AttitudeMode{euler321_command, std::nullopt, kEulerOmegaMax}, 0.0, duration});
  sc.bounds = scenario_bounds(sc, kPsi1, kPsi2, kExMax);
  return sc;
}

PositionGains certified_gains() {
  PositionGains g = reference_gains();
  g.k_x = 25.0;
  g.k_v = 12.0;
  g.c1 = 0.5;
  g.att.k_R = 40.0;
  g.att.k_Omega = 8.0;
  g.att.c2 = 0.3;
  return g;
}

Scenario small_error_hover_scenario(double duration, double dt) {
  Scenario sc{.params = reference_quadrotor(),
              .dist = reference_disturbance(),
              .gains = certified_gains(),
              .bounds = {},
              .modes = {},
              .initial = {},
              .t_final = duration,
              .dt = dt};
  const auto hover = [](double) { return setpoint_command(Vec3::Zero(), Vec3::UnitX()); };
  sc.modes.push_back({PositionMode{hover, std::nullopt, 4.0}, 0.0, duration});
  sc.initial.x = Vec3(0.05, -0.03, 0.04);
  const PositionFrame start = position_frame(sc.initial, hover(0.0), Vec3::Zero(), sc.gains, sc.params);
  sc.initial.R = start.R_c * exp_so3(Vec3(0.02, -0.03, 0.01));
  sc.bounds = scenario_bounds(sc, 0.005, kPsi2, 0.2);
  return sc;
}

}  // namespace geomctl
