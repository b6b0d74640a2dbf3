#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geomctl/attitude_controller.hpp"
#include "geomctl/certifier.hpp"
#include "geomctl/position_controller.hpp"
#include "geomctl/scenario_log.hpp"
#include "geomctl/vehicle.hpp"

namespace geomctl {

using AttitudeCommandFn = std::function<AttitudeCommand(double)>;
using PositionCommandFn = std::function<PositionCommand(double)>;

struct AttitudeMode {
  AttitudeCommandFn command;
  /// Collective thrust held during the mode; m g when unset.
  std::optional<double> thrust;
  /// Declared sup |Omega_d| of the command, feeds B2.
  double omega_d_max = 0.0;
};

struct PositionMode {
  PositionCommandFn command;
  /// Declared sup |-m g e3 + m xdd_d| of the command, feeds B1; m g when unset.
  std::optional<double> accel_force_max;
  /// Declared sup |Omega_c| along the run, feeds B2.
  double omega_c_max = 0.0;
};

struct FlightMode {
  std::variant<AttitudeMode, PositionMode> mode;
  double t_start = 0.0;
  double t_end = 0.0;

  bool is_position() const { return std::holds_alternative<PositionMode>(mode); }
};

enum class RateSource { kAnalytic, kFiniteDifference };

struct Scenario {
  QuadrotorParams params;
  Disturbance dist;
  PositionGains gains;
  GainBounds bounds;
  std::vector<FlightMode> modes;
  RigidBodyState initial;
  double t_final = 0.0;
  double dt = 1e-3;
  RateSource rates = RateSource::kAnalytic;
};

/// Plant state plus the two controller integrals, all advanced by one ODE step.
struct ExtendedState {
  RigidBodyState body;
  Vec3 e_i = Vec3::Zero();
  Vec3 e_I = Vec3::Zero();
};

struct ExtendedDerivative {
  StateDerivative body;
  Vec3 e_i_dot = Vec3::Zero();
  Vec3 e_I_dot = Vec3::Zero();
};

using ClosedLoopField = std::function<ExtendedDerivative(double, const ExtendedState&)>;

/// One Runge-Kutta-Munthe-Kaas step of order four. Flat components use the
/// classical RK4 tableau; the attitude is advanced as R0 exp(theta) with theta
/// integrated from dexp^-1 of the stage angular velocities. R is re-projected
/// onto SO(3) when |R^T R - I| exceeds 1e-12. Throws NonFiniteStateError.
ExtendedState step(const ExtendedState& s, double t, double dt, const ClosedLoopField& field);

/// Closed-loop evaluation of one flight mode at (t, state).
struct ModeEvaluation {
  ExtendedDerivative deriv;
  LogRecord record;
};

/// Evaluates the controller of `mode` and the plant. fd_rates supplies the
/// finite-difference commanded rates when the scenario uses them; `band` pins
/// the pieces of the integral saturation (see saturate).
ModeEvaluation evaluate_mode(const Scenario& sc, const FlightMode& mode, double t,
                             const ExtendedState& s, const std::optional<CommandedRates>& fd_rates,
                             const std::optional<SaturationBand>& band = std::nullopt);

/// Integrates the closed loop over [0, t_final], switching controllers at
/// window starts (integrals and frame history reset), one record per step.
/// A step in which a component of e_i crosses the saturation level is split
/// at the crossing, located by bisection, so RK4 keeps its order.
/// Controller degeneracy stops the run and is reported in log.abort_reason.
ScenarioLog run_scenario(const Scenario& sc);

/// Bounds derived from the scenario: B1 and B2 from the declared command
/// maxima over all modes (1% margin on B1), delta_x from the disturbance.
GainBounds scenario_bounds(const Scenario& sc, double psi1, double psi2, double e_x_max);

}  // namespace geomctl
