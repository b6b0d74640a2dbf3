#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "geomctl/attitude_controller.hpp"
#include "geomctl/so3.hpp"
#include "geomctl/vehicle.hpp"

namespace geomctl {

struct PositionGains {
  double k_x = 0.0;
  double k_v = 0.0;
  double k_i = 0.0;
  double c1 = 0.0;
  double sigma = 0.0;
  AttitudeGains att;

  void validate() const;
};

/// Position reference. Derivatives beyond the second are only used by the
/// analytic commanded-rate path and default to zero.
struct PositionCommand {
  Vec3 x_d = Vec3::Zero();
  Vec3 x_d_dot = Vec3::Zero();
  Vec3 x_d_ddot = Vec3::Zero();
  Vec3 x_d_dddot = Vec3::Zero();
  Vec3 x_d_ddddot = Vec3::Zero();
  Vec3 b1d = Vec3::UnitX();
  Vec3 b1d_dot = Vec3::Zero();
  Vec3 b1d_ddot = Vec3::Zero();
};

/// Most recent computed attitudes on a uniform grid of spacing h, newest first.
class FrameHistory {
 public:
  static constexpr std::size_t kCapacity = 4;

  void push(double t, const Mat3& R_c);
  void clear() { size_ = 0; }
  std::size_t size() const { return size_; }
  /// k = 0 is the newest frame.
  const Mat3& frame(std::size_t k) const { return frames_[k]; }
  double time(std::size_t k) const { return times_[k]; }

 private:
  std::array<Mat3, kCapacity> frames_{};
  std::array<double, kCapacity> times_{};
  std::size_t size_ = 0;
};

struct PosCtrlState {
  Vec3 e_i = Vec3::Zero();
  Vec3 e_I = Vec3::Zero();
  FrameHistory frames;
};

/// Commanded body angular velocity and acceleration of R_c.
struct CommandedRates {
  Vec3 Omega_c = Vec3::Zero();
  Vec3 Omega_c_dot = Vec3::Zero();
};

/// Element-wise clip to [-sigma, sigma].
Vec3 saturate(const Vec3& y, double sigma);

/// Piece of the saturation used by each component: -1 clipped low, 0 linear,
/// +1 clipped high.
using SaturationBand = std::array<int, 3>;

SaturationBand saturation_band(const Vec3& y, double sigma);

/// Evaluates the given pieces, each extended smoothly past its breakpoint.
/// The integrator uses this to keep the vector field smooth within a step.
Vec3 saturate(const Vec3& y, double sigma, const SaturationBand& band);

/// A = -k_x e_x - k_v e_v - k_i sat(e_i) - m g e3 + m xdd_d.
/// Throws DegenerateCommandError when |A| < 1e-9.
Vec3 desired_force_vector(const Vec3& e_x, const Vec3& e_v, const Vec3& sat_ei,
                          const PositionCommand& cmd, const PositionGains& g,
                          const QuadrotorParams& p);

/// R_c = [b1c, b3c x b1c, b3c] with b3c = -A/|A| and b1c the normalized
/// projection of b1d onto the plane normal to b3c.
Mat3 computed_attitude(const Vec3& A, const Vec3& b1d);

/// f = -A . R e3.
double thrust_magnitude(const Vec3& A, const Mat3& R);

/// Difference between the ideal force -f R_c e3 / (e3.R_c^T R e3) and the
/// applied thrust -f R e3, i.e. f / cos * (cos R e3 - R_c e3) with
/// cos = e3.R_c^T R e3. Enters the velocity error dynamics as -X.
/// Throws ValidationError when cos <= 0.
Vec3 thrust_misalignment(double f, const Mat3& R, const Mat3& R_c);

/// Finite-difference rates from the stored R_c history, evaluated at the
/// newest frame with one-sided second-order stencils:
///   Omega_c    from (3 R0 - 4 R1 + R2) / 2h
///   dOmega_c   from vee(skew(R0^T R0'')), R0'' = (2 R0 - 5 R1 + 4 R2 - R3) / h^2
/// With three frames dOmega_c falls back to the first-order (R0 - 2 R1 + R2) / h^2.
/// Fewer than three frames returns zeros (warm-up).
CommandedRates commanded_rates(const FrameHistory& history);

/// Exact rates of R_c along the closed loop. Needs the measured translational
/// acceleration; everything else is a function of the current state.
CommandedRates analytic_commanded_rates(const RigidBodyState& s, const PositionCommand& cmd,
                                        const Vec3& e_i, const PositionGains& g,
                                        const QuadrotorParams& p, const Vec3& accel,
                                        const std::optional<SaturationBand>& band = std::nullopt);

struct PositionControlOutput {
  ControlWrench wrench;
  Vec3 e_x = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  double psi = 0.0;
  Vec3 e_R = Vec3::Zero();
  Vec3 e_Omega = Vec3::Zero();
  Vec3 A = Vec3::Zero();
  Mat3 R_c = Mat3::Identity();
  CommandedRates rates;
  Vec3 e_i_rate = Vec3::Zero();
  Vec3 e_I_rate = Vec3::Zero();
};

/// Position errors and the computed frame, without the moment. Cheap enough
/// to call before the rates are known.
struct PositionFrame {
  Vec3 e_x;
  Vec3 e_v;
  Vec3 A;
  Mat3 R_c;
  double f;
};

/// `band` overrides the saturation pieces; by default they follow e_i.
PositionFrame position_frame(const RigidBodyState& s, const PositionCommand& cmd,
                             const Vec3& e_i, const PositionGains& g, const QuadrotorParams& p,
                             const std::optional<SaturationBand>& band = std::nullopt);

/// Full position-mode controller: thrust from A, moment from the attitude
/// controller tracking (R_c, Omega_c, dOmega_c).
PositionControlOutput position_control(const RigidBodyState& s, const PositionCommand& cmd,
                                       const Vec3& e_i, const Vec3& e_I,
                                       const PositionGains& g, const QuadrotorParams& p,
                                       const CommandedRates& rates,
                                       const std::optional<SaturationBand>& band = std::nullopt);

/// Same, with the rates taken from the finite-difference history in ctl.
PositionControlOutput position_control(const RigidBodyState& s, const PositionCommand& cmd,
                                       const PosCtrlState& ctl, const PositionGains& g,
                                       const QuadrotorParams& p);

}  // namespace geomctl
