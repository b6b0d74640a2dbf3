#pragma once

#include <array>

#include "geomctl/so3.hpp"

namespace geomctl {

/// Rigid quadrotor parameters. Construction validates the physical
/// invariants and caches J^-1 and the extreme eigenvalues of J.
class QuadrotorParams {
 public:
  QuadrotorParams(double mass, const Mat3& inertia, double arm_length,
                  double torque_coeff, double gravity = 9.81);

  double mass() const { return m_; }
  const Mat3& inertia() const { return J_; }
  const Mat3& inertia_inv() const { return J_inv_; }
  double arm_length() const { return d_; }
  double torque_coeff() const { return c_tau_f_; }
  double gravity() const { return g_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

 private:
  double m_;
  Mat3 J_;
  Mat3 J_inv_;
  double d_;
  double c_tau_f_;
  double g_;
  double lambda_min_;
  double lambda_max_;
};

/// Constant force/moment uncertainty acting on the vehicle.
struct Disturbance {
  Vec3 delta_x = Vec3::Zero();  // N, inertial frame
  Vec3 delta_R = Vec3::Zero();  // N m, body frame
};

struct RigidBodyState {
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 Omega = Vec3::Zero();
};

/// Collective thrust (positive along -b3) and body moment.
struct ControlWrench {
  double f = 0.0;
  Vec3 M = Vec3::Zero();
};

struct RotorForces {
  std::array<double, 4> f{};
  /// Set when any rotor would need negative thrust.
  bool infeasible = false;
};

/// Time derivative of RigidBodyState. The attitude rate is carried as the
/// body angular velocity, i.e. dR/dt = R * hat(R_rate_body).
struct StateDerivative {
  Vec3 x_dot;
  Vec3 v_dot;
  Vec3 R_rate_body;
  Vec3 Omega_dot;
};

/// Translational acceleration g e3 - f R e3 / m + delta_x / m.
Vec3 translational_acceleration(const Mat3& R, double f, const QuadrotorParams& p,
                                const Disturbance& dist);

StateDerivative dynamics_derivative(const RigidBodyState& s, const ControlWrench& u,
                                    const QuadrotorParams& p, const Disturbance& dist);

// Rotor layout: rotor 1 at +d b1, rotor 2 at +d b2, rotor 3 at -d b1,
// rotor 4 at -d b2, all thrusting along -b3, reaction torque (-1)^i c f_i.
//   f  = f1 + f2 + f3 + f4
//   M1 = d (f4 - f2)
//   M2 = d (f1 - f3)
//   M3 = c (-f1 + f2 - f3 + f4)
ControlWrench rotor_forces_to_wrench(const RotorForces& rf, const QuadrotorParams& p);
RotorForces wrench_to_rotor_forces(const ControlWrench& u, const QuadrotorParams& p);

}  // namespace geomctl
