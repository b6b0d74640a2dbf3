#include "geomctl/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "geomctl/errors.hpp"

namespace geomctl {

QuadrotorParams::QuadrotorParams(double mass, const Mat3& inertia, double arm_length,
                                 double torque_coeff, double gravity)
    : m_(mass), J_(inertia), d_(arm_length), c_tau_f_(torque_coeff), g_(gravity) {
  if (!(m_ > 0.0)) throw ValidationError("mass must be positive");
  if (!(d_ > 0.0)) throw ValidationError("arm length must be positive");
  if (!(c_tau_f_ > 0.0)) throw ValidationError("torque coefficient must be positive");
  if (!std::isfinite(g_)) throw ValidationError("gravity must be finite");
  if (!J_.allFinite() || (J_ - J_.transpose()).norm() > 1e-12 * std::max(1.0, J_.norm())) {
    throw ValidationError("inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(J_, Eigen::EigenvaluesOnly);
  lambda_min_ = eig.eigenvalues()(0);
  lambda_max_ = eig.eigenvalues()(2);
  if (!(lambda_min_ > 0.0)) throw ValidationError("inertia must be positive definite");
  J_inv_ = J_.inverse();
}

Vec3 translational_acceleration(const Mat3& R, double f, const QuadrotorParams& p,
                                const Disturbance& dist) {
  return p.gravity() * Vec3::UnitZ() - (f / p.mass()) * R.col(2) + dist.delta_x / p.mass();
}

StateDerivative dynamics_derivative(const RigidBodyState& s, const ControlWrench& u,
                                    const QuadrotorParams& p, const Disturbance& dist) {
  StateDerivative d;
  d.x_dot = s.v;
  d.v_dot = translational_acceleration(s.R, u.f, p, dist);
  d.R_rate_body = s.Omega;
  d.Omega_dot =
      p.inertia_inv() * (u.M - s.Omega.cross(p.inertia() * s.Omega) + dist.delta_R);
  return d;
}

ControlWrench rotor_forces_to_wrench(const RotorForces& rf, const QuadrotorParams& p) {
  const auto& f = rf.f;
  const double d = p.arm_length();
  const double c = p.torque_coeff();
  ControlWrench u;
  u.f = f[0] + f[1] + f[2] + f[3];
  u.M = Vec3(d * (f[3] - f[1]), d * (f[0] - f[2]), c * (-f[0] + f[1] - f[2] + f[3]));
  return u;
}

RotorForces wrench_to_rotor_forces(const ControlWrench& u, const QuadrotorParams& p) {
  const double d = p.arm_length();
  const double c = p.torque_coeff();
  // Pairs (1,3) and (2,4) share an arm axis; solve each pair separately.
  const double sum13 = 0.5 * (u.f - u.M.z() / c);
  const double sum24 = 0.5 * (u.f + u.M.z() / c);
  RotorForces rf;
  rf.f[0] = 0.5 * (sum13 + u.M.y() / d);
  rf.f[2] = 0.5 * (sum13 - u.M.y() / d);
  rf.f[3] = 0.5 * (sum24 + u.M.x() / d);
  rf.f[1] = 0.5 * (sum24 - u.M.x() / d);
  rf.infeasible = std::any_of(rf.f.begin(), rf.f.end(), [](double fi) { return fi < 0.0; });
  return rf;
}

}  // namespace geomctl
