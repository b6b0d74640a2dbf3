#include "geomctl/position_controller.hpp"

#include <algorithm>
#include <cmath>

#include "geomctl/detail/jet.hpp"
#include "geomctl/errors.hpp"

namespace geomctl {

namespace {

using detail::Jet;
using detail::JetVec;

Mat3 skew_part(const Mat3& A) { return 0.5 * (A - A.transpose()); }

JetVec make_jet(const Vec3& v, const Vec3& d, const Vec3& dd) {
  return {Jet{v.x(), d.x(), dd.x()}, Jet{v.y(), d.y(), dd.y()}, Jet{v.z(), d.z(), dd.z()}};
}

Vec3 saturation_slope(const SaturationBand& band) {
  return Vec3(band[0] == 0, band[1] == 0, band[2] == 0);
}

SaturationBand band_or_default(const std::optional<SaturationBand>& band, const Vec3& e_i,
                               double sigma) {
  return band ? *band : saturation_band(e_i, sigma);
}

}  // namespace

void PositionGains::validate() const {
  if (!(k_x > 0.0) || !(k_v > 0.0) || !(sigma > 0.0)) {
    throw ValidationError("position gains k_x, k_v and sigma must be positive");
  }
  if (!(k_i >= 0.0) || !(c1 >= 0.0)) {
    throw ValidationError("position gains k_i and c1 must be non-negative");
  }
  att.validate();
}

void FrameHistory::push(double t, const Mat3& R_c) {
  for (std::size_t k = kCapacity - 1; k > 0; --k) {
    frames_[k] = frames_[k - 1];
    times_[k] = times_[k - 1];
  }
  frames_[0] = R_c;
  times_[0] = t;
  size_ = std::min(size_ + 1, kCapacity);
}

Vec3 saturate(const Vec3& y, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("saturate: sigma must be positive");
  return y.cwiseMax(-sigma).cwiseMin(sigma);
}

SaturationBand saturation_band(const Vec3& y, double sigma) {
  SaturationBand band{};
  for (int j = 0; j < 3; ++j) band[j] = y[j] > sigma ? 1 : (y[j] < -sigma ? -1 : 0);
  return band;
}

Vec3 saturate(const Vec3& y, double sigma, const SaturationBand& band) {
  if (!(sigma > 0.0)) throw ValidationError("saturate: sigma must be positive");
  Vec3 out;
  for (int j = 0; j < 3; ++j) out[j] = band[j] == 0 ? y[j] : band[j] * sigma;
  return out;
}

Vec3 desired_force_vector(const Vec3& e_x, const Vec3& e_v, const Vec3& sat_ei,
                          const PositionCommand& cmd, const PositionGains& g,
                          const QuadrotorParams& p) {
  const Vec3 A = -g.k_x * e_x - g.k_v * e_v - g.k_i * sat_ei -
                 p.mass() * p.gravity() * Vec3::UnitZ() + p.mass() * cmd.x_d_ddot;
  if (!(A.norm() >= 1e-9)) {
    throw DegenerateCommandError("desired force vector vanished (|A| < 1e-9)");
  }
  return A;
}

Mat3 computed_attitude(const Vec3& A, const Vec3& b1d) {
  const double nA = A.norm();
  if (!(nA >= 1e-9)) throw DegenerateCommandError("computed_attitude: |A| < 1e-9");
  const Vec3 b3c = -A / nA;
  const Vec3 b1c = normalized_projection(b1d, b3c);
  Mat3 Rc;
  Rc.col(0) = b1c;
  Rc.col(1) = b3c.cross(b1c);
  Rc.col(2) = b3c;
  return Rc;
}

double thrust_magnitude(const Vec3& A, const Mat3& R) { return -A.dot(R.col(2)); }

Vec3 thrust_misalignment(double f, const Mat3& R, const Mat3& R_c) {
  const double cos_tilt = R_c.col(2).dot(R.col(2));
  if (!(cos_tilt > 0.0)) {
    throw ValidationError("thrust_misalignment: thrust axes are 90 degrees or more apart");
  }
  return f / cos_tilt * (cos_tilt * R.col(2) - R_c.col(2));
}

CommandedRates commanded_rates(const FrameHistory& history) {
  CommandedRates out;
  if (history.size() < 3) return out;
  const double h = history.time(0) - history.time(1);
  const Mat3& R0 = history.frame(0);
  const Mat3& R1 = history.frame(1);
  const Mat3& R2 = history.frame(2);
  const Mat3 Rdot = (3.0 * R0 - 4.0 * R1 + R2) / (2.0 * h);
  out.Omega_c = vee(skew_part(R0.transpose() * Rdot));
  Mat3 Rddot;
  if (history.size() >= 4) {
    Rddot = (2.0 * R0 - 5.0 * R1 + 4.0 * R2 - history.frame(3)) / (h * h);
  } else {
    Rddot = (R0 - 2.0 * R1 + R2) / (h * h);
  }
  // d/dt (R^T Rdot) = Rdot^T Rdot + R^T Rddot; the first term is symmetric.
  out.Omega_c_dot = vee(skew_part(R0.transpose() * Rddot));
  return out;
}

PositionFrame position_frame(const RigidBodyState& s, const PositionCommand& cmd,
                             const Vec3& e_i, const PositionGains& g, const QuadrotorParams& p,
                             const std::optional<SaturationBand>& band) {
  PositionFrame fr;
  fr.e_x = s.x - cmd.x_d;
  fr.e_v = s.v - cmd.x_d_dot;
  const Vec3 sat = saturate(e_i, g.sigma, band_or_default(band, e_i, g.sigma));
  fr.A = desired_force_vector(fr.e_x, fr.e_v, sat, cmd, g, p);
  fr.R_c = computed_attitude(fr.A, cmd.b1d);
  fr.f = thrust_magnitude(fr.A, s.R);
  return fr;
}

CommandedRates analytic_commanded_rates(const RigidBodyState& s, const PositionCommand& cmd,
                                        const Vec3& e_i, const PositionGains& g,
                                        const QuadrotorParams& p, const Vec3& accel,
                                        const std::optional<SaturationBand>& band) {
  const double m = p.mass();
  const SaturationBand pieces = band_or_default(band, e_i, g.sigma);
  const PositionFrame fr = position_frame(s, cmd, e_i, g, p, pieces);
  const Vec3 slope = saturation_slope(pieces);
  const Vec3 b3 = s.R.col(2);
  const Vec3 b3_dot = s.R * s.Omega.cross(Vec3::UnitZ());

  // First derivatives along the closed loop.
  const Vec3 ex_dot = fr.e_v;
  const Vec3 ev_dot = accel - cmd.x_d_ddot;
  const Vec3 ei_dot = fr.e_v + g.c1 * fr.e_x;
  const Vec3 A_dot = -g.k_x * ex_dot - g.k_v * ev_dot - g.k_i * slope.cwiseProduct(ei_dot) +
                     m * cmd.x_d_dddot;

  // Second derivatives. The jerk follows from f = -A . b3 with constant disturbance.
  const double f_dot = -A_dot.dot(b3) - fr.A.dot(b3_dot);
  const Vec3 jerk = -(f_dot * b3 + fr.f * b3_dot) / m;
  const Vec3 ev_ddot = jerk - cmd.x_d_dddot;
  const Vec3 ei_ddot = ev_dot + g.c1 * fr.e_v;
  const Vec3 A_ddot = -g.k_x * ev_dot - g.k_v * ev_ddot - g.k_i * slope.cwiseProduct(ei_ddot) +
                      m * cmd.x_d_ddddot;

  const JetVec A = make_jet(fr.A, A_dot, A_ddot);
  const JetVec b1d = make_jet(cmd.b1d, cmd.b1d_dot, cmd.b1d_ddot);
  const JetVec b3c = detail::scale(Jet{-1.0, 0.0, 0.0}, detail::normalize(A));
  const JetVec b1c =
      detail::normalize(detail::sub(b1d, detail::scale(detail::dot(b1d, b3c), b3c)));
  const JetVec b2c = detail::cross(b3c, b1c);

  Mat3 Rc;
  Mat3 Rc_dot;
  Mat3 Rc_ddot;
  const std::array<const JetVec*, 3> cols{&b1c, &b2c, &b3c};
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      const Jet& e = (*cols[c])[r];
      Rc(r, c) = e.v;
      Rc_dot(r, c) = e.d;
      Rc_ddot(r, c) = e.dd;
    }
  }
  CommandedRates out;
  out.Omega_c = vee(skew_part(Rc.transpose() * Rc_dot));
  out.Omega_c_dot = vee(skew_part(Rc.transpose() * Rc_ddot));
  return out;
}

PositionControlOutput position_control(const RigidBodyState& s, const PositionCommand& cmd,
                                       const Vec3& e_i, const Vec3& e_I,
                                       const PositionGains& g, const QuadrotorParams& p,
                                       const CommandedRates& rates,
                                       const std::optional<SaturationBand>& band) {
  const PositionFrame fr = position_frame(s, cmd, e_i, g, p, band);
  const AttitudeCommand att_cmd{fr.R_c, rates.Omega_c, rates.Omega_c_dot};
  const AttitudeErrors err = attitude_errors(s, att_cmd);

  PositionControlOutput out;
  out.wrench.f = fr.f;
  out.wrench.M = control_moment(s, att_cmd, e_I, g.att, p.inertia());
  out.e_x = fr.e_x;
  out.e_v = fr.e_v;
  out.psi = err.psi;
  out.e_R = err.e_R;
  out.e_Omega = err.e_Omega;
  out.A = fr.A;
  out.R_c = fr.R_c;
  out.rates = rates;
  out.e_i_rate = fr.e_v + g.c1 * fr.e_x;
  out.e_I_rate = integral_rate(err.e_R, err.e_Omega, g.att);
  return out;
}

PositionControlOutput position_control(const RigidBodyState& s, const PositionCommand& cmd,
                                       const PosCtrlState& ctl, const PositionGains& g,
                                       const QuadrotorParams& p) {
  return position_control(s, cmd, ctl.e_i, ctl.e_I, g, p, commanded_rates(ctl.frames));
}

}  // namespace geomctl
