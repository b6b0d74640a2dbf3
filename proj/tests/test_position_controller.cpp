#include <gtest/gtest.h>

#include <cmath>

#include "geomctl/commands.hpp"
#include "geomctl/errors.hpp"
#include "geomctl/position_controller.hpp"
#include "geomctl/scenarios.hpp"
#include "test_support.hpp"

using namespace geomctl;
using namespace geomctl::testing;

namespace {

const QuadrotorParams kParams = reference_quadrotor();
const PositionGains kGains = reference_gains();
constexpr double kMg = 0.755 * 9.81;

FrameHistory sample_history(const std::function<Mat3(double)>& frame, double t, double h, int n) {
  FrameHistory hist;
  for (int k = n - 1; k >= 0; --k) hist.push(t - k * h, frame(t - k * h));
  return hist;
}

}  // namespace

TEST(PositionGains, Validation) {
  EXPECT_NO_THROW(kGains.validate());
  PositionGains g = kGains;
  g.sigma = 0.0;
  EXPECT_THROW(g.validate(), ValidationError);
  g = kGains;
  g.k_x = -1.0;
  EXPECT_THROW(g.validate(), ValidationError);
  g = kGains;
  g.k_i = 0.0;
  EXPECT_NO_THROW(g.validate());
}

TEST(Saturate, Examples) {
  EXPECT_TRUE(saturate(Vec3(0.5, -0.2, 0.9), 1.0).isApprox(Vec3(0.5, -0.2, 0.9)));
  EXPECT_TRUE(saturate(Vec3(2, -3, 0), 1.0).isApprox(Vec3(1, -1, 0)));
  EXPECT_THROW(saturate(Vec3::Zero(), 0.0), ValidationError);
  for (int i = 0; i < 200; ++i) {
    const double sigma = uniform(0.1, 3.0);
    EXPECT_LE(saturate(random_vec(10.0), sigma).norm(), std::sqrt(3.0) * sigma + 1e-15);
  }
}

TEST(Saturate, BandsReproduceClipAndExtendSmoothly) {
  for (int i = 0; i < 200; ++i) {
    const Vec3 y = random_vec(3.0);
    EXPECT_EQ(saturate(y, 1.0, saturation_band(y, 1.0)), saturate(y, 1.0));
  }
  const SaturationBand linear{0, 0, 0};
  EXPECT_TRUE(saturate(Vec3(2, -3, 0.5), 1.0, linear).isApprox(Vec3(2, -3, 0.5)));
  const SaturationBand clipped{1, -1, 1};
  EXPECT_TRUE(saturate(Vec3(0.2, 0.3, -5), 1.0, clipped).isApprox(Vec3(1, -1, 1)));
  EXPECT_EQ(saturation_band(Vec3(1.0, -1.0, 1.5), 1.0), (SaturationBand{0, 0, 1}));
}

TEST(DesiredForce, Examples) {
  const PositionCommand hover = setpoint_command(Vec3::Zero(), Vec3::UnitX());
  const Vec3 A = desired_force_vector(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), hover, kGains, kParams);
  EXPECT_TRUE(A.isApprox(Vec3(0, 0, -kMg)));
  EXPECT_NEAR(A.norm(), 7.40655, 1e-12);
  const Vec3 A2 = desired_force_vector(Vec3(1, 0, 0), Vec3::Zero(), Vec3::Zero(), hover, kGains, kParams);
  EXPECT_TRUE(A2.isApprox(Vec3(-12.8, 0, -kMg)));
}

TEST(DesiredForce, DegenerateWhenGravityIsCancelled) {
  const PositionCommand hover = setpoint_command(Vec3::Zero(), Vec3::UnitX());
  const Vec3 e_x(0, 0, -kMg / 12.8);
  EXPECT_THROW(desired_force_vector(e_x, Vec3::Zero(), Vec3::Zero(), hover, kGains, kParams),
               DegenerateCommandError);
}

TEST(ComputedAttitude, Examples) {
  EXPECT_TRUE(computed_attitude(Vec3(0, 0, -kMg), Vec3::UnitX()).isApprox(Mat3::Identity()));
  const Mat3 Rc = computed_attitude(Vec3(0, 0, -kMg), Vec3::UnitY());
  EXPECT_TRUE(Rc.col(0).isApprox(Vec3::UnitY()));
  EXPECT_TRUE(Rc.col(1).isApprox(-Vec3::UnitX()));
  EXPECT_TRUE(Rc.col(2).isApprox(Vec3::UnitZ()));
  EXPECT_NEAR(Rc.determinant(), 1.0, 1e-15);
}

TEST(ComputedAttitude, OrthonormalWithThrustAxisAlongMinusA) {
  for (int i = 0; i < 200; ++i) {
    const Vec3 A = random_vec(10.0);
    const Vec3 b1d = random_unit();
    const Mat3 Rc = computed_attitude(A, b1d);
    EXPECT_LT((Rc.transpose() * Rc - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(Rc.determinant(), 1.0, 1e-12);
    EXPECT_LT((Rc.col(2) + A / A.norm()).norm(), 1e-12);
    EXPECT_NEAR(Rc.col(2).dot(A), -A.norm(), 1e-12 * A.norm());
  }
}

TEST(ComputedAttitude, PropagatesErrors) {
  EXPECT_THROW(computed_attitude(Vec3::Zero(), Vec3::UnitX()), DegenerateCommandError);
  EXPECT_THROW(computed_attitude(Vec3(0, 0, -1), Vec3::UnitZ()), ParallelInputError);
}

TEST(ThrustMagnitude, Examples) {
  const Vec3 A(0, 0, -kMg);
  EXPECT_NEAR(thrust_magnitude(A, Mat3::Identity()), kMg, 1e-15);
  EXPECT_NEAR(thrust_magnitude(A, Mat3::Identity()), 7.40655, 1e-12);
  EXPECT_NEAR(thrust_magnitude(A, exp_so3(Vec3(std::numbers::pi / 2, 0, 0))), 0.0, 1e-14);
}

TEST(CommandedRates, WarmUpAndConstantFrame) {
  FrameHistory hist;
  EXPECT_TRUE(commanded_rates(hist).Omega_c.isZero(0.0));
  const Mat3 R = random_rotation();
  hist.push(0.0, R);
  hist.push(0.001, R);
  EXPECT_TRUE(commanded_rates(hist).Omega_c.isZero(0.0));
  hist.push(0.002, R);
  hist.push(0.003, R);
  const CommandedRates r = commanded_rates(hist);
  EXPECT_LT(r.Omega_c.norm(), 1e-12);
  EXPECT_LT(r.Omega_c_dot.norm(), 1e-6);
}

TEST(CommandedRates, SpinOracle) {
  auto spin = [](double t) { return exp_so3(Vec3(0, 0, t)); };
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const CommandedRates r = commanded_rates(sample_history(spin, 0.7, h, 4));
    EXPECT_LT((r.Omega_c - Vec3(0, 0, 1)).norm(), 1e-4);
    EXPECT_LT(r.Omega_c_dot.norm(), 1e-6);
  }
}

TEST(CommandedRates, OscillationOracle) {
  auto wobble = [](double t) { return exp_so3(Vec3(std::sin(t), 0, 0)); };
  for (double t : {0.3, 1.2, 2.5}) {
    std::array<double, 2> err_w{};
    std::array<double, 2> err_wdot{};
    int k = 0;
    for (double h : {2e-3, 1e-3}) {
      const CommandedRates r = commanded_rates(sample_history(wobble, t, h, 4));
      err_w[k] = (r.Omega_c - Vec3(std::cos(t), 0, 0)).norm();
      err_wdot[k] = (r.Omega_c_dot - Vec3(-std::sin(t), 0, 0)).norm();
      ++k;
    }
    EXPECT_LT(err_w[1], 1e-5);
    EXPECT_LT(err_wdot[1], 1e-5);
    EXPECT_GT(err_w[0] / err_w[1], 3.0);
    EXPECT_GT(err_wdot[0] / err_wdot[1], 3.0);
  }
}

TEST(PositionControl, HoverOnTarget) {
  const PositionCommand cmd = setpoint_command(Vec3::Zero(), Vec3::UnitX());
  const PositionControlOutput out =
      position_control(RigidBodyState{}, cmd, Vec3::Zero(), Vec3::Zero(), kGains, kParams, {});
  EXPECT_NEAR(out.wrench.f, kMg, 1e-14);
  EXPECT_TRUE(out.wrench.M.isZero(0.0));
  EXPECT_TRUE(out.R_c.isApprox(Mat3::Identity()));
  EXPECT_TRUE(out.e_i_rate.isZero(0.0));
  EXPECT_TRUE(out.e_I_rate.isZero(0.0));
}

TEST(PositionControl, IntegralRates) {
  const PositionCommand cmd = setpoint_command(Vec3(1, 2, 3), Vec3::UnitX());
  RigidBodyState s{Vec3(1.1, 1.9, 3.05), Vec3(0.1, 0.0, -0.2), exp_so3(Vec3(0.05, -0.02, 0.1)), Vec3(0.1, 0.2, 0.3)};
  const PositionControlOutput out = position_control(s, cmd, Vec3::Zero(), Vec3::Zero(), kGains, kParams, {});
  EXPECT_TRUE(out.e_i_rate.isApprox(out.e_v + 3.6 * out.e_x));
  EXPECT_TRUE(out.e_I_rate.isApprox(out.e_Omega + 0.8 * out.e_R));
  EXPECT_TRUE(out.e_x.isApprox(Vec3(0.1, -0.1, 0.05)));
}

TEST(PositionControl, HistoryOverloadUsesFiniteDifferences) {
  const PositionCommand cmd = setpoint_command(Vec3::Zero(), Vec3::UnitX());
  PosCtrlState ctl;
  auto spin = [](double t) { return exp_so3(Vec3(0, 0, 0.5 * t)); };
  ctl.frames = sample_history(spin, 1.0, 1e-3, 4);
  const PositionControlOutput a = position_control(RigidBodyState{}, cmd, ctl, kGains, kParams);
  const PositionControlOutput b =
      position_control(RigidBodyState{}, cmd, ctl.e_i, ctl.e_I, kGains, kParams, commanded_rates(ctl.frames));
  EXPECT_EQ(a.wrench.M, b.wrench.M);
  EXPECT_NEAR(a.rates.Omega_c.z(), 0.5, 1e-6);
}

TEST(ThrustMisalignment, DefinitionAndBounds) {
  for (int i = 0; i < 1000; ++i) {
    const Mat3 Rc = random_rotation();
    const Mat3 R = Rc * exp_so3(uniform(0.0, 1.5) * random_unit());
    const double psi = error_function(R, Rc);
    if (!(psi < 1.0)) continue;
    const double cos_tilt = Rc.col(2).dot(R.col(2));
    EXPECT_GE(cos_tilt, 1.0 - psi - 1e-14);
    const Vec3 tilt = cos_tilt * R.col(2) - Rc.col(2);
    const double eR = error_vector(R, Rc).norm();
    EXPECT_LE(tilt.norm(), eR + 1e-14);
    // Also the sine of the angle between the thrust axes.
    EXPECT_NEAR(tilt.norm(), R.col(2).cross(Rc.col(2)).norm(), 1e-14);
    const double f = uniform(0.0, 20.0);
    EXPECT_LT((thrust_misalignment(f, R, Rc) - f / cos_tilt * tilt).norm(), 1e-12);
  }
  EXPECT_THROW(thrust_misalignment(1.0, exp_so3(Vec3(2.0, 0, 0)), Mat3::Identity()), ValidationError);
}

TEST(ThrustMisalignment, BoundedByDesiredForce) {
  for (int i = 0; i < 500; ++i) {
    const RigidBodyState s{random_vec(0.5), random_vec(0.5), Mat3::Identity(), Vec3::Zero()};
    const PositionCommand cmd = setpoint_command(Vec3::Zero(), Vec3::UnitX());
    const Vec3 e_i = random_vec(2.0);
    const PositionFrame fr = position_frame(s, cmd, e_i, kGains, kParams);
    RigidBodyState tilted = s;
    tilted.R = fr.R_c * exp_so3(0.6 * random_unit());
    if (!(error_function(tilted.R, fr.R_c) < 0.9)) continue;
    const double f = thrust_magnitude(fr.A, tilted.R);
    const Vec3 X = thrust_misalignment(f, tilted.R, fr.R_c);
    const double B1 = 1.01 * kMg;
    const double bound = (kGains.k_x * fr.e_x.norm() + kGains.k_v * fr.e_v.norm() +
                          std::sqrt(3.0) * kGains.k_i * kGains.sigma + B1) *
                         error_vector(tilted.R, fr.R_c).norm();
    EXPECT_LE(X.norm(), bound);
    // Applied thrust -f R e3 = A - X.
    EXPECT_LT((-f * tilted.R.col(2) - fr.A + X).norm(), 1e-10 * (1.0 + fr.A.norm()));
  }
}
