#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "geomctl/certifier.hpp"
#include "geomctl/commands.hpp"
#include "geomctl/errors.hpp"
#include "geomctl/scenarios.hpp"
#include "test_support.hpp"

using namespace geomctl;
using namespace geomctl::testing;

namespace {

const std::string kGoldenPath = std::string(GEOMCTL_TEST_DATA_DIR) + "/reference_certificate.txt";

double char_poly(const Mat2& M, double lambda) { return (M - lambda * Mat2::Identity()).determinant(); }

// Sylvester's criterion, independent of the eigenvalues.
bool sylvester_pd(const Mat2& M) { return M(0, 0) > 0.0 && M.determinant() > 0.0; }

PositionGains random_gains() {
  PositionGains g;
  g.k_x = uniform(1.0, 30.0);
  g.k_v = uniform(1.0, 15.0);
  g.k_i = uniform(0.1, 3.0);
  g.c1 = uniform(0.01, 4.0);
  g.sigma = uniform(0.2, 2.0);
  g.att = {uniform(0.2, 50.0), uniform(0.05, 10.0), uniform(0.01, 1.0), uniform(0.0, 1.0)};
  return g;
}

GainBounds random_bounds(const QuadrotorParams& p) {
  GainBounds b;
  b.B1 = p.mass() * p.gravity() * uniform(1.0, 1.5);
  b.B2 = compute_B2(p.inertia(), uniform(0.0, 15.0));
  b.delta_x = uniform(0.0, 2.0);
  b.psi1 = uniform(0.001, 0.99);
  b.psi2 = uniform(0.1, 1.99);
  b.e_x_max = uniform(0.05, 2.0);
  return b;
}

GainBounds reference_bounds() { return scenario_bounds(flip_scenario(), 0.9, 1.9, 1.0); }

}  // namespace

TEST(Eig2, Examples) {
  Mat2 D;
  D << 3.0, 0.0, 0.0, -2.0;
  EXPECT_DOUBLE_EQ(eig2(D).min, -2.0);
  EXPECT_DOUBLE_EQ(eig2(D).max, 3.0);
  Mat2 S;
  S << 0.0, 1.0, 1.0, 0.0;
  EXPECT_DOUBLE_EQ(eig2(S).min, -1.0);
  EXPECT_DOUBLE_EQ(eig2(S).max, 1.0);
  Mat2 A;
  A << 1.0, 2.0, 2.1, 1.0;
  EXPECT_THROW(eig2(A), ValidationError);
}

TEST(Eig2, CharacteristicPolynomialResidual) {
  for (int i = 0; i < 1000; ++i) {
    Mat2 M;
    const double off = uniform(-10.0, 10.0);
    M << uniform(-10.0, 10.0), off, off, uniform(-10.0, 10.0);
    const Eig2 e = eig2(M);
    EXPECT_LE(e.min, e.max);
    EXPECT_LT(std::abs(char_poly(M, e.min)), 1e-12 * (1.0 + M.squaredNorm()));
    EXPECT_LT(std::abs(char_poly(M, e.max)), 1e-12 * (1.0 + M.squaredNorm()));
    EXPECT_NEAR(e.min + e.max, M.trace(), 1e-12);
  }
}

TEST(ComputeB2, Examples) {
  EXPECT_DOUBLE_EQ(compute_B2(Mat3::Identity(), 2.5), 2.5);
  EXPECT_DOUBLE_EQ(compute_B2(reference_quadrotor().inertia(), 0.0), 0.0);
  // 2J - tr(J) I = diag(-1.02, -1.02, 0.18) 1e-2 for the reference vehicle.
  EXPECT_NEAR(compute_B2(reference_quadrotor().inertia(), kFlipOmegaMax), 1.02e-2 * kFlipOmegaMax, 1e-15);
}

TEST(GainBounds, Validation) {
  EXPECT_NO_THROW(reference_bounds().validate());
  GainBounds b = reference_bounds();
  b.psi1 = 1.0;
  EXPECT_THROW(b.validate(), ValidationError);
  b = reference_bounds();
  b.psi2 = 2.0;
  EXPECT_THROW(b.validate(), ValidationError);
  b = reference_bounds();
  b.B1 = 0.0;
  EXPECT_THROW(b.validate(), ValidationError);
}

TEST(AttitudeConditions, VanishingC2Passes) {
  const QuadrotorParams p = reference_quadrotor();
  AttitudeGains g{0.65, 0.11, 0.06, 1e-6};
  const Certificate c = check_attitude_conditions(g, p.inertia(), reference_bounds());
  EXPECT_TRUE(c.all_pass()) << to_text(c);
  const Mat2 W2 = c.matrix("W2")->value;
  EXPECT_NEAR(W2(1, 1), 0.11, 1e-6);
  EXPECT_NEAR(W2(0, 0), 0.0, 1e-6);
}

TEST(AttitudeConditions, LargeC2NamesViolatedBranch) {
  const QuadrotorParams p = reference_quadrotor();
  const GainBounds b = reference_bounds();
  // Reference k_R, k_Omega: ratio bound 3.94, square-root bound 5.18.
  const Certificate c = check_attitude_conditions({0.65, 0.11, 0.06, 4.0}, p.inertia(), b);
  EXPECT_FALSE(c.all_pass());
  EXPECT_EQ(c.verdict("c2_sqrt_bound"), true);
  const auto bad = c.violated();
  EXPECT_NE(std::find(bad.begin(), bad.end(), "c2_ratio_bound"), bad.end());
  EXPECT_EQ(c.verdict("c2_ratio_bound"), false);
}

TEST(AttitudeConditions, ShrinkingC2NeverBreaksAVerdict) {
  const QuadrotorParams p = reference_quadrotor();
  for (int i = 0; i < 100; ++i) {
    const PositionGains g = random_gains();
    const GainBounds b = random_bounds(p);
    const Certificate hi = check_attitude_conditions(g.att, p.inertia(), b);
    AttitudeGains smaller = g.att;
    smaller.c2 *= uniform(0.0, 1.0);
    const Certificate lo = check_attitude_conditions(smaller, p.inertia(), b);
    for (const Verdict& v : hi.verdicts) {
      if (v.pass) EXPECT_TRUE(*lo.verdict(v.name)) << v.name;
    }
  }
}

TEST(PositionConditions, VanishingPsi1) {
  const QuadrotorParams p = reference_quadrotor();
  const PositionGains g = reference_gains();
  GainBounds b = reference_bounds();
  b.psi1 = 1e-14;
  const Certificate c = check_position_conditions(g, p, b);
  EXPECT_LT(*c.scalar("alpha"), 1e-6);
  Mat2 expected;
  expected << g.c1 * g.k_x, -0.5 * g.c1 * g.k_v, -0.5 * g.c1 * g.k_v, g.k_v - p.mass() * g.c1;
  EXPECT_LT((c.matrix("W1")->value - expected).norm(), 1e-4);
}

TEST(PositionConditions, DisturbanceBoundIsStrict) {
  const QuadrotorParams p = reference_quadrotor();
  PositionGains g = reference_gains();
  GainBounds b = reference_bounds();
  b.delta_x = g.k_i * g.sigma;
  EXPECT_EQ(check_position_conditions(g, p, b).verdict("kisigma_gt_deltax"), false);
  b.delta_x = 0.999 * g.k_i * g.sigma;
  EXPECT_EQ(check_position_conditions(g, p, b).verdict("kisigma_gt_deltax"), true);
}

TEST(PositionConditions, AlphaInUnitInterval) {
  const QuadrotorParams p = reference_quadrotor();
  for (int i = 0; i < 100; ++i) {
    GainBounds b = random_bounds(p);
    const double alpha = *check_position_conditions(random_gains(), p, b).scalar("alpha");
    EXPECT_GT(alpha, 0.0);
    EXPECT_LT(alpha, 1.0);
    EXPECT_NEAR(alpha, std::sqrt(b.psi1 * (2.0 - b.psi1)), 1e-15);
  }
}

TEST(PositionConditions, ReferenceGainsEigenvaluesMatchClosedForm) {
  const Certificate c = certify(reference_gains(), reference_quadrotor(), reference_bounds());
  for (const CertMatrix& m : c.matrices) {
    if (!m.symmetric) continue;
    const double tr = m.value.trace();
    const double det = m.value.determinant();
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    EXPECT_NEAR(m.eig.min, 0.5 * (tr - disc), 1e-12 * (1.0 + std::abs(tr))) << m.name;
    EXPECT_NEAR(m.eig.max, 0.5 * (tr + disc), 1e-12 * (1.0 + std::abs(tr))) << m.name;
  }
}

// 100 random gain sets against independent re-evaluations.
TEST(Certificate, RandomGainsAgreeWithOracles) {
  const QuadrotorParams p = reference_quadrotor();
  const double m = p.mass();
  const double lm = p.lambda_min();
  const double lM = p.lambda_max();
  for (int i = 0; i < 100; ++i) {
    const PositionGains g = random_gains();
    const GainBounds b = random_bounds(p);
    const Certificate c = certify(g, p, b);

    for (const CertMatrix& mat : c.matrices) {
      if (!mat.symmetric) continue;
      EXPECT_LT(std::abs(char_poly(mat.value, mat.eig.min)), 1e-10) << mat.name;
      EXPECT_LT(std::abs(char_poly(mat.value, mat.eig.max)), 1e-10) << mat.name;
      const auto v = c.verdict(mat.name + "_pd");
      if (v) {
        EXPECT_EQ(*v, sylvester_pd(mat.value)) << mat.name;
        EXPECT_EQ(*v, mat.eig.min > 0.0 && mat.value(0, 0) > 0.0 && mat.value(1, 1) > 0.0) << mat.name;
      }
    }

    const double c2_sqrt = std::sqrt(g.att.k_R * lm) / lM;
    const double c2_ratio = 4.0 * g.att.k_Omega /
                            (8.0 * g.att.k_R * lM + std::pow(g.att.k_Omega + b.B2, 2));
    EXPECT_EQ(*c.verdict("c2_sqrt_bound"), g.att.c2 < c2_sqrt);
    EXPECT_EQ(*c.verdict("c2_ratio_bound"), g.att.c2 < c2_ratio);

    EXPECT_EQ(*c.verdict("kisigma_gt_deltax"), g.k_i * g.sigma > b.delta_x);
    const double a = std::sqrt(b.psi1 * (2.0 - b.psi1));
    const double c1_a = 4.0 * g.k_x * g.k_v * (1 - a) * (1 - a) /
                        (g.k_v * g.k_v * (1 + a) * (1 + a) + 4.0 * m * g.k_x * (1 - a));
    EXPECT_EQ(*c.verdict("c1_alpha_bound"), g.c1 < c1_a);
    EXPECT_EQ(*c.verdict("c1_sqrt_bound"), g.c1 < std::sqrt(g.k_x / m));

    // W12 has a single nonzero column; its 2-norm is that column's length.
    const double col0 = g.c1 * (std::sqrt(3.0) * g.k_i * g.sigma + b.B1);
    const double col1 = g.k_i * g.sigma + b.B1 + g.k_x * b.e_x_max;
    const double w12 = std::hypot(col0, col1);
    EXPECT_NEAR(*c.scalar("W12_norm"), w12, 1e-12 * w12);

    Eigen::SelfAdjointEigenSolver<Mat2> e1(c.matrix("W1")->value);
    Eigen::SelfAdjointEigenSolver<Mat2> e2(c.matrix("W2")->value);
    const double l1 = e1.eigenvalues()(0);
    const double l2 = e2.eigenvalues()(0);
    EXPECT_EQ(*c.verdict("W2_W12_W1_coupling"), l1 > 0.0 && l2 > w12 * w12 / (4.0 * l1));
    EXPECT_EQ(*c.verdict("W_pd"), l1 > 0.0 && l1 * l2 > 0.25 * w12 * w12);
  }
}

TEST(Certificate, DeterministicAndRoundTrips) {
  const Certificate c = certify(reference_gains(), reference_quadrotor(), reference_bounds());
  const std::string text = to_text(c);
  EXPECT_EQ(text, to_text(certify(reference_gains(), reference_quadrotor(), reference_bounds())));

  const Certificate back = parse_certificate(text);
  EXPECT_EQ(to_text(back), text);
  ASSERT_EQ(back.verdicts.size(), c.verdicts.size());
  for (const CertMatrix& m : back.matrices) {
    if (!m.symmetric) continue;
    const Eig2 e = eig2(m.value);
    EXPECT_EQ(e.min, m.eig.min) << m.name;
    const auto v = back.verdict(m.name + "_pd");
    if (v) EXPECT_EQ(*v, e.min > 0.0) << m.name;
  }
}

TEST(Certificate, ParseRejectsMalformedText) {
  EXPECT_THROW(parse_certificate("input.k_x 3\n"), ValidationError);
  EXPECT_THROW(parse_certificate("input.k_x: three\n"), ValidationError);
  EXPECT_THROW(parse_certificate("matrix.W1: 1 2 3\n"), ValidationError);
  EXPECT_THROW(parse_certificate("verdict.W1_pd: maybe\n"), ValidationError);
  EXPECT_THROW(parse_certificate("eig.W1: 1 2\n"), ValidationError);
  EXPECT_THROW(parse_certificate("bogus.key: 1\n"), ValidationError);
}

// Regenerate with GEOMCTL_UPDATE_GOLDEN=1.
TEST(Certificate, ReferenceGainsMatchGoldenFile) {
  const std::string text = to_text(certify(reference_gains(), reference_quadrotor(), reference_bounds()));
  if (std::getenv("GEOMCTL_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(kGoldenPath) << text;
  }
  std::ifstream in(kGoldenPath);
  ASSERT_TRUE(in) << kGoldenPath;
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(text, golden.str());
}

TEST(Certificate, CertifiedGainsPassOnHoverDomain) {
  const Scenario sc = small_error_hover_scenario();
  const Certificate c = certify(sc.gains, sc.params, sc.bounds);
  EXPECT_TRUE(c.all_pass()) << to_text(c);
}

TEST(Lyapunov, MinimumAtEquilibrium) {
  const PositionGains g = certified_gains();
  const QuadrotorParams p = reference_quadrotor();
  const Disturbance d = reference_disturbance();
  const Vec3 e_i_eq = d.delta_x / g.k_i;
  EXPECT_NEAR(translational_lyapunov(Vec3::Zero(), Vec3::Zero(), e_i_eq, g, p, d.delta_x), 0.0, 1e-15);
  EXPECT_NEAR(rotational_lyapunov(0.0, Vec3::Zero(), Vec3::Zero(), d.delta_R / g.att.k_I, g.att,
                                  p.inertia(), d.delta_R),
              0.0, 1e-15);
  for (int i = 0; i < 200; ++i) {
    const Vec3 e_i = e_i_eq + random_vec(0.5);
    EXPECT_GT(translational_lyapunov(random_vec(0.1), random_vec(0.1), e_i, g, p, d.delta_x), 0.0);
  }
  PositionGains no_integral = g;
  no_integral.k_i = 0.0;
  EXPECT_THROW(translational_lyapunov(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), no_integral, p, d.delta_x),
               ValidationError);
}

TEST(Lyapunov, IntegralTermGradientIsSaturatedForce) {
  const PositionGains g = reference_gains();
  const QuadrotorParams p = reference_quadrotor();
  const Vec3 dx = reference_disturbance().delta_x;
  for (int i = 0; i < 100; ++i) {
    const Vec3 e_i = random_vec(3.0);
    const double h = 1e-6;
    for (int j = 0; j < 3; ++j) {
      Vec3 up = e_i;
      Vec3 dn = e_i;
      up[j] += h;
      dn[j] -= h;
      const double grad = (translational_lyapunov(Vec3::Zero(), Vec3::Zero(), up, g, p, dx) -
                           translational_lyapunov(Vec3::Zero(), Vec3::Zero(), dn, g, p, dx)) /
                          (2 * h);
      EXPECT_NEAR(grad, g.k_i * saturate(e_i, g.sigma)[j] - dx[j], 1e-7);
    }
  }
}
