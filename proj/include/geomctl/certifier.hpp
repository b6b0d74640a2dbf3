#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "geomctl/attitude_controller.hpp"
#include "geomctl/position_controller.hpp"
#include "geomctl/vehicle.hpp"

namespace geomctl {

using Mat2 = Eigen::Matrix2d;

/// Problem bounds entering the stability conditions.
struct GainBounds {
  double B1 = 0.0;       // bound on |-m g e3 + m xdd_d| (N)
  double B2 = 0.0;       // bound on |(2J - tr(J) I)| |Omega_d|
  double delta_x = 0.0;  // bound on the inf-norm of delta_x (N)
  double psi1 = 0.0;     // initial attitude error bound in position mode, (0, 1)
  double psi2 = 0.0;     // attitude domain bound in attitude mode, (0, 2)
  double e_x_max = 0.0;  // initial position error bound (m)

  void validate() const;
};

struct Eig2 {
  double min = 0.0;
  double max = 0.0;
};

/// Closed-form eigenvalues of a symmetric 2x2 matrix. Asymmetry above 1e-12
/// (absolute, or relative to the largest entry) throws ValidationError.
Eig2 eig2(const Mat2& M);

/// ||2J - tr(J) I||_2 * omega_d_max.
double compute_B2(const Mat3& J, double omega_d_max);

struct CertMatrix {
  std::string name;
  Mat2 value = Mat2::Zero();
  bool symmetric = true;  // W12 is not, and carries no eigenvalues
  Eig2 eig;
};

struct Verdict {
  std::string name;
  bool pass = false;
};

/// Evaluated stability conditions. Entries keep insertion order so the text
/// form is deterministic.
struct Certificate {
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<CertMatrix> matrices;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
  std::vector<std::string> violated() const;
  std::optional<double> input(std::string_view name) const;
  std::optional<double> scalar(std::string_view name) const;
  const CertMatrix* matrix(std::string_view name) const;
  std::optional<bool> verdict(std::string_view name) const;

  /// Appends entries of other whose names are not present yet.
  void merge(const Certificate& other);
};

/// c2 bounds, W2, M21 and M22 (built with psi2).
Certificate check_attitude_conditions(const AttitudeGains& g, const Mat3& J,
                                      const GainBounds& b);

/// k_i sigma > delta_x, the c1 bounds, W1, W12, W2, M11, M12, M21, M22'
/// (built with psi1), the W1/W12/W2 coupling inequality and the composite W.
Certificate check_position_conditions(const PositionGains& g, const QuadrotorParams& p,
                                      const GainBounds& b);

/// Attitude conditions, plus the position conditions when with_position is set.
Certificate certify(const PositionGains& g, const QuadrotorParams& p, const GainBounds& b,
                    bool with_position = true);

/// Translational Lyapunov function about e_i = delta_x / k_i:
///   k_x|e_x|^2/2 + m|e_v|^2/2 + c1 m e_x.e_v + int (k_i sat(mu) - delta_x) . dmu.
/// Needs k_i > 0.
double translational_lyapunov(const Vec3& e_x, const Vec3& e_v, const Vec3& e_i,
                              const PositionGains& g, const QuadrotorParams& p,
                              const Vec3& delta_x);

/// Rotational Lyapunov function about e_I = delta_R / k_I:
///   e_W.J e_W/2 + k_R Psi + c2 e_R.J e_W + k_I |e_I - delta_R/k_I|^2/2.
/// Needs k_I > 0.
double rotational_lyapunov(double psi, const Vec3& e_R, const Vec3& e_Omega, const Vec3& e_I,
                           const AttitudeGains& g, const Mat3& J, const Vec3& delta_R);

/// key: value text, matrices row-major, verdicts as PASS/FAIL.
std::string to_text(const Certificate& c);

/// Inverse of to_text. Throws ValidationError on malformed lines.
Certificate parse_certificate(std::string_view text);

}  // namespace geomctl
