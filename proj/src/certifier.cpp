#include "geomctl/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geomctl/detail/format.hpp"
#include "geomctl/errors.hpp"

namespace geomctl {

namespace {

CertMatrix symmetric_matrix(std::string name, const Mat2& M) {
  return {std::move(name), M, true, eig2(M)};
}

bool positive_definite(const CertMatrix& m) { return m.symmetric && m.eig.min > 0.0; }

// Spectral norm of a general 2x2 matrix.
double norm2(const Mat2& M) {
  return Eigen::JacobiSVD<Mat2>(M).singularValues()(0);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view tok, std::string_view line) {
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ValidationError("certificate: bad number in line '" + std::string(line) + "'");
  }
  return v;
}

std::vector<double> parse_numbers(std::string_view value, std::string_view line) {
  std::vector<double> out;
  std::istringstream in{std::string(value)};
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, line));
  return out;
}

}  // namespace

void GainBounds::validate() const {
  if (!(B1 > 0.0) || !(e_x_max > 0.0)) throw ValidationError("bounds B1 and e_x_max must be positive");
  if (!(B2 >= 0.0) || !(delta_x >= 0.0)) throw ValidationError("bounds B2 and delta_x must be non-negative");
  if (!(psi1 > 0.0 && psi1 < 1.0)) throw ValidationError("psi1 must lie in (0, 1)");
  if (!(psi2 > 0.0 && psi2 < 2.0)) throw ValidationError("psi2 must lie in (0, 2)");
}

Eig2 eig2(const Mat2& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (std::abs(M(0, 1) - M(1, 0)) > 1e-12 * scale) {
    throw ValidationError("eig2: matrix is not symmetric");
  }
  const double b = 0.5 * (M(0, 1) + M(1, 0));
  const double mean = 0.5 * (M(0, 0) + M(1, 1));
  const double radius = std::hypot(0.5 * (M(0, 0) - M(1, 1)), b);
  // The root of larger magnitude has no cancellation; the other follows from
  // the determinant.
  const double big = mean >= 0.0 ? mean + radius : mean - radius;
  if (big == 0.0) return {0.0, 0.0};
  const double det = M(0, 0) * M(1, 1) - b * b;
  const double other = det / big;
  return {std::min(big, other), std::max(big, other)};
}

double compute_B2(const Mat3& J, double omega_d_max) {
  const Mat3 K = 2.0 * J - J.trace() * Mat3::Identity();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(K, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff() * omega_d_max;
}

bool Certificate::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<std::string> Certificate::violated() const {
  std::vector<std::string> out;
  for (const auto& v : verdicts) {
    if (!v.pass) out.push_back(v.name);
  }
  return out;
}

std::optional<double> Certificate::input(std::string_view name) const {
  for (const auto& [k, v] : inputs) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::optional<double> Certificate::scalar(std::string_view name) const {
  for (const auto& [k, v] : scalars) {
    if (k == name) return v;
  }
  return std::nullopt;
}

const CertMatrix* Certificate::matrix(std::string_view name) const {
  for (const auto& m : matrices) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::optional<bool> Certificate::verdict(std::string_view name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return v.pass;
  }
  return std::nullopt;
}

void Certificate::merge(const Certificate& other) {
  for (const auto& kv : other.inputs) {
    if (!input(kv.first)) inputs.push_back(kv);
  }
  for (const auto& kv : other.scalars) {
    if (!scalar(kv.first)) scalars.push_back(kv);
  }
  for (const auto& m : other.matrices) {
    if (!matrix(m.name)) matrices.push_back(m);
  }
  for (const auto& v : other.verdicts) {
    if (!verdict(v.name)) verdicts.push_back(v);
  }
}

Certificate check_attitude_conditions(const AttitudeGains& g, const Mat3& J,
                                      const GainBounds& b) {
  Eigen::SelfAdjointEigenSolver<Mat3> eigJ(J, Eigen::EigenvaluesOnly);
  const double lm = eigJ.eigenvalues()(0);
  const double lM = eigJ.eigenvalues()(2);

  Certificate c;
  c.inputs = {{"lambda_m", lm}, {"lambda_M", lM}, {"k_R", g.k_R}, {"k_Omega", g.k_Omega},
              {"k_I", g.k_I},   {"c2", g.c2},     {"B2", b.B2},   {"psi2", b.psi2}};

  const double c2_sqrt_bound = std::sqrt(g.k_R * lm) / lM;
  const double c2_ratio_bound =
      4.0 * g.k_Omega / (8.0 * g.k_R * lM + (g.k_Omega + b.B2) * (g.k_Omega + b.B2));
  c.scalars = {{"c2_sqrt_bound", c2_sqrt_bound}, {"c2_ratio_bound", c2_ratio_bound}};

  Mat2 W2;
  W2 << g.c2 * g.k_R, -0.5 * g.c2 * (g.k_Omega + b.B2),
        -0.5 * g.c2 * (g.k_Omega + b.B2), g.k_Omega - 2.0 * g.c2 * lM;
  Mat2 M21;
  M21 << 0.5 * g.k_R, -0.5 * g.c2 * lM,
         -0.5 * g.c2 * lM, 0.5 * lm;
  Mat2 M22;
  M22 << g.k_R / (2.0 - b.psi2), 0.5 * g.c2 * lM,
         0.5 * g.c2 * lM, 0.5 * lM;
  c.matrices = {symmetric_matrix("W2", W2), symmetric_matrix("M21", M21),
                symmetric_matrix("M22", M22)};

  c.verdicts = {{"c2_sqrt_bound", g.c2 < c2_sqrt_bound},
                {"c2_ratio_bound", g.c2 < c2_ratio_bound},
                {"W2_pd", positive_definite(c.matrices[0])},
                {"M21_pd", positive_definite(c.matrices[1])},
                {"M22_pd", positive_definite(c.matrices[2])}};
  return c;
}

Certificate check_position_conditions(const PositionGains& g, const QuadrotorParams& p,
                                      const GainBounds& b) {
  const double m = p.mass();
  const double lm = p.lambda_min();
  const double lM = p.lambda_max();
  const double kx = g.k_x;
  const double kv = g.k_v;
  const double c1 = g.c1;
  const double c2 = g.att.c2;
  const double kR = g.att.k_R;
  const double kW = g.att.k_Omega;
  const double ki_sigma = g.k_i * g.sigma;

  Certificate c;
  c.inputs = {{"m", m},
              {"lambda_m", lm},
              {"lambda_M", lM},
              {"k_x", kx},
              {"k_v", kv},
              {"k_i", g.k_i},
              {"c1", c1},
              {"sigma", g.sigma},
              {"k_R", kR},
              {"k_Omega", kW},
              {"k_I", g.att.k_I},
              {"c2", c2},
              {"B1", b.B1},
              {"B2", b.B2},
              {"delta_x", b.delta_x},
              {"psi1", b.psi1},
              {"e_x_max", b.e_x_max}};

  const double alpha = std::sqrt(b.psi1 * (2.0 - b.psi1));
  const double c1_alpha_bound = 4.0 * kx * kv * (1.0 - alpha) * (1.0 - alpha) /
                                (kv * kv * (1.0 + alpha) * (1.0 + alpha) + 4.0 * m * kx * (1.0 - alpha));
  const double c1_sqrt_bound = std::sqrt(kx / m);

  Mat2 W1;
  W1 << c1 * kx * (1.0 - alpha), -0.5 * c1 * kv * (1.0 + alpha),
        -0.5 * c1 * kv * (1.0 + alpha), kv * (1.0 - alpha) - m * c1;
  Mat2 W12;
  W12 << c1 * (std::sqrt(3.0) * ki_sigma + b.B1), 0.0,
         ki_sigma + b.B1 + kx * b.e_x_max, 0.0;
  Mat2 W2;
  W2 << c2 * kR, -0.5 * c2 * (kW + b.B2),
        -0.5 * c2 * (kW + b.B2), kW - 2.0 * c2 * lM;
  Mat2 M11;
  M11 << 0.5 * kx, -0.5 * m * c1,
         -0.5 * m * c1, 0.5 * m;
  Mat2 M12;
  M12 << 0.5 * kx, 0.5 * m * c1,
         0.5 * m * c1, 0.5 * m;
  Mat2 M21;
  M21 << 0.5 * kR, -0.5 * c2 * lM,
         -0.5 * c2 * lM, 0.5 * lm;
  Mat2 M22p;
  M22p << kR / (2.0 - b.psi1), 0.5 * c2 * lM,
          0.5 * c2 * lM, 0.5 * lM;

  const CertMatrix w1 = symmetric_matrix("W1", W1);
  const CertMatrix w2 = symmetric_matrix("W2", W2);
  const double W12_norm = norm2(W12);
  Mat2 W;
  W << w1.eig.min, -0.5 * W12_norm,
       -0.5 * W12_norm, w2.eig.min;

  c.scalars = {{"alpha", alpha},
               {"c1_alpha_bound", c1_alpha_bound},
               {"c1_sqrt_bound", c1_sqrt_bound},
               {"W12_norm", W12_norm}};
  c.matrices = {w1,
                {"W12", W12, false, {}},
                w2,
                symmetric_matrix("M11", M11),
                symmetric_matrix("M12", M12),
                symmetric_matrix("M21", M21),
                symmetric_matrix("M22p", M22p),
                symmetric_matrix("W", W)};

  const bool coupling = w1.eig.min > 0.0 && w2.eig.min > W12_norm * W12_norm / (4.0 * w1.eig.min);
  c.verdicts = {{"kisigma_gt_deltax", ki_sigma > b.delta_x},
                {"c1_alpha_bound", c1 < c1_alpha_bound},
                {"c1_sqrt_bound", c1 < c1_sqrt_bound},
                {"W1_pd", positive_definite(w1)},
                {"W2_pd", positive_definite(w2)},
                {"M11_pd", positive_definite(*c.matrix("M11"))},
                {"M12_pd", positive_definite(*c.matrix("M12"))},
                {"M21_pd", positive_definite(*c.matrix("M21"))},
                {"M22p_pd", positive_definite(*c.matrix("M22p"))},
                {"W2_W12_W1_coupling", coupling},
                {"W_pd", positive_definite(*c.matrix("W"))}};
  return c;
}

Certificate certify(const PositionGains& g, const QuadrotorParams& p, const GainBounds& b,
                    bool with_position) {
  Certificate c = check_attitude_conditions(g.att, p.inertia(), b);
  if (with_position) c.merge(check_position_conditions(g, p, b));
  return c;
}

std::string to_text(const Certificate& c) {
  using detail::format_double;
  std::ostringstream out;
  out << "# gain certificate\n";
  for (const auto& [k, v] : c.inputs) out << "input." << k << ": " << format_double(v) << '\n';
  for (const auto& [k, v] : c.scalars) out << "scalar." << k << ": " << format_double(v) << '\n';
  for (const auto& m : c.matrices) {
    out << "matrix." << m.name << ':';
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 2; ++col) out << ' ' << format_double(m.value(r, col));
    }
    out << '\n';
    if (m.symmetric) {
      out << "eig." << m.name << ": " << format_double(m.eig.min) << ' '
          << format_double(m.eig.max) << '\n';
    }
  }
  for (const auto& v : c.verdicts) {
    out << "verdict." << v.name << ": " << (v.pass ? "PASS" : "FAIL") << '\n';
  }
  const auto bad = c.violated();
  out << "violated:";
  if (bad.empty()) out << " none";
  for (std::size_t i = 0; i < bad.size(); ++i) out << (i == 0 ? " " : ", ") << bad[i];
  out << '\n';
  out << "overall: " << (c.all_pass() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

Certificate parse_certificate(std::string_view text) {
  Certificate c;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError("certificate: missing ':' in line '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));
    const auto dot = key.find('.');
    const std::string_view kind = key.substr(0, dot);
    const std::string name(dot == std::string_view::npos ? std::string_view{} : key.substr(dot + 1));

    if (kind == "input") {
      c.inputs.emplace_back(name, parse_number(value, line));
    } else if (kind == "scalar") {
      c.scalars.emplace_back(name, parse_number(value, line));
    } else if (kind == "matrix") {
      const auto v = parse_numbers(value, line);
      if (v.size() != 4) throw ValidationError("certificate: matrix needs 4 entries");
      Mat2 M;
      M << v[0], v[1], v[2], v[3];
      c.matrices.push_back({name, M, false, {}});
    } else if (kind == "eig") {
      const auto v = parse_numbers(value, line);
      if (v.size() != 2) throw ValidationError("certificate: eig needs 2 entries");
      auto it = std::find_if(c.matrices.begin(), c.matrices.end(),
                             [&](const CertMatrix& m) { return m.name == name; });
      if (it == c.matrices.end()) throw ValidationError("certificate: eig before matrix " + name);
      it->symmetric = true;
      it->eig = {v[0], v[1]};
    } else if (kind == "verdict") {
      if (value != "PASS" && value != "FAIL") {
        throw ValidationError("certificate: verdict must be PASS or FAIL");
      }
      c.verdicts.push_back({name, value == "PASS"});
    } else if (kind == "violated" || kind == "overall") {
      // Derived from the verdicts.
    } else {
      throw ValidationError("certificate: unknown key '" + std::string(key) + "'");
    }
  }
  return c;
}

double translational_lyapunov(const Vec3& e_x, const Vec3& e_v, const Vec3& e_i,
                              const PositionGains& g, const QuadrotorParams& p,
                              const Vec3& delta_x) {
  if (!(g.k_i > 0.0)) throw ValidationError("translational_lyapunov: k_i must be positive");
  const double m = p.mass();
  const double sigma = g.sigma;
  // Antiderivative of k_i sat(u) - d along one axis.
  auto primitive = [&](double u, double d) {
    const double a = std::abs(u);
    const double sat_part = a <= sigma ? 0.5 * u * u : sigma * a - 0.5 * sigma * sigma;
    return g.k_i * sat_part - d * u;
  };
  double integral = 0.0;
  for (int j = 0; j < 3; ++j) {
    integral += primitive(e_i[j], delta_x[j]) - primitive(delta_x[j] / g.k_i, delta_x[j]);
  }
  return 0.5 * g.k_x * e_x.squaredNorm() + 0.5 * m * e_v.squaredNorm() +
         g.c1 * m * e_x.dot(e_v) + integral;
}

double rotational_lyapunov(double psi, const Vec3& e_R, const Vec3& e_Omega, const Vec3& e_I,
                           const AttitudeGains& g, const Mat3& J, const Vec3& delta_R) {
  if (!(g.k_I > 0.0)) throw ValidationError("rotational_lyapunov: k_I must be positive");
  const Vec3 JeW = J * e_Omega;
  return 0.5 * e_Omega.dot(JeW) + g.k_R * psi + g.c2 * e_R.dot(JeW) +
         0.5 * g.k_I * (e_I - delta_R / g.k_I).squaredNorm();
}

}  // namespace geomctl
