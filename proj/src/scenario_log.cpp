#include "geomctl/scenario_log.hpp"

#include <algorithm>
#include <ostream>

#include "geomctl/detail/format.hpp"

namespace geomctl {

const char* to_string(ModeTag tag) {
  return tag == ModeTag::kAttitude ? "attitude" : "position";
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t"};
    auto triple = [&c](const std::string& stem) {
      for (int i = 1; i <= 3; ++i) c.push_back(stem + std::to_string(i));
    };
    triple("x");
    triple("v");
    for (int r = 1; r <= 3; ++r) {
      for (int k = 1; k <= 3; ++k) c.push_back("R" + std::to_string(r) + std::to_string(k));
    }
    triple("W");
    c.push_back("f");
    triple("M");
    for (int i = 1; i <= 4; ++i) c.push_back("f" + std::to_string(i));
    c.push_back("Psi");
    triple("eR");
    triple("eW");
    triple("ex");
    triple("ev");
    triple("ei");
    triple("eI");
    c.push_back("mode");
    return c;
  }();
  return cols;
}

void write_csv(const ScenarioLog& log, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';

  using detail::format_double;
  for (const auto& r : log.records) {
    out << format_double(r.t);
    auto put = [&out](double v) { out << ',' << format_double(v); };
    auto put3 = [&put](const Vec3& v) {
      put(v.x());
      put(v.y());
      put(v.z());
    };
    put3(r.state.x);
    put3(r.state.v);
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) put(r.state.R(row, col));
    }
    put3(r.state.Omega);
    put(r.wrench.f);
    put3(r.wrench.M);
    for (double fi : r.rotors.f) put(fi);
    put(r.psi);
    put3(r.e_R);
    put3(r.e_Omega);
    put3(r.e_x);
    put3(r.e_v);
    put3(r.e_i);
    put3(r.e_I);
    out << ',' << to_string(r.mode) << '\n';
  }
}

LogSummary summarize(const ScenarioLog& log) {
  LogSummary s;
  if (log.records.empty()) return s;
  const auto& last = log.records.back();
  s.final_ex_norm = last.e_x.norm();
  s.final_psi = last.psi;
  s.max_rotor_thrust = log.records.front().rotors.f[0];
  for (const auto& r : log.records) {
    for (double fi : r.rotors.f) s.max_rotor_thrust = std::max(s.max_rotor_thrust, fi);
    s.any_infeasible = s.any_infeasible || r.rotors.infeasible;
  }
  return s;
}

}  // namespace geomctl
