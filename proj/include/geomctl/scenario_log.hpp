#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geomctl/certifier.hpp"
#include "geomctl/vehicle.hpp"

namespace geomctl {

enum class ModeTag { kAttitude, kPosition };

const char* to_string(ModeTag tag);

struct LogRecord {
  double t = 0.0;
  RigidBodyState state;
  ControlWrench wrench;
  RotorForces rotors;
  double psi = 0.0;
  Vec3 e_R = Vec3::Zero();
  Vec3 e_Omega = Vec3::Zero();
  Vec3 e_x = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  Vec3 e_i = Vec3::Zero();
  Vec3 e_I = Vec3::Zero();
  ModeTag mode = ModeTag::kAttitude;

  // In-memory diagnostics, not serialized: the tracked frame (R_d or R_c),
  // its body rate, and the desired force vector (position mode only).
  Mat3 R_ref = Mat3::Identity();
  Vec3 Omega_ref = Vec3::Zero();
  Vec3 A = Vec3::Zero();
};

struct ScenarioLog {
  std::vector<LogRecord> records;
  std::optional<std::string> abort_reason;
  std::optional<Certificate> certificate;
  std::vector<std::string> warnings;
};

/// Column names, in order.
const std::vector<std::string>& csv_columns();

/// Header row plus one row per record, numbers with 17 significant digits.
void write_csv(const ScenarioLog& log, std::ostream& out);

struct LogSummary {
  double final_ex_norm = 0.0;
  double final_psi = 0.0;
  double max_rotor_thrust = 0.0;
  bool any_infeasible = false;
};

LogSummary summarize(const ScenarioLog& log);

}  // namespace geomctl
