#include "cli_commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "geomctl/config.hpp"
#include "geomctl/detail/format.hpp"
#include "geomctl/errors.hpp"
#include "geomctl/scenarios.hpp"

namespace geomctl::cli {

namespace {

int run_and_report(const Scenario& sc, const std::optional<std::string>& csv_path,
                   std::ostream& out, std::ostream& err) {
  const ScenarioLog log = run_scenario(sc);
  for (const auto& w : log.warnings) err << "warning: " << w << '\n';

  if (csv_path) {
    std::ofstream file(*csv_path);
    if (!file) {
      err << "error: cannot write " << *csv_path << '\n';
      return kExitConfig;
    }
    write_csv(log, file);
  }

  const LogSummary s = summarize(log);
  using detail::format_double;
  out << "records: " << log.records.size() << '\n'
      << "final_ex_norm: " << format_double(s.final_ex_norm) << '\n'
      << "final_psi: " << format_double(s.final_psi) << '\n'
      << "max_rotor_thrust: " << format_double(s.max_rotor_thrust) << '\n';
  if (s.any_infeasible) out << "note: some rotor thrusts were negative\n";
  if (csv_path) out << "csv: " << *csv_path << '\n';
  if (log.abort_reason) {
    err << "aborted: " << *log.abort_reason << '\n';
    return kExitAbort;
  }
  return kExitOk;
}

}  // namespace

int simulate(const std::string& config_path, const std::vector<std::string>& overrides,
             const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
  try {
    const LoadedConfig cfg = load_config(config_path, overrides);
    return run_and_report(cfg.scenario, out_path ? out_path : cfg.csv_path, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
  }
  return kExitConfig;
}

int certify(const std::string& config_path, const std::vector<std::string>& overrides,
            bool strict, std::ostream& out, std::ostream& err) {
  try {
    const LoadedConfig cfg = load_config(config_path, overrides);
    const Scenario& sc = cfg.scenario;
    const bool with_position =
        std::any_of(sc.modes.begin(), sc.modes.end(), [](const FlightMode& m) { return m.is_position(); });
    const Certificate c = geomctl::certify(sc.gains, sc.params, sc.bounds, with_position);
    out << to_text(c);
    return strict && !c.all_pass() ? kExitCertificateFail : kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
  }
  return kExitConfig;
}

int builtin(const std::string& name, const std::optional<std::string>& out_path,
            std::ostream& out, std::ostream& err) {
  if (name == "flip") return run_and_report(flip_scenario(true), out_path, out, err);
  if (name == "flip-no-integral") return run_and_report(flip_scenario(false), out_path, out, err);
  if (name == "euler-attitude") return run_and_report(euler_attitude_scenario(20.0), out_path, out, err);
  err << "unknown builtin scenario '" << name << "' (flip, flip-no-integral, euler-attitude)\n";
  return kExitConfig;
}

}  // namespace geomctl::cli
