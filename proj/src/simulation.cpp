#include "geomctl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geomctl/errors.hpp"

namespace geomctl {

namespace {

ExtendedState advance(const ExtendedState& s0, const ExtendedDerivative& d, double h,
                      const Vec3& theta) {
  ExtendedState s;
  s.body.x = s0.body.x + h * d.body.x_dot;
  s.body.v = s0.body.v + h * d.body.v_dot;
  s.body.Omega = s0.body.Omega + h * d.body.Omega_dot;
  s.body.R = s0.body.R * exp_so3(theta);
  s.e_i = s0.e_i + h * d.e_i_dot;
  s.e_I = s0.e_I + h * d.e_I_dot;
  return s;
}

ExtendedDerivative weighted(const ExtendedDerivative& k1, const ExtendedDerivative& k2,
                            const ExtendedDerivative& k3, const ExtendedDerivative& k4) {
  auto w = [](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) -> Vec3 {
    return (a + 2.0 * b + 2.0 * c + d) / 6.0;
  };
  ExtendedDerivative out;
  out.body.x_dot = w(k1.body.x_dot, k2.body.x_dot, k3.body.x_dot, k4.body.x_dot);
  out.body.v_dot = w(k1.body.v_dot, k2.body.v_dot, k3.body.v_dot, k4.body.v_dot);
  out.body.Omega_dot = w(k1.body.Omega_dot, k2.body.Omega_dot, k3.body.Omega_dot, k4.body.Omega_dot);
  out.e_i_dot = w(k1.e_i_dot, k2.e_i_dot, k3.e_i_dot, k4.e_i_dot);
  out.e_I_dot = w(k1.e_I_dot, k2.e_I_dot, k3.e_I_dot, k4.e_I_dot);
  return out;
}

bool finite(const ExtendedState& s) {
  return s.body.x.allFinite() && s.body.v.allFinite() && s.body.R.allFinite() &&
         s.body.Omega.allFinite() && s.e_i.allFinite() && s.e_I.allFinite();
}

ExtendedState step_with_first_stage(const ExtendedState& s0, double t, double dt,
                                    const ClosedLoopField& field, const ExtendedDerivative& k1) {
  const double h2 = 0.5 * dt;
  const Vec3 K1 = k1.body.R_rate_body;

  const Vec3 th2 = h2 * K1;
  const ExtendedState s2 = advance(s0, k1, h2, th2);
  const ExtendedDerivative k2 = field(t + h2, s2);
  const Vec3 K2 = dexp_inv(th2, k2.body.R_rate_body);

  const Vec3 th3 = h2 * K2;
  const ExtendedState s3 = advance(s0, k2, h2, th3);
  const ExtendedDerivative k3 = field(t + h2, s3);
  const Vec3 K3 = dexp_inv(th3, k3.body.R_rate_body);

  const Vec3 th4 = dt * K3;
  const ExtendedState s4 = advance(s0, k3, dt, th4);
  const ExtendedDerivative k4 = field(t + dt, s4);
  const Vec3 K4 = dexp_inv(th4, k4.body.R_rate_body);

  const Vec3 theta = dt * (K1 + 2.0 * K2 + 2.0 * K3 + K4) / 6.0;
  ExtendedState out = advance(s0, weighted(k1, k2, k3, k4), dt, theta);
  if ((out.body.R.transpose() * out.body.R - Mat3::Identity()).norm() > 1e-12) {
    out.body.R = project_to_so3(out.body.R);
  }
  if (!finite(out)) {
    throw NonFiniteStateError("non-finite state after step at t = " + std::to_string(t));
  }
  return out;
}

struct ModeSchedule {
  std::vector<long long> start_step;
};

ModeSchedule validate_scenario(const Scenario& sc, long long n_steps) {
  if (!(sc.dt > 0.0)) throw ValidationError("dt must be positive");
  if (sc.modes.empty()) throw ValidationError("scenario has no flight modes");
  sc.gains.validate();
  const double tol = 1e-9 * std::max(1.0, sc.t_final);
  if (std::abs(sc.modes.front().t_start) > tol) {
    throw ValidationError("first flight mode must start at t = 0");
  }
  ModeSchedule sched;
  for (std::size_t i = 0; i < sc.modes.size(); ++i) {
    const auto& m = sc.modes[i];
    if (!(m.t_end > m.t_start)) throw ValidationError("flight mode window is empty");
    if (i + 1 < sc.modes.size() && std::abs(m.t_end - sc.modes[i + 1].t_start) > tol) {
      throw ValidationError("flight mode windows must be contiguous");
    }
    const double k = m.t_start / sc.dt;
    if (std::abs(k - std::round(k)) > 1e-6) {
      throw ValidationError("flight mode start is not on the integration grid");
    }
    sched.start_step.push_back(std::llround(k));
  }
  if (sc.t_final < sc.modes.back().t_end - tol) {
    throw ValidationError("t_final ends before the last flight mode");
  }
  if (std::abs(static_cast<double>(n_steps) * sc.dt - sc.t_final) > tol) {
    throw ValidationError("t_final is not a multiple of dt");
  }
  return sched;
}

std::size_t mode_at(const ModeSchedule& sched, long long k) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sched.start_step.size(); ++i) {
    if (sched.start_step[i] <= k) idx = i;
  }
  return idx;
}

// Smallest distance of e_i to leaving its current saturation pieces;
// negative once some component has crossed.
double band_margin(const Vec3& e_i, double sigma, const SaturationBand& band) {
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    const double mj = band[j] == 0 ? sigma - std::abs(e_i[j]) : band[j] * e_i[j] - sigma;
    margin = std::min(margin, mj);
  }
  return margin;
}

// Advances the grid interval [t, t + dt]. In position mode with integral
// action the saturation pieces are held fixed over each sub-step and the
// interval is split where a component crosses the saturation level.
ExtendedState advance_interval(const Scenario& sc, const FlightMode& mode, double t,
                               const ExtendedState& s0, const ExtendedDerivative& k1,
                               const std::optional<CommandedRates>& fd_rates) {
  auto field_for = [&](const std::optional<SaturationBand>& band) -> ClosedLoopField {
    return [&sc, &mode, &fd_rates, band](double tt, const ExtendedState& s) {
      return evaluate_mode(sc, mode, tt, s, fd_rates, band).deriv;
    };
  };
  if (!mode.is_position() || sc.gains.k_i == 0.0) {
    return step_with_first_stage(s0, t, sc.dt, field_for(std::nullopt), k1);
  }

  const double sigma = sc.gains.sigma;
  const double t_end = t + sc.dt;
  constexpr int kMaxCrossings = 16;
  SaturationBand band = saturation_band(s0.e_i, sigma);
  ExtendedState s = s0;
  double tc = t;
  for (int pass = 0;; ++pass) {
    const ClosedLoopField field = field_for(band);
    const double h = t_end - tc;
    const ExtendedState trial =
        pass == 0 ? step_with_first_stage(s, tc, h, field, k1) : step(s, tc, h, field);
    if (pass == kMaxCrossings || band_margin(trial.e_i, sigma, band) >= 0.0) return trial;

    double lo = 0.0;
    double hi = h;
    ExtendedState past = trial;
    while (hi - lo > 1e-12 * sc.dt) {
      const double mid = 0.5 * (lo + hi);
      const ExtendedState sm = step(s, tc, mid, field);
      if (band_margin(sm.e_i, sigma, band) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
        past = sm;
      }
    }
    for (int j = 0; j < 3; ++j) {
      const SaturationBand one{band[j], band[j], band[j]};
      if (band_margin(Vec3::Constant(past.e_i[j]), sigma, one) < 0.0) {
        band[j] = band[j] == 0 ? (past.e_i[j] > 0.0 ? 1 : -1) : 0;
      }
    }
    s = past;
    tc += hi;
  }
}

}  // namespace

ExtendedState step(const ExtendedState& s, double t, double dt, const ClosedLoopField& field) {
  return step_with_first_stage(s, t, dt, field, field(t, s));
}

ModeEvaluation evaluate_mode(const Scenario& sc, const FlightMode& mode, double t,
                             const ExtendedState& s, const std::optional<CommandedRates>& fd_rates,
                             const std::optional<SaturationBand>& band) {
  const QuadrotorParams& p = sc.params;
  ModeEvaluation ev;
  LogRecord& rec = ev.record;
  rec.t = t;
  rec.state = s.body;
  rec.e_i = s.e_i;
  rec.e_I = s.e_I;

  if (const auto* att = std::get_if<AttitudeMode>(&mode.mode)) {
    const AttitudeCommand cmd = att->command(t);
    const AttitudeErrors err = attitude_errors(s.body, cmd);
    rec.wrench.f = att->thrust.value_or(p.mass() * p.gravity());
    rec.wrench.M = control_moment(s.body, cmd, s.e_I, sc.gains.att, p.inertia());
    rec.psi = err.psi;
    rec.e_R = err.e_R;
    rec.e_Omega = err.e_Omega;
    rec.mode = ModeTag::kAttitude;
    rec.R_ref = cmd.R_d;
    rec.Omega_ref = cmd.Omega_d;
    ev.deriv.e_I_dot = integral_rate(err.e_R, err.e_Omega, sc.gains.att);
  } else {
    const auto& pos = std::get<PositionMode>(mode.mode);
    const PositionCommand cmd = pos.command(t);
    CommandedRates rates;
    if (sc.rates == RateSource::kFiniteDifference) {
      rates = fd_rates.value_or(CommandedRates{});
    } else {
      const PositionFrame fr = position_frame(s.body, cmd, s.e_i, sc.gains, p, band);
      const Vec3 accel = translational_acceleration(s.body.R, fr.f, p, sc.dist);
      rates = analytic_commanded_rates(s.body, cmd, s.e_i, sc.gains, p, accel, band);
    }
    const PositionControlOutput out =
        position_control(s.body, cmd, s.e_i, s.e_I, sc.gains, p, rates, band);
    rec.wrench = out.wrench;
    rec.psi = out.psi;
    rec.e_R = out.e_R;
    rec.e_Omega = out.e_Omega;
    rec.e_x = out.e_x;
    rec.e_v = out.e_v;
    rec.mode = ModeTag::kPosition;
    rec.R_ref = out.R_c;
    rec.Omega_ref = out.rates.Omega_c;
    rec.A = out.A;
    ev.deriv.e_i_dot = out.e_i_rate;
    ev.deriv.e_I_dot = out.e_I_rate;
  }
  rec.rotors = wrench_to_rotor_forces(rec.wrench, p);
  ev.deriv.body = dynamics_derivative(s.body, rec.wrench, p, sc.dist);
  return ev;
}

GainBounds scenario_bounds(const Scenario& sc, double psi1, double psi2, double e_x_max) {
  const QuadrotorParams& p = sc.params;
  double accel_force = 0.0;
  double omega_d = 0.0;
  bool any_position = false;
  for (const auto& m : sc.modes) {
    if (const auto* att = std::get_if<AttitudeMode>(&m.mode)) {
      omega_d = std::max(omega_d, att->omega_d_max);
    } else {
      any_position = true;
      const auto& pos = std::get<PositionMode>(m.mode);
      accel_force = std::max(accel_force, pos.accel_force_max.value_or(p.mass() * p.gravity()));
      omega_d = std::max(omega_d, pos.omega_c_max);
    }
  }
  if (!any_position) accel_force = p.mass() * p.gravity();

  GainBounds b;
  b.B1 = 1.01 * accel_force;
  b.B2 = compute_B2(p.inertia(), omega_d);
  b.delta_x = sc.dist.delta_x.cwiseAbs().maxCoeff();
  b.psi1 = psi1;
  b.psi2 = psi2;
  b.e_x_max = e_x_max;
  return b;
}

ScenarioLog run_scenario(const Scenario& sc) {
  const long long n_steps = std::llround(sc.t_final / sc.dt);
  const ModeSchedule sched = validate_scenario(sc, n_steps);

  ScenarioLog log;
  const bool any_position = std::any_of(sc.modes.begin(), sc.modes.end(),
                                        [](const FlightMode& m) { return m.is_position(); });
  try {
    sc.bounds.validate();
    log.certificate = certify(sc.gains, sc.params, sc.bounds, any_position);
    if (!log.certificate->all_pass()) {
      std::string msg = "gain certificate FAIL:";
      for (const auto& v : log.certificate->violated()) msg += " " + v;
      log.warnings.push_back(msg);
    }
  } catch (const ValidationError& e) {
    log.warnings.push_back(std::string("gain certificate skipped: ") + e.what());
  }

  log.records.reserve(static_cast<std::size_t>(n_steps) + 1);
  ExtendedState state{sc.initial, Vec3::Zero(), Vec3::Zero()};
  std::optional<std::size_t> active;
  FrameHistory history;

  try {
    for (long long k = 0; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * sc.dt;
      const std::size_t idx = mode_at(sched, k);
      const FlightMode& mode = sc.modes[idx];
      if (active != idx) {
        // Each mode starts its integrals from zero.
        state.e_i.setZero();
        state.e_I.setZero();
        history.clear();
        active = idx;
      }

      std::optional<CommandedRates> fd_rates;
      if (mode.is_position() && sc.rates == RateSource::kFiniteDifference) {
        const auto& pos = std::get<PositionMode>(mode.mode);
        history.push(t, position_frame(state.body, pos.command(t), state.e_i, sc.gains, sc.params).R_c);
        fd_rates = commanded_rates(history);
      }

      const ModeEvaluation ev0 = evaluate_mode(sc, mode, t, state, fd_rates);
      log.records.push_back(ev0.record);
      if (k == n_steps) break;

      state = advance_interval(sc, mode, t, state, ev0.deriv, fd_rates);
    }
  } catch (const DegenerateCommandError& e) {
    log.abort_reason = e.what();
  } catch (const ParallelInputError& e) {
    log.abort_reason = e.what();
  } catch (const NonFiniteStateError& e) {
    log.abort_reason = e.what();
  }
  return log;
}

}  // namespace geomctl
