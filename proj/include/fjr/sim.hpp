#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fjr/control.hpp"
#include "fjr/observer.hpp"
#include "fjr/plant.hpp"

namespace fjr {

// Constant external torque applied on the link side over [t_start, t_end).
struct TauExtPulse {
  double t_start = 0.0;
  double t_end = 0.0;
  JointVector value;
};

struct DiagnosticSettings {
  double oscillation_window = 4.0;      // [s], trailing
  double oscillation_threshold = 1e-4;  // peak-to-peak
  double steady_window = 1.0;           // [s], trailing
  double tracking_from = 2.0;           // [s], start of post-transient window
  double damping_c3 = 0.4;              // for the K_d >= c3/(B L) margin
};

struct ScenarioConfig {
  std::string name = "custom";
  FjrParams plant;
  PdGains pd;
  Reference reference;
  ObserverKind observer = ObserverKind::None;
  ObserverGains gains;
  std::vector<TauExtPulse> tau_ext;

  double duration = 10.0;
  double dt = 1e-5;
  int sample_stride = 100;

  // Initial plant state; the observer starts on the measured motor state
  // unless overridden.
  PlantState initial;
  std::optional<JointVector> theta_n0, dtheta_n0, i_enr0;

  std::uint64_t seed = 0;
  // Also simulate the friction-free plant without observer and store its
  // motor position as theta_ideal.
  bool compute_ideal = true;
  DiagnosticSettings diagnostics;

  // Throws ConfigError naming the offending setting.
  void validate() const;
  // Config validation warnings that do not stop a run.
  std::vector<std::string> warnings() const;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(double t, const std::string& what)
      : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Everything the integrator advances. The bristle states ride along in
// plant.z but are updated by the friction model, not by the RK stages.
struct FullState {
  PlantState plant;
  ObserverState observer;
};

FullState initial_state(const ScenarioConfig& cfg);

// Controller, observer and plant signals at one instant.
struct Signals {
  JointVector theta_d, tau_j, tau_c, tau_m, tau_hat, tau_f, tau_ext;
};
Signals evaluate_signals(const FullState& s, double t, const ScenarioConfig& cfg);

// One step of length cfg.dt: classical RK4 on (q, dq, theta, dtheta,
// theta_n, dtheta_n, i_enr), where each stage sees the friction force of
// the bristle state advanced semi-implicitly from its step-start value over
// the stage offset. The bristle state is then advanced over dt with the
// step's mean motor velocity. Throws NumericalError if the result is not
// finite.
FullState integrate_step(const FullState& s, double t, const ScenarioConfig& cfg);

struct SimTrace {
  int dof = 1;
  double sample_dt = 0.0;
  std::vector<double> t;
  std::vector<JointVector> q, dq, theta, dtheta, theta_n, dtheta_n, e_nr, i_enr,
      tau_j, tau_c, tau_m, tau_hat, tau_f, z, tau_ext, theta_d, theta_ideal;

  std::size_t size() const { return t.size(); }

  struct Signal {
    std::string_view name;
    std::vector<JointVector> SimTrace::*member;
  };
  // Every per-joint signal in storage order.
  static std::span<const Signal> signals();

  std::vector<double> column(std::vector<JointVector> SimTrace::*member,
                             int joint = 0) const;
  // Index of the first sample with t >= time.
  std::size_t index_at(double time) const;
};

SimTrace run_scenario(const ScenarioConfig& cfg);

// ---- diagnostics ---------------------------------------------------------

struct OscillationReport {
  bool flag = false;
  double amplitude = 0.0;  // peak-to-peak
  double window = 0.0;
};

// Peak-to-peak of x over the trailing window of a uniformly sampled signal.
OscillationReport detect_oscillation(std::span<const double> t,
                                     std::span<const double> x, double window,
                                     double threshold);
OscillationReport detect_oscillation(const SimTrace& trace, double window,
                                     double threshold, int joint = 0);

struct SteadyStateError {
  JointVector value;  // mean(theta - theta_d) over the window
  bool caveat = false;  // window was oscillating
};
SteadyStateError steady_state_error(const SimTrace& trace, double window,
                                    double oscillation_threshold = 1e-4);

// Running integral of (-de_nr)' tau_hat with de_nr = dtheta_n - dtheta.
ObserverEnergy observer_energy(const SimTrace& trace);

// max |theta - theta_ideal| over samples with t >= t_from, all joints.
double tracking_error(const SimTrace& trace, double t_from);

// Mean of a signal over the trailing window.
JointVector trailing_mean(const SimTrace& trace,
                          std::vector<JointVector> SimTrace::*member,
                          double window);

// Realized perturbation of the difference dynamics,
// w = -tau_f + B L_p de + B L_i e (PID) or -tau_f + B L_p de (PD), against
// ||w|| <= b1 ||x_nr|| + b2 ||dtheta|| + b3 ||dtheta_n|| + b4 with b1 from
// the gains and b2, b4 from the friction bound.
struct PerturbationMonitor {
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  bool holds = true;
  double worst_margin = 0.0;
};
PerturbationMonitor perturbation_bound_monitor(const SimTrace& trace,
                                               const ScenarioConfig& cfg);

struct StationarityReport {
  double tau_j_variation = 0.0;   // max |tau_j - tau_j(end)| in the window
  double max_nominal_speed = 0.0;  // max |dtheta_n| in the window
};
StationarityReport stationarity(const SimTrace& trace, double window);

struct EquilibriumCheck {
  double friction_force = 0.0;  // measured mean model force over the window
  EquilibriumPrediction predicted;
  double e_nr_measured = 0.0;
  double i_enr_measured = 0.0;
  double steady_error_predicted = 0.0;  // -e_nr, since theta_n -> theta_d
};
// Joint 0, PID and PD observers only.
EquilibriumCheck equilibrium_check(const SimTrace& trace, const ScenarioConfig& cfg);

struct Diagnostics {
  OscillationReport oscillation;
  SteadyStateError steady_state;
  double observer_energy_min = 0.0;
  std::optional<EquilibriumCheck> equilibrium;
  std::optional<double> tracking_error;
  std::vector<std::string> warnings;
};
Diagnostics compute_diagnostics(const SimTrace& trace, const ScenarioConfig& cfg);

// ---- scenario studies ------------------------------------------------------

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  double tracking_error = 0.0;
  bool oscillation = false;
  double steady_state_error = 0.0;
};

// Runs base with observer gain L replaced by each value (L_p, L_i fixed) and
// reports max |theta - theta_ideal| after the transient. Failed runs are
// reported per value.
std::vector<SweepPoint> tikhonov_sweep(const ScenarioConfig& base,
                                       std::span<const double> L_values);

struct MotivatingReport {
  SimTrace no_observer, with_observer, friction_free;
  double no_observer_max_abs_theta = 0.0;
  bool stuck = false;
  std::optional<double> first_breakaway_time;
  double net_force_at_breakaway = 0.0;  // tau_c - tau_hat
  int breakaway_count = 0;
  double final_error = 0.0;  // with observer, theta(end) - theta_d
  double friction_free_final_error = 0.0;
  std::vector<std::string> events;
};

// Runs the base scenario three ways: no observer, as configured (the PID
// observer in the preset), and friction-free without observer. Breakaway is
// the first sample where |dtheta| exceeds the Stribeck velocity.
MotivatingReport motivating_example(const ScenarioConfig& base);

}  // namespace fjr
