#include "fjr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fjr/batch.hpp"

namespace fjr {

namespace {

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, fmt::format("{}: {}", key, what));
}

template <class F>
void rethrow_as_config(const char* key, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, fmt::format("{}: {}", key, e.what()));
  }
}

// "LuGre: f_s must be >= f_c" -> "friction.f_s"
std::string lugre_key(std::string_view msg) {
  constexpr std::string_view prefix = "LuGre: ";
  if (msg.starts_with(prefix)) msg.remove_prefix(prefix.size());
  return "friction." + std::string(msg.substr(0, msg.find(' ')));
}

long long step_count(const ScenarioConfig& cfg) {
  return std::llround(cfg.duration / cfg.dt);
}

}  // namespace

void ScenarioConfig::validate() const {
  const int n = plant.dof();
  require(n >= 1 && n <= kMaxJoints, "plant.B", "joint count out of range");
  require(link_dof(plant.link) == n, "plant.link", "link size does not match B");
  require(plant.K_j.size() == n, "plant.K_j", "size does not match the plant");
  require(plant.B.allFinite() && (plant.B.array() > 0).all(), "plant.B", "entries must be > 0");
  require(plant.K_j.allFinite() && (plant.K_j.array() > 0).all(), "plant.K_j",
          "entries must be > 0");
  if (const auto* pm = std::get_if<PointMassLink>(&plant.link))
    require(pm->mass.allFinite() && (pm->mass.array() > 0).all(), "plant.mass",
            "entries must be > 0");
  rethrow_as_config("plant.link", [&] { plant.validate(); });
  if (const auto* lg = plant.friction.lugre_params()) {
    try {
      lg->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(lugre_key(e.what()), e.what());
    }
  }

  require(pd.K_p.size() == n && pd.K_p.allFinite() && (pd.K_p.array() > 0).all(),
          "controller.K_p", "needs one entry > 0 per joint");
  require(pd.K_d.size() == n && pd.K_d.allFinite() && (pd.K_d.array() > 0).all(),
          "controller.K_d", "needs one entry > 0 per joint");

  if (observer != ObserverKind::None) {
    require(std::isfinite(gains.L) && gains.L > 0, "observer.L", "must be > 0");
    require(std::isfinite(gains.L_p) && std::isfinite(gains.L_i), "observer.L_p",
            "must be finite");
    switch (observer) {
      case ObserverKind::PidType:
        require(gains.L_p > 0, "observer.L_p", "must be > 0 for the PID type");
        require(gains.L_i > 0, "observer.L_i", "must be > 0 for the PID type");
        require(gains.L_p * gains.L_p > 2 * gains.L_i, "observer.L_i",
                "PID type needs L_p^2 > 2 L_i");
        break;
      case ObserverKind::PdType:
        require(gains.L_p > 0, "observer.L_p", "must be > 0 for the PD type");
        require(gains.L_i == 0, "observer.L_i", "must be 0 for the PD type");
        break;
      default:
        require(gains.L_p == 0, "observer.L_p", "must be 0 for the baseline");
        require(gains.L_i == 0, "observer.L_i", "must be 0 for the baseline");
        break;
    }
  }

  const ReferenceSample r = evaluate_reference(reference, 0.0);
  require(r.q_d.size() == n, "controller.reference", "size does not match the plant");

  require(std::isfinite(duration) && duration > 0, "scenario.duration", "must be > 0");
  require(std::isfinite(dt) && dt > 0, "scenario.dt", "must be > 0");
  if (const auto* lg = plant.friction.lugre_params(); lg && lg->sigma0 >= 1e4)
    require(dt <= 2e-5 * (1 + 1e-12), "scenario.dt",
            "must be <= 2e-5 with a stiff LuGre model (sigma0 >= 1e4)");
  require(sample_stride >= 1, "outputs.sample_stride", "must be >= 1");
  const double steps = duration / dt;
  require(std::abs(steps - std::round(steps)) < 1e-6 * steps, "scenario.duration",
          "must be a whole number of steps");
  require(step_count(*this) % sample_stride == 0, "outputs.sample_stride",
          "must divide the number of steps");

  require(initial.q.size() == n && initial.q.allFinite(), "scenario.q0",
          "needs one finite entry per joint");
  require(initial.dq.size() == n && initial.dq.allFinite(), "scenario.dq0",
          "needs one finite entry per joint");
  require(initial.theta.size() == n && initial.theta.allFinite(), "scenario.theta0",
          "needs one finite entry per joint");
  require(initial.dtheta.size() == n && initial.dtheta.allFinite(), "scenario.dtheta0",
          "needs one finite entry per joint");
  require(initial.z.size() == n && initial.z.allFinite(), "scenario.z0",
          "needs one finite entry per joint");
  if (const auto* lg = plant.friction.lugre_params())
    require((initial.z.array().abs() <= lg->max_deflection()).all(),
            "scenario.z0", "bristle state outside |z| <= f_s/sigma0");
  require(!theta_n0 || theta_n0->size() == n, "observer.theta_n0", "size does not match the plant");
  require(!dtheta_n0 || dtheta_n0->size() == n, "observer.dtheta_n0",
          "size does not match the plant");
  require(!i_enr0 || i_enr0->size() == n, "observer.i_enr0", "size does not match the plant");
  for (const auto& p : tau_ext)
    require(p.value.size() == n && p.t_end >= p.t_start, "scenario.tau_ext_value",
            "pulse size or interval invalid");
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> out;
  if (observer != ObserverKind::None) {
    if (auto w = damping_margin_warning(pd, plant.B, gains.L, diagnostics.damping_c3))
      out.push_back(*w);
  }
  return out;
}

FullState initial_state(const ScenarioConfig& cfg) {
  const int n = cfg.plant.dof();
  FullState s;
  s.plant = cfg.initial;
  s.observer.theta_n = cfg.theta_n0.value_or(cfg.initial.theta);
  s.observer.dtheta_n = cfg.dtheta_n0.value_or(cfg.initial.dtheta);
  s.observer.i_enr = cfg.i_enr0.value_or(JointVector::Zero(n));
  if (cfg.observer != ObserverKind::PidType) s.observer.i_enr.setZero();
  return s;
}

namespace {

struct Rates {
  JointVector dq, ddq, dtheta, ddtheta, dtheta_n, ddtheta_n, di;
};

struct StageResult {
  Rates rates;
  Signals signals;
};

JointVector external_torque(const ScenarioConfig& cfg, double t) {
  JointVector tau = JointVector::Zero(cfg.plant.dof());
  for (const auto& p : cfg.tau_ext)
    if (t >= p.t_start && t < p.t_end) tau += p.value;
  return tau;
}

StageResult evaluate_stage(const FullState& s, double t, double hold,
                           const ScenarioConfig& cfg) {
  const FjrParams& plant = cfg.plant;
  const ReferenceSample r = evaluate_reference(cfg.reference, t);
  const JointVector g_qd = link_gravity(plant.link, r.q_d);

  StageResult out;
  Signals& sig = out.signals;
  sig.theta_d = r.q_d + g_qd.cwiseQuotient(plant.K_j);
  const bool nominal = feeds_nominal(cfg.observer);
  sig.tau_c = motor_pd(nominal ? s.observer.theta_n : s.plant.theta,
                       nominal ? s.observer.dtheta_n : s.plant.dtheta, sig.theta_d,
                       cfg.pd, g_qd);
  sig.tau_hat = friction_estimate(s.observer, s.plant.theta, s.plant.dtheta,
                                  cfg.gains, cfg.observer, plant.B);
  sig.tau_m = motor_command(sig.tau_c, sig.tau_hat);
  sig.tau_ext = external_torque(cfg, t);

  const PlantDerivative d =
      plant_derivatives(s.plant, sig.tau_m, sig.tau_ext, plant, hold);
  sig.tau_j = d.tau_j;
  sig.tau_f = d.tau_f;

  Rates& k = out.rates;
  k.dq = s.plant.dq;
  k.ddq = d.ddq;
  k.dtheta = s.plant.dtheta;
  k.ddtheta = d.ddtheta;
  k.dtheta_n = s.observer.dtheta_n;
  k.ddtheta_n = nominal_motor_derivative(d.tau_j, sig.tau_c, plant.B);
  if (cfg.observer == ObserverKind::PidType)
    k.di = s.observer.theta_n - s.plant.theta;
  else
    k.di = JointVector::Zero(plant.dof());
  return out;
}

FullState advance(const FullState& s, const Rates& k, double h) {
  FullState o = s;
  o.plant.q += h * k.dq;
  o.plant.dq += h * k.ddq;
  o.plant.theta += h * k.dtheta;
  o.plant.dtheta += h * k.ddtheta;
  o.observer.theta_n += h * k.dtheta_n;
  o.observer.dtheta_n += h * k.ddtheta_n;
  o.observer.i_enr += h * k.di;
  return o;
}

}  // namespace

Signals evaluate_signals(const FullState& s, double t, const ScenarioConfig& cfg) {
  return evaluate_stage(s, t, 0.0, cfg).signals;
}

FullState integrate_step(const FullState& s, double t, const ScenarioConfig& cfg) {
  const double h = cfg.dt;
  Rates k1, k2, k3, k4;
  try {
    k1 = evaluate_stage(s, t, 0.0, cfg).rates;
    k2 = evaluate_stage(advance(s, k1, 0.5 * h), t + 0.5 * h, 0.5 * h, cfg).rates;
    k3 = evaluate_stage(advance(s, k2, 0.5 * h), t + 0.5 * h, 0.5 * h, cfg).rates;
    k4 = evaluate_stage(advance(s, k3, h), t + h, h, cfg).rates;
  } catch (const std::invalid_argument& e) {
    throw NumericalError(t + h, fmt::format("non-finite state at t = {:.9g} s ({})", t + h,
                                            e.what()));
  }

  Rates avg;
  auto mix = [](const JointVector& a, const JointVector& b, const JointVector& c,
                const JointVector& d) -> JointVector { return (a + 2 * b + 2 * c + d) / 6.0; };
  avg.dq = mix(k1.dq, k2.dq, k3.dq, k4.dq);
  avg.ddq = mix(k1.ddq, k2.ddq, k3.ddq, k4.ddq);
  avg.dtheta = mix(k1.dtheta, k2.dtheta, k3.dtheta, k4.dtheta);
  avg.ddtheta = mix(k1.ddtheta, k2.ddtheta, k3.ddtheta, k4.ddtheta);
  avg.dtheta_n = mix(k1.dtheta_n, k2.dtheta_n, k3.dtheta_n, k4.dtheta_n);
  avg.ddtheta_n = mix(k1.ddtheta_n, k2.ddtheta_n, k3.ddtheta_n, k4.ddtheta_n);
  avg.di = mix(k1.di, k2.di, k3.di, k4.di);

  FullState next = advance(s, avg, h);
  if (!cfg.plant.friction.is_friction_free()) {
    for (int j = 0; j < cfg.plant.dof(); ++j)
      next.plant.z(j) = cfg.plant.friction.evaluate(s.plant.z(j), avg.dtheta(j), h).z;
  }
  if (!next.plant.finite() || !next.observer.theta_n.allFinite() ||
      !next.observer.dtheta_n.allFinite() || !next.observer.i_enr.allFinite())
    throw NumericalError(t + h, fmt::format("non-finite state at t = {:.9g} s", t + h));
  return next;
}

std::span<const SimTrace::Signal> SimTrace::signals() {
  static const Signal table[] = {
      {"q", &SimTrace::q},
      {"dq", &SimTrace::dq},
      {"theta", &SimTrace::theta},
      {"dtheta", &SimTrace::dtheta},
      {"theta_n", &SimTrace::theta_n},
      {"dtheta_n", &SimTrace::dtheta_n},
      {"e_nr", &SimTrace::e_nr},
      {"i_enr", &SimTrace::i_enr},
      {"tau_j", &SimTrace::tau_j},
      {"tau_c", &SimTrace::tau_c},
      {"tau_m", &SimTrace::tau_m},
      {"tau_f_hat", &SimTrace::tau_hat},
      {"tau_f", &SimTrace::tau_f},
      {"z", &SimTrace::z},
      {"tau_ext", &SimTrace::tau_ext},
      {"theta_d", &SimTrace::theta_d},
      {"theta_ideal", &SimTrace::theta_ideal},
  };
  return table;
}

std::vector<double> SimTrace::column(std::vector<JointVector> SimTrace::*member,
                                     int joint) const {
  const auto& series = this->*member;
  std::vector<double> out(series.size());
  std::transform(series.begin(), series.end(), out.begin(),
                 [joint](const JointVector& v) { return v(joint); });
  return out;
}

std::size_t SimTrace::index_at(double time) const {
  const double eps = 1e-9 * std::max(1.0, sample_dt);
  auto it = std::lower_bound(t.begin(), t.end(), time - eps);
  return static_cast<std::size_t>(it - t.begin());
}

SimTrace run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const long long steps = step_count(cfg);
  const std::size_t samples = static_cast<std::size_t>(steps / cfg.sample_stride) + 1;

  SimTrace tr;
  tr.dof = cfg.plant.dof();
  tr.sample_dt = cfg.dt * cfg.sample_stride;
  tr.t.reserve(samples);
  for (const auto& sig : SimTrace::signals()) (tr.*sig.member).reserve(samples);

  FullState s = initial_state(cfg);
  for (long long k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (k % cfg.sample_stride == 0) {
      const Signals sig = evaluate_signals(s, t, cfg);
      tr.t.push_back(t);
      tr.q.push_back(s.plant.q);
      tr.dq.push_back(s.plant.dq);
      tr.theta.push_back(s.plant.theta);
      tr.dtheta.push_back(s.plant.dtheta);
      tr.theta_n.push_back(s.observer.theta_n);
      tr.dtheta_n.push_back(s.observer.dtheta_n);
      tr.e_nr.push_back(s.observer.theta_n - s.plant.theta);
      tr.i_enr.push_back(s.observer.i_enr);
      tr.tau_j.push_back(sig.tau_j);
      tr.tau_c.push_back(sig.tau_c);
      tr.tau_m.push_back(sig.tau_m);
      tr.tau_hat.push_back(sig.tau_hat);
      tr.tau_f.push_back(sig.tau_f);
      tr.z.push_back(s.plant.z);
      tr.tau_ext.push_back(sig.tau_ext);
      tr.theta_d.push_back(sig.theta_d);
    }
    if (k == steps) break;
    s = integrate_step(s, t, cfg);
  }

  if (cfg.compute_ideal) {
    ScenarioConfig ideal = cfg;
    ideal.name = cfg.name + "_ideal";
    ideal.plant.friction = FrictionModel::none();
    ideal.observer = ObserverKind::None;
    ideal.compute_ideal = false;
    ideal.initial.z.setZero();
    const SimTrace ref = run_scenario(ideal);
    tr.theta_ideal = ref.theta;
  } else {
    tr.theta_ideal = tr.theta;
  }
  return tr;
}

// ---- diagnostics -------------------------------------------------------------

OscillationReport detect_oscillation(std::span<const double> t,
                                     std::span<const double> x, double window,
                                     double threshold) {
  if (t.size() != x.size() || t.empty())
    throw std::invalid_argument("detect_oscillation: empty or mismatched trace");
  const double t_end = t.back();
  if (!(window > 0) || window > t_end - t.front() + 1e-12)
    throw std::invalid_argument("detect_oscillation: window must fit in the trace");
  const auto first = std::lower_bound(t.begin(), t.end(), t_end - window - 1e-12) - t.begin();
  const auto [lo, hi] = std::minmax_element(x.begin() + first, x.end());
  OscillationReport r;
  r.window = window;
  r.amplitude = *hi - *lo;
  r.flag = r.amplitude > threshold;
  return r;
}

OscillationReport detect_oscillation(const SimTrace& trace, double window,
                                     double threshold, int joint) {
  return detect_oscillation(trace.t, trace.column(&SimTrace::theta, joint), window,
                            threshold);
}

JointVector trailing_mean(const SimTrace& trace,
                          std::vector<JointVector> SimTrace::*member,
                          double window) {
  const auto& series = trace.*member;
  const std::size_t first = trace.index_at(trace.t.back() - window);
  if (first >= series.size()) throw std::invalid_argument("trailing_mean: empty window");
  JointVector acc = JointVector::Zero(trace.dof);
  for (std::size_t i = first; i < series.size(); ++i) acc += series[i];
  return acc / static_cast<double>(series.size() - first);
}

SteadyStateError steady_state_error(const SimTrace& trace, double window,
                                    double oscillation_threshold) {
  SteadyStateError out;
  out.value = trailing_mean(trace, &SimTrace::theta, window) -
              trailing_mean(trace, &SimTrace::theta_d, window);
  for (int j = 0; j < trace.dof; ++j)
    if (detect_oscillation(trace, window, oscillation_threshold, j).flag) out.caveat = true;
  return out;
}

ObserverEnergy observer_energy(const SimTrace& trace) {
  ObserverEnergy out;
  out.energy.assign(trace.size(), 0.0);
  auto power = [&](std::size_t i) {
    return -(trace.dtheta_n[i] - trace.dtheta[i]).dot(trace.tau_hat[i]);
  };
  double e = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    e += 0.5 * trace.sample_dt * (power(i - 1) + power(i));
    out.energy[i] = e;
    out.min = std::min(out.min, e);
  }
  return out;
}

double tracking_error(const SimTrace& trace, double t_from) {
  double worst = 0.0;
  for (std::size_t i = trace.index_at(t_from); i < trace.size(); ++i)
    worst = std::max(worst, (trace.theta[i] - trace.theta_ideal[i]).cwiseAbs().maxCoeff());
  return worst;
}

PerturbationMonitor perturbation_bound_monitor(const SimTrace& trace,
                                               const ScenarioConfig& cfg) {
  PerturbationMonitor m;
  const double b_max = cfg.plant.B.maxCoeff();
  const double lp = (cfg.observer == ObserverKind::PidType ||
                     cfg.observer == ObserverKind::PdType)
                        ? cfg.gains.L_p
                        : 0.0;
  const double li = cfg.observer == ObserverKind::PidType ? cfg.gains.L_i : 0.0;
  m.b1 = b_max * std::hypot(lp, li);
  if (const auto* p = cfg.plant.friction.lugre_params()) {
    m.b2 = p->sigma2 + p->sigma1 * (1.0 + p->f_s / p->f_c);
    m.b4 = p->f_s * std::sqrt(static_cast<double>(trace.dof));
  }
  m.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const JointVector e = trace.e_nr[i];
    const JointVector de = trace.dtheta_n[i] - trace.dtheta[i];
    const JointVector w =
        -trace.tau_f[i] + cfg.plant.B.cwiseProduct(lp * de + li * e);
    const double x_norm =
        std::sqrt(e.squaredNorm() + de.squaredNorm() + trace.i_enr[i].squaredNorm());
    const double bound = m.b1 * x_norm + m.b2 * trace.dtheta[i].norm() +
                         m.b3 * trace.dtheta_n[i].norm() + m.b4;
    const double margin = bound - w.norm();
    m.worst_margin = std::min(m.worst_margin, margin);
    if (margin < -1e-9 * std::max(1.0, bound)) m.holds = false;
  }
  return m;
}

StationarityReport stationarity(const SimTrace& trace, double window) {
  StationarityReport r;
  const std::size_t first = trace.index_at(trace.t.back() - window);
  const JointVector end = trace.tau_j.back();
  for (std::size_t i = first; i < trace.size(); ++i) {
    r.tau_j_variation =
        std::max(r.tau_j_variation, (trace.tau_j[i] - end).cwiseAbs().maxCoeff());
    r.max_nominal_speed =
        std::max(r.max_nominal_speed, trace.dtheta_n[i].cwiseAbs().maxCoeff());
  }
  return r;
}

EquilibriumCheck equilibrium_check(const SimTrace& trace, const ScenarioConfig& cfg) {
  const double window = cfg.diagnostics.steady_window;
  EquilibriumCheck c;
  c.friction_force = -trailing_mean(trace, &SimTrace::tau_f, window)(0);
  c.predicted = equilibrium_prediction(cfg.plant.B(0), cfg.gains, cfg.observer,
                                       c.friction_force);
  c.e_nr_measured = trailing_mean(trace, &SimTrace::e_nr, window)(0);
  c.i_enr_measured = trailing_mean(trace, &SimTrace::i_enr, window)(0);
  c.steady_error_predicted = -c.predicted.e_nr;
  return c;
}

Diagnostics compute_diagnostics(const SimTrace& trace, const ScenarioConfig& cfg) {
  const auto& ds = cfg.diagnostics;
  // Short runs use the whole trace instead of the configured windows.
  const double span = trace.t.back() - trace.t.front();
  Diagnostics d;
  d.oscillation = detect_oscillation(trace, std::min(ds.oscillation_window, span),
                                     ds.oscillation_threshold);
  d.steady_state = steady_state_error(trace, std::min(ds.steady_window, span),
                                      ds.oscillation_threshold);
  d.observer_energy_min = observer_energy(trace).min;
  if (cfg.observer == ObserverKind::PidType || cfg.observer == ObserverKind::PdType)
    d.equilibrium = equilibrium_check(trace, cfg);
  if (cfg.compute_ideal && trace.t.back() > ds.tracking_from)
    d.tracking_error = tracking_error(trace, ds.tracking_from);
  d.warnings = cfg.warnings();
  return d;
}

// ---- scenario studies ----------------------------------------------------------

std::vector<SweepPoint> tikhonov_sweep(const ScenarioConfig& base,
                                       std::span<const double> L_values) {
  std::vector<ScenarioConfig> configs;
  for (double L : L_values) {
    ScenarioConfig c = base;
    c.gains.L = L;
    c.name = fmt::format("{}_L{}", base.name, L);
    c.compute_ideal = true;
    configs.push_back(std::move(c));
  }
  const auto results = run_batch(configs);
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    SweepPoint p;
    p.value = L_values[i];
    if (results[i].trace) {
      const SimTrace& tr = *results[i].trace;
      p.ok = true;
      p.tracking_error = tracking_error(tr, base.diagnostics.tracking_from);
      const double span = tr.t.back() - tr.t.front();
      p.oscillation =
          detect_oscillation(tr, std::min(base.diagnostics.oscillation_window, span),
                             base.diagnostics.oscillation_threshold)
              .flag;
      p.steady_state_error =
          steady_state_error(tr, std::min(base.diagnostics.steady_window, span)).value(0);
    } else {
      p.error = results[i].error;
    }
    out.push_back(std::move(p));
  }
  return out;
}

MotivatingReport motivating_example(const ScenarioConfig& base) {
  ScenarioConfig none = base;
  none.name = base.name + "_no_observer";
  none.observer = ObserverKind::None;
  none.compute_ideal = false;

  ScenarioConfig with = base;
  with.compute_ideal = false;

  ScenarioConfig free = base;
  free.name = base.name + "_friction_free";
  free.plant.friction = FrictionModel::none();
  free.observer = ObserverKind::None;
  free.compute_ideal = false;

  const std::vector<ScenarioConfig> configs{none, with, free};
  auto results = run_batch(configs);
  for (const auto& r : results) {
    if (r.status == RunStatus::InvalidConfig) throw ConfigError(r.error_key, r.error);
    if (r.status == RunStatus::NumericalFailure) throw NumericalError(r.error_time, r.error);
  }

  MotivatingReport rep;
  rep.no_observer = std::move(*results[0].trace);
  rep.with_observer = std::move(*results[1].trace);
  rep.friction_free = std::move(*results[2].trace);

  for (const auto& th : rep.no_observer.theta)
    rep.no_observer_max_abs_theta = std::max(rep.no_observer_max_abs_theta, std::abs(th(0)));
  rep.stuck = rep.no_observer_max_abs_theta < 1e-4;
  rep.events.push_back(fmt::format(
      "no observer: max |theta| = {:.3e} ({})", rep.no_observer_max_abs_theta,
      rep.stuck ? "stuck" : "moved"));

  const auto* lugre = base.plant.friction.lugre_params();
  const double v_break = lugre ? lugre->v_s : 0.0;
  const SimTrace& tr = rep.with_observer;
  bool sticking = true;
  for (std::size_t i = 0; lugre && i < tr.size(); ++i) {
    const double v = std::abs(tr.dtheta[i](0));
    if (sticking && v > v_break) {
      sticking = false;
      ++rep.breakaway_count;
      const double net = tr.tau_c[i](0) - tr.tau_hat[i](0);
      if (!rep.first_breakaway_time) {
        rep.first_breakaway_time = tr.t[i];
        rep.net_force_at_breakaway = net;
      }
      rep.events.push_back(fmt::format("breakaway at t = {:.4f} s, net force {:.4f}",
                                       tr.t[i], net));
    } else if (!sticking && v < 0.1 * v_break) {
      sticking = true;
      rep.events.push_back(fmt::format("stick at t = {:.4f} s, theta - theta_d = {:.3e}",
                                       tr.t[i], tr.theta[i](0) - tr.theta_d[i](0)));
    }
  }
  rep.final_error = tr.theta.back()(0) - tr.theta_d.back()(0);
  rep.friction_free_final_error =
      rep.friction_free.theta.back()(0) - rep.friction_free.theta_d.back()(0);
  rep.events.push_back(fmt::format("with observer: final error {:.3e}, {} breakaways",
                                   rep.final_error, rep.breakaway_count));
  rep.events.push_back(
      fmt::format("friction-free: final error {:.3e}", rep.friction_free_final_error));
  return rep;
}

}  // namespace fjr
