// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fjr/batch.hpp"
#include "fjr/observer.hpp"
#include "fjr/presets.hpp"
#include "fjr/sim.hpp"
#include "fjr/verify.hpp"

using namespace fjr;

namespace {

int failures = 0;

void report(const std::string& criterion, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  fmt::print("[{}] {:<34} {}\n", pass ? "PASS" : "FAIL", criterion, detail);
  std::fflush(stdout);
}

bool all_pass(const std::vector<Check>& checks, double& worst) {
  worst = 0.0;
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    worst = std::max(worst, c.value);
  }
  return ok;
}

ScenarioConfig halved(ScenarioConfig c) {
  c.dt /= 2;
  c.sample_stride *= 2;
  return c;
}

struct GridRun {
  std::map<std::string, SimTrace> traces;
  std::map<std::string, Diagnostics> diag;
};

GridRun run_grid(bool refine) {
  std::vector<ScenarioConfig> configs;
  for (auto name : fig4_preset_names()) {
    ScenarioConfig c = preset(name);
    if (refine) c = halved(c);
    configs.push_back(c);
  }
  auto results = run_batch(configs);
  GridRun g;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const auto& name = configs[k].name;
    if (!results[k].trace)
      throw std::runtime_error(fmt::format("{} failed: {}", name, results[k].error));
    g.traces[name] = std::move(*results[k].trace);
    g.diag[name] = compute_diagnostics(g.traces[name], configs[k]);
  }
  return g;
}

std::map<std::string, double> grid_quantities(const GridRun& g) {
  std::map<std::string, double> q;
  for (const char* n : {"fig4a", "fig4c", "fig4f"})
    q[fmt::format("{} oscillation amplitude", n)] = g.diag.at(n).oscillation.amplitude;
  for (const char* n : {"fig4b", "fig4e"})
    q[fmt::format("{} steady-state error", n)] = g.diag.at(n).steady_state.value(0);
  const SimTrace& d = g.traces.at("fig4d");
  q["fig4d theta_end - 0.01"] = d.theta.back()(0) - 0.01;
  q["fig4d e_nr_end"] = d.e_nr.back()(0);
  q["fig4d i_enr_end"] = d.i_enr.back()(0);
  q["fig4a observer energy min"] = g.diag.at("fig4a").observer_energy_min;
  q["fig4b observer energy min"] = g.diag.at("fig4b").observer_energy_min;
  return q;
}

double relative_change(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  // ---- Riccati identity
  {
    const double r1 = riccati_residual(1.0, kLowGains, ObserverKind::PidType);
    const double r2 = riccati_residual(1.0, kHighGains, ObserverKind::PidType);
    report("riccati identity", r1 <= 1e-9 && r2 <= 1e-9,
           fmt::format("residual {:.2e} (L=50), {:.2e} (L=100), tol 1e-9", r1, r2));
  }

  // ---- LPF equivalence
  {
    double worst = 0;
    const bool ok = all_pass(verify_lpf_equivalence(), worst);
    report("lpf equivalence", ok,
           fmt::format("worst relative error {:.2e} over PID/PD/baseline, tol 1e-4", worst));
  }

  // ---- LuGre oracles
  {
    const auto p = reference_lugre_params();
    std::string detail;
    bool ok = true;
    for (double v : {0.0005, 0.01}) {
      LuGreState s;
      FrictionSample f;
      for (int k = 0; k < 200000; ++k) {
        f = lugre_step(s, v, 1e-5, p);
        s.z = f.z;
      }
      const double expected = lugre_g(v, p) + p.sigma2 * v;
      ok = ok && std::abs(f.force - expected) <= 1e-3;
      detail += fmt::format("F({})={:.5f} vs {:.5f}; ", v, f.force, expected);
    }
    const auto ramp = ramp_breakaway(p, 1.0, 0.1, 1e-5, 30.0);
    const bool ramp_ok = ramp.slipped && std::abs(ramp.peak_friction - 1.5) <= 0.05 * 1.5;
    report("lugre oracles", ok && ramp_ok,
           detail + fmt::format("breakaway {:.4f} N (1.5 +- 5%)", ramp.peak_friction));
  }

  // ---- fig4 preset grid
  const GridRun grid = run_grid(false);
  {
    const auto& D = grid.diag;
    const auto& a = D.at("fig4a");
    report("fig4a oscillation", a.oscillation.flag,
           fmt::format("p2p {:.3e} over {} s", a.oscillation.amplitude, a.oscillation.window));

    const auto& b = D.at("fig4b");
    const double pb = b.equilibrium->steady_error_predicted;
    const double eb = b.steady_state.value(0);
    report("fig4b steady offset", !b.oscillation.flag && std::abs(eb) > 0 &&
                                      std::abs(eb - pb) <= 0.2 * std::abs(pb),
           fmt::format("osc {}, error {:.5e}, predicted {:.5e} (20%)", b.oscillation.flag, eb,
                       pb));

    const auto& c = D.at("fig4c");
    report("fig4c oscillation", c.oscillation.flag,
           fmt::format("p2p {:.3e}", c.oscillation.amplitude));

    const SimTrace& d = grid.traces.at("fig4d");
    const auto eq = *D.at("fig4d").equilibrium;
    const double th_err = d.theta.back()(0) - 0.01;
    const double enr = d.e_nr.back()(0);
    const double iend = d.i_enr.back()(0);
    const double ipred = *eq.predicted.i_enr;
    report("fig4d convergence",
           std::abs(th_err) <= 1e-5 && std::abs(enr) <= 1e-6 &&
               std::abs(iend - ipred) <= 0.05 * std::abs(ipred),
           fmt::format("|theta-0.01| {:.2e} (1e-5), |e_nr| {:.2e} (1e-6), i_enr {:.4e} vs "
                       "{:.4e} (5%)",
                       std::abs(th_err), std::abs(enr), iend, ipred));

    const auto& e = D.at("fig4e");
    const double pe = e.equilibrium->steady_error_predicted;
    const double ee = e.steady_state.value(0);
    report("fig4e reduced offset", !e.oscillation.flag && std::abs(ee) < std::abs(eb) &&
                                       std::abs(ee - pe) <= 0.2 * std::abs(pe),
           fmt::format("osc {}, error {:.5e} < {:.5e}, predicted {:.5e}", e.oscillation.flag, ee,
                       eb, pe));

    const auto& f = D.at("fig4f");
    report("fig4f smaller oscillation",
           f.oscillation.flag && f.oscillation.amplitude < c.oscillation.amplitude,
           fmt::format("p2p {:.3e} < {:.3e}", f.oscillation.amplitude, c.oscillation.amplitude));
  }

  // ---- Motivating example
  const auto mot = motivating_example(preset("motivating"));
  {
    report("motivating: stuck without observer", mot.stuck,
           fmt::format("max |theta| {:.2e} m (1e-4)", mot.no_observer_max_abs_theta));
    const bool broke = mot.first_breakaway_time.has_value();
    const double net = mot.net_force_at_breakaway;
    report("motivating: net force at breakaway",
           broke && std::abs(net) >= 1.35 && std::abs(net) <= 1.65,
           broke ? fmt::format("{:.4f} N at t = {:.4f} s, band [1.35, 1.65]", net,
                               *mot.first_breakaway_time)
                 : std::string("no breakaway"));
  }

  // ---- Stiction passivity
  {
    const double eb = grid.diag.at("fig4b").observer_energy_min;
    const double ea = grid.diag.at("fig4a").observer_energy_min;
    double dummy = 0;
    const bool sweep = all_pass(verify_passivity_sweep(), dummy);
    report("stiction passivity", eb >= -1e-6 && ea < 0 && sweep,
           fmt::format("fig4b min E {:.2e} (>= -1e-6), fig4a min E {:.2e} (< 0), Re H sweep {}",
                       eb, ea, sweep ? "ok" : "wrong sign"));
  }

  // ---- Practical stability
  const std::vector<double> L{25, 50, 100, 200};
  const auto sweep = tikhonov_sweep(preset("tikhonov"), L);
  {
    bool ok = std::all_of(sweep.begin(), sweep.end(), [](const auto& p) { return p.ok; });
    std::string detail;
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      if (k > 0) ok = ok && sweep[k].tracking_error < sweep[k - 1].tracking_error;
      detail += fmt::format("L={}: {:.3e} ", sweep[k].value, sweep[k].tracking_error);
    }
    report("practical stability sweep", ok, detail);
  }

  // ---- Numerics
  {
    const GridRun fine = run_grid(true);
    auto q0 = grid_quantities(grid), q1 = grid_quantities(fine);

    const auto mot_fine = motivating_example(halved(preset("motivating")));
    q0["motivating net force"] = mot.net_force_at_breakaway;
    q1["motivating net force"] = mot_fine.net_force_at_breakaway;
    q0["motivating no-observer max |theta|"] = mot.no_observer_max_abs_theta;
    q1["motivating no-observer max |theta|"] = mot_fine.no_observer_max_abs_theta;

    const auto sweep_fine = tikhonov_sweep(halved(preset("tikhonov")), L);
    for (std::size_t k = 0; k < L.size(); ++k) {
      const auto key = fmt::format("tikhonov L={}", L[k]);
      q0[key] = sweep[k].tracking_error;
      q1[key] = sweep_fine[k].tracking_error;
    }

    double worst = 0;
    std::string worst_name;
    for (const auto& [name, v] : q0) {
      const double r = relative_change(v, q1.at(name));
      if (r > worst) {
        worst = r;
        worst_name = name;
      }
    }
    report("dt halving", worst < 0.01,
           fmt::format("{} quantities, worst relative change {:.2e} ({})", q0.size(), worst,
                       worst_name));

    ScenarioConfig c = preset("fig4a");
    const SimTrace x = run_scenario(c), y = run_scenario(c);
    bool same = x.size() == y.size();
    for (const auto& sig : SimTrace::signals()) same = same && (x.*sig.member) == (y.*sig.member);
    same = same && x.theta == grid.traces.at("fig4a").theta;
    report("bit-identical reruns", same, "fig4a run twice serially and once in the batch");
  }

  const double secs = std::chrono::duration<double>(clock::now() - start).count();
  fmt::print("{} criteria failed, {:.1f} s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
