#include "fjr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fjr/friction.hpp"

namespace fjr {

namespace {

Check make_check(std::string suite, std::string name, double value, double tol,
                 bool pass, std::string detail = {}) {
  return {std::move(suite), std::move(name), value, tol, pass, std::move(detail)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return w;
}

}  // namespace

std::vector<Check> verify_riccati() {
  std::vector<Check> out;
  constexpr double kTol = 1e-9;
  struct Case {
    double B;
    ObserverGains g;
  };
  std::vector<Case> cases{{1.0, {50, 10, 25}}, {1.0, {100, 20, 100}}};
  for (double B : {0.5, 1.0, 2.0})
    for (double L : {10.0, 50.0, 200.0})
      for (double lp : {5.0, 10.0, 30.0})
        for (double frac : {0.1, 0.45})
          cases.push_back({B, {L, lp, frac * lp * lp}});

  for (const auto& c : cases) {
    for (ObserverKind kind : {ObserverKind::PidType, ObserverKind::PdType}) {
      ObserverGains g = c.g;
      if (kind == ObserverKind::PdType) g.L_i = 0.0;
      const double r = riccati_residual(c.B, g, kind);
      out.push_back(make_check(
          "riccati",
          fmt::format("{} B={} L={} L_p={} L_i={}", to_string(kind), c.B, g.L, g.L_p, g.L_i),
          r, kTol, r <= kTol));
    }
  }
  return out;
}

LpfComparison compare_lpf(double B, const ObserverGains& g, ObserverKind kind,
                          double dt, double duration, double transient) {
  const auto n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
  std::vector<double> tau_f(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Sample at the step midpoint so the switching instants fall between
    // samples for both realizations.
    const double phase = std::fmod((k + 0.5) * dt, 1.0);
    tau_f[k] = phase < 0.5 ? 1.0 : -1.0;
  }
  const auto direct = simulate_difference_dynamics(B, g, kind, tau_f, dt);
  auto filter = DiscreteFilter::zero_order_hold(equivalent_lpf(B, g, kind), dt);
  const auto filtered = filter.filter(tau_f);

  LpfComparison c;
  double peak_in = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k * dt < transient) continue;
    c.max_abs_error = std::max(c.max_abs_error, std::abs(direct[k] - filtered[k]));
    c.peak_output = std::max(c.peak_output, std::abs(filtered[k]));
    peak_in = std::max(peak_in, std::abs(tau_f[k]));
  }
  c.relative_error = c.max_abs_error / peak_in;
  return c;
}

std::vector<Check> verify_lpf_equivalence() {
  std::vector<Check> out;
  constexpr double kTol = 1e-4;
  const struct {
    ObserverKind kind;
    ObserverGains g;
  } cases[] = {
      {ObserverKind::PidType, {50, 10, 25}},  {ObserverKind::PidType, {100, 20, 100}},
      {ObserverKind::PdType, {50, 10, 0}},    {ObserverKind::PdType, {100, 20, 0}},
      {ObserverKind::BaselineMeasuredFeedback, {50, 0, 0}},
      {ObserverKind::BaselineMeasuredFeedback, {100, 0, 0}},
  };
  for (const auto& c : cases) {
    const auto r = compare_lpf(1.0, c.g, c.kind);
    out.push_back(make_check("lpf",
                             fmt::format("{} L={} L_p={} L_i={}", to_string(c.kind), c.g.L,
                                         c.g.L_p, c.g.L_i),
                             r.relative_error, kTol, r.relative_error <= kTol,
                             fmt::format("peak output {:.4f}", r.peak_output)));
  }
  return out;
}

std::vector<Check> verify_passivity_sweep() {
  std::vector<Check> out;
  const auto omega = log_grid(1e-2, 1e4, 601);
  for (const ObserverGains& g : {ObserverGains{50, 10, 25}, ObserverGains{100, 20, 100}}) {
    const ObserverGains pd{g.L, g.L_p, 0.0};
    const auto re_pd = observer_passivity_sweep(1.0, pd, ObserverKind::PdType, omega);
    const double min_pd = *std::min_element(re_pd.begin(), re_pd.end());
    out.push_back(make_check("passivity", fmt::format("pd L={} L_p={} Re H >= 0", g.L, g.L_p),
                             min_pd, 0.0, min_pd >= 0.0));

    const auto re_pid = observer_passivity_sweep(1.0, g, ObserverKind::PidType, omega);
    int wrong = 0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
      const double w2 = omega[i] * omega[i];
      if (std::abs(w2 - g.L_i) < 1e-9 * g.L_i) continue;
      const bool negative = re_pid[i] < 0.0;
      if (negative != (w2 < g.L_i)) ++wrong;
    }
    out.push_back(make_check(
        "passivity",
        fmt::format("pid L={} L_p={} L_i={} Re H < 0 iff w^2 < L_i", g.L, g.L_p, g.L_i),
        wrong, 0.0, wrong == 0, fmt::format("{} grid points with the wrong sign", wrong)));
  }
  return out;
}

std::vector<Check> verify_friction_oracles() {
  std::vector<Check> out;
  const LuGreParams p = reference_lugre_params();

  for (double v : {0.0005, 0.01}) {
    LuGreState s;
    FrictionSample f;
    for (int k = 0; k < 200000; ++k) {
      f = lugre_step(s, v, 1e-5, p);
      s.z = f.z;
    }
    const double expected = lugre_steady_force(v, p);
    const double err = std::abs(f.force - expected);
    out.push_back(make_check("friction", fmt::format("steady sliding v={}", v), err, 1e-3,
                             err <= 1e-3,
                             fmt::format("force {:.6f}, closed form {:.6f}", f.force, expected)));
  }

  const auto ramp = ramp_breakaway(p, 1.0, 0.1, 1e-5, 30.0);
  const double rel = std::abs(ramp.peak_friction - breakaway_force(p)) / breakaway_force(p);
  out.push_back(make_check("friction", "quasi-static breakaway", rel, 0.05,
                           ramp.slipped && rel <= 0.05,
                           fmt::format("peak friction {:.5f} N, load at slip {:.5f} N",
                                       ramp.peak_friction, ramp.applied_at_slip)));

  // Sinusoidal sliding through both directions.
  constexpr double dt = 1e-5;
  const auto n = static_cast<std::size_t>(10.0 / dt);
  std::vector<double> v(n), force(n);
  LuGreState s;
  double max_z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = 0.01 * std::sin(2 * std::numbers::pi * k * dt);
    const auto f = lugre_step(s, v[k], dt, p);
    s.z = f.z;
    force[k] = f.force;
    max_z = std::max(max_z, std::abs(f.z));
  }
  const double zmax = p.max_deflection();
  out.push_back(make_check("friction", "bristle bound |z| <= f_s/sigma0", max_z, zmax,
                           max_z <= zmax * (1 + 1e-12)));
  const auto bound = friction_bound_audit(v, force, p);
  out.push_back(make_check("friction", "force bound a1|v| + a2", bound.worst_margin, 0.0,
                           bound.holds,
                           fmt::format("a1 = {:.4g}, a2 = {:.4g}", bound.a1, bound.a2)));
  const auto energy = friction_passivity_audit(v, force, dt);
  out.push_back(make_check("friction", "dissipation min int v F", energy.min, -1e-6,
                           energy.min >= -1e-6));
  return out;
}

std::vector<Check> run_verification() {
  std::vector<Check> all;
  for (auto part : {verify_riccati(), verify_lpf_equivalence(), verify_passivity_sweep(),
                    verify_friction_oracles()})
    all.insert(all.end(), part.begin(), part.end());
  return all;
}

}  // namespace fjr
