#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace fjr {

// LuGre coefficients. Units follow the plant they are attached to (the
// single-link presets are translational: N, m, s).
struct LuGreParams {
  double sigma0 = 1e5;       // bristle stiffness
  double sigma1 = 316.22776601683796;  // bristle damping, sqrt(1e5)
  double sigma2 = 0.4;       // viscous coefficient
  double f_c = 1.0;          // Coulomb level
  double f_s = 1.5;          // stiction level
  double v_s = 1e-3;         // Stribeck velocity

  // Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  // Largest bristle deflection reachable from a state inside the bound.
  double max_deflection() const { return f_s / sigma0; }
};

// Parameter set used for every single-link simulation in this project.
LuGreParams reference_lugre_params();

struct LuGreState {
  double z = 0.0;
};

// One evaluation of the friction law: bristle state after the update, the
// bristle rate used for the damping term, and the model force
// sigma0*z + sigma1*zdot + sigma2*v.
struct FrictionSample {
  double z = 0.0;
  double z_dot = 0.0;
  double force = 0.0;
};

// Stribeck curve f_c + (f_s - f_c) exp(-(v/v_s)^2).
double lugre_g(double v, const LuGreParams& p);

// Continuous bristle rate v - sigma0 |v| / g(v) * z.
double lugre_z_rate(double z, double v, const LuGreParams& p);

// Advances z over dt with v frozen, using the backward-Euler update
// z' = (z + dt v) / (1 + dt sigma0 |v| / g(v)), which is stable for any dt
// and keeps |z| <= f_s/sigma0. zdot is reconstructed as (z' - z) / dt.
// Throws on non-finite v or dt, or dt <= 0.
FrictionSample lugre_step(LuGreState s, double v, double dt,
                          const LuGreParams& p);

// Quasi-static force below which a slowly ramped load does not slide.
double breakaway_force(const LuGreParams& p);

// Force at constant sliding velocity once the bristles have settled:
// g(v) sign(v) + sigma2 v.
double lugre_steady_force(double v, const LuGreParams& p);

struct RampBreakaway {
  double peak_friction = 0.0;  // largest model force before gross sliding
  double applied_at_slip = 0.0;  // load when |v| first exceeds 10 v_s
  double slip_time = 0.0;
  bool slipped = false;
};

// A mass on the friction contact, starting at rest, loaded with
// F(t) = rate * t until it slides or t_max is reached.
RampBreakaway ramp_breakaway(const LuGreParams& p, double mass, double rate,
                             double dt, double t_max);

// Friction acting on a motor axis. The friction-free variant has no state
// and always returns zero.
class FrictionModel {
 public:
  FrictionModel() = default;
  static FrictionModel none() { return FrictionModel(); }
  static FrictionModel lugre(const LuGreParams& p);

  bool is_friction_free() const {
    return std::holds_alternative<std::monostate>(model_);
  }
  const LuGreParams* lugre_params() const {
    return std::get_if<LuGreParams>(&model_);
  }

  // Force after holding v for `hold` seconds from bristle state z. With
  // hold == 0 the state is unchanged and zdot comes from the continuous law.
  FrictionSample evaluate(double z, double v, double hold) const;

 private:
  std::variant<std::monostate, LuGreParams> model_;
};

struct FrictionBoundAudit {
  double a1 = 0.0;  // slope on |v|
  double a2 = 0.0;  // offset
  bool holds = true;
  // Smallest value of a1|v| + a2 - |force| over the trace (negative means
  // violated) and where it occurred.
  double worst_margin = 0.0;
  std::size_t worst_index = 0;
};

// Checks |force| <= a1 |v| + a2 pointwise with
//   a1 = sigma2 + sigma1 (1 + f_s/f_c),   a2 = f_s,
// which follows from |z| <= f_s/sigma0 and |zdot| <= |v| (1 + f_s/f_c).
// Margins within 1% of the bound are not counted as violations.
FrictionBoundAudit friction_bound_audit(std::span<const double> v,
                                        std::span<const double> force,
                                        const LuGreParams& p);

struct EnergyAudit {
  std::vector<double> energy;  // running integral, same length as input
  double min = 0.0;
};

// Trapezoidal running integral of v * force for a trace sampled every dt.
// For the passive pair (v, -tau_f) with tau_f = -force this must stay above
// minus the initial bristle storage.
EnergyAudit friction_passivity_audit(std::span<const double> v,
                                     std::span<const double> force, double dt);

}  // namespace fjr
