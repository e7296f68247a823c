#include "fjr/friction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fjr {

void LuGreParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("LuGre: ") + what);
  };
  require(std::isfinite(sigma0) && sigma0 > 0, "sigma0 must be > 0");
  require(std::isfinite(sigma1) && sigma1 >= 0, "sigma1 must be >= 0");
  require(std::isfinite(sigma2) && sigma2 >= 0, "sigma2 must be >= 0");
  require(std::isfinite(f_c) && f_c > 0, "f_c must be > 0");
  require(std::isfinite(f_s) && f_s >= f_c, "f_s must be >= f_c");
  require(std::isfinite(v_s) && v_s > 0, "v_s must be > 0");
}

LuGreParams reference_lugre_params() {
  LuGreParams p;
  p.sigma0 = 1e5;
  p.sigma1 = std::sqrt(1e5);
  p.sigma2 = 0.4;
  p.f_c = 1.0;
  p.f_s = 1.5;
  p.v_s = 1e-3;
  return p;
}

double lugre_g(double v, const LuGreParams& p) {
  const double r = v / p.v_s;
  return p.f_c + (p.f_s - p.f_c) * std::exp(-r * r);
}

double lugre_z_rate(double z, double v, const LuGreParams& p) {
  return v - p.sigma0 * std::abs(v) / lugre_g(v, p) * z;
}

namespace {

double backward_euler_z(double z, double v, double h, const LuGreParams& p) {
  const double decay = p.sigma0 * std::abs(v) / lugre_g(v, p);
  return (z + h * v) / (1.0 + h * decay);
}

}  // namespace

FrictionSample lugre_step(LuGreState s, double v, double dt,
                          const LuGreParams& p) {
  if (!std::isfinite(v) || !std::isfinite(dt))
    throw std::invalid_argument("lugre_step: non-finite input");
  if (dt <= 0) throw std::invalid_argument("lugre_step: dt must be > 0");
  FrictionSample out;
  out.z = backward_euler_z(s.z, v, dt, p);
  out.z_dot = (out.z - s.z) / dt;
  out.force = p.sigma0 * out.z + p.sigma1 * out.z_dot + p.sigma2 * v;
  return out;
}

double breakaway_force(const LuGreParams& p) { return p.f_s; }

double lugre_steady_force(double v, const LuGreParams& p) {
  const double sign = (v > 0) - (v < 0);
  return lugre_g(v, p) * sign + p.sigma2 * v;
}

RampBreakaway ramp_breakaway(const LuGreParams& p, double mass, double rate,
                             double dt, double t_max) {
  p.validate();
  if (!(mass > 0) || !(rate > 0) || !(dt > 0))
    throw std::invalid_argument("ramp_breakaway: mass, rate and dt must be > 0");
  RampBreakaway out;
  LuGreState s;
  double v = 0.0;
  const auto steps = static_cast<long long>(std::ceil(t_max / dt));
  for (long long k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double load = rate * t;
    const FrictionSample f = lugre_step(s, v, dt, p);
    s.z = f.z;
    out.peak_friction = std::max(out.peak_friction, f.force);
    if (std::abs(v) > 10 * p.v_s) {
      out.applied_at_slip = load;
      out.slip_time = t;
      out.slipped = true;
      break;
    }
    v += dt * (load - f.force) / mass;
  }
  return out;
}

FrictionModel FrictionModel::lugre(const LuGreParams& p) {
  p.validate();
  FrictionModel m;
  m.model_ = p;
  return m;
}

FrictionSample FrictionModel::evaluate(double z, double v, double hold) const {
  const auto* p = lugre_params();
  if (p == nullptr) return {};
  if (hold > 0) return lugre_step(LuGreState{z}, v, hold, *p);
  FrictionSample out;
  out.z = z;
  out.z_dot = lugre_z_rate(z, v, *p);
  out.force = p->sigma0 * z + p->sigma1 * out.z_dot + p->sigma2 * v;
  return out;
}

FrictionBoundAudit friction_bound_audit(std::span<const double> v,
                                        std::span<const double> force,
                                        const LuGreParams& p) {
  if (v.size() != force.size())
    throw std::invalid_argument("friction_bound_audit: length mismatch");
  if (v.empty()) throw std::invalid_argument("friction_bound_audit: empty trace");
  FrictionBoundAudit audit;
  audit.a1 = p.sigma2 + p.sigma1 * (1.0 + p.f_s / p.f_c);
  audit.a2 = p.f_s;
  audit.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double bound = audit.a1 * std::abs(v[i]) + audit.a2;
    const double margin = bound - std::abs(force[i]);
    if (margin < audit.worst_margin) {
      audit.worst_margin = margin;
      audit.worst_index = i;
    }
    if (margin < -0.01 * bound) audit.holds = false;
  }
  return audit;
}

EnergyAudit friction_passivity_audit(std::span<const double> v,
                                     std::span<const double> force,
                                     double dt) {
  if (v.size() != force.size())
    throw std::invalid_argument("friction_passivity_audit: length mismatch");
  EnergyAudit out;
  out.energy.resize(v.size(), 0.0);
  double e = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    e += 0.5 * dt * (v[i - 1] * force[i - 1] + v[i] * force[i]);
    out.energy[i] = e;
    out.min = std::min(out.min, e);
  }
  return out;
}

}  // namespace fjr
