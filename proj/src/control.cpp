#include "fjr/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace fjr {

void PdGains::validate(int dof) const {
  if (K_p.size() != dof || K_d.size() != dof)
    throw std::invalid_argument("PD gains: size mismatch");
  if ((K_p.array() <= 0).any() || (K_d.array() <= 0).any())
    throw std::invalid_argument("PD gains: entries must be > 0");
}

ReferenceSample evaluate_reference(const Reference& ref, double t) {
  if (const auto* s = std::get_if<StepReference>(&ref)) {
    return {t >= s->t_on ? s->target : s->initial,
            JointVector::Zero(s->target.size())};
  }
  if (const auto* h = std::get_if<HoldReference>(&ref))
    return {h->target, JointVector::Zero(h->target.size())};
  const auto& w = std::get<SinusoidReference>(ref);
  const double omega = 2.0 * std::numbers::pi * w.frequency;
  return {w.offset + w.amplitude * std::sin(omega * t),
          w.amplitude * (omega * std::cos(omega * t))};
}

bool is_regulation(const Reference& ref) {
  return !std::holds_alternative<SinusoidReference>(ref);
}

JointVector theta_d_from_qd(const JointVector& q_d, const JointVector& K_j,
                            const LinkModel& link) {
  return q_d + link_gravity(link, q_d).cwiseQuotient(K_j);
}

JointVector motor_pd(const JointVector& theta_fb, const JointVector& dtheta_fb,
                     const JointVector& theta_d, const PdGains& gains,
                     const JointVector& g_qd) {
  return -gains.K_p.cwiseProduct(theta_fb - theta_d) -
         gains.K_d.cwiseProduct(dtheta_fb) + g_qd;
}

std::optional<std::string> damping_margin_warning(const PdGains& gains,
                                                  const JointVector& B,
                                                  double L, double c3) {
  for (int j = 0; j < gains.K_d.size(); ++j) {
    const double needed = c3 / (B(j) * L);
    if (gains.K_d(j) < needed)
      return fmt::format("joint {}: K_d = {} below rough margin c3/(B L) = {}", j,
                         gains.K_d(j), needed);
  }
  return std::nullopt;
}

}  // namespace fjr
