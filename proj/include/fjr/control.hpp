#pragma once

#include <optional>
#include <string>
#include <variant>

#include "fjr/plant.hpp"
#include "fjr/types.hpp"

namespace fjr {

struct PdGains {
  JointVector K_p;
  JointVector K_d;
  void validate(int dof) const;
};

// Reference generators for the desired link position q_d(t). The motor
// target follows as theta_d = q_d + K_j^-1 g(q_d).
struct StepReference {
  JointVector initial;  // value before t_on
  JointVector target;
  double t_on = 0.0;
};
struct HoldReference {
  JointVector target;
};
struct SinusoidReference {
  JointVector amplitude;
  double frequency = 0.5;  // [Hz]
  JointVector offset;
};
using Reference = std::variant<StepReference, HoldReference, SinusoidReference>;

struct ReferenceSample {
  JointVector q_d;
  JointVector dq_d;
};

ReferenceSample evaluate_reference(const Reference& ref, double t);
// True for Step and Hold (zero desired velocity after the step).
bool is_regulation(const Reference& ref);

JointVector theta_d_from_qd(const JointVector& q_d, const JointVector& K_j,
                            const LinkModel& link);

// tau_c = -K_p (theta_fb - theta_d) - K_d dtheta_fb + g(q_d)
JointVector motor_pd(const JointVector& theta_fb, const JointVector& dtheta_fb,
                     const JointVector& theta_d, const PdGains& gains,
                     const JointVector& g_qd);

// tau_m = tau_c - tau_hat
inline JointVector motor_command(const JointVector& tau_c,
                                 const JointVector& tau_hat) {
  return tau_c - tau_hat;
}

// Rough sufficient damping condition K_d >= c3 / (B L) per joint. Returns a
// human-readable warning for the first joint that misses it.
std::optional<std::string> damping_margin_warning(const PdGains& gains,
                                                  const JointVector& B,
                                                  double L, double c3);

}  // namespace fjr
