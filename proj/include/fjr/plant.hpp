#pragma once

#include <variant>

#include "fjr/friction.hpp"
#include "fjr/types.hpp"

namespace fjr {

// Decoupled point masses (one per joint): M = diag(mass), no bias, no
// gravity. Used for the single-link presets.
struct PointMassLink {
  JointVector mass;
};

// Two-link planar arm moving in a vertical plane; gravity acts along -y and
// q1 is measured from the +x axis.
struct Planar2RLink {
  double m1 = 1.0, m2 = 1.0;
  double l1 = 0.5, l2 = 0.5;
  double lc1 = 0.25, lc2 = 0.25;
  double I1 = 0.02, I2 = 0.02;
  double gravity = 9.81;
};

using LinkModel = std::variant<PointMassLink, Planar2RLink>;

struct LinkTerms {
  JointMatrix M;     // inertia
  JointVector bias;  // C(q, dq) dq
  JointVector g;     // gravity
};

int link_dof(const LinkModel& link);
LinkTerms link_terms(const LinkModel& link, const JointVector& q,
                     const JointVector& dq);
JointVector link_gravity(const LinkModel& link, const JointVector& q);
double link_potential(const LinkModel& link, const JointVector& q);

LinkTerms planar2r_terms(const JointVector& q, const JointVector& dq,
                         const Planar2RLink& p);
// Christoffel-consistent C(q, dq), so that Mdot - 2C is skew-symmetric.
JointMatrix planar2r_coriolis(const JointVector& q, const JointVector& dq,
                              const Planar2RLink& p);

struct FjrParams {
  JointVector B;    // motor inertia (diagonal)
  JointVector K_j;  // joint stiffness (diagonal)
  LinkModel link;
  FrictionModel friction;  // same model on every motor axis

  int dof() const { return static_cast<int>(B.size()); }
  void validate() const;
};

struct PlantState {
  JointVector q, dq, theta, dtheta;
  JointVector z;  // bristle state per joint (unused when friction-free)

  static PlantState zero(int n);
  bool finite() const;
};

// tau_j = K_j (theta - q). Throws on dimension mismatch.
JointVector joint_torque(const JointVector& theta, const JointVector& q,
                         const JointVector& K_j);

struct PlantDerivative {
  JointVector ddq, ddtheta;
  JointVector tau_j;
  // Friction on the motor side with the sign of the motor equation
  // B ddtheta + tau_j = tau_m + tau_f, i.e. opposing motion.
  JointVector tau_f;
  // Bristle states after `friction_hold` (equal to s.z when the hold is 0).
  JointVector z_stage;
};

// Link and motor accelerations for the given inputs. This is the single
// place where the friction model's output is negated to enter the motor
// equation as tau_f. `friction_hold` is how long the bristle state has
// been advanced from s.z at the current velocity (0 at a step start).
PlantDerivative plant_derivatives(const PlantState& s, const JointVector& tau_m,
                                  const JointVector& tau_ext,
                                  const FjrParams& p, double friction_hold = 0);

// Link kinetic + gravity potential + motor kinetic + spring potential.
double mechanical_energy(const PlantState& s, const FjrParams& p);

}  // namespace fjr
