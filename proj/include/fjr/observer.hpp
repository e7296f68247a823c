#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fjr/types.hpp"

namespace fjr {

// PidType and PdType feed the nominal motor signals (theta_n, dtheta_n) to
// the controller. BaselineMeasuredFeedback runs the same nominal model with
// L_p = L_i = 0 but the controller sees the measured (theta, dtheta). None
// disables compensation and also feeds measured signals.
enum class ObserverKind { PidType, PdType, BaselineMeasuredFeedback, None };

std::string_view to_string(ObserverKind kind);
// Accepts "pid", "pd", "baseline", "none". Throws std::invalid_argument.
ObserverKind parse_observer_kind(std::string_view name);

// True for the kinds whose controller is closed around nominal signals.
inline bool feeds_nominal(ObserverKind kind) {
  return kind == ObserverKind::PidType || kind == ObserverKind::PdType;
}

struct ObserverGains {
  double L = 50.0;    // [1/s]
  double L_p = 10.0;  // [1/s]
  double L_i = 25.0;  // [1/s^2]
};

// Gain constraints per kind: L > 0 everywhere; PID needs L_p, L_i > 0 and
// L_p^2 > 2 L_i; PD needs L_p > 0 and L_i = 0; baseline needs L_p = L_i = 0.
void validate_gains(const ObserverGains& g, ObserverKind kind);

struct ObserverState {
  JointVector theta_n, dtheta_n;
  JointVector i_enr;  // integral of e_nr; stays zero unless PID
};

// ddtheta_n = B^-1 (tau_c - tau_j). Driven by the measured joint torque only.
JointVector nominal_motor_derivative(const JointVector& tau_j,
                                     const JointVector& tau_c,
                                     const JointVector& B);

// tau_hat = -B L (de + L_p e + L_i i) with e = theta_n - theta and the terms
// that the kind does not have dropped.
JointVector friction_estimate(const ObserverState& o, const JointVector& theta,
                              const JointVector& dtheta,
                              const ObserverGains& g, ObserverKind kind,
                              const JointVector& B);

// Polynomials in descending powers of s.
struct TransferFunction {
  std::vector<double> num;
  std::vector<double> den;

  std::complex<double> operator()(std::complex<double> s) const;
};

// Riccati data for the closed difference dynamics with state
// [int e, e, de] (PID) or [e, de] (PD), scalar gains.
struct RiccatiCheck {
  Eigen::MatrixXd A, Bn, P, Q;
  double R = 0.0;
  double residual = 0.0;  // ||A'P + PA - P Bn R Bn' P + Q||_F
};

RiccatiCheck riccati_check(double B, const ObserverGains& g, ObserverKind kind);
inline double riccati_residual(double B, const ObserverGains& g,
                               ObserverKind kind) {
  return riccati_check(B, g, kind).residual;
}

// Transfer function from true friction to its estimate.
//   PID:      (L s^2 + L L_p s + L L_i) / (s^3 + L s^2 + L L_p s + L L_i)
//   PD:       (L s + L L_p) / (s^2 + L s + L L_p)
//   baseline: L / (s + L)
TransferFunction equivalent_lpf(double B, const ObserverGains& g,
                                ObserverKind kind);

// The compensator C(s) that maps e_nr to tau_hat.
TransferFunction compensator(double B, const ObserverGains& g,
                             ObserverKind kind);

// Recovers C(s) from a filter with motor model 1/(B s^2):
// C = LPF / (P (LPF - 1)) = B s^2 N / (N - D). Common powers of s are
// cancelled and the result is normalized so den has a unit leading
// coefficient.
TransferFunction compensator_from_lpf(const TransferFunction& lpf, double B);

struct EquilibriumPrediction {
  double e_nr = 0.0;
  std::optional<double> i_enr;
};

// Steady state of the difference dynamics when the friction model force
// settles at `friction_force` (the force sigma0 z + ... opposing motion,
// i.e. minus tau_f of the motor equation):
//   PID: e = 0, i = friction_force / (L_i L B)
//   PD:  e = friction_force / (L_p L B)
EquilibriumPrediction equilibrium_prediction(double B, const ObserverGains& g,
                                             ObserverKind kind,
                                             double friction_force);

// Re H(jw) for the map u = -de -> tau_hat:
//   PD  H = B L (s + L_p)/s,   PID H = B L (s^2 + L_p s + L_i)/s^2,
//   baseline H = B L.
// w must be positive. Evaluated in parallel; passivity_sweep_serial is the
// reference loop.
std::vector<double> observer_passivity_sweep(double B, const ObserverGains& g,
                                             ObserverKind kind,
                                             std::span<const double> omega);
std::vector<double> observer_passivity_sweep_serial(double B,
                                                    const ObserverGains& g,
                                                    ObserverKind kind,
                                                    std::span<const double> omega);

// Integrates the standalone difference dynamics B dde = tau_hat - tau_f,
// closed with friction_estimate, from rest. tau_f is held constant over each
// dt (classical RK4). Returns tau_hat at every sample instant.
std::vector<double> simulate_difference_dynamics(double B, const ObserverGains& g,
                                                 ObserverKind kind,
                                                 std::span<const double> tau_f,
                                                 double dt);

// Exact zero-order-hold discretization of a strictly proper transfer
// function, realized in controllable canonical form.
class DiscreteFilter {
 public:
  static DiscreteFilter zero_order_hold(const TransferFunction& tf, double dt);

  // Output at the current instant, then advances the state with input u.
  double step(double u);
  std::vector<double> filter(std::span<const double> input);

 private:
  Eigen::MatrixXd Ad_;
  Eigen::VectorXd Bd_, C_, x_;
};

// Running integral of (-de) * tau_hat by the trapezoidal rule.
struct ObserverEnergy {
  std::vector<double> energy;
  double min = 0.0;
};
ObserverEnergy observer_energy(std::span<const double> de,
                               std::span<const double> tau_hat, double dt);

}  // namespace fjr
