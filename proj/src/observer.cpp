#include "fjr/observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace fjr {

std::string_view to_string(ObserverKind kind) {
  switch (kind) {
    case ObserverKind::PidType: return "pid";
    case ObserverKind::PdType: return "pd";
    case ObserverKind::BaselineMeasuredFeedback: return "baseline";
    case ObserverKind::None: return "none";
  }
  return "none";
}

ObserverKind parse_observer_kind(std::string_view name) {
  if (name == "pid") return ObserverKind::PidType;
  if (name == "pd") return ObserverKind::PdType;
  if (name == "baseline") return ObserverKind::BaselineMeasuredFeedback;
  if (name == "none") return ObserverKind::None;
  throw std::invalid_argument("unknown observer kind '" + std::string(name) + "'");
}

void validate_gains(const ObserverGains& g, ObserverKind kind) {
  auto fail = [](const char* what) {
    throw std::invalid_argument(std::string("observer gains: ") + what);
  };
  if (kind == ObserverKind::None) return;
  if (!(g.L > 0) || !std::isfinite(g.L)) fail("L must be > 0");
  switch (kind) {
    case ObserverKind::PidType:
      if (!(g.L_p > 0) || !(g.L_i > 0)) fail("PID needs L_p > 0 and L_i > 0");
      if (!(g.L_p * g.L_p > 2 * g.L_i)) fail("PID needs L_p^2 > 2 L_i");
      break;
    case ObserverKind::PdType:
      if (!(g.L_p > 0)) fail("PD needs L_p > 0");
      if (g.L_i != 0) fail("PD needs L_i = 0");
      break;
    case ObserverKind::BaselineMeasuredFeedback:
      if (g.L_p != 0 || g.L_i != 0) fail("baseline needs L_p = L_i = 0");
      break;
    case ObserverKind::None:
      break;
  }
}

JointVector nominal_motor_derivative(const JointVector& tau_j,
                                     const JointVector& tau_c,
                                     const JointVector& B) {
  if (tau_j.size() != tau_c.size() || tau_c.size() != B.size())
    throw std::invalid_argument("nominal_motor_derivative: dimension mismatch");
  if (!tau_j.allFinite() || !tau_c.allFinite())
    throw std::invalid_argument("nominal_motor_derivative: non-finite input");
  return (tau_c - tau_j).cwiseQuotient(B);
}

JointVector friction_estimate(const ObserverState& o, const JointVector& theta,
                              const JointVector& dtheta,
                              const ObserverGains& g, ObserverKind kind,
                              const JointVector& B) {
  const int n = static_cast<int>(theta.size());
  if (kind == ObserverKind::None) return JointVector::Zero(n);
  if (!o.theta_n.allFinite() || !o.dtheta_n.allFinite() || !o.i_enr.allFinite())
    throw std::invalid_argument("friction_estimate: non-finite observer state");
  JointVector s = o.dtheta_n - dtheta;
  if (kind != ObserverKind::BaselineMeasuredFeedback) s += g.L_p * (o.theta_n - theta);
  if (kind == ObserverKind::PidType) s += g.L_i * o.i_enr;
  return -g.L * B.cwiseProduct(s);
}

std::complex<double> TransferFunction::operator()(std::complex<double> s) const {
  auto horner = [s](const std::vector<double>& c) {
    std::complex<double> acc = 0.0;
    for (double a : c) acc = acc * s + a;
    return acc;
  };
  return horner(num) / horner(den);
}

RiccatiCheck riccati_check(double B, const ObserverGains& g, ObserverKind kind) {
  validate_gains(g, kind);
  RiccatiCheck c;
  c.R = B * g.L;
  const double R = c.R, Lp = g.L_p, Li = g.L_i;
  if (kind == ObserverKind::PidType) {
    c.A.resize(3, 3);
    c.A << 0, 1, 0,
           0, 0, 1,
           0, -Li, -Lp;
    c.Bn = Eigen::Vector3d(0, 0, 1.0 / B);
    c.P.resize(3, 3);
    c.P << B * Li * Li + Li * Lp * R, B * Lp * Li + Li * R, B * Li,
           B * Lp * Li + Li * R,      B * Lp * Lp + Lp * R, B * Lp,
           B * Li,                    B * Lp,               B;
    c.Q = Eigen::Vector3d(Li * Li * R, (Lp * Lp - 2 * Li) * R, R).asDiagonal();
  } else if (kind == ObserverKind::PdType) {
    c.A.resize(2, 2);
    c.A << 0, 1,
           0, -Lp;
    c.Bn = Eigen::Vector2d(0, 1.0 / B);
    c.P.resize(2, 2);
    c.P << B * Lp * Lp + Lp * R, B * Lp,
           B * Lp,               B;
    c.Q = Eigen::Vector2d(Lp * Lp * R, R).asDiagonal();
  } else {
    throw std::invalid_argument("riccati_check: only PID and PD observers");
  }
  const Eigen::MatrixXd lhs = c.A.transpose() * c.P + c.P * c.A -
                              c.P * c.Bn * R * c.Bn.transpose() * c.P + c.Q;
  c.residual = lhs.norm();
  return c;
}

TransferFunction equivalent_lpf(double B, const ObserverGains& g,
                                ObserverKind kind) {
  validate_gains(g, kind);
  (void)B;  // the filter does not depend on B once B is known exactly
  const double L = g.L;
  switch (kind) {
    case ObserverKind::PidType:
      return {{L, L * g.L_p, L * g.L_i}, {1, L, L * g.L_p, L * g.L_i}};
    case ObserverKind::PdType:
      return {{L, L * g.L_p}, {1, L, L * g.L_p}};
    case ObserverKind::BaselineMeasuredFeedback:
      return {{L}, {1, L}};
    case ObserverKind::None:
      break;
  }
  throw std::invalid_argument("equivalent_lpf: no filter without an observer");
}

TransferFunction compensator(double B, const ObserverGains& g,
                             ObserverKind kind) {
  validate_gains(g, kind);
  const double k = -B * g.L;
  switch (kind) {
    case ObserverKind::PidType:
      return {{k, k * g.L_p, k * g.L_i}, {1, 0}};
    case ObserverKind::PdType:
      return {{k, k * g.L_p}, {1}};
    case ObserverKind::BaselineMeasuredFeedback:
      return {{k, 0}, {1}};
    case ObserverKind::None:
      break;
  }
  throw std::invalid_argument("compensator: no compensator without an observer");
}

namespace {

using Poly = std::vector<double>;

Poly trim_leading(Poly p) {
  auto it = std::find_if(p.begin(), p.end(), [](double c) { return c != 0.0; });
  p.erase(p.begin(), it);
  if (p.empty()) p.push_back(0.0);
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  const std::size_t n = std::max(a.size(), b.size());
  Poly out(n, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[n - a.size() + i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[n - b.size() + i] -= b[i];
  return trim_leading(out);
}

}  // namespace

TransferFunction compensator_from_lpf(const TransferFunction& lpf, double B) {
  Poly num = poly_mul({B, 0.0, 0.0}, lpf.num);
  Poly den = poly_sub(lpf.num, lpf.den);
  while (num.size() > 1 && den.size() > 1 && num.back() == 0.0 && den.back() == 0.0) {
    num.pop_back();
    den.pop_back();
  }
  num = trim_leading(num);
  const double lead = den.front();
  if (lead == 0.0) throw std::invalid_argument("compensator_from_lpf: degenerate filter");
  for (double& c : num) c /= lead;
  for (double& c : den) c /= lead;
  return {num, den};
}

EquilibriumPrediction equilibrium_prediction(double B, const ObserverGains& g,
                                             ObserverKind kind,
                                             double friction_force) {
  EquilibriumPrediction out;
  if (kind == ObserverKind::PidType) {
    if (g.L_i == 0 || g.L == 0 || B == 0)
      throw std::invalid_argument("equilibrium_prediction: zero gain");
    out.e_nr = 0.0;
    out.i_enr = friction_force / (g.L_i * g.L * B);
  } else if (kind == ObserverKind::PdType) {
    if (g.L_p == 0 || g.L == 0 || B == 0)
      throw std::invalid_argument("equilibrium_prediction: zero gain");
    out.e_nr = friction_force / (g.L_p * g.L * B);
  } else {
    throw std::invalid_argument("equilibrium_prediction: only PID and PD observers");
  }
  return out;
}

namespace {

double passivity_real_part(double B, const ObserverGains& g, ObserverKind kind,
                           double w) {
  if (!(w > 0)) throw std::invalid_argument("passivity sweep: omega must be > 0");
  const std::complex<double> s(0.0, w);
  std::complex<double> h;
  switch (kind) {
    case ObserverKind::PidType:
      h = B * g.L * (s * s + g.L_p * s + g.L_i) / (s * s);
      break;
    case ObserverKind::PdType:
      h = B * g.L * (s + g.L_p) / s;
      break;
    case ObserverKind::BaselineMeasuredFeedback:
      h = B * g.L;
      break;
    case ObserverKind::None:
      h = 0.0;
      break;
  }
  return h.real();
}

}  // namespace

std::vector<double> observer_passivity_sweep(double B, const ObserverGains& g,
                                             ObserverKind kind,
                                             std::span<const double> omega) {
  for (double w : omega)
    if (!(w > 0)) throw std::invalid_argument("passivity sweep: omega must be > 0");
  std::vector<double> out(omega.size());
  const auto n = static_cast<std::ptrdiff_t>(omega.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = passivity_real_part(B, g, kind, omega[i]);
  return out;
}

std::vector<double> observer_passivity_sweep_serial(double B,
                                                    const ObserverGains& g,
                                                    ObserverKind kind,
                                                    std::span<const double> omega) {
  std::vector<double> out;
  out.reserve(omega.size());
  for (double w : omega) out.push_back(passivity_real_part(B, g, kind, w));
  return out;
}

std::vector<double> simulate_difference_dynamics(double B, const ObserverGains& g,
                                                 ObserverKind kind,
                                                 std::span<const double> tau_f,
                                                 double dt) {
  validate_gains(g, kind);
  // x = [int e, e, de]
  using State = Eigen::Vector3d;
  const bool integral = kind == ObserverKind::PidType;
  const double lp = kind == ObserverKind::BaselineMeasuredFeedback ? 0.0 : g.L_p;
  const double li = integral ? g.L_i : 0.0;
  auto estimate = [&](const State& x) {
    if (kind == ObserverKind::None) return 0.0;
    return -B * g.L * (x(2) + lp * x(1) + li * x(0));
  };
  auto deriv = [&](const State& x, double u) {
    return State(integral ? x(1) : 0.0, x(2), (estimate(x) - u) / B);
  };
  std::vector<double> out;
  out.reserve(tau_f.size());
  State x = State::Zero();
  for (double u : tau_f) {
    out.push_back(estimate(x));
    const State k1 = deriv(x, u);
    const State k2 = deriv(x + 0.5 * dt * k1, u);
    const State k3 = deriv(x + 0.5 * dt * k2, u);
    const State k4 = deriv(x + dt * k3, u);
    x += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return out;
}

DiscreteFilter DiscreteFilter::zero_order_hold(const TransferFunction& tf,
                                               double dt) {
  const auto den = trim_leading(tf.den);
  const auto num = trim_leading(tf.num);
  const int n = static_cast<int>(den.size()) - 1;
  if (n < 1 || static_cast<int>(num.size()) > n)
    throw std::invalid_argument("zero_order_hold: transfer function must be strictly proper");
  const double lead = den.front();

  // Controllable canonical form.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) A(n - 1, i) = -den[n - i] / lead;
  Eigen::VectorXd C = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < num.size(); ++i)
    C(static_cast<int>(num.size() - 1 - i)) = num[i] / lead;

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = A * dt;
  aug(n - 1, n) = dt;
  const Eigen::MatrixXd e = aug.exp();

  DiscreteFilter f;
  f.Ad_ = e.topLeftCorner(n, n);
  f.Bd_ = e.topRightCorner(n, 1);
  f.C_ = C;
  f.x_ = Eigen::VectorXd::Zero(n);
  return f;
}

double DiscreteFilter::step(double u) {
  const double y = C_.dot(x_);
  x_ = Ad_ * x_ + Bd_ * u;
  return y;
}

std::vector<double> DiscreteFilter::filter(std::span<const double> input) {
  std::vector<double> out;
  out.reserve(input.size());
  for (double u : input) out.push_back(step(u));
  return out;
}

ObserverEnergy observer_energy(std::span<const double> de,
                               std::span<const double> tau_hat, double dt) {
  if (de.size() != tau_hat.size())
    throw std::invalid_argument("observer_energy: length mismatch");
  ObserverEnergy out;
  out.energy.assign(de.size(), 0.0);
  double e = 0.0;
  for (std::size_t i = 1; i < de.size(); ++i) {
    e += 0.5 * dt * (-de[i - 1] * tau_hat[i - 1] - de[i] * tau_hat[i]);
    out.energy[i] = e;
    out.min = std::min(out.min, e);
  }
  return out;
}

}  // namespace fjr
