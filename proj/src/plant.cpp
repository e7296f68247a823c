#include "fjr/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace fjr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

int link_dof(const LinkModel& link) {
  return std::visit(
      Overloaded{[](const PointMassLink& l) { return static_cast<int>(l.mass.size()); },
                 [](const Planar2RLink&) { return 2; }},
      link);
}

LinkTerms planar2r_terms(const JointVector& q, const JointVector& dq,
                         const Planar2RLink& p) {
  const double c2 = std::cos(q(1));
  const double m11 = p.m1 * p.lc1 * p.lc1 + p.I1 +
                     p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2 * p.l1 * p.lc2 * c2) +
                     p.I2;
  const double m12 = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.I2;
  const double m22 = p.m2 * p.lc2 * p.lc2 + p.I2;

  LinkTerms t;
  t.M.resize(2, 2);
  t.M << m11, m12, m12, m22;
  t.bias = planar2r_coriolis(q, dq, p) * dq;

  const double c1 = std::cos(q(0));
  const double c12 = std::cos(q(0) + q(1));
  t.g.resize(2);
  t.g(0) = (p.m1 * p.lc1 + p.m2 * p.l1) * p.gravity * c1 +
           p.m2 * p.lc2 * p.gravity * c12;
  t.g(1) = p.m2 * p.lc2 * p.gravity * c12;
  return t;
}

JointMatrix planar2r_coriolis(const JointVector& q, const JointVector& dq,
                              const Planar2RLink& p) {
  const double h = -p.m2 * p.l1 * p.lc2 * std::sin(q(1));
  JointMatrix C(2, 2);
  C << h * dq(1), h * (dq(0) + dq(1)), -h * dq(0), 0.0;
  return C;
}

LinkTerms link_terms(const LinkModel& link, const JointVector& q,
                     const JointVector& dq) {
  return std::visit(
      Overloaded{[&](const PointMassLink& l) {
                   LinkTerms t;
                   t.M = l.mass.asDiagonal();
                   t.bias = JointVector::Zero(l.mass.size());
                   t.g = JointVector::Zero(l.mass.size());
                   return t;
                 },
                 [&](const Planar2RLink& l) { return planar2r_terms(q, dq, l); }},
      link);
}

JointVector link_gravity(const LinkModel& link, const JointVector& q) {
  return link_terms(link, q, JointVector::Zero(q.size())).g;
}

double link_potential(const LinkModel& link, const JointVector& q) {
  return std::visit(
      Overloaded{[](const PointMassLink&) { return 0.0; },
                 [&](const Planar2RLink& p) {
                   const double y1 = p.lc1 * std::sin(q(0));
                   const double y2 = p.l1 * std::sin(q(0)) +
                                     p.lc2 * std::sin(q(0) + q(1));
                   return p.gravity * (p.m1 * y1 + p.m2 * y2);
                 }},
      link);
}

void FjrParams::validate() const {
  const int n = dof();
  if (n < 1 || n > kMaxJoints)
    throw std::invalid_argument("plant: joint count out of range");
  if (K_j.size() != n) throw std::invalid_argument("plant: K_j size mismatch");
  if (link_dof(link) != n)
    throw std::invalid_argument("plant: link model size mismatch");
  if ((B.array() <= 0).any() || !B.allFinite())
    throw std::invalid_argument("plant: B entries must be > 0");
  if ((K_j.array() <= 0).any() || !K_j.allFinite())
    throw std::invalid_argument("plant: K_j entries must be > 0");
  if (const auto* pm = std::get_if<PointMassLink>(&link)) {
    if ((pm->mass.array() <= 0).any())
      throw std::invalid_argument("plant: link masses must be > 0");
  } else {
    const auto& r = std::get<Planar2RLink>(link);
    if (r.m1 <= 0 || r.m2 <= 0 || r.l1 <= 0 || r.l2 <= 0 || r.I1 < 0 || r.I2 < 0)
      throw std::invalid_argument("plant: planar 2R parameters must be positive");
  }
}

PlantState PlantState::zero(int n) {
  PlantState s;
  s.q = s.dq = s.theta = s.dtheta = s.z = JointVector::Zero(n);
  return s;
}

bool PlantState::finite() const {
  return q.allFinite() && dq.allFinite() && theta.allFinite() &&
         dtheta.allFinite() && z.allFinite();
}

JointVector joint_torque(const JointVector& theta, const JointVector& q,
                         const JointVector& K_j) {
  if (theta.size() != q.size() || q.size() != K_j.size())
    throw std::invalid_argument("joint_torque: dimension mismatch");
  return K_j.cwiseProduct(theta - q);
}

PlantDerivative plant_derivatives(const PlantState& s, const JointVector& tau_m,
                                  const JointVector& tau_ext,
                                  const FjrParams& p, double friction_hold) {
  if (!s.finite() || !tau_m.allFinite() || !tau_ext.allFinite())
    throw std::invalid_argument("plant_derivatives: non-finite input");
  const int n = p.dof();
  PlantDerivative d;
  d.tau_j = joint_torque(s.theta, s.q, p.K_j);
  d.tau_f.resize(n);
  d.z_stage.resize(n);
  for (int j = 0; j < n; ++j) {
    const FrictionSample f = p.friction.evaluate(s.z(j), s.dtheta(j), friction_hold);
    d.tau_f(j) = -f.force;
    d.z_stage(j) = p.friction.is_friction_free() ? s.z(j) : f.z;
  }

  if (const auto* pm = std::get_if<PointMassLink>(&p.link)) {
    d.ddq = (d.tau_j + tau_ext).cwiseQuotient(pm->mass);
  } else {
    const LinkTerms t = link_terms(p.link, s.q, s.dq);
    d.ddq = t.M.ldlt().solve(JointVector(d.tau_j + tau_ext - t.bias - t.g));
  }
  d.ddtheta = (tau_m + d.tau_f - d.tau_j).cwiseQuotient(p.B);
  return d;
}

double mechanical_energy(const PlantState& s, const FjrParams& p) {
  const LinkTerms t = link_terms(p.link, s.q, s.dq);
  const JointVector stretch = s.theta - s.q;
  return 0.5 * s.dq.dot(t.M * s.dq) + link_potential(p.link, s.q) +
         0.5 * s.dtheta.dot(p.B.cwiseProduct(s.dtheta)) +
         0.5 * stretch.dot(p.K_j.cwiseProduct(stretch));
}

}  // namespace fjr
