#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fjr/friction.hpp"

using namespace fjr;

namespace {

// Holds v constant for `seconds` and returns the last sample.
FrictionSample hold_velocity(double v, double seconds, double dt, const LuGreParams& p) {
  LuGreState s;
  FrictionSample f;
  const auto n = static_cast<long>(std::llround(seconds / dt));
  for (long k = 0; k < n; ++k) {
    f = lugre_step(s, v, dt, p);
    s.z = f.z;
  }
  return f;
}

struct Drive {
  std::vector<double> v, force, z;
};

Drive sinusoid(double amp, double freq, double seconds, double dt, const LuGreParams& p) {
  Drive d;
  LuGreState s;
  const auto n = static_cast<std::size_t>(std::llround(seconds / dt));
  for (std::size_t k = 0; k < n; ++k) {
    const double v = amp * std::sin(2 * std::numbers::pi * freq * k * dt);
    const auto f = lugre_step(s, v, dt, p);
    s.z = f.z;
    d.v.push_back(v);
    d.force.push_back(f.force);
    d.z.push_back(f.z);
  }
  return d;
}

}  // namespace

TEST(LuGreG, StribeckCurve) {
  const auto p = reference_lugre_params();
  EXPECT_DOUBLE_EQ(lugre_g(0.0, p), 1.5);
  EXPECT_NEAR(lugre_g(1e3, p), 1.0, 1e-15);
  EXPECT_NEAR(lugre_g(-1e3, p), 1.0, 1e-15);
  EXPECT_NEAR(lugre_g(0.001, p), 1.0 + 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(lugre_g(0.001, p), 1.18394, 1e-5);
}

TEST(LuGreG, EvenAndBounded) {
  const auto p = reference_lugre_params();
  for (double v = -0.01; v <= 0.01; v += 1.3e-4) {
    EXPECT_DOUBLE_EQ(lugre_g(v, p), lugre_g(-v, p));
    EXPECT_GE(lugre_g(v, p), p.f_c);
    EXPECT_LE(lugre_g(v, p), p.f_s);
  }
}

TEST(LuGreStep, RestStaysAtRest) {
  const auto p = reference_lugre_params();
  for (double dt : {1e-6, 1e-5, 1e-2}) {
    const auto f = lugre_step({}, 0.0, dt, p);
    EXPECT_EQ(f.z, 0.0);
    EXPECT_EQ(f.force, 0.0);
  }
}

TEST(LuGreStep, RejectsBadInput) {
  const auto p = reference_lugre_params();
  EXPECT_THROW(lugre_step({}, std::nan(""), 1e-5, p), std::invalid_argument);
  EXPECT_THROW(lugre_step({}, INFINITY, 1e-5, p), std::invalid_argument);
  EXPECT_THROW(lugre_step({}, 0.1, 0.0, p), std::invalid_argument);
  EXPECT_THROW(lugre_step({}, 0.1, std::nan(""), p), std::invalid_argument);
}

TEST(LuGreStep, SteadySlidingMatchesClosedForm) {
  const auto p = reference_lugre_params();
  const auto fast = hold_velocity(0.01, 1.0, 1e-5, p);
  EXPECT_NEAR(fast.force, 1.004, 1e-3);
  EXPECT_NEAR(fast.force, lugre_steady_force(0.01, p), 1e-3);

  const auto slow = hold_velocity(0.0005, 2.0, 1e-5, p);
  EXPECT_NEAR(slow.force, 1.0 + 0.5 * std::exp(-0.25) + 0.4 * 0.0005, 1e-3);
  EXPECT_NEAR(slow.force, 1.38960, 1e-3);

  const auto back = hold_velocity(-0.01, 1.0, 1e-5, p);
  EXPECT_NEAR(back.force, -1.004, 1e-3);
}

TEST(LuGreStep, SteadyBristleDeflection) {
  const auto p = reference_lugre_params();
  const auto f = hold_velocity(0.01, 1.0, 1e-5, p);
  EXPECT_NEAR(f.z, lugre_g(0.01, p) / p.sigma0, 1e-12);
}

TEST(LuGreStep, BristleBoundAlongTrajectory) {
  const auto p = reference_lugre_params();
  for (double dt : {1e-5, 1e-3}) {
    const auto d = sinusoid(0.05, 3.0, 2.0, dt, p);
    for (double z : d.z) EXPECT_LE(std::abs(z), p.max_deflection() * (1 + 1e-12));
  }
}

TEST(LuGreStep, HalvingDtConverges) {
  const auto p = reference_lugre_params();
  const auto coarse = sinusoid(0.01, 1.0, 1.25, 1e-5, p);
  const auto fine = sinusoid(0.01, 1.0, 1.25, 5e-6, p);
  EXPECT_LT(std::abs(coarse.z.back() - fine.z.back()), 1e-6);
}

TEST(Breakaway, QuasiStaticLevel) {
  const auto p = reference_lugre_params();
  EXPECT_DOUBLE_EQ(breakaway_force(p), 1.5);

  LuGreParams flat = p;
  flat.f_c = 1.0;
  flat.f_s = 1.0;
  EXPECT_DOUBLE_EQ(breakaway_force(flat), 1.0);
}

TEST(Breakaway, SlowRampOnUnitMass) {
  const auto p = reference_lugre_params();
  const auto r = ramp_breakaway(p, 1.0, 0.1, 1e-5, 30.0);
  ASSERT_TRUE(r.slipped);
  EXPECT_NEAR(r.peak_friction, 1.5, 0.05 * 1.5);
  EXPECT_NEAR(r.applied_at_slip, 1.5, 0.05 * 1.5);
}

TEST(FrictionModel, FrictionFreeIsZero) {
  const auto m = FrictionModel::none();
  EXPECT_TRUE(m.is_friction_free());
  EXPECT_EQ(m.lugre_params(), nullptr);
  const auto f = m.evaluate(0.0, 3.0, 1e-5);
  EXPECT_EQ(f.force, 0.0);
  EXPECT_EQ(f.z, 0.0);
}

TEST(FrictionModel, ZeroHoldUsesContinuousRate) {
  const auto p = reference_lugre_params();
  const auto m = FrictionModel::lugre(p);
  const double z = 0.4 * p.max_deflection(), v = 2e-3;
  const auto f = m.evaluate(z, v, 0.0);
  EXPECT_EQ(f.z, z);
  EXPECT_DOUBLE_EQ(f.z_dot, lugre_z_rate(z, v, p));
  EXPECT_DOUBLE_EQ(f.force, p.sigma0 * z + p.sigma1 * f.z_dot + p.sigma2 * v);
}

TEST(LuGreParams, Validation) {
  LuGreParams p;
  EXPECT_NO_THROW(p.validate());
  p.f_s = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.sigma0 = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.v_s = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(FrictionBound, ZeroTrace) {
  const auto p = reference_lugre_params();
  const std::vector<double> zero(100, 0.0);
  const auto a = friction_bound_audit(zero, zero, p);
  EXPECT_TRUE(a.holds);
  EXPECT_GE(a.a2, 0.0);
}

TEST(FrictionBound, ConstantSliding) {
  const auto p = reference_lugre_params();
  std::vector<double> v, force;
  LuGreState s;
  for (int k = 0; k < 100000; ++k) {
    const auto f = lugre_step(s, 0.02, 1e-5, p);
    s.z = f.z;
    v.push_back(0.02);
    force.push_back(f.force);
  }
  EXPECT_TRUE(friction_bound_audit(v, force, p).holds);
}

TEST(FrictionBound, FlagsViolation) {
  const auto p = reference_lugre_params();
  const std::vector<double> v{0.0, 0.0}, force{0.0, 2.0};
  const auto a = friction_bound_audit(v, force, p);
  EXPECT_FALSE(a.holds);
  EXPECT_EQ(a.worst_index, 1u);
  EXPECT_NEAR(a.worst_margin, -0.5, 1e-12);
}

TEST(FrictionBound, RejectsEmptyAndMismatched) {
  const auto p = reference_lugre_params();
  const std::vector<double> one{1.0}, none;
  EXPECT_THROW(friction_bound_audit(none, none, p), std::invalid_argument);
  EXPECT_THROW(friction_bound_audit(one, none, p), std::invalid_argument);
}

TEST(FrictionPassivity, ZeroVelocity) {
  const std::vector<double> v(1000, 0.0), force(1000, 0.7);
  const auto e = friction_passivity_audit(v, force, 1e-3);
  for (double x : e.energy) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(e.min, 0.0);
}

TEST(FrictionPassivity, ConstantSlidingFromRest) {
  const auto p = reference_lugre_params();
  std::vector<double> v, force;
  LuGreState s;
  for (int k = 0; k < 50000; ++k) {
    const auto f = lugre_step(s, 0.003, 1e-5, p);
    s.z = f.z;
    v.push_back(0.003);
    force.push_back(f.force);
  }
  const auto e = friction_passivity_audit(v, force, 1e-5);
  EXPECT_GE(e.min, 0.0);
}

TEST(FrictionPassivity, SinusoidDissipates) {
  const auto p = reference_lugre_params();
  const auto d = sinusoid(0.01, 1.0, 10.0, 1e-5, p);
  const auto e = friction_passivity_audit(d.v, d.force, 1e-5);
  EXPECT_GE(e.min, -1e-6);
  EXPECT_GT(e.energy.back(), 0.0);
}
