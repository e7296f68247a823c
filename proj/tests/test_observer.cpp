#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fjr/observer.hpp"

using namespace fjr;

namespace {

constexpr ObserverGains kLow{50, 10, 25};
constexpr ObserverGains kHigh{100, 20, 100};
constexpr ObserverGains kLowPd{50, 10, 0};
constexpr ObserverGains kHighPd{100, 20, 0};

ObserverState single(double theta_n, double dtheta_n, double i_enr) {
  ObserverState o;
  o.theta_n = constant_vector(1, theta_n);
  o.dtheta_n = constant_vector(1, dtheta_n);
  o.i_enr = constant_vector(1, i_enr);
  return o;
}

double tau_hat(const ObserverState& o, double theta, double dtheta, const ObserverGains& g,
               ObserverKind kind, double B = 1.0) {
  return friction_estimate(o, constant_vector(1, theta), constant_vector(1, dtheta), g, kind,
                           constant_vector(1, B))(0);
}

// Residual of A'P + PA - P b R b' P + Q built from scratch for the PID
// difference dynamics with state [int e, e, de].
double pid_residual(double B, const ObserverGains& g, const Eigen::Matrix3d& P,
                    const Eigen::Matrix3d& Q) {
  Eigen::Matrix3d A;
  A << 0, 1, 0, 0, 0, 1, 0, -g.L_i, -g.L_p;
  const Eigen::Vector3d b(0, 0, 1 / B);
  const double R = B * g.L;
  return (A.transpose() * P + P * A - P * b * R * b.transpose() * P + Q).norm();
}

}  // namespace

TEST(NominalMotor, Acceleration) {
  const auto B = constant_vector(1, 1.0);
  EXPECT_EQ(nominal_motor_derivative(constant_vector(1, 0.3), constant_vector(1, 0.3), B)(0), 0.0);
  EXPECT_DOUBLE_EQ(
      nominal_motor_derivative(constant_vector(1, 0.0), constant_vector(1, 0.5), B)(0), 0.5);
  EXPECT_DOUBLE_EQ(nominal_motor_derivative(constant_vector(1, 1.0), constant_vector(1, 0.0),
                                            constant_vector(1, 4.0))(0),
                   -0.25);
}

TEST(FrictionEstimate, ZeroDisagreement) {
  const auto o = single(0.01, 0.2, 0.0);
  for (ObserverKind k : {ObserverKind::PidType, ObserverKind::PdType,
                         ObserverKind::BaselineMeasuredFeedback, ObserverKind::None}) {
    const ObserverGains g = k == ObserverKind::PidType ? kLow
                            : k == ObserverKind::PdType ? kLowPd
                                                        : ObserverGains{50, 0, 0};
    EXPECT_EQ(tau_hat(o, 0.01, 0.2, g, k), 0.0) << to_string(k);
  }
}

TEST(FrictionEstimate, PdExample) {
  // e_nr = theta_n - theta = -0.002
  const auto o = single(0.0, 0.0, 0.0);
  EXPECT_NEAR(tau_hat(o, 0.002, 0.0, kLowPd, ObserverKind::PdType), 1.0, 1e-12);
}

TEST(FrictionEstimate, TermsPerKind) {
  const auto o = single(0.003, 0.05, 2e-4);
  const double e = 0.003 - 0.001, de = 0.05 - 0.02;
  EXPECT_NEAR(tau_hat(o, 0.001, 0.02, kLow, ObserverKind::PidType, 2.0),
              -2.0 * 50 * (de + 10 * e + 25 * 2e-4), 1e-12);
  EXPECT_NEAR(tau_hat(o, 0.001, 0.02, kLowPd, ObserverKind::PdType, 2.0),
              -2.0 * 50 * (de + 10 * e), 1e-12);
  EXPECT_NEAR(tau_hat(o, 0.001, 0.02, {50, 0, 0}, ObserverKind::BaselineMeasuredFeedback, 2.0),
              -2.0 * 50 * de, 1e-12);
  EXPECT_EQ(tau_hat(o, 0.001, 0.02, kLow, ObserverKind::None), 0.0);
}

TEST(FrictionEstimate, PidEquilibriumSign) {
  // At e = de = 0 with the predicted integral state the estimate equals the
  // motor-equation friction -F.
  const double F = 0.37;
  const auto pred = equilibrium_prediction(1.0, kHigh, ObserverKind::PidType, F);
  ASSERT_TRUE(pred.i_enr.has_value());
  const auto o = single(0.01, 0.0, *pred.i_enr);
  const double th = tau_hat(o, 0.01, 0.0, kHigh, ObserverKind::PidType);
  EXPECT_LE(std::abs(th + 1.0 * kHigh.L * kHigh.L_i * *pred.i_enr), 1e-9);
  EXPECT_NEAR(th, -F, 1e-12);
}

TEST(Gains, Validation) {
  EXPECT_NO_THROW(validate_gains(kLow, ObserverKind::PidType));
  EXPECT_THROW(validate_gains({50, 10, 50}, ObserverKind::PidType), std::invalid_argument);
  EXPECT_THROW(validate_gains({50, 10, 60}, ObserverKind::PidType), std::invalid_argument);
  EXPECT_THROW(validate_gains({0, 10, 25}, ObserverKind::PidType), std::invalid_argument);
  EXPECT_THROW(validate_gains(kLow, ObserverKind::PdType), std::invalid_argument);
  EXPECT_NO_THROW(validate_gains(kLowPd, ObserverKind::PdType));
  EXPECT_THROW(validate_gains(kLowPd, ObserverKind::BaselineMeasuredFeedback),
               std::invalid_argument);
  EXPECT_NO_THROW(validate_gains({50, 0, 0}, ObserverKind::BaselineMeasuredFeedback));
}

TEST(ObserverKindNames, RoundTrip) {
  for (ObserverKind k : {ObserverKind::PidType, ObserverKind::PdType,
                         ObserverKind::BaselineMeasuredFeedback, ObserverKind::None})
    EXPECT_EQ(parse_observer_kind(to_string(k)), k);
  EXPECT_THROW(parse_observer_kind("pi"), std::invalid_argument);
}

TEST(Riccati, LowGainMatrices) {
  const auto c = riccati_check(1.0, kLow, ObserverKind::PidType);
  Eigen::Matrix3d P, Q;
  P << 13125, 1500, 25, 1500, 600, 10, 25, 10, 1;
  Q = Eigen::Vector3d(31250, 2500, 50).asDiagonal();
  EXPECT_LE((c.P - P).norm(), 1e-9);
  EXPECT_LE((c.Q - Q).norm(), 1e-9);
  EXPECT_DOUBLE_EQ(c.R, 50.0);
  EXPECT_LE(c.residual, 1e-9);
  EXPECT_LE(pid_residual(1.0, kLow, P, Q), 1e-9);
}

TEST(Riccati, HighGains) {
  EXPECT_LE(riccati_residual(1.0, kHigh, ObserverKind::PidType), 1e-9);
  const auto c = riccati_check(1.0, kHigh, ObserverKind::PidType);
  EXPECT_LE(pid_residual(1.0, kHigh, c.P, c.Q), 1e-9);
}

TEST(Riccati, PdBlockForm) {
  const auto c = riccati_check(1.0, kLowPd, ObserverKind::PdType);
  const double B = 1, Lp = 10, R = 50;
  Eigen::Matrix2d P, Q;
  P << B * Lp * Lp + B * Lp * R, B * Lp, B * Lp, B;
  Q = Eigen::Vector2d(Lp * Lp * R, R).asDiagonal();
  EXPECT_LE((c.P - P).norm(), 1e-9);
  EXPECT_LE((c.Q - Q).norm(), 1e-9);
  EXPECT_LE(c.residual, 1e-9);
}

TEST(Riccati, NonUnitInertia) {
  for (double B : {0.25, 3.0}) {
    EXPECT_LE(riccati_residual(B, kLow, ObserverKind::PidType), 1e-9) << B;
    EXPECT_LE(riccati_residual(B, kHighPd, ObserverKind::PdType), 1e-9) << B;
    const auto c = riccati_check(B, kLow, ObserverKind::PidType);
    EXPECT_LE(pid_residual(B, kLow, c.P, c.Q), 1e-9);
    // P positive definite.
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c.P).eigenvalues().minCoeff(), 0);
  }
}

TEST(Riccati, RejectsBaseline) {
  EXPECT_THROW(riccati_check(1.0, {50, 0, 0}, ObserverKind::BaselineMeasuredFeedback),
               std::invalid_argument);
}

TEST(Lpf, UnityDcGain) {
  EXPECT_NEAR(std::abs(equivalent_lpf(1, kLow, ObserverKind::PidType)(0.0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(equivalent_lpf(1, kHighPd, ObserverKind::PdType)(0.0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(equivalent_lpf(1, {80, 0, 0},
                                      ObserverKind::BaselineMeasuredFeedback)(0.0)),
              1.0, 1e-15);
}

TEST(Lpf, BaselineIsFirstOrder) {
  const auto tf = equivalent_lpf(1, {80, 0, 0}, ObserverKind::BaselineMeasuredFeedback);
  EXPECT_EQ(tf.num, (std::vector<double>{80}));
  EXPECT_EQ(tf.den, (std::vector<double>{1, 80}));
  const std::complex<double> s(0, 30);
  EXPECT_NEAR(std::abs(tf(s) - 80.0 / (s + 80.0)), 0.0, 1e-15);
}

TEST(Lpf, MatchesClosedLoopOfCompensator) {
  // LPF = -C P / (1 - C P) with P = 1/(B s^2), evaluated pointwise.
  for (ObserverKind k : {ObserverKind::PidType, ObserverKind::PdType}) {
    const ObserverGains g = k == ObserverKind::PidType ? kLow : kLowPd;
    const double B = 2.0;
    const auto lpf = equivalent_lpf(B, g, k);
    const auto C = compensator(B, g, k);
    for (double w : {0.3, 4.0, 70.0}) {
      const std::complex<double> s(0, w);
      const auto CP = C(s) / (B * s * s);
      EXPECT_NEAR(std::abs(lpf(s) - (-CP / (1.0 - CP))), 0.0, 1e-12) << w;
    }
  }
}

TEST(Lpf, CompensatorRoundTrip) {
  for (double B : {1.0, 2.5}) {
    const struct {
      ObserverKind k;
      ObserverGains g;
    } cases[] = {{ObserverKind::PidType, kLow},
                 {ObserverKind::PidType, kHigh},
                 {ObserverKind::PdType, kHighPd},
                 {ObserverKind::BaselineMeasuredFeedback, {60, 0, 0}}};
    for (const auto& c : cases) {
      const auto back = compensator_from_lpf(equivalent_lpf(B, c.g, c.k), B);
      const auto direct = compensator(B, c.g, c.k);
      // Same rational function; compare on a few points and on coefficients
      // after normalization.
      for (double w : {0.5, 8.0, 300.0}) {
        const std::complex<double> s(0, w);
        EXPECT_NEAR(std::abs(back(s) - direct(s)) / std::abs(direct(s)), 0.0, 1e-12);
      }
      ASSERT_EQ(back.num.size(), direct.num.size()) << to_string(c.k);
      ASSERT_EQ(back.den.size(), direct.den.size()) << to_string(c.k);
      for (std::size_t i = 0; i < back.num.size(); ++i)
        EXPECT_NEAR(back.num[i], direct.num[i], 1e-9 * std::abs(direct.num[0]));
    }
  }
}

TEST(Equilibrium, Predictions) {
  const auto zero_pd = equilibrium_prediction(1, kHighPd, ObserverKind::PdType, 0.0);
  EXPECT_EQ(zero_pd.e_nr, 0.0);
  EXPECT_FALSE(zero_pd.i_enr.has_value());
  const auto zero_pid = equilibrium_prediction(1, kHigh, ObserverKind::PidType, 0.0);
  EXPECT_EQ(zero_pid.e_nr, 0.0);
  EXPECT_EQ(*zero_pid.i_enr, 0.0);

  EXPECT_NEAR(equilibrium_prediction(1, kHighPd, ObserverKind::PdType, 0.5).e_nr, 2.5e-4, 1e-18);
  EXPECT_NEAR(*equilibrium_prediction(1, kHigh, ObserverKind::PidType, 0.5).i_enr, 5e-5, 1e-18);
  EXPECT_THROW(equilibrium_prediction(1, {50, 0, 0}, ObserverKind::BaselineMeasuredFeedback, 1),
               std::invalid_argument);
}

TEST(Passivity, PdConstantRealPart) {
  const std::vector<double> w{0.01, 1.0, 5.0, 1e3};
  const auto re = observer_passivity_sweep(1.5, kLowPd, ObserverKind::PdType, w);
  for (double r : re) EXPECT_NEAR(r, 1.5 * 50, 1e-9);
}

TEST(Passivity, PidCrossover) {
  const std::vector<double> w{3.0, 6.0};
  const auto re = observer_passivity_sweep(1.0, kLow, ObserverKind::PidType, w);
  EXPECT_LT(re[0], 0.0);
  EXPECT_GE(re[1], 0.0);
  EXPECT_NEAR(re[0], 50.0 * (9.0 - 25.0) / 9.0, 1e-9);
  EXPECT_NEAR(re[1], 50.0 * (36.0 - 25.0) / 36.0, 1e-9);
}

TEST(Passivity, BaselineStaticGain) {
  const std::vector<double> w{0.1, 10.0};
  for (double r : observer_passivity_sweep(2.0, {40, 0, 0},
                                           ObserverKind::BaselineMeasuredFeedback, w))
    EXPECT_DOUBLE_EQ(r, 80.0);
}

TEST(Passivity, RejectsNonPositiveFrequency) {
  const std::vector<double> w{0.0};
  EXPECT_THROW(observer_passivity_sweep(1, kLow, ObserverKind::PidType, w),
               std::invalid_argument);
}

TEST(Passivity, ParallelMatchesSerial) {
  std::vector<double> w(5000);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1e-2 * std::pow(1e6, i / 4999.0);
  EXPECT_EQ(observer_passivity_sweep(1.3, kHigh, ObserverKind::PidType, w),
            observer_passivity_sweep_serial(1.3, kHigh, ObserverKind::PidType, w));
}

TEST(ObserverEnergyAudit, ZeroTrace) {
  const std::vector<double> zero(200, 0.0);
  const auto e = observer_energy(zero, zero, 1e-3);
  EXPECT_EQ(e.min, 0.0);
  for (double x : e.energy) EXPECT_EQ(x, 0.0);
}

TEST(ObserverEnergyAudit, PdNeverGeneratesPidDoesBelowCrossover) {
  // e = a sin(w t) drives the estimate law open loop.
  constexpr double dt = 1e-4, a = 1e-3, w = 2.0;  // w^2 < L_i = 25
  const auto n = static_cast<std::size_t>(20.0 / dt);
  std::vector<double> de(n), pd(n), pid(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k * dt;
    const double e = a * std::sin(w * t), d = a * w * std::cos(w * t);
    const double i = a * (1 - std::cos(w * t)) / w;
    de[k] = d;
    pd[k] = -50.0 * (d + 10 * e);
    pid[k] = -50.0 * (d + 10 * e + 25 * i);
  }
  EXPECT_GE(observer_energy(de, pd, dt).min, -1e-6);
  EXPECT_LT(observer_energy(de, pid, dt).min, 0.0);
}

TEST(DifferenceDynamics, BaselineStepResponse) {
  constexpr double dt = 1e-4, L = 40;
  const std::vector<double> tau_f(5000, 1.0);
  const auto out =
      simulate_difference_dynamics(1.0, {L, 0, 0}, ObserverKind::BaselineMeasuredFeedback,
                                   tau_f, dt);
  ASSERT_EQ(out.size(), tau_f.size());
  for (std::size_t k = 0; k < out.size(); k += 250)
    EXPECT_NEAR(out[k], 1.0 - std::exp(-L * k * dt), 1e-9) << k;
}

TEST(DifferenceDynamics, PidSettlesOnConstantFriction) {
  const std::vector<double> tau_f(40000, -0.8);
  const auto out = simulate_difference_dynamics(1.0, kLow, ObserverKind::PidType, tau_f, 1e-4);
  EXPECT_NEAR(out.back(), -0.8, 1e-6);
}

TEST(DiscreteFilterZoh, ExactFirstOrderStep) {
  constexpr double dt = 1e-3, L = 25;
  auto f = DiscreteFilter::zero_order_hold({{L}, {1, L}}, dt);
  for (int k = 0; k < 400; ++k) {
    const double y = f.step(1.0);
    EXPECT_NEAR(y, 1.0 - std::exp(-L * k * dt), 1e-12) << k;
  }
}

TEST(DiscreteFilterZoh, ExactSecondOrderStep) {
  // 1 / ((s+1)(s+2)): step response 1/2 - e^-t + e^-2t / 2
  constexpr double dt = 0.01;
  auto f = DiscreteFilter::zero_order_hold({{1}, {1, 3, 2}}, dt);
  for (int k = 0; k < 500; ++k) {
    const double t = k * dt;
    EXPECT_NEAR(f.step(1.0), 0.5 - std::exp(-t) + 0.5 * std::exp(-2 * t), 1e-12) << k;
  }
}

TEST(DiscreteFilterZoh, RejectsImproper) {
  EXPECT_THROW(DiscreteFilter::zero_order_hold({{1, 0}, {1, 1}}, 1e-3), std::invalid_argument);
}
