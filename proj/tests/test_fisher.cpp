#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oamwb/closed_forms.hpp"
#include "oamwb/fisher.hpp"

using namespace oamwb;

namespace {

Scenario make(double alpha, double r, int l = 1, double T = 0.5) {
  Scenario s;
  s.alpha = alpha;
  s.r = r;
  s.l = l;
  s.T = T;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Qfim, BalancedIsDiagonal) {
  const Qfim f = qfim_two_param(make(20.0, 2.0));
  EXPECT_LT(std::abs(f.F_ds), 1e-9 * f.F_dd);
  EXPECT_LT(std::abs(f.F_sd), 1e-9 * f.F_dd);
}

TEST(Qfim, DefaultOperatingPoint) {
  const Qfim f = qfim_two_param(make(20.0, 2.0));
  const double ref = 4.0 * (std::exp(8.0) * 400.0 + std::pow(std::sinh(4.0), 2));
  EXPECT_LT(rel(f.F_dd, ref), 1e-10);
  EXPECT_LT(rel(f.F_ss, ref), 1e-10);
  EXPECT_NEAR(f.F_dd, 4772511.7, 0.1);
}

TEST(Qfim, UnbalancedOffDiagonal) {
  const Qfim f = qfim_two_param(make(3.0, 0.7, 2, 0.6));
  const double ref = 4.0 * 4.0 * 9.0 * std::exp(2.8) * (1.0 - 1.2);
  EXPECT_LT(f.F_ds, 0.0);
  EXPECT_LT(std::abs(f.F_ds - ref), 1e-9 * std::abs(ref));
  EXPECT_EQ(f.F_ds, f.F_sd);
}

TEST(Qfim, MatchesClosedFormOnRandomScenarios) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double alpha = 0.1 + 30.0 * u(rng), r = 2.5 * u(rng), T = u(rng);
    const int l = 1 + k % 5;
    const Qfim f = qfim_two_param(make(alpha, r, l, T));
    const auto ref = cf::qfim_and_bounds(alpha, r, l, T);
    EXPECT_LT(rel(f.F_dd, ref.F_dd), 1e-10);
    EXPECT_LT(rel(f.F_ss, ref.F_ss), 1e-10);
    EXPECT_LT(std::abs(f.F_ds - ref.F_ds), 1e-10 * ref.F_dd);
  }
}

TEST(Qfim, IndependentOfAngles) {
  Scenario s = make(2.0, 0.9, 2, 0.3);
  const Qfim ref = qfim_two_param(s);
  s.theta_a = 0.4;
  s.theta_b = -1.1;
  const Qfim f = qfim_two_param(s);
  EXPECT_EQ(f.F_dd, ref.F_dd);
  EXPECT_EQ(f.F_ds, ref.F_ds);
}

TEST(Qfim, LossyUnsupported) {
  Scenario s = make(1.0, 0.5);
  s.lossless = false;
  s.eta_a = 0.8;
  EXPECT_THROW(qfim_two_param(s), Unsupported);
}

TEST(CrbBounds, DiagonalReciprocals) {
  const CrbBounds b = crb_bounds({4.0, 0.0, 0.0, 16.0});
  EXPECT_TRUE(b.valid);
  EXPECT_DOUBLE_EQ(b.var_theta_d, 0.25);
  EXPECT_DOUBLE_EQ(b.var_theta_s, 1.0 / 16.0);
}

TEST(CrbBounds, HandInverse) {
  const Qfim f = qfim_two_param(make(5.0, 1.0, 1, 0.3));
  const double det = f.F_dd * f.F_ss - f.F_ds * f.F_sd;
  const CrbBounds b = crb_bounds(f);
  EXPECT_LT(rel(b.var_theta_d, f.F_ss / det), 1e-14);
  EXPECT_LT(rel(b.var_theta_s, f.F_dd / det), 1e-14);
  const auto ref = cf::qfim_and_bounds(5.0, 1.0, 1, 0.3);
  EXPECT_LT(rel(b.var_theta_d, ref.var_d_bound), 1e-9);
}

TEST(CrbBounds, SingularWithoutPhotons) {
  EXPECT_THROW(crb_bounds(qfim_two_param(make(0.0, 0.0))), SingularInformation);
}

TEST(QfiSingle, DefaultOperatingPoint) {
  const SingleParameterQfi q = qfi_single(make(20.0, 2.0));
  const double F = 8.0 * (std::exp(8.0) * 400.0 + std::pow(std::sinh(4.0), 2));
  EXPECT_LT(rel(q.F, F), 1e-10);
  EXPECT_LT(rel(q.qcrb, 1.0 / std::sqrt(F)), 1e-10);
  EXPECT_NEAR(q.qcrb, 3.2368e-4, 1e-8);
}

TEST(QfiSingle, NoSqueezing) {
  const SingleParameterQfi q = qfi_single(make(7.0, 0.0, 3));
  EXPECT_LT(rel(q.qcrb, 1.0 / (2.0 * std::sqrt(2.0) * 3.0 * 7.0)), 1e-12);
}

TEST(QfiSingle, SqueezedVacuumOnly) {
  const SingleParameterQfi q = qfi_single(make(0.0, 0.4, 2));
  EXPECT_LT(rel(q.F, 8.0 * 4.0 * std::pow(std::sinh(0.8), 2)), 1e-12);
}

TEST(QfiSingle, EqualsArmNumberVariance) {
  const Scenario s = make(1.3, 0.6, 2);
  RVector w(2);
  w << 0.0, 1.0;
  EXPECT_LT(rel(qfi_single(s).F, 16.0 * 4.0 * number_stats(probe_moments(s), w).variance), 1e-14);
}

TEST(QfiSingle, Errors) {
  EXPECT_THROW(qfi_single(make(0.0, 0.0)), SingularInformation);
  EXPECT_THROW(qfi_single(make(1.0, 0.2, 1, 0.4)), InvalidArgument);
  Scenario s = make(1.0, 0.2);
  s.theta_a = 0.1;
  EXPECT_THROW(qfi_single(s), InvalidArgument);
}

TEST(Saturation, IntensityApproachesDifferenceBound) {
  const double alpha = 100.0, r = 1.0;
  const double ratio =
      cf::dtheta_id_opt(alpha, r, 1) / std::sqrt(crb_bounds(qfim_two_param(make(alpha, r))).var_theta_d);
  EXPECT_NEAR(ratio, std::sqrt(1.0 + std::pow(std::sinh(2 * r), 2) * std::exp(-4 * r) / (alpha * alpha)), 1e-12);
  EXPECT_NEAR(ratio - 1.0, 1.2e-5, 1e-6);
}

TEST(Saturation, HomodyneSqrtTwoAboveBound) {
  const double ratio = cf::dtheta_bhd_opt(1000.0, 2.0, 1) / qfi_single(make(1000.0, 2.0)).qcrb;
  EXPECT_NEAR(ratio, std::sqrt(2.0), 1e-3 * std::sqrt(2.0));
}
