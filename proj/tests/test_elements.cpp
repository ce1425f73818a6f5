#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oamwb/elements.hpp"

using namespace oamwb;

namespace {

Scenario random_scenario(std::mt19937_64& rng, bool lossy) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scenario s;
  s.alpha = std::polar(0.2 + 5.0 * u(rng), u(rng));
  s.r = 2.0 * u(rng);
  s.l = 1 + static_cast<int>(u(rng) * 3.0);
  s.T = u(rng);
  s.theta_a = u(rng) - 0.5;
  s.theta_b = u(rng) - 0.5;
  if (lossy) {
    s.lossless = false;
    s.eta_a = 0.1 + 0.9 * u(rng);
    s.eta_b = 0.1 + 0.9 * u(rng);
  }
  return s;
}

double max_diff(const GaussianMoments& x, const GaussianMoments& y) {
  return std::max({(x.mean - y.mean).cwiseAbs().maxCoeff(), (x.M - y.M).cwiseAbs().maxCoeff(),
                   (x.S - y.S).cwiseAbs().maxCoeff()});
}

}  // namespace

TEST(BeamSplitter, FullTransmissionIsIdentity) {
  const auto t = splitter_bs(1.0);
  EXPECT_LT((t.A() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(t.B().cwiseAbs().maxCoeff(), 0.0);
}

TEST(BeamSplitter, BalancedSplitsCoherentAmplitude) {
  const auto m = moments(splitter_bs(0.5), InputState::coherent(2.0, 2));
  EXPECT_NEAR(m.mean[0].real(), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(m.mean[1].real(), std::sqrt(2.0), 1e-14);
}

TEST(BeamSplitter, RecombinerUndoesSplitter) {
  for (double T : {0.0, 0.2, 0.5, 0.77, 1.0}) {
    const auto t = compose(recombiner_bs(T), splitter_bs(T));
    EXPECT_LT((t.A() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15) << T;
  }
}

TEST(BeamSplitter, RejectsBadTransmissivity) {
  EXPECT_THROW(splitter_bs(-0.1), InvalidArgument);
  EXPECT_THROW(recombiner_bs(1.5), InvalidArgument);
  EXPECT_THROW(splitter_bs(0.5, 0, 0, 2), InvalidArgument);
  EXPECT_THROW(splitter_bs(0.5, 0, 2, 2), InvalidArgument);
}

TEST(Squeezer, ZeroIsIdentity) {
  const auto t = squeezer(0.0, 1, 2);
  EXPECT_LT((t.A() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(t.B().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Squeezer, VacuumNumber) {
  const auto m = moments(squeezer(1.0, 0, 2), InputState::coherent(0.0, 2));
  EXPECT_NEAR(photon_number(m, 0), 1.381097845541816, 1e-12);
  EXPECT_EQ(photon_number(m, 1), 0.0);
}

TEST(Squeezer, HyperbolicIdentity) {
  for (int k = 1; k <= 30; ++k) {
    const auto t = squeezer(0.1 * k);
    EXPECT_NEAR(std::norm(t.A()(0, 0)) - std::norm(t.B()(0, 0)), 1.0, 1e-12 * std::norm(t.A()(0, 0)));
    EXPECT_TRUE(t.is_symplectic(1e-12 * std::norm(t.A()(0, 0))));
  }
}

TEST(Squeezer, RejectsNegative) { EXPECT_THROW(squeezer(-0.1), InvalidArgument); }

TEST(OamPhase, ZeroAngleIsIdentity) {
  const auto t = oam_phase(3, 0.0, 0, 2);
  EXPECT_LT((t.A() - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OamPhase, QuarterTurn) {
  const auto m = moments(oam_phase(2, std::numbers::pi / 8, 0, 1), InputState::coherent(1.0, 1));
  EXPECT_NEAR(m.mean[0].real(), 0.0, 1e-15);
  EXPECT_NEAR(m.mean[0].imag(), 1.0, 1e-15);
}

TEST(OamPhase, NumberInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const auto pre = compose(squeezer(0.5 + u(rng) / 2, 0, 2), splitter_bs(0.3, 0, 1, 2));
    const auto post = compose(oam_phase(1 + k % 4, u(rng), 0, 2), pre);
    const auto in = InputState::coherent(cplx(u(rng), u(rng)), 2);
    EXPECT_NEAR(photon_number(moments(post, in), 0), photon_number(moments(pre, in), 0), 1e-12);
  }
}

TEST(OamPhase, RejectsBadCharge) { EXPECT_THROW(oam_phase(0, 0.1, 0, 1), InvalidArgument); }

TEST(Loss, UnitTransmissionIsIdentity) {
  const auto t = loss_channel(1.0, 0, 2, 3);
  EXPECT_LT((t.A() - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Loss, PoissonThinning) {
  const double eta = 0.35;
  const auto m = moments(loss_channel(eta, 0, 2, 3), InputState::coherent(2.0, 3));
  RVector w = RVector::Zero(3);
  w[0] = 1.0;
  const Stats s = number_stats(m, w);
  EXPECT_NEAR(s.mean, eta * 4.0, 1e-12);
  EXPECT_NEAR(s.variance, eta * 4.0, 1e-12);
}

TEST(Loss, SqueezedVacuumQuadrature) {
  const auto t = compose(loss_channel(0.7, 0, 2, 3), squeezer(0.5, 0, 3));
  const auto m = moments(t, InputState::coherent(0.0, 3));
  const double y = quadrature_stats(m, ModeLabel::signal_a(), std::numbers::pi / 2).variance;
  EXPECT_NEAR(y, 0.7 * std::exp(-1.0) + 0.3, 1e-12);
  EXPECT_NEAR(y, 0.5575156, 1e-7);
}

TEST(Loss, RejectsBadArguments) {
  EXPECT_THROW(loss_channel(0.0, 0, 2, 3), InvalidArgument);
  EXPECT_THROW(loss_channel(1.2, 0, 2, 3), InvalidArgument);
  EXPECT_THROW(loss_channel(0.5, 0, 1, 3), InvalidArgument);
  EXPECT_THROW(loss_channel(0.5, 0, 3, 3), InvalidArgument);
}

TEST(Scenario, DifferenceSumAccessors) {
  Scenario s;
  s.theta_a = 0.1;
  s.theta_b = 0.5;
  EXPECT_DOUBLE_EQ(s.theta_d(), 0.4);
  EXPECT_DOUBLE_EQ(s.theta_s(), 0.6);
  const Scenario t = s.with_difference_sum(0.2, 0.3);
  EXPECT_DOUBLE_EQ(t.theta_d(), 0.2);
  EXPECT_DOUBLE_EQ(t.theta_s(), 0.3);
}

TEST(Scenario, LosslessForbidsEta) {
  Scenario s;
  s.eta_a = 0.5;
  EXPECT_THROW(build_circuit(s), InvalidArgument);
  s.lossless = false;
  EXPECT_EQ(build_circuit(s).n_modes(), 4u);
}

TEST(Scenario, RejectsOutOfDomain) {
  Scenario s;
  s.r = -1.0;
  EXPECT_THROW(build_circuit(s), InvalidArgument);
  s = Scenario{};
  s.T = 1.1;
  EXPECT_THROW(build_circuit(s), InvalidArgument);
  s = Scenario{};
  s.l = 0;
  EXPECT_THROW(build_circuit(s), InvalidArgument);
}

TEST(Circuit, CommonPhaseFactorises) {
  Scenario s;
  s.r = 0.7;
  s.l = 2;
  s.T = 0.35;
  s.theta_a = s.theta_b = 0.21;
  const auto t = build_circuit(s);
  const cplx e = std::polar(1.0, 2.0 * s.l * 0.21);
  EXPECT_LT(std::abs(t.A()(0, 0) - e * std::cosh(0.7)), 1e-14);
  EXPECT_LT(std::abs(t.B()(0, 0) - e * std::sinh(0.7)), 1e-14);
  EXPECT_LT(std::abs(t.A()(0, 1)), 1e-14);
  EXPECT_LT(std::abs(t.B()(0, 1)), 1e-14);
}

TEST(Circuit, ReferenceCoefficient) {
  Scenario s;
  s.T = 0.6;
  s.r = 0.8;
  s.theta_a = 0.1;
  s.theta_b = 0.3;
  const cplx ref = (0.6 * std::polar(1.0, 0.2) + 0.4 * std::polar(1.0, 0.6)) * std::cosh(0.8);
  EXPECT_LT(std::abs(build_circuit(s).A()(0, 0) - ref), 1e-14);
}

TEST(Circuit, BalancedSymmetricPortB) {
  Scenario s;
  s.alpha = 3.0;
  s.r = 0.9;
  s.theta_a = s.theta_b = 0.4;
  const auto m = moments(build_circuit(s), scenario_input(s));
  EXPECT_NEAR(photon_number(m, 1), std::pow(std::sinh(0.9), 2), 1e-12);
}

TEST(Circuit, LossyPortBStructure) {
  Scenario s;
  s.r = 0.6;
  s.l = 1;
  s.theta_b = 0.25;
  s.lossless = false;
  s.eta_a = s.eta_b = 0.64;
  const auto t = build_circuit(s);
  const cplx e = std::polar(1.0, 0.5);
  const double k = std::sqrt(0.64) / 2.0;
  EXPECT_LT(std::abs(t.A()(1, 1) - k * (e + 1.0) * std::cosh(0.6)), 1e-14);
  EXPECT_LT(std::abs(t.B()(1, 1) - k * (e + 1.0) * std::sinh(0.6)), 1e-14);
  EXPECT_LT(std::abs(t.A()(1, 0) - k * (e - 1.0) * std::cosh(0.6)), 1e-14);
  EXPECT_LT(std::abs(t.B()(1, 0) - k * (e - 1.0) * std::sinh(0.6)), 1e-14);
  // Vacuum ports enter as (v2 - v1) / sqrt 2 up to a common phase.
  const double v = std::sqrt(0.36 / 2.0);
  EXPECT_NEAR(std::abs(t.A()(1, 2)), v, 1e-14);
  EXPECT_NEAR(std::abs(t.A()(1, 3)), v, 1e-14);
  EXPECT_LT(std::abs(t.A()(1, 2) + t.A()(1, 3)), 1e-14);
}

TEST(Circuit, InvariantsOverRandomScenarios) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    const Scenario s = random_scenario(rng, k % 2 == 1);
    EXPECT_LT(build_circuit(s).symplectic_defect(), kInvariantTolerance);
  }
}

TEST(Circuit, LossPlacementIsUnobservable) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    const Scenario s = random_scenario(rng, true);
    const auto in = scenario_input(s);
    const auto ref = moments(build_circuit(s, LossPlacement::reference), in);
    auto signal = [](const GaussianMoments& m) {
      GaussianMoments out;
      out.mean = m.mean.head(2);
      out.M = m.M.topLeftCorner(2, 2);
      out.S = m.S.topLeftCorner(2, 2);
      return out;
    };
    for (auto p : {LossPlacement::before_phase, LossPlacement::after_phase}) {
      EXPECT_LT(max_diff(signal(moments(build_circuit(s, p), in)), signal(ref)), 1e-12);
    }
  }
}
