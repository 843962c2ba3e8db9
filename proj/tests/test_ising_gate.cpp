#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "cpulse/ising_gate.hpp"
#include "test_support.hpp"

namespace cpulse {
namespace {

const double kQuarter = kPi / 2.0;
const double kPhiPB1 = std::acos(-1.0 / 16.0);
const std::vector<Family> kFamilies{Family::kSimple, Family::kBB1, Family::kNB1, Family::kPB1};

double max_abs(const Propagator& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<YPulse> pulses(const IsingSchedule& s) {
  std::vector<YPulse> out;
  for (const auto& item : s.items)
    if (const auto* p = std::get_if<YPulse>(&item)) out.push_back(*p);
  return out;
}

TEST(IsingEvolution, ZeroCouplingIsIdentity) {
  EXPECT_LE(max_abs(ising_evolution(2.0, -1.0) - Propagator::Identity()), 1e-15);
}

TEST(IsingEvolution, TwoUnitsIsNaiveIsingGate) {
  // exp(-i pi J 2IzSz tau) at tau = 2t = 1/2J, built by a generic exponential.
  const Propagator oracle = testing::expm_i<Eigen::Matrix4cd>((kPi / 2.0) * testing::two_iz_sz());
  const Propagator u = ising_evolution(2.0, 0.0);
  EXPECT_LE(max_abs(u - oracle), 1e-12);
  EXPECT_NEAR(std::arg(u(0, 0)), -kPi / 4.0, 1e-12);
  EXPECT_NEAR(std::arg(u(1, 1)), kPi / 4.0, 1e-12);
  EXPECT_NEAR(std::arg(u(2, 2)), kPi / 4.0, 1e-12);
  EXPECT_NEAR(std::arg(u(3, 3)), -kPi / 4.0, 1e-12);
}

TEST(IsingEvolution, SemigroupAndErrorScaling) {
  const Propagator two = ising_evolution(2.0, 0.0);
  EXPECT_LE(max_abs(ising_evolution(4.0, 0.0) - two * two), 1e-12);
  EXPECT_LE(max_abs(ising_evolution(2.0, 0.5) - ising_evolution(3.0, 0.0)), 1e-12);
}

TEST(IsingEvolution, RejectsNonPositiveDuration) {
  EXPECT_THROW(ising_evolution(0.0, 0.0), std::domain_error);
  EXPECT_THROW(ising_evolution(-1.0, 0.0), std::domain_error);
}

TEST(YPulse, LimitsAndOracle) {
  EXPECT_LE(max_abs(y_pulse_propagator(0, 0.0, 1) - Propagator::Identity()), 1e-15);
  const Propagator full = y_pulse_propagator(1, kTwoPi, 1);
  EXPECT_LE(max_abs(full + Propagator::Identity()), 1e-12);
  EXPECT_NEAR(propagator_fidelity(full, Propagator::Identity()), 1.0, 1e-12);

  const Eigen::Matrix2cd ry = testing::expm_i<Eigen::Matrix2cd>((kPi / 2.0) * testing::sy());
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Propagator on0 = y_pulse_propagator(0, kPi, 1);
  EXPECT_LE(max_abs(on0 - testing::kron(ry, id)), 1e-12);
  EXPECT_LE(on0.imag().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((on0.topLeftCorner<2, 2>().cwiseAbs().maxCoeff()), 1e-15);
  EXPECT_LE((on0.bottomRightCorner<2, 2>().cwiseAbs().maxCoeff()), 1e-15);
  EXPECT_LE(max_abs(y_pulse_propagator(1, kPi, 1) - testing::kron(id, ry)), 1e-12);
  EXPECT_LE(max_abs(y_pulse_propagator(1, 1.1, -1) - y_pulse_propagator(1, -1.1, 1)), 1e-15);
  EXPECT_THROW(y_pulse_propagator(2, 1.0, 1), std::domain_error);
}

TEST(PropagatorFidelity, BasicValues) {
  const Propagator u = y_pulse_propagator(0, 0.7, 1) * ising_evolution(1.3, 0.0);
  EXPECT_NEAR(propagator_fidelity(u, u), 1.0, 1e-12);
  EXPECT_NEAR(propagator_fidelity(u, std::polar(1.0, 0.9) * u), 1.0, 1e-12);
  EXPECT_NEAR(propagator_fidelity(Propagator::Identity(), ideal_ising_gate()), std::cos(kPi / 4.0), 1e-12);
  EXPECT_TRUE(is_unitary(u, 1e-12));
}

TEST(CompileIsing, SimpleIsOneTwoUnitDelay) {
  const auto s = compile_ising(build_simple(kQuarter));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_NEAR(std::get<FreeEvolution>(s.items[0]).t_units, 2.0, 1e-12);
  EXPECT_NEAR(s.total_duration(), 2.0, 1e-12);
}

TEST(CompileIsing, PB1ScheduleShape) {
  const auto seq = build_pb1(kQuarter);
  const auto s = compile_ising(seq);
  EXPECT_NEAR(s.total_duration(), 34.0, 1e-12);
  const double delays[] = {1.0, 8.0, 16.0, 8.0, 1.0};
  int k = 0;
  for (const auto& item : s.items) {
    if (const auto* d = std::get_if<FreeEvolution>(&item)) {
      EXPECT_NEAR(d->t_units, delays[k++], 1e-12);
    }
  }
  EXPECT_EQ(k, 5);
  const auto ps = pulses(s);
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_NEAR(ps.front().angle, kPhiPB1, 1e-12);
  EXPECT_NEAR(ps.back().angle, kPhiPB1, 1e-12);
  EXPECT_NEAR(ps[1].angle, 2.0 * kPhiPB1, 1e-12);
  EXPECT_NEAR(ps[2].angle, 2.0 * kPhiPB1, 1e-12);
  for (const auto& p : ps) EXPECT_EQ(p.spin, kDefaultPhaseSpin);
  EXPECT_TRUE(nonconforming_pulses(s, seq.phi1).empty());
}

TEST(CompileIsing, CancelOnlyKeepsEveryBoxAtPhi) {
  const auto s = compile_ising(build_pb1(kQuarter), 1, PulseMerge::kCancelOnly);
  EXPECT_NEAR(s.total_duration(), 34.0, 1e-12);
  const auto ps = pulses(s);
  EXPECT_EQ(ps.size(), 6u);
  for (const auto& p : ps) EXPECT_NEAR(p.angle, kPhiPB1, 1e-12);
  for (double g : {-1.0, -0.95, 0.0, 0.05}) {
    EXPECT_NEAR(propagator_fidelity(schedule_propagator(s, g),
                                    schedule_propagator(compile_ising(build_pb1(kQuarter)), g)),
                1.0, 1e-12);
  }
}

TEST(CompileIsing, PB1AtDesignPoints) {
  const auto s = compile_ising(build_pb1(kQuarter));
  EXPECT_NEAR(propagator_fidelity(schedule_propagator(s, 0.0), ideal_ising_gate()), 1.0, 1e-10);
  EXPECT_NEAR(propagator_fidelity(schedule_propagator(s, -1.0), Propagator::Identity()), 1.0, 1e-12);
}

TEST(CompileIsing, RejectsBadInput) {
  PulseSequence custom;
  custom.elements = {{0.0, 0.3}};
  EXPECT_THROW(compile_ising(custom), std::domain_error);
  EXPECT_THROW(compile_ising(build_simple(kQuarter), 2), std::domain_error);
}

TEST(CompileIsing, CancellationIsIdempotentAndLeavesNoInversePairs) {
  for (Family f : kFamilies) {
    for (PulseMerge m : {PulseMerge::kCombine, PulseMerge::kCancelOnly}) {
      const auto s = compile_ising(build(f, kQuarter), 1, m);
      const auto again = cancel_pulses(s.items, m);
      ASSERT_EQ(again.size(), s.items.size());
      for (std::size_t i = 0; i < again.size(); ++i) {
        ASSERT_EQ(again[i].index(), s.items[i].index());
        if (const auto* p = std::get_if<YPulse>(&again[i])) {
          const auto& q = std::get<YPulse>(s.items[i]);
          EXPECT_EQ(p->angle, q.angle);
          EXPECT_EQ(p->axis_sign, q.axis_sign);
        }
      }
      for (std::size_t i = 1; i < s.items.size(); ++i) {
        const auto* a = std::get_if<YPulse>(&s.items[i - 1]);
        const auto* b = std::get_if<YPulse>(&s.items[i]);
        if (a && b && a->spin == b->spin) {
          EXPECT_GT(std::abs(a->signed_angle() + b->signed_angle()), 1e-9);
        }
        EXPECT_FALSE(std::holds_alternative<FreeEvolution>(s.items[i - 1]) &&
                     std::holds_alternative<FreeEvolution>(s.items[i]));
      }
      for (const auto& item : s.items) {
        if (const auto* p = std::get_if<YPulse>(&item)) {
          EXPECT_GT(p->angle, 0.0);
          EXPECT_LT(p->angle, kTwoPi);
        }
      }
    }
  }
}

TEST(CancelPulses, MergesAndDrops) {
  const std::vector<ScheduleItem> raw{YPulse{1, 0.4, 1}, YPulse{1, 0.4, -1}, FreeEvolution{1.0},
                                      FreeEvolution{2.0}, YPulse{0, 0.3, 1},  YPulse{1, 0.3, 1},
                                      YPulse{1, 0.2, 1}};
  const auto out = cancel_pulses(raw);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(std::get<FreeEvolution>(out[0]).t_units, 3.0);
  EXPECT_EQ(std::get<YPulse>(out[1]).spin, 0);
  EXPECT_NEAR(std::get<YPulse>(out[2]).angle, 0.5, 1e-15);
}

TEST(ScheduleProgagator, TrivialSchedules) {
  EXPECT_LE(max_abs(schedule_propagator(IsingSchedule{}, 0.3) - Propagator::Identity()), 0.0);
  IsingSchedule one;
  one.items = {FreeEvolution{2.0}};
  for (double g : {-1.0, -0.2, 0.0, 0.4}) {
    EXPECT_LE(max_abs(schedule_propagator(one, g) - ising_evolution(2.0, g)), 1e-15);
  }
}

// Keystone property: two-qubit propagator fidelity equals single-qubit
// quaternion fidelity, for both references and for either phase spin.
TEST(FidelityEquivalence, AllFamiliesBothSpinsBothBranches) {
  for (Family f : kFamilies) {
    for (PhaseBranch b : {PhaseBranch::kPlus, PhaseBranch::kMinus}) {
      const auto seq = build(f, kQuarter, b);
      const Quaternion ideal_q = quat_from_pulse(kQuarter, 0.0);
      const Propagator ideal_u = ideal_ising_gate();
      for (int spin : {0, 1}) {
        const auto s = compile_ising(seq, spin);
        double worst = 0.0;
        for (int i = 0; i <= 500; ++i) {
          const double g = -1.2 + 1.5 * i / 500.0;
          const Quaternion q = net_quaternion(seq, g);
          const Propagator u = schedule_propagator(s, g);
          ASSERT_TRUE(is_unitary(u, 1e-12));
          worst = std::max(worst, std::abs(propagator_fidelity(u, ideal_u) - quaternion_fidelity(q, ideal_q)));
          worst = std::max(worst, std::abs(propagator_fidelity(u, Propagator::Identity()) -
                                           quaternion_fidelity(q, kNullQuaternion)));
        }
        EXPECT_LT(worst, 1e-9) << family_name(f) << " spin " << spin;
      }
    }
  }
}

TEST(FidelityEquivalence, OtherTargetAngles) {
  for (double theta : {kPi / 6.0, kPi, 1.9 * kPi}) {
    for (Family f : kFamilies) {
      const auto seq = build(f, theta);
      const auto s = compile_ising(seq);
      const Propagator ideal_u = ideal_ising_gate(theta);
      for (double g = -1.2; g <= 0.3; g += 0.05) {
        EXPECT_NEAR(propagator_fidelity(schedule_propagator(s, g), ideal_u),
                    quaternion_fidelity(net_quaternion(seq, g), quat_from_pulse(theta, 0.0)), 1e-9);
      }
    }
  }
}

TEST(FidelityEquivalence, TwoQubitThresholdsMatchSingleQubit) {
  for (Family f : kFamilies) {
    const auto seq = build(f, kQuarter);
    const auto two = ising_threshold_report(compile_ising(seq));
    EXPECT_NEAR(two.epsilon.value, threshold_epsilon(seq, kQuarter).value, 1e-6) << family_name(f);
    EXPECT_NEAR(two.delta.value, threshold_delta(seq).value, 1e-6) << family_name(f);
  }
}

}  // namespace
}  // namespace cpulse
