#pragma once

// Two-qubit Ising-coupling realisation of composite rotations.
//
// Free evolution under pi J 2IzSz for d units of t = 1/4J rotates the target
// spin about +/-z (sign set by the other spin) by pi d / 4, so 2t is the
// naive 90-degree Ising gate. A composite-rotation phase phi is realised by
// sandwiching the evolution between y rotations on the target spin:
//
//   Y(-phi)  delay  Y(+phi)     (time order)
//
// which tilts the effective axis from z towards x by phi. The cyclic relabel
// x -> z, y -> x, z -> y takes the single-qubit pulse axis (cos phi, sin phi, 0)
// onto that tilted axis, so propagator and quaternion fidelities coincide.
//
// Spin 0 is the first (most significant) tensor factor.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cpulse/analysis.hpp"
#include "cpulse/sequences.hpp"

namespace cpulse {

using Propagator = Eigen::Matrix4cd;

/// One t-unit of free evolution corresponds to this much effective rotation.
inline constexpr double kRotationPerTUnit = kPi / 4.0;
inline constexpr int kDefaultPhaseSpin = 1;

struct FreeEvolution {
  double t_units = 0.0;
};

struct YPulse {
  int spin = kDefaultPhaseSpin;
  double angle = 0.0;  // radians, > 0
  int axis_sign = 1;   // +1 for +y, -1 for -y

  double signed_angle() const { return axis_sign * angle; }
};

using ScheduleItem = std::variant<FreeEvolution, YPulse>;

/// How adjacent y pulses on the same spin are combined after compilation.
enum class PulseMerge {
  kCombine,     // add angles; drop results that vanish
  kCancelOnly,  // drop exact inverse pairs only
};

struct IsingSchedule {
  std::vector<ScheduleItem> items;  // time order
  Family family = Family::kCustom;
  double theta = 0.0;
  int phase_spin = kDefaultPhaseSpin;

  double total_duration() const {
    double total = 0.0;
    for (const auto& item : items) {
      if (const auto* d = std::get_if<FreeEvolution>(&item)) total += d->t_units;
    }
    return total;
  }
};

inline void check_spin(int spin) {
  if (spin != 0 && spin != 1) throw std::domain_error("spin index must be 0 or 1");
}

/// exp(-i pi J (1+g) 2IzSz tau), tau = duration * t, t = 1/4J.
inline Propagator ising_evolution(double duration, double g) {
  if (!(duration > 0.0)) throw std::domain_error("ising_evolution: duration must be positive");
  const double half = kPi * duration * (1.0 + g) / 8.0;
  const std::complex<double> minus = std::polar(1.0, -half);
  const std::complex<double> plus = std::polar(1.0, half);
  Propagator u = Propagator::Zero();
  u(0, 0) = minus;
  u(1, 1) = plus;
  u(2, 2) = plus;
  u(3, 3) = minus;
  return u;
}

/// exp(-i axis_sign angle sy / 2) on `target`, identity on the other spin.
inline Propagator y_pulse_propagator(int target, double angle, int axis_sign) {
  check_spin(target);
  const double c = std::cos(angle / 2.0);
  const double s = axis_sign * std::sin(angle / 2.0);
  Eigen::Matrix2cd r;
  r << c, -s, s, c;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd& a = target == 0 ? r : id;
  const Eigen::Matrix2cd& b = target == 0 ? id : r;
  Propagator u;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return u;
}

/// |Tr(V^dagger U)| / 4
inline double propagator_fidelity(const Propagator& u, const Propagator& v) {
  return std::abs((v.adjoint() * u).trace()) / 4.0;
}

inline bool is_unitary(const Propagator& u, double tol) {
  return ((u.adjoint() * u) - Propagator::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// exp(-i theta 2IzSz) up to global phase; theta = pi/2 is the Ising gate
/// underlying controlled-phase and CNOT.
inline Propagator ideal_ising_gate(double theta = kPi / 2.0) {
  return ising_evolution(theta / kRotationPerTUnit, 0.0);
}

namespace detail {

constexpr double kZeroAngle = 1e-12;

// Y(a + 4pi) == Y(a); keep the signed angle in (-2pi, 2pi].
inline double reduce_y_angle(double a) {
  double r = std::remainder(a, 2.0 * kTwoPi);
  if (r <= -kTwoPi) r += 2.0 * kTwoPi;
  return r;
}

inline YPulse make_pulse(int spin, double signed_angle) {
  return {spin, std::abs(signed_angle), signed_angle < 0.0 ? -1 : 1};
}

}  // namespace detail

/// Merges adjacent delays and adjacent same-spin y pulses. A full 2pi pulse
/// is a global phase and is dropped along with zero-angle results.
inline std::vector<ScheduleItem> cancel_pulses(const std::vector<ScheduleItem>& items,
                                               PulseMerge merge = PulseMerge::kCombine) {
  std::vector<ScheduleItem> out;
  for (const auto& item : items) {
    if (const auto* d = std::get_if<FreeEvolution>(&item)) {
      if (!out.empty()) {
        if (auto* prev = std::get_if<FreeEvolution>(&out.back())) {
          prev->t_units += d->t_units;
          continue;
        }
      }
      out.push_back(item);
      continue;
    }
    const auto& p = std::get<YPulse>(item);
    double angle = detail::reduce_y_angle(p.signed_angle());
    if (!out.empty()) {
      if (auto* prev = std::get_if<YPulse>(&out.back()); prev && prev->spin == p.spin) {
        const double sum = detail::reduce_y_angle(prev->signed_angle() + angle);
        const bool cancels = std::abs(sum) < detail::kZeroAngle;
        if (cancels || merge == PulseMerge::kCombine) {
          out.pop_back();
          angle = sum;
        }
      }
    }
    if (std::abs(angle) < detail::kZeroAngle || std::abs(std::abs(angle) - kTwoPi) < detail::kZeroAngle) {
      continue;
    }
    out.push_back(detail::make_pulse(p.spin, angle));
  }
  return out;
}

inline IsingSchedule compile_ising(const PulseSequence& seq, int phase_spin = kDefaultPhaseSpin,
                                   PulseMerge merge = PulseMerge::kCombine) {
  check_spin(phase_spin);
  std::vector<ScheduleItem> raw;
  for (const auto& e : seq.elements) {
    if (!(e.nominal_angle > 0.0)) {
      throw std::domain_error("compile_ising: every element needs a positive rotation angle");
    }
    const double phase = normalize_phase(e.phase);
    if (!(std::abs(phase) < kTwoPi)) {
      throw std::domain_error("compile_ising: phase has no y-pulse representation");
    }
    const FreeEvolution delay{e.nominal_angle / kRotationPerTUnit};
    if (phase == 0.0) {
      raw.emplace_back(delay);
      continue;
    }
    raw.emplace_back(detail::make_pulse(phase_spin, -phase));
    raw.emplace_back(delay);
    raw.emplace_back(detail::make_pulse(phase_spin, phase));
  }
  return {cancel_pulses(raw, merge), seq.family, seq.target_angle, phase_spin};
}

/// Ordered product of item propagators; only free evolution carries g.
inline Propagator schedule_propagator(const IsingSchedule& sched, double g) {
  Propagator u = Propagator::Identity();
  for (const auto& item : sched.items) {
    if (const auto* d = std::get_if<FreeEvolution>(&item)) {
      u = ising_evolution(d->t_units, g) * u;
    } else {
      const auto& p = std::get<YPulse>(item);
      u = y_pulse_propagator(p.spin, p.angle, p.axis_sign) * u;
    }
  }
  return u;
}

/// Pulses whose flip angle is neither phi1 nor 2 phi1 (mod 2pi, either axis).
inline std::vector<YPulse> nonconforming_pulses(const IsingSchedule& sched, double phi1,
                                                double tol = 1e-9) {
  auto matches = [&](double angle, double ref) {
    for (double candidate : {ref, kTwoPi - ref}) {
      if (std::abs(std::remainder(angle - candidate, kTwoPi)) <= tol) return true;
    }
    return false;
  };
  std::vector<YPulse> odd;
  const double base = std::abs(phi1);
  for (const auto& item : sched.items) {
    if (const auto* p = std::get_if<YPulse>(&item)) {
      if (!matches(p->angle, base) && !matches(p->angle, 2.0 * base)) odd.push_back(*p);
    }
  }
  return odd;
}

/// Thresholds evaluated on the two-qubit channel.
inline ThresholdReport ising_threshold_report(const IsingSchedule& sched,
                                              double tol = kDefaultTolerance) {
  const Propagator ideal = ideal_ising_gate(sched.theta);
  const Propagator identity = Propagator::Identity();
  ThresholdReport r{sched.family, sched.theta, tol, {}, {}};
  r.epsilon = epsilon_from(
      [&](double g) { return propagator_fidelity(schedule_propagator(sched, g), ideal); }, tol);
  r.delta = delta_from(
      [&](double g) { return propagator_fidelity(schedule_propagator(sched, g), identity); }, tol);
  return r;
}

}  // namespace cpulse
