#pragma once

// Composite rotation builders (simple, BB1, NB1, PB1) and the systematic
// rotation-rate error model. Elements are listed in time order.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpulse/rotor.hpp"

namespace cpulse {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
inline double normalize_phase(double phase) {
  double r = std::remainder(phase, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

enum class Family { kSimple, kBB1, kNB1, kPB1, kCustom };

/// Branch of the +/- in front of the arccos phase formulas.
enum class PhaseBranch : int { kPlus = 1, kMinus = -1 };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::kSimple: return "simple";
    case Family::kBB1: return "bb1";
    case Family::kNB1: return "nb1";
    case Family::kPB1: return "pb1";
    case Family::kCustom: return "custom";
  }
  return "custom";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::kSimple, Family::kBB1, Family::kNB1, Family::kPB1, Family::kCustom}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown sequence family: " + std::string(name));
}

struct PulseElement {
  double nominal_angle = 0.0;  // radians
  double phase = 0.0;          // radians, stored as built (not wrapped)

  double display_phase() const { return normalize_phase(phase); }
};

struct PulseSequence {
  std::vector<PulseElement> elements;
  Family family = Family::kCustom;
  double target_angle = 0.0;
  PhaseBranch branch = PhaseBranch::kPlus;
  double phi1 = 0.0;  // first correction phase; 0 for simple and custom

  double total_nominal_angle() const {
    double sum = 0.0;
    for (const auto& e : elements) sum += e.nominal_angle;
    return sum;
  }
};

namespace detail {

inline void check_theta(double theta, const char* who) {
  if (!std::isfinite(theta) || theta <= 0.0 || theta > kTwoPi) {
    throw std::domain_error(std::string(who) + ": theta must lie in (0, 2pi]");
  }
}

inline double branch_arccos(double arg, PhaseBranch branch, const char* who) {
  if (!(arg >= -1.0 && arg <= 1.0)) {
    throw std::domain_error(std::string(who) + ": arccos argument outside [-1, 1]");
  }
  return static_cast<int>(branch) * std::acos(arg);
}

// (theta/2)_0 A_{p1} B_{p2} A_{p1} (theta/2)_0
inline PulseSequence wimperis(Family family, double theta, PhaseBranch branch, double phi1,
                              double middle_phase, double outer, double middle) {
  PulseSequence seq;
  seq.family = family;
  seq.target_angle = theta;
  seq.branch = branch;
  seq.phi1 = phi1;
  seq.elements = {{theta / 2.0, 0.0}, {outer, phi1}, {middle, middle_phase}, {outer, phi1}, {theta / 2.0, 0.0}};
  return seq;
}

}  // namespace detail

inline PulseSequence build_simple(double theta) {
  detail::check_theta(theta, "build_simple");
  PulseSequence seq;
  seq.family = Family::kSimple;
  seq.target_angle = theta;
  seq.elements = {{theta, 0.0}};
  return seq;
}

/// Broadband: phi2 = 3 phi1, phi1 = +/-arccos(-theta / 4pi).
inline PulseSequence build_bb1(double theta, PhaseBranch branch = PhaseBranch::kPlus) {
  detail::check_theta(theta, "build_bb1");
  const double phi1 = detail::branch_arccos(-theta / (4.0 * kPi), branch, "build_bb1");
  return detail::wimperis(Family::kBB1, theta, branch, phi1, 3.0 * phi1, kPi, kTwoPi);
}

/// Narrowband: same phi1 as BB1, phi2 = -phi1.
inline PulseSequence build_nb1(double theta, PhaseBranch branch = PhaseBranch::kPlus) {
  detail::check_theta(theta, "build_nb1");
  const double phi1 = detail::branch_arccos(-theta / (4.0 * kPi), branch, "build_nb1");
  return detail::wimperis(Family::kNB1, theta, branch, phi1, -phi1, kPi, kTwoPi);
}

/// Passband: 360/720/360 correction block, phi2 = -phi1, phi1 = +/-arccos(-theta / 8pi).
inline PulseSequence build_pb1(double theta, PhaseBranch branch = PhaseBranch::kPlus) {
  detail::check_theta(theta, "build_pb1");
  const double phi1 = detail::branch_arccos(-theta / (8.0 * kPi), branch, "build_pb1");
  return detail::wimperis(Family::kPB1, theta, branch, phi1, -phi1, kTwoPi, 2.0 * kTwoPi);
}

inline PulseSequence build(Family family, double theta, PhaseBranch branch = PhaseBranch::kPlus) {
  switch (family) {
    case Family::kSimple: return build_simple(theta);
    case Family::kBB1: return build_bb1(theta, branch);
    case Family::kNB1: return build_nb1(theta, branch);
    case Family::kPB1: return build_pb1(theta, branch);
    case Family::kCustom: break;
  }
  throw std::invalid_argument("build: custom sequences have no builder");
}

/// Scales every nominal angle by (1 + g). g = -1 switches the rotation off.
inline PulseSequence apply_error(PulseSequence seq, double g) {
  for (auto& e : seq.elements) e.nominal_angle *= (1.0 + g);
  return seq;
}

/// Product of the element quaternions, later pulses multiplied on the left.
inline Quaternion net_quaternion(const PulseSequence& seq, double g) {
  Quaternion q = kNullQuaternion;
  for (const auto& e : seq.elements) {
    q = quat_from_pulse(e.nominal_angle * (1.0 + g), e.phase) * q;
  }
  return q;
}

}  // namespace cpulse
