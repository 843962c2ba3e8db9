#pragma once

// Error-series checks, fidelity curves and tolerance thresholds.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpulse/rotor.hpp"
#include "cpulse/sequences.hpp"

namespace cpulse {

// ---------------------------------------------------------------------------
// Finite-difference expansion of the quaternion error
// ---------------------------------------------------------------------------

inline constexpr double kExpansionStep = 1e-3;
inline constexpr int kMaxExpansionOrder = 4;
/// Orders whose noise floor exceeds this are reported but marked infeasible.
inline constexpr double kFeasibleFloor = 1e-2;

/// Quaternion components, in (w, x, y, z) order.
using Components = std::array<double, 4>;

inline Components components(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }

struct OrderEstimate {
  int order = 0;
  Components derivative{};        // Richardson-refined estimate
  Components truncation_error{};  // |D(h/2) - D(h)| / 3
  double noise_floor = 0.0;
  bool feasible = true;

  bool below_floor(int component) const {
    return std::abs(derivative[component]) <= noise_floor;
  }
  bool vanishes() const {
    for (int c = 0; c < 4; ++c) {
      if (!below_floor(c)) return false;
    }
    return feasible;
  }
};

struct ExpansionReport {
  double point = 0.0;
  double step = kExpansionStep;
  double refined_step = kExpansionStep / 2.0;
  std::vector<OrderEstimate> orders;
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Central k-th difference: h^-k sum_j (-1)^j C(k,j) f(x + (k/2 - j) h). O(h^2).
template <class Fn>
Components central_difference(Fn&& f, double x, int order, double h) {
  Components acc{};
  for (int j = 0; j <= order; ++j) {
    const double weight = ((j % 2) ? -1.0 : 1.0) * binomial(order, j);
    const Components v = f(x + (0.5 * order - j) * h);
    for (int c = 0; c < 4; ++c) acc[c] += weight * v[c];
  }
  for (double& a : acc) a /= std::pow(h, order);
  return acc;
}

template <class Fn>
OrderEstimate richardson(Fn&& f, double x, int order, double h) {
  const Components coarse = central_difference(f, x, order, h);
  const Components fine = central_difference(f, x, order, h / 2.0);
  OrderEstimate est;
  est.order = order;
  for (int c = 0; c < 4; ++c) {
    est.derivative[c] = (4.0 * fine[c] - coarse[c]) / 3.0;
    est.truncation_error[c] = std::abs(fine[c] - coarse[c]) / 3.0;
  }
  return est;
}

// Rounding in the sampled quaternion, amplified by the difference stencil.
inline double roundoff_model(int order, double h) {
  constexpr double kSampleRounding = 16.0 * std::numeric_limits<double>::epsilon();
  return kSampleRounding * std::pow(2.0, order) / std::pow(h / 2.0, order);
}

}  // namespace detail

/// Noise floor per order (index 0 is order 1), calibrated by running the
/// estimator on the simple 90-degree pulse, whose derivatives are known in
/// closed form, at both expansion points.
inline std::array<double, kMaxExpansionOrder> calibrated_noise_floor(double h = kExpansionStep) {
  constexpr double kSafety = 10.0;
  const double theta = kPi / 2.0;
  const PulseSequence simple = build_simple(theta);
  std::array<double, kMaxExpansionOrder> floor{};
  for (int k = 1; k <= kMaxExpansionOrder; ++k) {
    double worst = 0.0;
    for (double point : {0.0, -1.0}) {
      auto f = [&](double g) { return components(net_quaternion(simple, g)); };
      const OrderEstimate est = detail::richardson(f, point, k, h);
      const double arg = theta * (1.0 + point) / 2.0 + k * kPi / 2.0;
      const double scale = std::pow(theta / 2.0, k);
      const Components exact{scale * std::cos(arg), scale * std::sin(arg), 0.0, 0.0};
      for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(est.derivative[c] - exact[c]));
    }
    floor[k - 1] = kSafety * std::max(worst, detail::roundoff_model(k, h));
  }
  return floor;
}

/// Derivatives of (net(g) - target) at g = point, orders 1..max_order.
/// The target is the ideal rotation at point 0 and the identity at point -1;
/// the net quaternion is sign-aligned with the target before differencing.
inline ExpansionReport error_expansion(const PulseSequence& seq, double ideal_angle, double point,
                                       int max_order) {
  if (point != 0.0 && point != -1.0) {
    throw std::domain_error("error_expansion: expansion point must be 0 or -1");
  }
  if (max_order < 1 || max_order > kMaxExpansionOrder) {
    throw std::domain_error("error_expansion: order must lie in [1, " +
                            std::to_string(kMaxExpansionOrder) + "]");
  }
  const Quaternion target = point == 0.0 ? quat_from_pulse(ideal_angle, 0.0) : kNullQuaternion;
  const double sign = dot(net_quaternion(seq, point), target) < 0.0 ? -1.0 : 1.0;
  auto error = [&](double g) {
    const Components n = components(net_quaternion(seq, g));
    const Components t = components(target);
    Components e{};
    for (int c = 0; c < 4; ++c) e[c] = sign * n[c] - t[c];
    return e;
  };

  const auto floor = calibrated_noise_floor();
  ExpansionReport report;
  report.point = point;
  for (int k = 1; k <= max_order; ++k) {
    OrderEstimate est = detail::richardson(error, point, k, report.step);
    est.noise_floor = floor[k - 1];
    est.feasible = est.noise_floor < kFeasibleFloor;
    report.orders.push_back(est);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fidelity curves
// ---------------------------------------------------------------------------

struct CurvePoint {
  double g = 0.0;
  double fidelity = 0.0;
};

/// Uniform grid of n points on [lo, hi], endpoints exact.
inline std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (!(lo < hi) || n < 2) throw std::domain_error("uniform_grid: need lo < hi and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1);
  grid.back() = hi;
  return grid;
}

/// F(g) against quat_from_pulse(ideal_angle, 0); ideal_angle = 0 compares
/// against the identity.
inline std::vector<CurvePoint> infidelity_curve(const PulseSequence& seq, double ideal_angle,
                                                double g_min, double g_max, int samples) {
  const Quaternion ideal = quat_from_pulse(ideal_angle, 0.0);
  std::vector<CurvePoint> curve;
  for (double g : uniform_grid(g_min, g_max, samples)) {
    curve.push_back({g, quaternion_fidelity(net_quaternion(seq, g), ideal)});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Tolerance thresholds
// ---------------------------------------------------------------------------

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr double kScanStep = 1e-4;
inline constexpr double kScanLimit = 1.0;

/// A threshold value; `bounded == false` means no crossing was found within
/// the scan limit and `value` holds the limit (reported as ">=1").
struct Threshold {
  double value = 0.0;
  bool bounded = true;
};

/// Distance from `start` (moving in `direction`) to the first point where
/// infidelity(x) exceeds tol. Grid scan at kScanStep brackets the crossing,
/// bisection narrows the bracket to ~1e-13. The returned value is the
/// inner bracket end, so infidelity there is still <= tol.
template <class InfidelityFn>
Threshold first_crossing(InfidelityFn&& infidelity, double start, double direction, double tol,
                         double limit = kScanLimit) {
  if (infidelity(start) > tol) return {0.0, true};
  const int steps = static_cast<int>(std::lround(limit / kScanStep));
  for (int k = 1; k <= steps; ++k) {
    const double offset = k * kScanStep;
    if (infidelity(start + direction * offset) <= tol) continue;
    double lo = (k - 1) * kScanStep;
    double hi = offset;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (infidelity(start + direction * mid) <= tol) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return {lo, true};
  }
  return {limit, false};
}

/// Largest eps with 1 - F(g) <= tol for all |g| <= eps; `fidelity` is F(g)
/// against the intended operation.
template <class FidelityFn>
Threshold epsilon_from(FidelityFn&& fidelity, double tol) {
  auto infid = [&](double g) { return 1.0 - fidelity(g); };
  const Threshold up = first_crossing(infid, 0.0, +1.0, tol);
  const Threshold down = first_crossing(infid, 0.0, -1.0, tol);
  if (!up.bounded) return down;
  if (!down.bounded) return up;
  return up.value <= down.value ? up : down;
}

/// Largest delta with 1 - F(lambda - 1) <= tol for all lambda in [0, delta];
/// `fidelity` is F(g) against the identity.
template <class FidelityFn>
Threshold delta_from(FidelityFn&& fidelity, double tol) {
  auto infid = [&](double lambda) { return 1.0 - fidelity(lambda - 1.0); };
  return first_crossing(infid, 0.0, +1.0, tol);
}

inline Threshold threshold_epsilon(const PulseSequence& seq, double target_angle,
                                   double tol = kDefaultTolerance) {
  const Quaternion ideal = quat_from_pulse(target_angle, 0.0);
  if (quaternion_fidelity(net_quaternion(seq, 0.0), ideal) < 1.0 - 1e-10) {
    throw std::domain_error("threshold_epsilon: sequence does not implement the target at g = 0");
  }
  return epsilon_from([&](double g) { return quaternion_fidelity(net_quaternion(seq, g), ideal); }, tol);
}

inline Threshold threshold_delta(const PulseSequence& seq, double tol = kDefaultTolerance) {
  return delta_from([&](double g) { return quaternion_fidelity(net_quaternion(seq, g), kNullQuaternion); },
                    tol);
}

struct ThresholdReport {
  Family family = Family::kCustom;
  double theta = 0.0;
  double tol = kDefaultTolerance;
  Threshold epsilon;
  Threshold delta;
};

inline ThresholdReport threshold_report(const PulseSequence& seq, double tol = kDefaultTolerance) {
  return {seq.family, seq.target_angle, tol, threshold_epsilon(seq, seq.target_angle, tol),
          threshold_delta(seq, tol)};
}

}  // namespace cpulse
