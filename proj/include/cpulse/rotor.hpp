#pragma once

// Unit quaternions for SU(2) rotations, plus a 2x2 unitary oracle that is
// kept deliberately separate from the quaternion arithmetic.
//
// Composition convention: a * b is "apply b, then a". Under the map
// {w,(x,y,z)} -> w*I - i(x*sx + y*sy + z*sz) this is exactly the matrix
// product U(a) * U(b).

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace cpulse {

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

/// The identity rotation {1,(0,0,0)}.
inline constexpr Quaternion kNullQuaternion{1.0, 0.0, 0.0, 0.0};

inline constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Rotation by `angle` about the in-plane axis (cos phase, sin phase, 0).
inline Quaternion quat_from_pulse(double angle, double phase) {
  if (!std::isfinite(angle) || !std::isfinite(phase)) {
    throw std::domain_error("quat_from_pulse: non-finite angle or phase");
  }
  const double s = std::sin(angle / 2.0);
  return {std::cos(angle / 2.0), s * std::cos(phase), s * std::sin(phase), 0.0};
}

/// Hamilton product; see the composition convention at the top of this file.
inline constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

inline constexpr Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) { return a * b; }

/// F = |a.b|. Blind to the global sign of either argument.
inline double quaternion_fidelity(const Quaternion& a, const Quaternion& b) {
  return std::abs(dot(a, b));
}

/// 1 - F computed as min(|a-b|^2, |a+b|^2) / 2, which keeps full relative
/// precision when F is within rounding of 1.
inline double quaternion_infidelity(const Quaternion& a, const Quaternion& b) {
  auto sq = [](const Quaternion& p, double s, const Quaternion& q) {
    const double dw = p.w - s * q.w, dx = p.x - s * q.x, dy = p.y - s * q.y, dz = p.z - s * q.z;
    return dw * dw + dx * dx + dy * dy + dz * dz;
  };
  return std::min(sq(a, 1.0, b), sq(a, -1.0, b)) / 2.0;
}

/// True when a == b or a == -b componentwise within `tol`.
inline bool equal_up_to_sign(const Quaternion& a, const Quaternion& b, double tol) {
  auto close = [tol](const Quaternion& p, const Quaternion& q) {
    return std::abs(p.w - q.w) <= tol && std::abs(p.x - q.x) <= tol &&
           std::abs(p.y - q.y) <= tol && std::abs(p.z - q.z) <= tol;
  };
  return close(a, b) || close(a, -b);
}

// ---------------------------------------------------------------------------
// 2x2 unitary oracle
// ---------------------------------------------------------------------------

using Unitary2 = Eigen::Matrix2cd;

namespace pauli {
inline Unitary2 x() { Unitary2 m; m << 0, 1, 1, 0; return m; }
inline Unitary2 y() {
  using namespace std::complex_literals;
  Unitary2 m; m << 0, -1i, 1i, 0; return m;
}
inline Unitary2 z() { Unitary2 m; m << 1, 0, 0, -1; return m; }
}  // namespace pauli

/// exp(-i angle (cos phase sx + sin phase sy) / 2), built from the
/// eigen-decomposition of the Hermitian generator rather than from the
/// half-angle formulas the quaternion path uses.
inline Unitary2 oracle_pulse(double angle, double phase) {
  const Unitary2 generator = std::cos(phase) * pauli::x() + std::sin(phase) * pauli::y();
  Eigen::SelfAdjointEigenSolver<Unitary2> eig(generator);
  Eigen::Vector2cd phases;
  for (int k = 0; k < 2; ++k) {
    phases(k) = std::exp(std::complex<double>(0.0, -angle * eig.eigenvalues()(k) / 2.0));
  }
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// SU(2) image of a quaternion: w I - i (x sx + y sy + z sz).
inline Unitary2 to_unitary(const Quaternion& q) {
  using namespace std::complex_literals;
  return q.w * Unitary2::Identity() - 1i * (q.x * pauli::x() + q.y * pauli::y() + q.z * pauli::z());
}

/// |Tr(U^dagger V)| / 2
inline double unitary_fidelity(const Unitary2& u, const Unitary2& v) {
  return std::abs((u.adjoint() * v).trace()) / 2.0;
}

inline bool is_unitary(const Unitary2& u, double tol) {
  return ((u.adjoint() * u) - Unitary2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace cpulse
