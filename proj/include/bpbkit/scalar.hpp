#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace bpbkit {

/// Complex scalar used throughout. Real-field mode is the same carrier with
/// all imaginary parts equal to zero; there is no separate real code path.
using Cx = std::complex<double>;

enum class FieldMode { Real, Complex };

/// Default slack for membership / attainment checks.
inline constexpr double kDefaultTol = 1e-9;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool is_finite(Cx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Principal argument mapped into [0, 2*pi), with arg(0) = 0 exactly.
inline double arg_of(Cx z) {
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  double a = std::atan2(z.imag(), z.real());
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;  // atan2 rounding can land exactly on 2*pi
  return a;
}

/// e^{i*arg(z)} computed as z/|z|, with unit_phase(0) = 1 by the arg(0) = 0
/// convention. For positive real z this is exactly 1.
inline Cx unit_phase(Cx z) {
  if (z.real() == 0.0 && z.imag() == 0.0) return Cx(1.0, 0.0);
  return z / std::abs(z);
}

inline bool is_one(Cx z) { return z.real() == 1.0 && z.imag() == 0.0; }

}  // namespace bpbkit
