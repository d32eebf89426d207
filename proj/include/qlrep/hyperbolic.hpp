#pragma once

// Split-complex numbers u + j v with j^2 = +1 and the hyperbolic amplitude
// representation of contexts whose interference coefficients exceed one.

#include <array>

#include "qlrep/contextual.hpp"

namespace qlrep {

struct HyperbolicNumber {
  double u = 0.0;
  double v = 0.0;

  /// u^2 - v^2; negative off the light cone, zero on it.
  constexpr double modulus2() const { return u * u - v * v; }

  constexpr HyperbolicNumber conj() const { return {u, -v}; }

  friend constexpr HyperbolicNumber operator+(HyperbolicNumber a, HyperbolicNumber b) {
    return {a.u + b.u, a.v + b.v};
  }
  friend constexpr HyperbolicNumber operator-(HyperbolicNumber a, HyperbolicNumber b) {
    return {a.u - b.u, a.v - b.v};
  }
  friend constexpr HyperbolicNumber operator*(double s, HyperbolicNumber a) { return {s * a.u, s * a.v}; }
  friend constexpr HyperbolicNumber operator*(HyperbolicNumber a, HyperbolicNumber b) {
    return {a.u * b.u + a.v * b.v, a.u * b.v + a.v * b.u};
  }
  friend constexpr bool operator==(HyperbolicNumber, HyperbolicNumber) = default;
};

inline constexpr HyperbolicNumber kJ{0.0, 1.0};

constexpr HyperbolicNumber hyp_mul(HyperbolicNumber a, HyperbolicNumber b) { return a * b; }

/// (cosh theta, sinh theta).
HyperbolicNumber hyp_exp(double theta);

struct HyperbolicAmplitude {
  std::array<HyperbolicNumber, 2> amplitudes{};
  Pair phases{};
  std::array<int, 2> signs{1, 1};
};

/// psi(x) = sqrt(pb(y1)p(x|y1)) + sign(x) exp(j theta(x)) sqrt(pb(y2)p(x|y2)).
/// Throws NotHyperbolic unless both outcomes are hyperbolic.
HyperbolicAmplitude build_hyperbolic_amplitude(const ContextualData& data, const InterferenceProfile& profile);

/// Squared hyperbolic modulus of component x.
double hyp_born(const HyperbolicAmplitude& amp, Outcome x);

}  // namespace qlrep
