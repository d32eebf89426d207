#include "qlrep/complex_repr.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep {

namespace {

using std::numbers::pi;

Eigen::Index idx(Outcome x) { return static_cast<Eigen::Index>(x); }

void require_trigonometric(const InterferenceProfile& profile) {
  if (profile.classification != Classification::Trigonometric) {
    throw Error(ErrorKind::NotTrigonometric,
                fmt::format("context is {}; a complex amplitude needs |lambda| <= 1 for both outcomes",
                            to_string(profile.classification)));
  }
}

void require_doubly_stochastic(const ContextualData& data, const Tolerances& tol) {
  if (!is_doubly_stochastic(data.P(), tol.sum_tolerance(data.provenance))) {
    throw Error(ErrorKind::NotDoublyStochastic,
                fmt::format("row sums of P are {:.12g} and {:.12g}", data.P().row_sum(kFirst),
                            data.P().row_sum(kSecond)));
  }
}

Complex unit(double phase) { return std::polar(1.0, phase); }

}  // namespace

QLState make_state(Complex psi1, Complex psi2) {
  QLState s;
  s.amplitudes << psi1, psi2;
  return s;
}

QLState build_amplitude(const ContextualData& data, const InterferenceProfile& profile, PhaseBranch branch,
                        const Tolerances& tol) {
  require_trigonometric(profile);
  PhaseConvention conv;
  conv.branch = branch;
  conv.xi_y2 = profile.phases;
  if (branch == PhaseBranch::Orthogonal) {
    require_doubly_stochastic(data, tol);
    conv.xi_y2[kSecond] = profile.phases[kFirst] + pi;
  }

  QLState state;
  state.convention = conv;
  for (auto x : kOutcomes) {
    const Pair w = path_weights(data.pb(), data.P(), x);
    state.amplitudes(idx(x)) = std::sqrt(w[0]) * unit(conv.xi_y1[x]) + std::sqrt(w[1]) * unit(conv.xi_y2[x]);
  }
  return state;
}

double born_probability(const QLState& state, Outcome x) { return std::norm(state[x]); }

Complex inner(const Vector2c& phi, const Vector2c& psi) {
  return phi(0) * std::conj(psi(0)) + phi(1) * std::conj(psi(1));
}

ObservableOperator operator_a(const OutcomeSpace& space) {
  ObservableOperator op;
  op.matrix(0, 0) = space.a_values[0];
  op.matrix(1, 1) = space.a_values[1];
  return op;
}

std::array<Vector2c, 2> b_eigenbasis(const ContextualData& data, const InterferenceProfile& profile,
                                     const Tolerances& tol) {
  require_trigonometric(profile);
  require_doubly_stochastic(data, tol);
  const auto& P = data.P();
  const double phase = profile.phases[kFirst];

  Vector2c u1;
  u1 << std::sqrt(P(kFirst, kFirst)), std::sqrt(P(kSecond, kFirst));
  Vector2c u2;
  u2 << unit(phase) * std::sqrt(P(kFirst, kSecond)), unit(phase + pi) * std::sqrt(P(kSecond, kSecond));

  // Empirical matrices are doubly stochastic only to within the sum
  // tolerance; project so the spectrum is exactly the b values.
  u1.normalize();
  u2 -= u1 * u1.dot(u2);
  u2.normalize();
  return {u1, u2};
}

ObservableOperator operator_b(const ContextualData& data, const InterferenceProfile& profile,
                              const Tolerances& tol) {
  const auto basis = b_eigenbasis(data, profile, tol);
  ObservableOperator op;
  for (auto y : kOutcomes) {
    op.matrix += data.space.b_values[y] * (basis[y] * basis[y].adjoint());
  }
  return op;
}

double expectation(const ObservableOperator& op, const QLState& state) {
  return inner(op.matrix * state.amplitudes, state.amplitudes).real();
}

double commutator_norm(const ObservableOperator& op1, const ObservableOperator& op2) {
  const Matrix2c c = op1.matrix * op2.matrix - op2.matrix * op1.matrix;
  return c.norm();
}

bool is_hermitian(const Matrix2c& m, double tol) { return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol; }

DensityState to_bloch(const QLState& state) {
  DensityState rho;
  rho.matrix = state.amplitudes * state.amplitudes.adjoint();
  const Complex coherence = state[kFirst] * std::conj(state[kSecond]);
  rho.bloch << 2.0 * coherence.real(), 2.0 * coherence.imag(),
      std::norm(state[kFirst]) - std::norm(state[kSecond]);
  return rho;
}

DensityState from_bloch(const Vector3& r) {
  DensityState rho;
  rho.bloch = r;
  rho.matrix(0, 0) = 0.5 * (1.0 + r.z());
  rho.matrix(1, 1) = 0.5 * (1.0 - r.z());
  // rho_12 = (r_x + i r_y) / 2 matches r = 2 (Re, Im) of psi1 conj(psi2).
  rho.matrix(0, 1) = 0.5 * Complex(r.x(), r.y());
  rho.matrix(1, 0) = std::conj(rho.matrix(0, 1));
  return rho;
}

double purity(const DensityState& rho) { return (rho.matrix * rho.matrix).trace().real(); }

DensityState mix(std::span<const DensityState> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw Error(ErrorKind::BadWeights,
                fmt::format("{} states but {} weights", states.size(), weights.size()));
  }
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorKind::BadWeights, fmt::format("negative weight {:.12g}", w));
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::BadWeights, fmt::format("weights sum to {:.12g}", total));
  }
  DensityState out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.matrix += weights[i] * states[i].matrix;
    out.bloch += weights[i] * states[i].bloch;
  }
  return out;
}

bool representation_collision(const ContextualData& d1, const ContextualData& d2, const Tolerances& tol,
                              double amplitude_tol) {
  if (!(d1.space == d2.space)) {
    throw Error(ErrorKind::InvalidArgument, "contexts use different outcome spaces");
  }
  const QLState s1 = build_amplitude(d1, interference_profile(d1, tol), PhaseBranch::Principal, tol);
  const QLState s2 = build_amplitude(d2, interference_profile(d2, tol), PhaseBranch::Principal, tol);
  return (s1.amplitudes - s2.amplitudes).cwiseAbs().maxCoeff() <= amplitude_tol;
}

}  // namespace qlrep
