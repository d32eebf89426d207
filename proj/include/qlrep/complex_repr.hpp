#pragma once

// Complex amplitude representation of trigonometric contexts, observable
// operators in the a-basis, and density-state (Bloch ball) geometry.
//
// Bloch axes: z is aligned with the a-basis, so e_{x1} sits at the north pole.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlrep/contextual.hpp"

namespace qlrep {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Matrix2c = Eigen::Matrix2cd;
using Vector3 = Eigen::Vector3d;

/// Which phase is used for the y2 path of outcome x2.
///
/// Principal keeps theta(x2) from arccos in [0, pi]. Orthogonal uses
/// theta(x1) + pi instead, which agrees in cosine for doubly stochastic P and
/// makes the b-eigenvectors orthogonal.
enum class PhaseBranch { Principal, Orthogonal };

/// xi(x|y1) = 0 and xi(x|y2) = theta(x) under the selected branch.
struct PhaseConvention {
  Pair xi_y1{0.0, 0.0};
  Pair xi_y2{0.0, 0.0};
  PhaseBranch branch = PhaseBranch::Principal;
};

struct QLState {
  Vector2c amplitudes = Vector2c::Zero();
  PhaseConvention convention;

  Complex operator[](Outcome x) const { return amplitudes(static_cast<Eigen::Index>(x)); }
  double norm() const { return amplitudes.norm(); }
};

/// A unit-norm state without a data-derived phase convention.
QLState make_state(Complex psi1, Complex psi2);

struct ObservableOperator {
  Matrix2c matrix = Matrix2c::Zero();
};

struct DensityState {
  Matrix2c matrix = Matrix2c::Zero();
  Vector3 bloch = Vector3::Zero();
};

/// psi(x) = sqrt(pb(y1)p(x|y1)) + exp(i xi(x|y2)) sqrt(pb(y2)p(x|y2)).
/// Throws NotTrigonometric for other classifications and NotDoublyStochastic
/// when the orthogonal branch is requested for a non doubly stochastic P.
QLState build_amplitude(const ContextualData& data, const InterferenceProfile& profile,
                        PhaseBranch branch = PhaseBranch::Principal, const Tolerances& tol = {});

/// |(psi, e_x)|^2.
double born_probability(const QLState& state, Outcome x);

/// Scalar product (phi, psi) = sum_x phi(x) conj(psi(x)).
Complex inner(const Vector2c& phi, const Vector2c& psi);

ObservableOperator operator_a(const OutcomeSpace& space);

/// Orthonormal eigenvectors of b in the a-basis:
/// u_{y1}(x) = sqrt(p(x|y1)), u_{y2}(x) = exp(i xi(x|y2)) sqrt(p(x|y2)) on
/// the orthogonal branch.
std::array<Vector2c, 2> b_eigenbasis(const ContextualData& data, const InterferenceProfile& profile,
                                     const Tolerances& tol = {});

/// Spectral construction sum_y b_value(y) |u_y><u_y|. Requires a doubly
/// stochastic transition matrix and a trigonometric profile.
ObservableOperator operator_b(const ContextualData& data, const InterferenceProfile& profile,
                              const Tolerances& tol = {});

/// (o psi, psi); real for Hermitian o.
double expectation(const ObservableOperator& op, const QLState& state);

/// Frobenius norm of the commutator.
double commutator_norm(const ObservableOperator& op1, const ObservableOperator& op2);

bool is_hermitian(const Matrix2c& m, double tol = 1e-12);

DensityState to_bloch(const QLState& state);

/// Density state for a Bloch vector, rho = (I + r.sigma) / 2.
DensityState from_bloch(const Vector3& r);

double purity(const DensityState& rho);

/// Convex combination; throws BadWeights unless weights are nonnegative,
/// match the states in number, and sum to one within 1e-12.
DensityState mix(std::span<const DensityState> states, std::span<const double> weights);

/// True iff both contexts map to the same amplitude within tol.
bool representation_collision(const ContextualData& d1, const ContextualData& d2,
                               const Tolerances& tol = {}, double amplitude_tol = 1e-10);

}  // namespace qlrep
