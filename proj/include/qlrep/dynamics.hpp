#pragma once

// Evolution of states in the two-dimensional complex state space (hbar = 1).

#include <functional>
#include <span>
#include <vector>

#include "qlrep/complex_repr.hpp"

namespace qlrep {

class Hamiltonian {
 public:
  /// Throws NonHermitianInput if m deviates from its adjoint by more than tol.
  explicit Hamiltonian(const Matrix2c& m, double tol = 1e-12);

  const Matrix2c& matrix() const { return matrix_; }

 private:
  Matrix2c matrix_;
};

/// H = b^2 / 2 + V(a), with V a real polynomial (coefficients in ascending
/// order) applied to the a values.
Hamiltonian build_hamiltonian(const ObservableOperator& b_op, std::span<const double> potential_coeffs,
                              const OutcomeSpace& space);

/// Evaluates the potential polynomial (ascending coefficients) at a.
double evaluate_polynomial(std::span<const double> coeffs, double a);

/// exp(-i H t) psi0 through the spectral decomposition of H.
QLState evolve_linear(const Hamiltonian& H, const QLState& psi0, double t);

/// The 2x2 unitary exp(-i H t).
Matrix2c propagator(const Hamiltonian& H, double t);

struct Eigenpair {
  double energy = 0.0;
  QLState state;
};

struct Spectrum {
  std::array<Eigenpair, 2> pairs;  // ascending energy
  bool degenerate = false;         // |mu1 - mu2| < 1e-12; any orthonormal pair is valid
};

Spectrum stationary_states(const Hamiltonian& H);

/// k1 psi1 + k2 psi2; throws NotOrthonormal unless psi1 and psi2 are
/// orthonormal within 1e-10, BadCoefficients unless |k1|^2 + |k2|^2 = 1
/// within 1e-12.
QLState superpose(const QLState& psi1, const QLState& psi2, Complex k1, Complex k2);

struct Trajectory {
  std::vector<double> times;
  std::vector<QLState> states;
};

/// One step of a norm-preserving dynamics: psi(t + dt) from psi(t).
using StepMap = std::function<Vector2c(const Vector2c& psi, double dt)>;

/// Linear step exp(-i H dt).
StepMap linear_step_map(const Hamiltonian& H);

/// Reference nonlinear map psi(x) -> exp(-i g |psi(x)|^2 dt) psi(x).
StepMap phase_rotation_map(double coupling);

/// Iterates the step map n_steps times from psi0, recording every state
/// (n_steps + 1 samples including t = 0). Throws NormViolation as soon as a
/// step moves the norm away from one by more than norm_tol.
Trajectory evolve_nonlinear(const StepMap& step_map, const QLState& psi0, double dt, std::size_t n_steps,
                            double norm_tol = 1e-8);

/// Samples the exact linear evolution at n_steps + 1 equally spaced times
/// on [0, t_final].
Trajectory sample_linear(const Hamiltonian& H, const QLState& psi0, double t_final, std::size_t n_steps);

/// Largest | ||psi|| - 1 | over the trajectory.
double max_norm_drift(const Trajectory& traj);

}  // namespace qlrep
