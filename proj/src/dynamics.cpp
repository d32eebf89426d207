#include "qlrep/dynamics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep {

namespace {

const Complex kI{0.0, 1.0};

QLState with_amplitudes(const QLState& like, const Vector2c& amplitudes) {
  QLState s = like;
  s.amplitudes = amplitudes;
  return s;
}

}  // namespace

Hamiltonian::Hamiltonian(const Matrix2c& m, double tol) : matrix_(m) {
  if (!is_hermitian(m, tol)) {
    throw Error(ErrorKind::NonHermitianInput,
                fmt::format("Hamiltonian deviates from its adjoint by {:.3g}",
                            (m - m.adjoint()).cwiseAbs().maxCoeff()));
  }
  // Drop the anti-Hermitian rounding residue so the exponential is exactly unitary.
  matrix_ = 0.5 * (m + m.adjoint());
}

double evaluate_polynomial(std::span<const double> coeffs, double a) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * a + *it;
  }
  return acc;
}

Hamiltonian build_hamiltonian(const ObservableOperator& b_op, std::span<const double> potential_coeffs,
                              const OutcomeSpace& space) {
  Matrix2c h = 0.5 * b_op.matrix * b_op.matrix;
  for (auto x : kOutcomes) {
    const auto i = static_cast<Eigen::Index>(x);
    h(i, i) += evaluate_polynomial(potential_coeffs, space.a_values[x]);
  }
  return Hamiltonian(h);
}

Matrix2c propagator(const Hamiltonian& H, double t) {
  if (t == 0.0) return Matrix2c::Identity();
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(H.matrix());
  const auto& vecs = solver.eigenvectors();
  const auto& vals = solver.eigenvalues();
  Matrix2c u = Matrix2c::Zero();
  for (Eigen::Index j = 0; j < 2; ++j) {
    u += std::exp(-kI * vals(j) * t) * (vecs.col(j) * vecs.col(j).adjoint());
  }
  return u;
}

QLState evolve_linear(const Hamiltonian& H, const QLState& psi0, double t) {
  return with_amplitudes(psi0, propagator(H, t) * psi0.amplitudes);
}

Spectrum stationary_states(const Hamiltonian& H) {
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(H.matrix());
  Spectrum spectrum;
  for (Eigen::Index j = 0; j < 2; ++j) {
    auto& pair = spectrum.pairs[static_cast<std::size_t>(j)];
    pair.energy = solver.eigenvalues()(j);
    pair.state.amplitudes = solver.eigenvectors().col(j);
  }
  spectrum.degenerate = std::abs(spectrum.pairs[1].energy - spectrum.pairs[0].energy) < 1e-12;
  return spectrum;
}

QLState superpose(const QLState& psi1, const QLState& psi2, Complex k1, Complex k2) {
  const double overlap = std::abs(inner(psi1.amplitudes, psi2.amplitudes));
  const double n1 = psi1.norm();
  const double n2 = psi2.norm();
  if (overlap > 1e-10 || std::abs(n1 - 1.0) > 1e-10 || std::abs(n2 - 1.0) > 1e-10) {
    throw Error(ErrorKind::NotOrthonormal,
                fmt::format("|(psi1, psi2)| = {:.3g}, norms {:.12g} and {:.12g}", overlap, n1, n2));
  }
  const double weight = std::norm(k1) + std::norm(k2);
  if (std::abs(weight - 1.0) > 1e-12) {
    throw Error(ErrorKind::BadCoefficients, fmt::format("|k1|^2 + |k2|^2 = {:.12g}", weight));
  }
  QLState out;
  out.amplitudes = k1 * psi1.amplitudes + k2 * psi2.amplitudes;
  return out;
}

StepMap linear_step_map(const Hamiltonian& H) {
  return [H](const Vector2c& psi, double dt) -> Vector2c { return propagator(H, dt) * psi; };
}

StepMap phase_rotation_map(double coupling) {
  return [coupling](const Vector2c& psi, double dt) -> Vector2c {
    Vector2c out;
    for (Eigen::Index i = 0; i < 2; ++i) {
      out(i) = std::exp(-kI * coupling * std::norm(psi(i)) * dt) * psi(i);
    }
    return out;
  };
}

Trajectory evolve_nonlinear(const StepMap& step_map, const QLState& psi0, double dt, std::size_t n_steps,
                            double norm_tol) {
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("time step must be positive, got {}", dt));
  }
  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(psi0);
  Vector2c psi = psi0.amplitudes;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    psi = step_map(psi, dt);
    const double drift = std::abs(psi.norm() - 1.0);
    if (!(drift <= norm_tol)) {
      throw Error(ErrorKind::NormViolation,
                  fmt::format("step {} changed the norm by {:.3g} (tolerance {:.3g})", k, drift, norm_tol));
    }
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(with_amplitudes(psi0, psi));
  }
  return traj;
}

Trajectory sample_linear(const Hamiltonian& H, const QLState& psi0, double t_final, std::size_t n_steps) {
  if (n_steps == 0) {
    throw Error(ErrorKind::InvalidArgument, "need at least one step");
  }
  Trajectory traj;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = t_final * static_cast<double>(k) / static_cast<double>(n_steps);
    traj.times.push_back(t);
    traj.states.push_back(evolve_linear(H, psi0, t));
  }
  return traj;
}

double max_norm_drift(const Trajectory& traj) {
  double drift = 0.0;
  for (const auto& s : traj.states) {
    drift = std::max(drift, std::abs(s.norm() - 1.0));
  }
  return drift;
}

}  // namespace qlrep
