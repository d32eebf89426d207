#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qlrep/dynamics.hpp"
#include "qlrep/error.hpp"
#include "test_support.hpp"

namespace qlrep {
namespace {

using std::numbers::pi;
using testing::Generator;

const Matrix2c kSigmaX{{0.0, 1.0}, {1.0, 0.0}};

Pair born(const QLState& s) { return {born_probability(s, kFirst), born_probability(s, kSecond)}; }

TEST(Hamiltonian, RejectsNonHermitian) {
  try {
    Hamiltonian h(Matrix2c{{0.0, 1.0}, {0.0, 0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHermitianInput);
  }
}

TEST(BuildHamiltonian, Examples) {
  const ObservableOperator b{kSigmaX};
  const OutcomeSpace space;
  EXPECT_LE((build_hamiltonian(b, {}, space).matrix() - 0.5 * Matrix2c::Identity()).norm(), 1e-15);
  const std::vector<double> linear{0.0, 1.0};
  const Matrix2c expected = 0.5 * Matrix2c::Identity() + Matrix2c{{1.0, 0.0}, {0.0, -1.0}};
  EXPECT_LE((build_hamiltonian(b, linear, space).matrix() - expected).norm(), 1e-15);
  const ObservableOperator diag{Matrix2c{{2.0, 0.0}, {0.0, -1.0}}};
  const Matrix2c h = build_hamiltonian(diag, {}, space).matrix();
  EXPECT_EQ(h(0, 1), Complex(0.0));
  EXPECT_EQ(h(1, 0), Complex(0.0));
}

TEST(EvaluatePolynomial, Horner) {
  const std::vector<double> c{1.0, -2.0, 3.0};
  EXPECT_EQ(evaluate_polynomial(c, 2.0), 1.0 - 4.0 + 12.0);
  EXPECT_EQ(evaluate_polynomial({}, 5.0), 0.0);
}

TEST(EvolveLinear, ScalarHamiltonianIsGlobalPhase) {
  Generator g(83);
  const Hamiltonian h(0.5 * Matrix2c::Identity());
  const QLState psi = testing::random_state(g);
  for (double t : {0.1, 1.0, 7.5}) {
    const QLState out = evolve_linear(h, psi, t);
    EXPECT_LE((out.amplitudes - std::exp(Complex(0, -t / 2)) * psi.amplitudes).norm(), 1e-14);
  }
}

TEST(EvolveLinear, EigenstateIsStationary) {
  const Hamiltonian h(0.5 * Matrix2c::Identity() + Matrix2c{{1.0, 0.0}, {0.0, -1.0}});
  for (double t : {0.3, 2.0, 50.0}) {
    const Pair p = born(evolve_linear(h, make_state(1.0, 0.0), t));
    EXPECT_NEAR(p[0], 1.0, 1e-14);
    EXPECT_NEAR(p[1], 0.0, 1e-14);
  }
}

TEST(EvolveLinear, FullFlip) {
  const Hamiltonian h(kSigmaX);
  const Pair p = born(evolve_linear(h, make_state(1.0, 0.0), pi / 2));
  EXPECT_NEAR(p[0], 0.0, 1e-14);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
}

TEST(EvolveLinear, MatchesSeriesOracleAndGroupLaw) {
  Generator g(89);
  for (int i = 0; i < 200; ++i) {
    const Hamiltonian h(testing::random_hermitian(g, 2.0));
    const QLState psi = testing::random_state(g);
    const double s = g.uniform(0, 5);
    const double t = g.uniform(0, 5);
    const auto oracle = testing::oracle_propagator(h.matrix(), t);
    const Matrix2c u = propagator(h, t);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        EXPECT_NEAR(u(r, c).real(), static_cast<double>(oracle[r][c].real()), 1e-12);
        EXPECT_NEAR(u(r, c).imag(), static_cast<double>(oracle[r][c].imag()), 1e-12);
      }
    const QLState two_steps = evolve_linear(h, evolve_linear(h, psi, s), t);
    EXPECT_LE((two_steps.amplitudes - evolve_linear(h, psi, s + t).amplitudes).norm(), 1e-9);
    EXPECT_NEAR(evolve_linear(h, psi, t).norm(), 1.0, 1e-10);
  }
}

TEST(EvolveLinear, FiniteDifferenceConvergesAtFirstOrder) {
  Generator g(97);
  const Hamiltonian h(testing::random_hermitian(g));
  const QLState psi = testing::random_state(g);
  const double t = 0.7;
  const Vector2c generator_term = Complex(0, 1) * (h.matrix() * evolve_linear(h, psi, t).amplitudes);
  std::vector<double> residuals;
  for (double step : {1e-3, 1e-4, 1e-5}) {
    const Vector2c fd = (evolve_linear(h, psi, t + step).amplitudes - evolve_linear(h, psi, t).amplitudes) / step;
    residuals.push_back((fd + generator_term).norm());
  }
  // Forward differences shrink by ~10x per decade of h.
  EXPECT_NEAR(residuals[0] / residuals[1], 10.0, 2.0);
  EXPECT_NEAR(residuals[1] / residuals[2], 10.0, 3.0);
}

TEST(StationaryStates, Examples) {
  const auto s1 = stationary_states(Hamiltonian(0.5 * Matrix2c::Identity() + Matrix2c{{1.0, 0.0}, {0.0, -1.0}}));
  EXPECT_NEAR(s1.pairs[0].energy, -0.5, 1e-14);
  EXPECT_NEAR(s1.pairs[1].energy, 1.5, 1e-14);
  EXPECT_NEAR(std::abs(s1.pairs[0].state[kSecond]), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(s1.pairs[1].state[kFirst]), 1.0, 1e-14);
  EXPECT_FALSE(s1.degenerate);

  const auto s2 = stationary_states(Hamiltonian(kSigmaX));
  EXPECT_NEAR(s2.pairs[0].energy, -1.0, 1e-14);
  EXPECT_NEAR(s2.pairs[1].energy, 1.0, 1e-14);
  const double h = 1.0 / std::sqrt(2.0);
  // Compare up to global phase.
  EXPECT_NEAR(std::abs(inner(s2.pairs[0].state.amplitudes, Vector2c(h, -h))), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(inner(s2.pairs[1].state.amplitudes, Vector2c(h, h))), 1.0, 1e-14);

  const auto s3 = stationary_states(Hamiltonian(0.5 * Matrix2c::Identity()));
  EXPECT_TRUE(s3.degenerate);
  EXPECT_NEAR(std::abs(inner(s3.pairs[0].state.amplitudes, s3.pairs[1].state.amplitudes)), 0.0, 1e-14);
}

TEST(StationaryStates, ResidualsAndSpectralReconstruction) {
  Generator g(101);
  for (int i = 0; i < 200; ++i) {
    const Hamiltonian h(testing::random_hermitian(g, 3.0));
    const auto spec = stationary_states(h);
    EXPECT_LE(spec.pairs[0].energy, spec.pairs[1].energy);
    Matrix2c rebuilt = Matrix2c::Zero();
    for (const auto& p : spec.pairs) {
      EXPECT_LE((h.matrix() * p.state.amplitudes - p.energy * p.state.amplitudes).norm(), 1e-10);
      rebuilt += p.energy * (p.state.amplitudes * p.state.amplitudes.adjoint());
    }
    EXPECT_LE((rebuilt - h.matrix()).norm(), 1e-10);
    for (double t : {1.0, 10.0}) {
      const Pair before = born(spec.pairs[0].state);
      const Pair after = born(evolve_linear(h, spec.pairs[0].state, t));
      EXPECT_NEAR(after[0], before[0], 1e-10);
    }
  }
}

TEST(Superpose, Examples) {
  const QLState e1 = make_state(1.0, 0.0);
  const QLState e2 = make_state(0.0, 1.0);
  EXPECT_LE((superpose(e1, e2, 1.0, 0.0).amplitudes - e1.amplitudes).norm(), 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  const Pair half = born(superpose(e1, e2, h, h));
  EXPECT_NEAR(half[0], 0.5, 1e-15);
  const Pair p = born(superpose(e1, e2, std::sqrt(0.75), std::sqrt(0.25)));
  EXPECT_NEAR(p[0], 0.75, 1e-15);
  EXPECT_NEAR(p[1], 0.25, 1e-15);
}

TEST(Superpose, Errors) {
  const QLState e1 = make_state(1.0, 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  try {
    superpose(e1, make_state(h, h), h, h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotOrthonormal);
  }
  try {
    superpose(e1, make_state(0.0, 1.0), 0.5, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadCoefficients);
  }
}

TEST(EvolveNonlinear, LinearMapMatchesExactEvolution) {
  Generator g(103);
  const Hamiltonian h(testing::random_hermitian(g));
  const QLState psi = testing::random_state(g);
  const double dt = 0.05;
  const auto traj = evolve_nonlinear(linear_step_map(h), psi, dt, 200);
  ASSERT_EQ(traj.states.size(), 201u);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const QLState exact = evolve_linear(h, psi, traj.times[k]);
    EXPECT_LE((traj.states[k].amplitudes - exact.amplitudes).norm(), 1e-9);
  }
}

TEST(EvolveNonlinear, PhaseRotationPreservesBornProbabilities) {
  Generator g(107);
  const QLState psi = testing::random_state(g);
  const auto traj = evolve_nonlinear(phase_rotation_map(2.5), psi, 0.01, 1000);
  EXPECT_LE(max_norm_drift(traj), 1e-12);
  for (const auto& s : traj.states) {
    EXPECT_NEAR(born_probability(s, kFirst), born_probability(psi, kFirst), 1e-12);
  }
  // The map is nonlinear: relative phases actually move.
  EXPECT_GT(std::abs(std::arg(traj.states.back()[kFirst] / traj.states.back()[kSecond]) -
                     std::arg(psi[kFirst] / psi[kSecond])),
            1e-3);
}

TEST(EvolveNonlinear, NormViolation) {
  const StepMap grow = [](const Vector2c& psi, double) -> Vector2c { return 1.01 * psi; };
  try {
    evolve_nonlinear(grow, make_state(1.0, 0.0), 0.1, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NormViolation);
    EXPECT_NE(std::string(e.what()).find("step 1 "), std::string::npos);
  }
}

TEST(SampleLinear, EnergyAndNormConserved) {
  Generator g(109);
  const Hamiltonian h(testing::random_hermitian(g));
  const QLState psi = testing::random_state(g);
  const auto traj = sample_linear(h, psi, 100.0, 1000);
  const ObservableOperator energy{h.matrix()};
  const double e0 = expectation(energy, psi);
  for (const auto& s : traj.states) EXPECT_NEAR(expectation(energy, s), e0, 1e-9);
  EXPECT_LE(max_norm_drift(traj), 1e-10);
}

}  // namespace
}  // namespace qlrep
