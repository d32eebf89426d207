#pragma once

// Contextual probability data for two dichotomous observables a and b and
// the scalar interference analysis built on it.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace qlrep {

using Pair = std::array<double, 2>;

/// Index of an outcome of a dichotomous observable (0 for x1/y1, 1 for x2/y2).
enum Outcome : std::size_t { kFirst = 0, kSecond = 1 };

inline constexpr std::array<Outcome, 2> kOutcomes{kFirst, kSecond};

struct OutcomeSpace {
  std::array<std::string, 2> a_labels{"x1", "x2"};
  std::array<std::string, 2> b_labels{"y1", "y2"};
  Pair a_values{1.0, -1.0};
  Pair b_values{1.0, -1.0};

  friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;
};

/// Conditional probabilities p(x|y), stored [x][y]; columns sum to one.
struct TransitionMatrix {
  std::array<Pair, 2> entries{};

  double operator()(Outcome x, Outcome y) const { return entries[x][y]; }
  double row_sum(Outcome x) const { return entries[x][0] + entries[x][1]; }
  double column_sum(Outcome y) const { return entries[0][y] + entries[1][y]; }

  static TransitionMatrix uniform() { return {{{{0.5, 0.5}, {0.5, 0.5}}}}; }

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;
};

struct ContextProbabilities {
  Pair pa{};
  Pair pb{};

  friend bool operator==(const ContextProbabilities&, const ContextProbabilities&) = default;
};

/// Where probabilities came from. Counts divided by totals are exact, user
/// supplied rounded probabilities are not, so the two get different sum tolerances.
enum class Provenance { Analytic, Empirical };

struct ContextualData {
  std::string context_id;
  OutcomeSpace space;
  ContextProbabilities marginals;
  TransitionMatrix transitions;
  Provenance provenance = Provenance::Analytic;

  const Pair& pa() const { return marginals.pa; }
  const Pair& pb() const { return marginals.pb; }
  const TransitionMatrix& P() const { return transitions; }
};

struct Tolerances {
  double analytic_sum = 1e-12;
  double empirical_sum = 1e-6;
  double classification = 1e-9;
  double degeneracy_floor = 1e-12;

  double sum_tolerance(Provenance p) const {
    return p == Provenance::Analytic ? analytic_sum : empirical_sum;
  }
};

struct Violation {
  std::string message;
  double magnitude = 0.0;
};

/// Empty iff every invariant of the data holds at the tolerance selected by
/// its provenance.
std::vector<Violation> validate_data(const ContextualData& data, const Tolerances& tol = {});

/// Classical formula of total probability: q(x) = sum_y pb(y) p(x|y).
Pair classical_ftp(const Pair& pb, const TransitionMatrix& P);

/// The two products pb(y1)p(x|y1) and pb(y2)p(x|y2) whose geometric mean
/// scales the interference term for outcome x.
Pair path_weights(const Pair& pb, const TransitionMatrix& P, Outcome x);

/// Interference coefficient: the deviation of pa(x) from the classical
/// prediction divided by 2 sqrt(pb(y1)p(x|y1) pb(y2)p(x|y2)).
/// Throws Error(DegenerateDenominator) when that denominator is at or below
/// the degeneracy floor.
double interference_coefficient(const ContextualData& data, Outcome x, const Tolerances& tol = {});

enum class Classification { Trigonometric, Hyperbolic, HyperTrigonometric };

enum class PhaseKind { Trigonometric, Hyperbolic };

/// lambda(x) = cos theta(x) for trigonometric outcomes; lambda(x) =
/// sign(x) cosh theta(x) with theta(x) >= 0 for hyperbolic ones.
struct InterferenceProfile {
  Pair lambda{};
  Pair phases{};
  std::array<int, 2> signs{1, 1};
  std::array<PhaseKind, 2> kinds{PhaseKind::Trigonometric, PhaseKind::Trigonometric};
  Classification classification = Classification::Trigonometric;
};

InterferenceProfile interference_profile(const ContextualData& data, const Tolerances& tol = {});

/// Builds a profile from given coefficients; used where lambda is known
/// without data (sweeps, tests).
InterferenceProfile profile_from_lambda(const Pair& lambda, double classification_tol = 1e-9);

/// Definition of mutual incompatibility: all four p(x|y) strictly above floor.
bool check_incompatibility(const TransitionMatrix& P, double floor = 0.0);

bool is_doubly_stochastic(const TransitionMatrix& P, double tol = 1e-12);

/// Formula of total probability with the interference term.
Pair reconstruct_marginal(const InterferenceProfile& profile, const Pair& pb, const TransitionMatrix& P);

const char* to_string(Classification c);
Classification classification_from_string(const std::string& s);
const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

}  // namespace qlrep
