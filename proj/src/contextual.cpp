#include "qlrep/contextual.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NotTrigonometric: return "NotTrigonometric";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NotDoublyStochastic: return "NotDoublyStochastic";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::BadCoefficients: return "BadCoefficients";
    case ErrorKind::NormViolation: return "NormViolation";
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::EmptyFiltration: return "EmptyFiltration";
    case ErrorKind::ZeroTotal: return "ZeroTotal";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

bool in_unit_interval(double p) { return p >= 0.0 && p <= 1.0; }

void check_distribution(const Pair& p, const char* name, double tol, std::vector<Violation>& out) {
  for (auto x : kOutcomes) {
    if (!in_unit_interval(p[x])) {
      double excess = p[x] < 0.0 ? -p[x] : p[x] - 1.0;
      out.push_back({fmt::format("{}[{}] = {:.12g} outside [0,1]", name, x + 1, p[x]), excess});
    }
  }
  double sum = p[0] + p[1];
  if (!(std::abs(sum - 1.0) <= tol)) {
    out.push_back({fmt::format("{} sums to {:.12g}", name, sum), std::abs(sum - 1.0)});
  }
}

}  // namespace

std::vector<Violation> validate_data(const ContextualData& data, const Tolerances& tol) {
  std::vector<Violation> out;
  const auto& space = data.space;
  if (space.a_labels[0] == space.a_labels[1]) {
    out.push_back({fmt::format("a labels not distinct ('{}')", space.a_labels[0]), 0.0});
  }
  if (space.b_labels[0] == space.b_labels[1]) {
    out.push_back({fmt::format("b labels not distinct ('{}')", space.b_labels[0]), 0.0});
  }
  if (space.a_values[0] == space.a_values[1]) {
    out.push_back({fmt::format("a values not distinct ({:.12g})", space.a_values[0]), 0.0});
  }
  if (space.b_values[0] == space.b_values[1]) {
    out.push_back({fmt::format("b values not distinct ({:.12g})", space.b_values[0]), 0.0});
  }

  const double sum_tol = tol.sum_tolerance(data.provenance);
  check_distribution(data.pa(), "pa", sum_tol, out);
  check_distribution(data.pb(), "pb", sum_tol, out);

  const auto& P = data.P();
  for (auto x : kOutcomes) {
    for (auto y : kOutcomes) {
      double p = P(x, y);
      if (!in_unit_interval(p)) {
        double excess = p < 0.0 ? -p : p - 1.0;
        out.push_back({fmt::format("P[{}][{}] = {:.12g} outside [0,1]", x + 1, y + 1, p), excess});
      }
    }
  }
  for (auto y : kOutcomes) {
    double sum = P.column_sum(y);
    if (!(std::abs(sum - 1.0) <= sum_tol)) {
      out.push_back({fmt::format("column {} sums to {:.12g}", space.b_labels[y], sum), std::abs(sum - 1.0)});
    }
  }
  return out;
}

Pair classical_ftp(const Pair& pb, const TransitionMatrix& P) {
  Pair q{};
  for (auto x : kOutcomes) {
    q[x] = pb[0] * P(x, kFirst) + pb[1] * P(x, kSecond);
  }
  return q;
}

Pair path_weights(const Pair& pb, const TransitionMatrix& P, Outcome x) {
  return {pb[0] * P(x, kFirst), pb[1] * P(x, kSecond)};
}

double interference_coefficient(const ContextualData& data, Outcome x, const Tolerances& tol) {
  const Pair w = path_weights(data.pb(), data.P(), x);
  const double denominator = 2.0 * std::sqrt(w[0] * w[1]);
  if (!(denominator > tol.degeneracy_floor)) {
    throw Error(ErrorKind::DegenerateDenominator,
                fmt::format("interference denominator for outcome {} is {:.3g} (floor {:.3g}); "
                            "observables are not mutually incompatible",
                            data.space.a_labels[x], denominator, tol.degeneracy_floor));
  }
  const double classical = w[0] + w[1];
  return (data.pa()[x] - classical) / denominator;
}

namespace {

// arccosh written out to stay accurate near |lambda| = 1.
double hyperbolic_phase(double magnitude) {
  return std::log(magnitude + std::sqrt(magnitude * magnitude - 1.0));
}

}  // namespace

InterferenceProfile profile_from_lambda(const Pair& lambda, double classification_tol) {
  InterferenceProfile profile;
  profile.lambda = lambda;
  int hyperbolic = 0;
  for (auto x : kOutcomes) {
    const double l = lambda[x];
    if (std::abs(l) <= 1.0 + classification_tol) {
      profile.kinds[x] = PhaseKind::Trigonometric;
      profile.phases[x] = std::acos(std::clamp(l, -1.0, 1.0));
      profile.signs[x] = 1;
    } else {
      profile.kinds[x] = PhaseKind::Hyperbolic;
      profile.phases[x] = hyperbolic_phase(std::abs(l));
      profile.signs[x] = l > 0.0 ? 1 : -1;
      ++hyperbolic;
    }
  }
  profile.classification = hyperbolic == 0   ? Classification::Trigonometric
                           : hyperbolic == 2 ? Classification::Hyperbolic
                                             : Classification::HyperTrigonometric;
  return profile;
}

InterferenceProfile interference_profile(const ContextualData& data, const Tolerances& tol) {
  Pair lambda{};
  for (auto x : kOutcomes) {
    lambda[x] = interference_coefficient(data, x, tol);
  }
  return profile_from_lambda(lambda, tol.classification);
}

bool check_incompatibility(const TransitionMatrix& P, double floor) {
  return std::ranges::all_of(P.entries, [floor](const Pair& row) {
    return row[0] > floor && row[1] > floor;
  });
}

bool is_doubly_stochastic(const TransitionMatrix& P, double tol) {
  return std::abs(P.row_sum(kFirst) - 1.0) <= tol && std::abs(P.row_sum(kSecond) - 1.0) <= tol;
}

Pair reconstruct_marginal(const InterferenceProfile& profile, const Pair& pb, const TransitionMatrix& P) {
  Pair pa{};
  for (auto x : kOutcomes) {
    const Pair w = path_weights(pb, P, x);
    pa[x] = (w[0] + w[1]) + 2.0 * profile.lambda[x] * std::sqrt(w[0] * w[1]);
  }
  return pa;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Trigonometric: return "trigonometric";
    case Classification::Hyperbolic: return "hyperbolic";
    case Classification::HyperTrigonometric: return "hyper-trigonometric";
  }
  return "unknown";
}

Classification classification_from_string(const std::string& s) {
  if (s == "trigonometric") return Classification::Trigonometric;
  if (s == "hyperbolic") return Classification::Hyperbolic;
  if (s == "hyper-trigonometric") return Classification::HyperTrigonometric;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown classification '{}'", s));
}

const char* to_string(Provenance p) {
  return p == Provenance::Analytic ? "analytic" : "empirical";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "analytic") return Provenance::Analytic;
  if (s == "empirical") return Provenance::Empirical;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown provenance '{}'", s));
}

}  // namespace qlrep
