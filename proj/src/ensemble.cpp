#include "qlrep/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep {

Pair EnsembleSpec::a_marginal() const { return {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]}; }

Pair EnsembleSpec::b_marginal() const { return {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]}; }

TransitionMatrix EnsembleSpec::joint_conditionals() const {
  const Pair pb = b_marginal();
  TransitionMatrix P;
  for (auto x : kOutcomes) {
    for (auto y : kOutcomes) {
      P.entries[x][y] = pb[y] > 0.0 ? joint[x][y] / pb[y] : 0.0;
    }
  }
  return P;
}

TransitionMatrix EnsembleSpec::effective_transitions() const {
  return mode == DisturbanceMode::Disturbing ? disturbance : joint_conditionals();
}

ContextualData EnsembleSpec::analytic_data() const {
  ContextualData data;
  data.context_id = context_id;
  data.space = space;
  data.marginals = {a_marginal(), b_marginal()};
  data.transitions = effective_transitions();
  data.provenance = Provenance::Analytic;
  return data;
}

void validate_spec(const EnsembleSpec& spec) {
  double total = 0.0;
  for (const auto& row : spec.joint) {
    for (double p : row) {
      if (!(p >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("joint probability {:.12g} is negative", p));
      }
      total += p;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("joint sums to {:.12g}", total));
  }
  for (auto y : kOutcomes) {
    const auto& q = spec.disturbance;
    if (!(q(kFirst, y) >= 0.0 && q(kSecond, y) >= 0.0) || std::abs(q.column_sum(y) - 1.0) > 1e-12) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("disturbance column {} is not a distribution", spec.space.b_labels[y]));
    }
  }
}

SampleTotals CountTable::totals() const {
  SampleTotals t;
  t.context_a = n_a[0] + n_a[1];
  t.context_b = n_b[0] + n_b[1];
  for (auto y : kOutcomes) {
    t.filtration[y] = n_a_given_y[0][y] + n_a_given_y[1][y];
  }
  return t;
}

namespace {

SystemState draw_system(const std::array<Pair, 2>& joint, Rng& rng) {
  // Cells in the fixed order (x1,y1), (x1,y2), (x2,y1), (x2,y2).
  const double u = rng.uniform();
  double acc = 0.0;
  for (auto a : kOutcomes) {
    for (auto b : kOutcomes) {
      acc += joint[a][b];
      if (u < acc) return {a, b};
    }
  }
  // u landed in the rounding gap above the cumulative sum; take the last
  // cell with positive mass.
  for (auto a : {kSecond, kFirst}) {
    for (auto b : {kSecond, kFirst}) {
      if (joint[a][b] > 0.0) return {a, b};
    }
  }
  return {};
}

}  // namespace

ContextCounts sample_context(const EnsembleSpec& spec, Count n, Rng& rng) {
  if (n == 0) {
    throw Error(ErrorKind::InvalidArgument, "sample size must be positive");
  }
  ContextCounts counts;
  for (Count i = 0; i < n; ++i) {
    ++counts.n_a[draw_system(spec.joint, rng).a_val];
  }
  for (Count i = 0; i < n; ++i) {
    ++counts.n_b[draw_system(spec.joint, rng).b_val];
  }
  return counts;
}

ContextCounts sample_context(const EnsembleSpec& spec, Count n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_context(spec, n, rng);
}

FiltrationCounts sample_filtration(const EnsembleSpec& spec, Outcome y, Count n, Rng& rng) {
  const double p_y = spec.b_marginal()[y];
  if (!(p_y > 0.0)) {
    throw Error(ErrorKind::EmptyFiltration,
                fmt::format("context {} never yields b = {}", spec.context_id, spec.space.b_labels[y]));
  }
  // Systems with b = y drawn directly from the normalized y column.
  const double stored_first = spec.joint[kFirst][y] / p_y;
  const double kernel_first = spec.disturbance(kFirst, y);
  FiltrationCounts counts;
  for (Count i = 0; i < n; ++i) {
    // A disturbing filtration erases the stored a value and redraws it from
    // the kernel column of y.
    const double p_first = spec.mode == DisturbanceMode::Disturbing ? kernel_first : stored_first;
    const SystemState system{static_cast<Outcome>(rng.bernoulli_index(p_first)), y};
    ++counts.n_a[system.a_val];
    ++counts.n_b_repeat[system.b_val];
  }
  return counts;
}

FiltrationCounts sample_filtration(const EnsembleSpec& spec, Outcome y, Count n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_filtration(spec, y, n, rng);
}

namespace {

double frequency(Count k, Count total) { return static_cast<double>(k) / static_cast<double>(total); }

double binomial_se(double p, Count total) { return std::sqrt(p * (1.0 - p) / static_cast<double>(total)); }

}  // namespace

Estimate estimate_data(const CountTable& table, const OutcomeSpace& space, std::string context_id) {
  const SampleTotals totals = table.totals();
  if (totals.context_a == 0 || totals.context_b == 0 || totals.filtration[0] == 0 || totals.filtration[1] == 0) {
    throw Error(ErrorKind::ZeroTotal, "every context needs at least one observation");
  }
  Estimate est;
  est.totals = totals;
  est.data.context_id = std::move(context_id);
  est.data.space = space;
  est.data.provenance = Provenance::Empirical;
  for (auto x : kOutcomes) {
    est.data.marginals.pa[x] = frequency(table.n_a[x], totals.context_a);
    est.data.marginals.pb[x] = frequency(table.n_b[x], totals.context_b);
    est.errors.pa[x] = binomial_se(est.data.marginals.pa[x], totals.context_a);
    est.errors.pb[x] = binomial_se(est.data.marginals.pb[x], totals.context_b);
    for (auto y : kOutcomes) {
      const double p = frequency(table.n_a_given_y[x][y], totals.filtration[y]);
      est.data.transitions.entries[x][y] = p;
      est.errors.P[x][y] = binomial_se(p, totals.filtration[y]);
    }
  }
  return est;
}

double lambda_standard_error(const ContextualData& data, const SampleTotals& totals, Outcome x) {
  const Pair& pb = data.pb();
  const double pa = data.pa()[x];
  const double p1 = data.P()(x, kFirst);
  const double p2 = data.P()(x, kSecond);
  const Pair w = path_weights(pb, data.P(), x);
  const double denominator = 2.0 * std::sqrt(w[0] * w[1]);
  const double lambda = (pa - w[0] - w[1]) / denominator;

  // Partial derivatives of lambda in pa, pb(y1) (with pb(y2) = 1 - pb(y1)),
  // p(x|y1) and p(x|y2).
  const double d_pa = 1.0 / denominator;
  const double d_pb1 = (p2 - p1) / denominator - lambda * (0.5 / pb[0] - 0.5 / pb[1]);
  const double d_p1 = -pb[0] / denominator - lambda * 0.5 / p1;
  const double d_p2 = -pb[1] / denominator - lambda * 0.5 / p2;

  const double var_pa = pa * (1.0 - pa) / static_cast<double>(totals.context_a);
  const double var_pb1 = pb[0] * pb[1] / static_cast<double>(totals.context_b);
  const double var_p1 = p1 * (1.0 - p1) / static_cast<double>(totals.filtration[0]);
  const double var_p2 = p2 * (1.0 - p2) / static_cast<double>(totals.filtration[1]);

  return std::sqrt(d_pa * d_pa * var_pa + d_pb1 * d_pb1 * var_pb1 + d_p1 * d_p1 * var_p1 +
                   d_p2 * d_p2 * var_p2);
}

ExperimentResult analyze_counts(const CountTable& counts, const OutcomeSpace& space, std::string context_id,
                                const Tolerances& tol) {
  ExperimentResult result;
  result.counts = counts;
  result.estimate = estimate_data(counts, space, std::move(context_id));
  result.profile = interference_profile(result.estimate.data, tol);
  for (auto x : kOutcomes) {
    result.lambda_sigma[x] = lambda_standard_error(result.estimate.data, result.estimate.totals, x);
  }
  return result;
}

namespace {

CountTable sample_counts(const EnsembleSpec& spec, Count n, std::uint64_t seed) {
  Rng rng(seed);
  CountTable table;
  table.seed = seed;
  const ContextCounts context = sample_context(spec, n, rng);
  table.n_a = context.n_a;
  table.n_b = context.n_b;
  for (auto y : kOutcomes) {
    const FiltrationCounts f = sample_filtration(spec, y, n, rng);
    for (auto x : kOutcomes) {
      table.n_a_given_y[x][y] = f.n_a[x];
    }
  }
  return table;
}

}  // namespace

ExperimentResult run_interference_experiment(const EnsembleSpec& spec, Count n, std::uint64_t seed,
                                             const Tolerances& tol) {
  validate_spec(spec);
  return analyze_counts(sample_counts(spec, n, seed), spec.space, spec.context_id, tol);
}

VonNeumannResult von_neumann_test(std::span<const EnsembleSpec> specs, Outcome y, Count n, std::uint64_t seed) {
  if (specs.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "von Neumann test needs at least two contexts");
  }
  VonNeumannResult result;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const FiltrationCounts f = sample_filtration(specs[i], y, n, seed + i);
    const double q = frequency(f.n_a[kFirst], n);
    result.estimates.push_back(q);
    result.sigmas.push_back(binomial_se(q, n));
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      const double d = std::abs(result.estimates[i] - result.estimates[j]);
      const double band = 3.0 * std::hypot(result.sigmas[i], result.sigmas[j]);
      // Two identical runs give d = 0 with zero-width bands; equality passes.
      if (d > band) result.pass = false;
      if (d >= result.discrepancy) {
        result.discrepancy = d;
        result.threshold = band;
      }
    }
  }
  return result;
}

std::vector<TwoScaleStep> two_scale_collect(const std::function<EnsembleSpec(std::size_t)>& schedule,
                                            std::size_t n_ql_steps, Count samples_per_step, std::uint64_t seed,
                                            const Tolerances& tol) {
  if (samples_per_step == 0) {
    throw Error(ErrorKind::InvalidArgument, "samples per step must be positive");
  }
  std::vector<TwoScaleStep> series;
  series.reserve(n_ql_steps);
  for (std::size_t t = 0; t < n_ql_steps; ++t) {
    const std::uint64_t step_seed = seed + t;
    series.push_back({t, step_seed, run_interference_experiment(schedule(t), samples_per_step, step_seed, tol)});
  }
  return series;
}

std::vector<TwoScaleStep> two_scale_collect(const EnsembleSpec& spec, std::size_t n_ql_steps,
                                            Count samples_per_step, std::uint64_t seed, const Tolerances& tol) {
  return two_scale_collect([&spec](std::size_t) { return spec; }, n_ql_steps, samples_per_step, seed, tol);
}

EnsembleSpec preset(std::string_view name) {
  EnsembleSpec spec;
  spec.mode = DisturbanceMode::Disturbing;
  if (name == "opinion-poll") {
    spec.context_id = "opinion-poll";
    spec.space.a_labels = {"against-pollution:yes", "against-pollution:no"};
    spec.space.b_labels = {"lower-gasoline-prices:yes", "lower-gasoline-prices:no"};
    spec.space.a_values = {1.0, 0.0};
    spec.space.b_values = {1.0, 0.0};
    spec.joint = {{{0.30, 0.30}, {0.20, 0.20}}};
    spec.disturbance = {{{{0.7, 0.3}, {0.3, 0.7}}}};
    return spec;
  }
  if (name == "grandmother-neurons") {
    spec.context_id = "grandmother-neurons";
    spec.space.a_labels = {"n1:firing", "n1:nonfiring"};
    spec.space.b_labels = {"n2:firing", "n2:nonfiring"};
    spec.space.a_values = {1.0, 0.0};
    spec.space.b_values = {1.0, 0.0};
    spec.joint = {{{0.20, 0.10}, {0.30, 0.40}}};
    spec.disturbance = {{{{0.6, 0.4}, {0.4, 0.6}}}};
    return spec;
  }
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown preset '{}'", name));
}

std::vector<std::string> preset_names() { return {"opinion-poll", "grandmother-neurons"}; }

const char* to_string(DisturbanceMode mode) {
  return mode == DisturbanceMode::Disturbing ? "disturbing" : "non-disturbing";
}

DisturbanceMode mode_from_string(const std::string& s) {
  if (s == "disturbing") return DisturbanceMode::Disturbing;
  if (s == "non-disturbing") return DisturbanceMode::NonDisturbing;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown mode '{}'", s));
}

}  // namespace qlrep
