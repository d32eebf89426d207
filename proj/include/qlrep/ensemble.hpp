#pragma once

// Hidden-variable ensemble simulator. Every system carries definite values
// of a and b; a context is a joint distribution over them, and a b = y
// filtration either keeps the stored a (NonDisturbing) or resamples it from a
// context-independent kernel q(x|y) (Disturbing).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlrep/contextual.hpp"

namespace qlrep {

using Count = std::uint64_t;
using CountPair = std::array<Count, 2>;

/// Seeded generator shared by every sampling routine. The engine's output
/// sequence is fixed by the standard and uniforms are built from its top 53
/// bits, so runs are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Index 0 with probability p0, else 1.
  std::size_t bernoulli_index(double p0) { return uniform() < p0 ? 0 : 1; }

 private:
  std::mt19937_64 engine_;
};

struct SystemState {
  Outcome a_val = kFirst;
  Outcome b_val = kFirst;
};

enum class DisturbanceMode { Disturbing, NonDisturbing };

struct EnsembleSpec {
  std::string context_id;
  OutcomeSpace space;
  std::array<Pair, 2> joint{};        // [a][b]
  TransitionMatrix disturbance;       // q(x|y), [x][y]
  DisturbanceMode mode = DisturbanceMode::Disturbing;

  Pair a_marginal() const;
  Pair b_marginal() const;
  /// p(x|y) of the joint itself, what a NonDisturbing filtration reports.
  TransitionMatrix joint_conditionals() const;
  /// The transition matrix a filtration realizes under this spec's mode.
  TransitionMatrix effective_transitions() const;
  /// The exact contextual data this spec generates in expectation.
  ContextualData analytic_data() const;
};

/// Throws InvalidArgument when the joint or the kernel is not a distribution.
void validate_spec(const EnsembleSpec& spec);

struct SampleTotals {
  Count context_a = 0;
  Count context_b = 0;
  std::array<Count, 2> filtration{};  // per y

  friend bool operator==(const SampleTotals&, const SampleTotals&) = default;
};

struct CountTable {
  CountPair n_a{};
  CountPair n_b{};
  std::array<CountPair, 2> n_a_given_y{};  // [x][y]
  std::optional<std::uint64_t> seed;

  SampleTotals totals() const;

  friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Counts of a under C and b under C. a and b are read on independent
/// draws of n systems each.
struct ContextCounts {
  CountPair n_a{};
  CountPair n_b{};
};

ContextCounts sample_context(const EnsembleSpec& spec, Count n, std::uint64_t seed);
ContextCounts sample_context(const EnsembleSpec& spec, Count n, Rng& rng);

struct FiltrationCounts {
  CountPair n_a{};
  /// b measured again right after the filtration.
  CountPair n_b_repeat{};
};

/// n systems drawn from S_C conditioned on b = y. Throws EmptyFiltration
/// when p(y) = 0.
FiltrationCounts sample_filtration(const EnsembleSpec& spec, Outcome y, Count n, std::uint64_t seed);
FiltrationCounts sample_filtration(const EnsembleSpec& spec, Outcome y, Count n, Rng& rng);

/// Binomial standard errors of every estimated probability.
struct StandardErrors {
  Pair pa{};
  Pair pb{};
  std::array<Pair, 2> P{};  // [x][y]
};

struct Estimate {
  ContextualData data;
  StandardErrors errors;
  SampleTotals totals;
};

/// Frequencies and sqrt(p(1-p)/n) errors. Throws ZeroTotal if any context
/// has no observations.
Estimate estimate_data(const CountTable& table, const OutcomeSpace& space, std::string context_id = "");

/// First-order delta-method standard error of lambda(x), treating the a and
/// b readouts under C and the two filtrations as independent binomials.
double lambda_standard_error(const ContextualData& data, const SampleTotals& totals, Outcome x);

struct ExperimentResult {
  CountTable counts;
  Estimate estimate;
  InterferenceProfile profile;
  Pair lambda_sigma{};
};

/// Samples C and both filtrations with n systems each from one generator
/// seeded with seed (order: a under C, b under C, C_y1, C_y2), then runs the
/// interference analysis with delta-method error bars.
ExperimentResult run_interference_experiment(const EnsembleSpec& spec, Count n, std::uint64_t seed,
                                             const Tolerances& tol = {});

/// Analysis half of run_interference_experiment, reusable for loaded counts.
ExperimentResult analyze_counts(const CountTable& counts, const OutcomeSpace& space, std::string context_id,
                                const Tolerances& tol = {});

struct VonNeumannResult {
  double discrepancy = 0.0;  // max pairwise |q_i(x1|y) - q_j(x1|y)|
  double threshold = 0.0;    // 3 sigma of the difference for the maximizing pair
  bool pass = true;          // every pair within its own 3 sigma band
  std::vector<double> estimates;
  std::vector<double> sigmas;
};

/// Estimates q(x|y) after a y filtration under each preceding context.
/// Context i is sampled independently with seed + i.
VonNeumannResult von_neumann_test(std::span<const EnsembleSpec> specs, Outcome y, Count n, std::uint64_t seed);

struct TwoScaleStep {
  std::size_t step = 0;
  std::uint64_t seed = 0;
  ExperimentResult result;
};

/// One interference experiment per QL-time step with samples_per_step
/// internal-time observations per readout. Step t uses seed + t.
std::vector<TwoScaleStep> two_scale_collect(const EnsembleSpec& spec, std::size_t n_ql_steps,
                                            Count samples_per_step, std::uint64_t seed,
                                            const Tolerances& tol = {});

/// Same with a context that drifts over QL time.
std::vector<TwoScaleStep> two_scale_collect(const std::function<EnsembleSpec(std::size_t)>& schedule,
                                            std::size_t n_ql_steps, Count samples_per_step, std::uint64_t seed,
                                            const Tolerances& tol = {});

/// Named scenarios: "opinion-poll" and "grandmother-neurons".
EnsembleSpec preset(std::string_view name);
std::vector<std::string> preset_names();

const char* to_string(DisturbanceMode mode);
DisturbanceMode mode_from_string(const std::string& s);

}  // namespace qlrep
