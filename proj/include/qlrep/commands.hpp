#pragma once

// Analysis pipelines behind the qlrep command line verbs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qlrep/dynamics.hpp"
#include "qlrep/error.hpp"
#include "qlrep/hyperbolic.hpp"
#include "qlrep/io.hpp"

namespace qlrep {

/// Process exit codes. Fixed; documented in the CLI help.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,       // parse, schema or invariant failure; non-Hermitian input
  kExitDegenerate = 3,       // observables not mutually incompatible, empty filtration
  kExitNotRepresentable = 4, // non-trigonometric context without --allow-hyperbolic
  kExitIo = 5,
};

int exit_code_for(ErrorKind kind);

enum class RepresentationKind { Complex, Hyperbolic, None };

const char* to_string(RepresentationKind kind);

struct Diagnostics {
  bool incompatible = false;
  bool doubly_stochastic = false;
  std::string von_neumann_note;
};

struct AnalysisReport {
  io::json input;  // normalized input document
  std::string checksum;
  ContextualData data;
  std::optional<StandardErrors> standard_errors;
  std::optional<SampleTotals> totals;
  InterferenceProfile profile;
  std::optional<Pair> lambda_sigma;
  RepresentationKind representation = RepresentationKind::None;
  std::string representation_note;
  std::optional<QLState> state;
  std::optional<HyperbolicAmplitude> hyperbolic;
  ObservableOperator op_a;
  std::optional<ObservableOperator> op_b;
  std::optional<double> commutator;
  std::optional<DensityState> bloch;
  Diagnostics diagnostics;
  Tolerances tolerances;
  std::optional<std::uint64_t> seed;
};

struct AnalyzeOptions {
  Tolerances tol;
  bool allow_hyperbolic = false;
};

/// Validates the input, estimates (for counts), profiles, and builds whatever
/// representation the classification admits. Throws Error(SchemaError) on
/// invariant violations and Error(DegenerateDenominator) when the observables
/// are not mutually incompatible.
AnalysisReport analyze(const io::LoadedInput& input, const AnalyzeOptions& options = {});

/// True when the report must exit with kExitNotRepresentable.
bool needs_hyperbolic_flag(const AnalysisReport& report, const AnalyzeOptions& options);

io::json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const io::json& j);

/// "field,value" rows for --format csv.
std::string report_to_csv(const AnalysisReport& report);

io::json error_json(ErrorKind kind, const std::string& message);

struct CommandOutput {
  int exit_code = kExitOk;
  std::string text;  // what goes to the output file or stdout
};

CommandOutput cmd_analyze(const std::filesystem::path& input, io::InputFormat input_format,
                          const AnalyzeOptions& options, const std::string& format);

struct SimulateOptions {
  Count samples = 100000;
  std::uint64_t seed = 0;
  std::size_t steps = 1;
  AnalyzeOptions analyze;
  std::string format = "json";
};

/// spec may be a JSON spec file or the name of a preset.
CommandOutput cmd_simulate(const std::string& spec, const SimulateOptions& options);

struct EvolveOptions {
  double time = 1.0;
  std::size_t steps = 10;
  std::string format = "json";
};

/// state: a state or report JSON with psi_re/psi_im. hamiltonian: JSON with
/// either "matrix" {re, im} or "b" ("report" or {re, im}) plus "potential".
CommandOutput cmd_evolve(const std::filesystem::path& state, const std::filesystem::path& hamiltonian,
                         const EvolveOptions& options);

enum class SweepGrid { Theta, Pa };

struct SweepOptions {
  Pair pb{0.5, 0.5};
  TransitionMatrix P = TransitionMatrix::uniform();
  SweepGrid grid = SweepGrid::Theta;
  std::vector<double> values;
  Tolerances tol;
};

/// "start:stop:count" (inclusive linspace) or a comma separated list.
std::vector<double> parse_grid(const std::string& text);

/// One CSV row per grid point; rows with probabilities outside [0,1] are flagged.
CommandOutput cmd_sweep(const SweepOptions& options);

}  // namespace qlrep
