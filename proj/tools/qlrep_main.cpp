// qlrep: interference analysis, quantum-like representation, simulation and
// dynamics for contextual data of two dichotomous observables.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qlrep/commands.hpp"
#include "qlrep/error.hpp"

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error\n"
    "  2  validation failure (parse, schema, data invariants, non-Hermitian input)\n"
    "  3  degenerate input: observables not mutually incompatible, or an empty filtration\n"
    "  4  context not trigonometric and --allow-hyperbolic not given\n"
    "  5  I/O error\n";

int emit(const qlrep::CommandOutput& out, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << out.text;
    return out.exit_code;
  }
  try {
    qlrep::io::write_atomic(output, out.text);
  } catch (const qlrep::Error& e) {
    std::cerr << e.what() << "\n";
    return qlrep::kExitIo;
  }
  if (out.exit_code != qlrep::kExitOk) std::cerr << out.text;
  return out.exit_code;
}

qlrep::TransitionMatrix parse_matrix(const std::string& text) {
  const auto values = qlrep::parse_grid(text);
  if (values.size() != 4) {
    throw qlrep::Error(qlrep::ErrorKind::InvalidArgument,
                       "--P takes four numbers p(x1|y1),p(x1|y2),p(x2|y1),p(x2|y2)");
  }
  return {{{{values[0], values[1]}, {values[2], values[3]}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-like representation of contextual probability data"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  std::string input, output, format = "json", input_format = "auto";
  std::uint64_t seed = 0;
  qlrep::Count samples = 100000;
  std::size_t steps = 1;
  bool allow_hyperbolic = false;
  qlrep::Tolerances tol;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", output, "Output file (default stdout)");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tolerance", tol.classification, "Classification tolerance on |lambda| vs 1");
  };

  auto* analyze = app.add_subcommand("analyze", "Interference analysis and state reconstruction");
  analyze->add_option("-i,--input", input, "counts-json, counts-csv, probabilities-json, or a report")->required();
  analyze->add_option("--input-format", input_format, "Input format")
      ->check(CLI::IsMember({"auto", "counts-json", "counts-csv", "probabilities-json"}));
  analyze->add_option("--sum-tolerance", tol.analytic_sum, "Probability-sum tolerance for analytic inputs");
  analyze->add_option("--empirical-sum-tolerance", tol.empirical_sum, "Probability-sum tolerance for frequencies");
  analyze->add_option("--floor", tol.degeneracy_floor, "Degeneracy floor for interference denominators");
  analyze->add_flag("--allow-hyperbolic", allow_hyperbolic, "Build split-complex amplitudes for |lambda| > 1");
  add_common(analyze);

  auto* simulate = app.add_subcommand("simulate", "Sample a hidden-variable ensemble and analyze the counts");
  simulate->add_option("-i,--input", input, "Ensemble spec JSON or preset name")->required();
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--samples", samples, "Systems per readout")->check(CLI::PositiveNumber);
  simulate->add_option("--steps", steps, "QL-time steps (two time scales)")->check(CLI::PositiveNumber);
  simulate->add_flag("--allow-hyperbolic", allow_hyperbolic, "Build split-complex amplitudes for |lambda| > 1");
  add_common(simulate);

  std::string hamiltonian;
  double time = 1.0;
  auto* evolve = app.add_subcommand("evolve", "Schroedinger evolution of a reconstructed state");
  evolve->add_option("-i,--input", input, "State JSON or analyze report")->required();
  evolve->add_option("--hamiltonian", hamiltonian, "Hamiltonian JSON")->required();
  evolve->add_option("-t,--time", time, "Final time");
  evolve->add_option("--steps", steps, "Number of intervals")->check(CLI::PositiveNumber);
  add_common(evolve);

  std::string pb_text = "0.5,0.5", p_text = "0.5,0.5,0.5,0.5", theta_grid, pa_grid;
  auto* sweep = app.add_subcommand("sweep", "Interference curve over a phase or marginal grid (CSV)");
  sweep->add_option("--pb", pb_text, "pb(y1),pb(y2)");
  sweep->add_option("--P", p_text, "p(x1|y1),p(x1|y2),p(x2|y1),p(x2|y2)");
  auto* theta_opt = sweep->add_option("--theta-grid", theta_grid, "start:stop:count or a comma list");
  auto* pa_opt = sweep->add_option("--pa-grid", pa_grid, "start:stop:count or a comma list");
  theta_opt->excludes(pa_opt);
  sweep->add_option("-o,--output", output, "Output file (default stdout)");
  sweep->add_option("--tolerance", tol.classification, "Classification tolerance on |lambda| vs 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qlrep::kExitOk : qlrep::kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      const qlrep::AnalyzeOptions options{tol, allow_hyperbolic};
      return emit(qlrep::cmd_analyze(input, qlrep::io::input_format_from_string(input_format), options, format),
                  output);
    }
    if (simulate->parsed()) {
      qlrep::SimulateOptions options;
      options.samples = samples;
      options.seed = seed;
      options.steps = steps;
      options.analyze = {tol, allow_hyperbolic};
      options.format = format;
      return emit(qlrep::cmd_simulate(input, options), output);
    }
    if (evolve->parsed()) {
      qlrep::EvolveOptions options;
      options.time = time;
      options.steps = evolve->count("--steps") > 0 ? steps : 10;
      options.format = format;
      return emit(qlrep::cmd_evolve(input, hamiltonian, options), output);
    }
    if (sweep->parsed()) {
      qlrep::SweepOptions options;
      const auto pb = qlrep::parse_grid(pb_text);
      if (pb.size() != 2) throw qlrep::Error(qlrep::ErrorKind::InvalidArgument, "--pb takes two numbers");
      options.pb = {pb[0], pb[1]};
      options.P = parse_matrix(p_text);
      options.tol = tol;
      if (!pa_grid.empty()) {
        options.grid = qlrep::SweepGrid::Pa;
        options.values = qlrep::parse_grid(pa_grid);
      } else {
        options.values = qlrep::parse_grid(theta_grid.empty() ? "0:3.141592653589793:9" : theta_grid);
      }
      return emit(qlrep::cmd_sweep(options), output);
    }
  } catch (const qlrep::Error& e) {
    std::cerr << e.what() << "\n";
    return qlrep::exit_code_for(e.kind()) == qlrep::kExitValidation ? qlrep::kExitUsage : qlrep::exit_code_for(e.kind());
  }
  return qlrep::kExitUsage;
}
