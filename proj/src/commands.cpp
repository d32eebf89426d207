#include "qlrep/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep {

using io::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::EmptyFiltration:
      return kExitDegenerate;
    case ErrorKind::NotTrigonometric:
    case ErrorKind::NotHyperbolic:
      return kExitNotRepresentable;
    case ErrorKind::IoError:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

const char* to_string(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::Complex: return "complex";
    case RepresentationKind::Hyperbolic: return "hyperbolic";
    case RepresentationKind::None: return "none";
  }
  return "none";
}

namespace {

RepresentationKind representation_from_string(const std::string& s) {
  if (s == "complex") return RepresentationKind::Complex;
  if (s == "hyperbolic") return RepresentationKind::Hyperbolic;
  if (s == "none") return RepresentationKind::None;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown representation '{}'", s));
}

const char* to_string(PhaseKind k) { return k == PhaseKind::Trigonometric ? "trigonometric" : "hyperbolic"; }

PhaseKind phase_kind_from_string(const std::string& s) {
  if (s == "trigonometric") return PhaseKind::Trigonometric;
  if (s == "hyperbolic") return PhaseKind::Hyperbolic;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown phase kind '{}'", s));
}

const char* to_string(PhaseBranch b) { return b == PhaseBranch::Principal ? "principal" : "orthogonal"; }

PhaseBranch branch_from_string(const std::string& s) {
  if (s == "principal") return PhaseBranch::Principal;
  if (s == "orthogonal") return PhaseBranch::Orthogonal;
  throw Error(ErrorKind::SchemaError, fmt::format("unknown phase branch '{}'", s));
}

std::string serialize(const json& j) { return j.dump(2) + "\n"; }

json errors_to_json(const StandardErrors& e) { return {{"pa", e.pa}, {"pb", e.pb}, {"P", e.P}}; }

StandardErrors errors_from_json(const json& j) {
  StandardErrors e;
  e.pa = j.at("pa").get<Pair>();
  e.pb = j.at("pb").get<Pair>();
  e.P = j.at("P").get<std::array<Pair, 2>>();
  return e;
}

json tolerances_to_json(const Tolerances& t) {
  return {{"analytic_sum", t.analytic_sum},
          {"empirical_sum", t.empirical_sum},
          {"classification", t.classification},
          {"degeneracy_floor", t.degeneracy_floor}};
}

Tolerances tolerances_from_json(const json& j) {
  Tolerances t;
  t.analytic_sum = j.at("analytic_sum").get<double>();
  t.empirical_sum = j.at("empirical_sum").get<double>();
  t.classification = j.at("classification").get<double>();
  t.degeneracy_floor = j.at("degeneracy_floor").get<double>();
  return t;
}

}  // namespace

AnalysisReport analyze(const io::LoadedInput& input, const AnalyzeOptions& options) {
  const Tolerances& tol = options.tol;
  AnalysisReport report;
  report.input = io::to_json(input);
  report.checksum = io::checksum(report.input.dump());
  report.tolerances = tol;

  if (const auto* counts = std::get_if<io::CountsInput>(&input)) {
    const Estimate est = estimate_data(counts->counts, counts->space, counts->context_id);
    report.data = est.data;
    report.standard_errors = est.errors;
    report.totals = est.totals;
    report.seed = counts->counts.seed;
  } else {
    report.data = std::get<io::ProbabilitiesInput>(input).data;
  }

  const auto violations = validate_data(report.data, tol);
  if (!violations.empty()) {
    std::string message = "input violates data invariants:";
    for (const auto& v : violations) message += fmt::format(" [{}]", v.message);
    throw Error(ErrorKind::SchemaError, message);
  }

  const auto& P = report.data.P();
  report.diagnostics.incompatible = check_incompatibility(P, tol.degeneracy_floor);
  report.diagnostics.doubly_stochastic = is_doubly_stochastic(P, tol.sum_tolerance(report.data.provenance));
  report.diagnostics.von_neumann_note =
      report.data.provenance == Provenance::Empirical
          ? "transition probabilities are frequencies after b filtrations; their independence of the "
            "preceding context is assumed, and can be checked with repeated contexts sharing one kernel"
          : "transition probabilities are taken as context independent (von Neumann postulate assumed)";
  if (!report.diagnostics.incompatible) {
    throw Error(ErrorKind::DegenerateDenominator,
                "observables are not mutually incompatible: some transition probability p(x|y) is zero");
  }

  report.profile = interference_profile(report.data, tol);
  if (report.totals) {
    Pair sigma{};
    for (auto x : kOutcomes) sigma[x] = lambda_standard_error(report.data, *report.totals, x);
    report.lambda_sigma = sigma;
  }

  switch (report.profile.classification) {
    case Classification::Trigonometric:
      report.representation = RepresentationKind::Complex;
      report.state = build_amplitude(report.data, report.profile, PhaseBranch::Principal, tol);
      report.bloch = to_bloch(*report.state);
      break;
    case Classification::Hyperbolic:
      if (options.allow_hyperbolic) {
        report.representation = RepresentationKind::Hyperbolic;
        report.hyperbolic = build_hyperbolic_amplitude(report.data, report.profile);
      } else {
        report.representation_note = "hyperbolic context; rerun with --allow-hyperbolic for the split-complex amplitude";
      }
      break;
    case Classification::HyperTrigonometric:
      report.representation_note =
          "hyper-trigonometric context: one outcome trigonometric, one hyperbolic; no single amplitude exists";
      break;
  }

  report.op_a = operator_a(report.data.space);
  if (report.diagnostics.doubly_stochastic && report.profile.classification == Classification::Trigonometric) {
    report.op_b = operator_b(report.data, report.profile, tol);
    report.commutator = commutator_norm(report.op_a, *report.op_b);
  }
  return report;
}

bool needs_hyperbolic_flag(const AnalysisReport& report, const AnalyzeOptions& options) {
  return report.profile.classification != Classification::Trigonometric && !options.allow_hyperbolic;
}

json to_json(const AnalysisReport& r) {
  json j;
  j["input"] = r.input;
  j["digest"] = {{"checksum", r.checksum}, {"provenance", to_string(r.data.provenance)}};
  j["context_id"] = r.data.context_id;
  j["space"] = io::to_json(r.data.space);
  j["data"] = {{"pa", r.data.pa()}, {"pb", r.data.pb()}, {"P", r.data.P().entries}};
  if (r.standard_errors) j["standard_errors"] = errors_to_json(*r.standard_errors);
  if (r.totals) {
    j["totals"] = {{"context_a", r.totals->context_a},
                   {"context_b", r.totals->context_b},
                   {"filtration", r.totals->filtration}};
  }
  j["classification"] = to_string(r.profile.classification);
  j["lambda"] = r.profile.lambda;
  if (r.lambda_sigma) j["lambda_sigma"] = *r.lambda_sigma;
  j["theta"] = r.profile.phases;
  j["signs"] = r.profile.signs;
  j["phase_kinds"] = {to_string(r.profile.kinds[0]), to_string(r.profile.kinds[1])};
  j["representation"] = {{"kind", to_string(r.representation)}, {"note", r.representation_note}};
  if (r.state) {
    const auto& s = *r.state;
    j["psi_re"] = {s[kFirst].real(), s[kSecond].real()};
    j["psi_im"] = {s[kFirst].imag(), s[kSecond].imag()};
    j["phase_convention"] = {{"xi_y1", s.convention.xi_y1},
                             {"xi_y2", s.convention.xi_y2},
                             {"branch", to_string(s.convention.branch)}};
  }
  if (r.hyperbolic) {
    const auto& h = *r.hyperbolic;
    j["hyperbolic_amplitude"] = {{"u", {h.amplitudes[0].u, h.amplitudes[1].u}},
                                 {"v", {h.amplitudes[0].v, h.amplitudes[1].v}},
                                 {"theta", h.phases},
                                 {"signs", h.signs}};
  }
  j["operators"] = {{"a", io::matrix_to_json(r.op_a.matrix)}};
  if (r.op_b) j["operators"]["b"] = io::matrix_to_json(r.op_b->matrix);
  if (r.commutator) j["operators"]["commutator_norm"] = *r.commutator;
  if (r.bloch) {
    j["bloch"] = {r.bloch->bloch.x(), r.bloch->bloch.y(), r.bloch->bloch.z()};
    j["purity"] = purity(*r.bloch);
  }
  j["diagnostics"] = {{"incompatible", r.diagnostics.incompatible},
                      {"doubly_stochastic", r.diagnostics.doubly_stochastic},
                      {"von_neumann_note", r.diagnostics.von_neumann_note}};
  j["tolerances"] = tolerances_to_json(r.tolerances);
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

AnalysisReport report_from_json(const json& j) {
  try {
    AnalysisReport r;
    r.input = j.at("input");
    r.checksum = j.at("digest").at("checksum").get<std::string>();
    r.data.provenance = provenance_from_string(j.at("digest").at("provenance").get<std::string>());
    r.data.context_id = j.at("context_id").get<std::string>();
    r.data.space = io::space_from_json(j.at("space"), "space");
    r.data.marginals.pa = j.at("data").at("pa").get<Pair>();
    r.data.marginals.pb = j.at("data").at("pb").get<Pair>();
    r.data.transitions.entries = j.at("data").at("P").get<std::array<Pair, 2>>();
    if (j.contains("standard_errors")) r.standard_errors = errors_from_json(j["standard_errors"]);
    if (j.contains("totals")) {
      SampleTotals t;
      t.context_a = j["totals"].at("context_a").get<Count>();
      t.context_b = j["totals"].at("context_b").get<Count>();
      t.filtration = j["totals"].at("filtration").get<std::array<Count, 2>>();
      r.totals = t;
    }
    r.profile.classification = classification_from_string(j.at("classification").get<std::string>());
    r.profile.lambda = j.at("lambda").get<Pair>();
    if (j.contains("lambda_sigma")) r.lambda_sigma = j["lambda_sigma"].get<Pair>();
    r.profile.phases = j.at("theta").get<Pair>();
    r.profile.signs = j.at("signs").get<std::array<int, 2>>();
    for (auto x : kOutcomes) r.profile.kinds[x] = phase_kind_from_string(j.at("phase_kinds").at(x).get<std::string>());
    r.representation = representation_from_string(j.at("representation").at("kind").get<std::string>());
    r.representation_note = j.at("representation").at("note").get<std::string>();
    if (j.contains("psi_re")) {
      const Pair re = j["psi_re"].get<Pair>();
      const Pair im = j.at("psi_im").get<Pair>();
      QLState s = make_state({re[0], im[0]}, {re[1], im[1]});
      const auto& conv = j.at("phase_convention");
      s.convention.xi_y1 = conv.at("xi_y1").get<Pair>();
      s.convention.xi_y2 = conv.at("xi_y2").get<Pair>();
      s.convention.branch = branch_from_string(conv.at("branch").get<std::string>());
      r.state = s;
    }
    if (j.contains("hyperbolic_amplitude")) {
      const auto& h = j["hyperbolic_amplitude"];
      HyperbolicAmplitude amp;
      const Pair u = h.at("u").get<Pair>();
      const Pair v = h.at("v").get<Pair>();
      amp.amplitudes = {HyperbolicNumber{u[0], v[0]}, HyperbolicNumber{u[1], v[1]}};
      amp.phases = h.at("theta").get<Pair>();
      amp.signs = h.at("signs").get<std::array<int, 2>>();
      r.hyperbolic = amp;
    }
    const auto& ops = j.at("operators");
    r.op_a.matrix = io::matrix_from_json(ops.at("a"), "operators.a");
    if (ops.contains("b")) r.op_b = ObservableOperator{io::matrix_from_json(ops["b"], "operators.b")};
    if (ops.contains("commutator_norm")) r.commutator = ops["commutator_norm"].get<double>();
    if (j.contains("bloch")) {
      const auto b = j["bloch"].get<std::array<double, 3>>();
      DensityState rho = from_bloch(Vector3(b[0], b[1], b[2]));
      if (r.state) rho.matrix = r.state->amplitudes * r.state->amplitudes.adjoint();
      r.bloch = rho;
    }
    const auto& d = j.at("diagnostics");
    r.diagnostics.incompatible = d.at("incompatible").get<bool>();
    r.diagnostics.doubly_stochastic = d.at("doubly_stochastic").get<bool>();
    r.diagnostics.von_neumann_note = d.at("von_neumann_note").get<std::string>();
    r.tolerances = tolerances_from_json(j.at("tolerances"));
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("report: {}", e.what()));
  }
}

std::string report_to_csv(const AnalysisReport& r) {
  std::string out = "field,value\n";
  const auto row = [&out](const std::string& name, const std::string& value) {
    out += fmt::format("{},{}\n", name, value);
  };
  const auto num = [](double v) { return io::format_number(v); };
  row("checksum", r.checksum);
  row("provenance", to_string(r.data.provenance));
  row("classification", to_string(r.profile.classification));
  for (auto x : kOutcomes) {
    const auto suffix = fmt::format("x{}", x + 1);
    row("pa_" + suffix, num(r.data.pa()[x]));
    row("pb_y" + std::to_string(x + 1), num(r.data.pb()[x]));
    row("lambda_" + suffix, num(r.profile.lambda[x]));
    if (r.lambda_sigma) row("lambda_sigma_" + suffix, num((*r.lambda_sigma)[x]));
    row("theta_" + suffix, num(r.profile.phases[x]));
    row("sign_" + suffix, std::to_string(r.profile.signs[x]));
    if (r.state) {
      row("psi_re_" + suffix, num((*r.state)[x].real()));
      row("psi_im_" + suffix, num((*r.state)[x].imag()));
    }
    if (r.hyperbolic) {
      row("hyp_u_" + suffix, num(r.hyperbolic->amplitudes[x].u));
      row("hyp_v_" + suffix, num(r.hyperbolic->amplitudes[x].v));
    }
  }
  row("representation", to_string(r.representation));
  if (r.commutator) row("commutator_norm", num(*r.commutator));
  if (r.bloch) {
    row("bloch_x", num(r.bloch->bloch.x()));
    row("bloch_y", num(r.bloch->bloch.y()));
    row("bloch_z", num(r.bloch->bloch.z()));
  }
  row("incompatible", r.diagnostics.incompatible ? "true" : "false");
  row("doubly_stochastic", r.diagnostics.doubly_stochastic ? "true" : "false");
  return out;
}

json error_json(ErrorKind kind, const std::string& message) {
  return {{"error", {{"kind", to_string(kind)}, {"message", message}, {"exit_code", exit_code_for(kind)}}}};
}

namespace {

CommandOutput failure(const Error& e) { return {exit_code_for(e.kind()), serialize(error_json(e.kind(), e.what()))}; }

}  // namespace

CommandOutput cmd_analyze(const std::filesystem::path& input, io::InputFormat input_format,
                          const AnalyzeOptions& options, const std::string& format) {
  try {
    const AnalysisReport report = analyze(io::load_input(input, input_format), options);
    CommandOutput out;
    out.text = format == "csv" ? report_to_csv(report) : serialize(to_json(report));
    if (needs_hyperbolic_flag(report, options)) {
      out.exit_code = kExitNotRepresentable;
      if (format != "csv") {
        json j = error_json(ErrorKind::NotTrigonometric, report.representation_note.empty()
                                                              ? "context is not trigonometric"
                                                              : report.representation_note);
        j["report"] = to_json(report);
        out.text = serialize(j);
      }
    }
    return out;
  } catch (const Error& e) {
    return failure(e);
  }
}

CommandOutput cmd_simulate(const std::string& spec_source, const SimulateOptions& options) {
  try {
    EnsembleSpec spec;
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), spec_source) != names.end()) {
      spec = preset(spec_source);
    } else {
      json doc;
      try {
        doc = json::parse(io::read_file(spec_source));
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, fmt::format("{}: byte {}: {}", spec_source, e.byte, e.what()));
      }
      spec = io::spec_from_json(doc);
    }
    if (options.steps == 0) throw Error(ErrorKind::InvalidArgument, "steps must be positive");

    const auto series = two_scale_collect(spec, options.steps, options.samples, options.seed, options.analyze.tol);
    CommandOutput out;
    json steps = json::array();
    std::string csv = "step,seed,lambda_x1,lambda_sigma_x1,lambda_x2,lambda_sigma_x2,classification\n";
    for (const auto& step : series) {
      const io::CountsInput counts{spec.context_id, spec.space, step.result.counts};
      const AnalysisReport report = analyze(counts, options.analyze);
      if (needs_hyperbolic_flag(report, options.analyze)) out.exit_code = kExitNotRepresentable;
      steps.push_back({{"step", step.step}, {"seed", step.seed}, {"counts", io::to_json(counts)},
                       {"report", to_json(report)}});
      csv += fmt::format("{},{},{},{},{},{},{}\n", step.step, step.seed, io::format_number(report.profile.lambda[0]),
                         io::format_number((*report.lambda_sigma)[0]), io::format_number(report.profile.lambda[1]),
                         io::format_number((*report.lambda_sigma)[1]), to_string(report.profile.classification));
    }
    if (options.format == "csv") {
      out.text = options.steps == 1 ? io::counts_to_csv({spec.context_id, spec.space, series[0].result.counts}) : csv;
    } else if (options.steps == 1) {
      out.text = serialize({{"spec", io::to_json(spec)},
                            {"samples", options.samples},
                            {"counts", steps[0]["counts"]},
                            {"report", steps[0]["report"]}});
    } else {
      out.text = serialize({{"spec", io::to_json(spec)}, {"samples", options.samples}, {"series", steps}});
    }
    return out;
  } catch (const Error& e) {
    return failure(e);
  }
}

namespace {

QLState state_from_json(const json& j) {
  if (!j.contains("psi_re") || !j.contains("psi_im")) {
    throw Error(ErrorKind::SchemaError, "state file needs psi_re and psi_im (a complex representation)");
  }
  Pair re{}, im{};
  try {
    re = j["psi_re"].get<Pair>();
    im = j["psi_im"].get<Pair>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("psi_re/psi_im: {}", e.what()));
  }
  QLState s = make_state({re[0], im[0]}, {re[1], im[1]});
  if (std::abs(s.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::SchemaError, fmt::format("state norm is {:.12g}, expected 1", s.norm()));
  }
  return s;
}

json parse_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, fmt::format("{}: byte {}: {}", path.string(), e.byte, e.what()));
  }
}

}  // namespace

CommandOutput cmd_evolve(const std::filesystem::path& state_path, const std::filesystem::path& hamiltonian_path,
                         const EvolveOptions& options) {
  try {
    const json state_doc = parse_json_file(state_path);
    const json ham_doc = parse_json_file(hamiltonian_path);
    const QLState psi0 = state_from_json(state_doc);

    Matrix2c h;
    if (ham_doc.contains("matrix")) {
      h = io::matrix_from_json(ham_doc["matrix"], "matrix");
    } else if (ham_doc.contains("b")) {
      ObservableOperator b;
      if (ham_doc["b"].is_string() && ham_doc["b"].get<std::string>() == "report") {
        if (!state_doc.contains("operators") || !state_doc["operators"].contains("b")) {
          throw Error(ErrorKind::SchemaError, "state file carries no b operator (P not doubly stochastic?)");
        }
        b.matrix = io::matrix_from_json(state_doc["operators"]["b"], "operators.b");
      } else {
        b.matrix = io::matrix_from_json(ham_doc["b"], "b");
      }
      if (!is_hermitian(b.matrix)) throw Error(ErrorKind::NonHermitianInput, "b operator is not Hermitian");
      OutcomeSpace space;
      if (ham_doc.contains("space")) {
        space = io::space_from_json(ham_doc["space"], "space");
      } else if (state_doc.contains("space")) {
        space = io::space_from_json(state_doc["space"], "space");
      }
      std::vector<double> coeffs;
      if (ham_doc.contains("potential")) {
        try {
          coeffs = ham_doc["potential"].get<std::vector<double>>();
        } catch (const json::exception& e) {
          throw Error(ErrorKind::SchemaError, fmt::format("potential: {}", e.what()));
        }
      }
      h = build_hamiltonian(b, coeffs, space).matrix();
    } else {
      throw Error(ErrorKind::SchemaError, "hamiltonian needs 'matrix' or 'b'");
    }
    const Hamiltonian H(h);
    const Trajectory traj = sample_linear(H, psi0, options.time, options.steps);
    const ObservableOperator energy_op{H.matrix()};

    json born = json::array(), psi_re = json::array(), psi_im = json::array(), energy = json::array();
    std::string csv = "t,p_x1,p_x2,psi1_re,psi1_im,psi2_re,psi2_im,norm,energy\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& s = traj.states[k];
      const double e = expectation(energy_op, s);
      born.push_back({born_probability(s, kFirst), born_probability(s, kSecond)});
      psi_re.push_back({s[kFirst].real(), s[kSecond].real()});
      psi_im.push_back({s[kFirst].imag(), s[kSecond].imag()});
      energy.push_back(e);
      csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", io::format_number(traj.times[k]),
                         io::format_number(born_probability(s, kFirst)),
                         io::format_number(born_probability(s, kSecond)), io::format_number(s[kFirst].real()),
                         io::format_number(s[kFirst].imag()), io::format_number(s[kSecond].real()),
                         io::format_number(s[kSecond].imag()), io::format_number(s.norm()), io::format_number(e));
    }
    CommandOutput out;
    if (options.format == "csv") {
      out.text = csv;
    } else {
      out.text = serialize({{"hamiltonian", io::matrix_to_json(H.matrix())},
                            {"times", traj.times},
                            {"born", born},
                            {"psi_re", psi_re},
                            {"psi_im", psi_im},
                            {"energy", energy},
                            {"norm_drift", max_norm_drift(traj)}});
    }
    return out;
  } catch (const Error& e) {
    return failure(e);
  }
}

std::vector<double> parse_grid(const std::string& text) {
  const auto to_double = [&text](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("bad grid '{}'", text));
    }
    return v;
  };
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw Error(ErrorKind::InvalidArgument, fmt::format("bad grid '{}'", text));
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double n = to_double(parts[2]);
    if (!(n >= 1.0) || n != std::floor(n)) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("grid count must be a positive integer in '{}'", text));
    }
    const auto count = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < count; ++i) {
      values.push_back(count == 1 ? start
                                  : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  } else {
    std::istringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) values.push_back(to_double(part));
  }
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "grid is empty");
  return values;
}

CommandOutput cmd_sweep(const SweepOptions& options) {
  try {
    if (options.values.empty()) throw Error(ErrorKind::InvalidArgument, "grid is empty");
    ContextualData base;
    base.marginals.pb = options.pb;
    base.transitions = options.P;
    base.marginals.pa = classical_ftp(options.pb, options.P);
    const auto violations = validate_data(base, options.tol);
    if (!violations.empty()) throw Error(ErrorKind::SchemaError, "fixed pb/P invalid: " + violations.front().message);

    const Pair w = path_weights(options.pb, options.P, kFirst);
    const double classical = w[0] + w[1];
    const double root = std::sqrt(w[0] * w[1]);

    std::string csv = fmt::format("{},theta_x1,lambda_x1,pa_x1,lambda_x2,classification,status\n",
                                  options.grid == SweepGrid::Theta ? "theta" : "pa");
    for (double v : options.values) {
      ContextualData point = base;
      double pa1 = v;
      if (options.grid == SweepGrid::Theta) {
        pa1 = classical + 2.0 * std::cos(v) * root;
      }
      point.marginals.pa = {pa1, 1.0 - pa1};
      const bool in_bounds = pa1 >= 0.0 && pa1 <= 1.0;
      InterferenceProfile profile = interference_profile(point, options.tol);
      if (options.grid == SweepGrid::Theta) {
        // Keep the grid phase itself rather than arccos(cos theta).
        profile.lambda[kFirst] = std::cos(v);
        profile.phases[kFirst] = v;
      }
      const double reported_pa = options.grid == SweepGrid::Theta
                                     ? pa1
                                     : reconstruct_marginal(profile, options.pb, options.P)[kFirst];
      csv += fmt::format("{},{},{},{},{},{},{}\n", io::format_number(v), io::format_number(profile.phases[kFirst]),
                         io::format_number(profile.lambda[kFirst]), io::format_number(reported_pa),
                         io::format_number(profile.lambda[kSecond]), to_string(profile.classification),
                         in_bounds ? "ok" : "out_of_bounds");
    }
    return {kExitOk, csv};
  } catch (const Error& e) {
    return failure(e);
  }
}

}  // namespace qlrep
