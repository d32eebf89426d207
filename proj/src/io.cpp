#include "qlrep/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep::io {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SchemaError, fmt::format("{}: {}", where, what));
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, fmt::format("missing field '{}'", key));
  return *it;
}

std::string child(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : fmt::format("{}.{}", where, key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(where, "number is not finite");
  return v;
}

Pair number_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_error(where, "expected an array of 2 numbers");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

std::array<Pair, 2> number_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_error(where, "expected a 2x2 array");
  return {number_pair(j[0], where + "[0]"), number_pair(j[1], where + "[1]")};
}

Count count(const json& j, const std::string& where) {
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) {
    schema_error(where, fmt::format("negative count {}", j.get<std::int64_t>()));
  }
  if (!j.is_number_unsigned()) schema_error(where, "expected a nonnegative integer count");
  return j.get<Count>();
}

CountPair count_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_error(where, "expected an array of 2 counts");
  return {count(j[0], where + "[0]"), count(j[1], where + "[1]")};
}

std::array<std::string, 2> label_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    schema_error(where, "expected an array of 2 strings");
  }
  return {j[0].get<std::string>(), j[1].get<std::string>()};
}

std::string optional_string(const json& j, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) schema_error(key, "expected a string");
  return j[key].get<std::string>();
}

bool looks_like_counts(const json& doc) { return doc.is_object() && doc.contains("counts"); }

}  // namespace

InputFormat input_format_from_string(const std::string& s) {
  if (s == "auto") return InputFormat::Auto;
  if (s == "counts-json") return InputFormat::CountsJson;
  if (s == "counts-csv") return InputFormat::CountsCsv;
  if (s == "probabilities-json") return InputFormat::ProbabilitiesJson;
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown input format '{}'", s));
}

json to_json(const OutcomeSpace& space) {
  return {{"a_labels", space.a_labels},
          {"b_labels", space.b_labels},
          {"a_values", space.a_values},
          {"b_values", space.b_values}};
}

OutcomeSpace space_from_json(const json& j, const std::string& where) {
  OutcomeSpace space;
  if (!j.is_object()) schema_error(where, "expected an object");
  if (j.contains("a_labels")) space.a_labels = label_pair(j["a_labels"], child(where, "a_labels"));
  if (j.contains("b_labels")) space.b_labels = label_pair(j["b_labels"], child(where, "b_labels"));
  if (j.contains("a_values")) space.a_values = number_pair(j["a_values"], child(where, "a_values"));
  if (j.contains("b_values")) space.b_values = number_pair(j["b_values"], child(where, "b_values"));
  if (space.a_labels[0] == space.a_labels[1]) schema_error(child(where, "a_labels"), "labels must be distinct");
  if (space.b_labels[0] == space.b_labels[1]) schema_error(child(where, "b_labels"), "labels must be distinct");
  if (space.a_values[0] == space.a_values[1]) schema_error(child(where, "a_values"), "values must be distinct");
  if (space.b_values[0] == space.b_values[1]) schema_error(child(where, "b_values"), "values must be distinct");
  return space;
}

json to_json(const CountsInput& input) {
  const auto& c = input.counts;
  const auto column = [&c](Outcome y) { return CountPair{c.n_a_given_y[0][y], c.n_a_given_y[1][y]}; };
  json doc = {{"context_id", input.context_id},
              {"space", to_json(input.space)},
              {"counts",
               {{"context", {{"a", c.n_a}, {"b", c.n_b}}},
                {"filtration_y1", {{"a", column(kFirst)}}},
                {"filtration_y2", {{"a", column(kSecond)}}}}}};
  if (c.seed) doc["seed"] = *c.seed;
  return doc;
}

json to_json(const ProbabilitiesInput& input) {
  const auto& d = input.data;
  return {{"context_id", d.context_id},
          {"space", to_json(d.space)},
          {"pa", d.pa()},
          {"pb", d.pb()},
          {"P", d.P().entries},
          {"provenance", to_string(d.provenance)}};
}

json to_json(const LoadedInput& input) {
  return std::visit([](const auto& v) { return to_json(v); }, input);
}

namespace {

CountsInput counts_from_json(const json& doc) {
  CountsInput in;
  in.context_id = optional_string(doc, "context_id", "");
  in.space = doc.contains("space") ? space_from_json(doc["space"], "space") : OutcomeSpace{};
  const json& counts = field(doc, "counts", "");
  const json& context = field(counts, "context", "counts");
  in.counts.n_a = count_pair(field(context, "a", "counts.context"), "counts.context.a");
  in.counts.n_b = count_pair(field(context, "b", "counts.context"), "counts.context.b");
  const char* filtrations[] = {"filtration_y1", "filtration_y2"};
  for (auto y : kOutcomes) {
    const std::string where = child("counts", filtrations[y]);
    const json& f = field(counts, filtrations[y], "counts");
    const CountPair a = count_pair(field(f, "a", where), child(where, "a"));
    in.counts.n_a_given_y[kFirst][y] = a[0];
    in.counts.n_a_given_y[kSecond][y] = a[1];
  }
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_unsigned()) schema_error("seed", "expected a nonnegative integer");
    in.counts.seed = doc["seed"].get<std::uint64_t>();
  }
  return in;
}

ProbabilitiesInput probabilities_from_json(const json& doc) {
  ProbabilitiesInput in;
  auto& d = in.data;
  d.context_id = optional_string(doc, "context_id", "");
  d.space = doc.contains("space") ? space_from_json(doc["space"], "space") : OutcomeSpace{};
  d.marginals.pa = number_pair(field(doc, "pa", ""), "pa");
  d.marginals.pb = number_pair(field(doc, "pb", ""), "pb");
  d.transitions.entries = number_matrix(field(doc, "P", ""), "P");
  d.provenance = provenance_from_string(optional_string(doc, "provenance", "analytic"));
  return in;
}

}  // namespace

LoadedInput input_from_json(const json& doc, InputFormat format) {
  if (!doc.is_object()) schema_error("<root>", "expected an object");
  // Analysis reports carry their normalized input.
  if (doc.contains("input") && doc.contains("classification")) {
    return input_from_json(doc["input"], format);
  }
  switch (format) {
    case InputFormat::CountsJson: return counts_from_json(doc);
    case InputFormat::ProbabilitiesJson: return probabilities_from_json(doc);
    case InputFormat::CountsCsv:
      throw Error(ErrorKind::InvalidArgument, "counts-csv is not a JSON format");
    case InputFormat::Auto: break;
  }
  if (looks_like_counts(doc)) return counts_from_json(doc);
  return probabilities_from_json(doc);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CountsInput counts_from_csv(std::istream& in, const std::string& source) {
  CountsInput out;
  const OutcomeSpace space;
  std::string line;
  std::size_t line_no = 0;
  const auto where = [&] { return fmt::format("{}:{}", source, line_no); };

  if (!std::getline(in, line)) schema_error(source, "empty file; header row is mandatory");
  ++line_no;
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
  const auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"context", "observable", "outcome", "count"}) {
    schema_error(where(), "header must be 'context,observable,outcome,count'");
  }

  // 0: a under C, 1: b under C, 2 + y: a under C_y
  std::array<std::array<bool, 2>, 4> seen{};
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) schema_error(where(), fmt::format("expected 4 columns, found {}", cells.size()));
    const std::string& context = cells[0];
    const std::string& observable = cells[1];

    std::size_t slot = 0;
    if (context == "context" && observable == "a") {
      slot = 0;
    } else if (context == "context" && observable == "b") {
      slot = 1;
    } else if ((context == "filtration_y1" || context == "filtration_y2") && observable == "a") {
      slot = context == "filtration_y1" ? 2 : 3;
    } else {
      schema_error(where(), fmt::format("unsupported context/observable '{}/{}'", context, observable));
    }

    const auto& labels = slot == 1 ? space.b_labels : space.a_labels;
    std::size_t outcome = 0;
    if (cells[2] == "1" || cells[2] == labels[0]) {
      outcome = 0;
    } else if (cells[2] == "2" || cells[2] == labels[1]) {
      outcome = 1;
    } else {
      schema_error(where(), fmt::format("unknown outcome '{}'", cells[2]));
    }

    const std::string& text = cells[3];
    if (!text.empty() && text[0] == '-') schema_error(where(), fmt::format("negative count {}", text));
    Count value = 0;
    std::size_t used = 0;
    try {
      value = std::stoull(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) schema_error(where(), fmt::format("count '{}' is not an integer", text));
    if (seen[slot][outcome]) schema_error(where(), "duplicate row");
    seen[slot][outcome] = true;

    switch (slot) {
      case 0: out.counts.n_a[outcome] = value; break;
      case 1: out.counts.n_b[outcome] = value; break;
      default: out.counts.n_a_given_y[outcome][slot - 2] = value; break;
    }
  }
  for (std::size_t slot = 0; slot < seen.size(); ++slot) {
    if (!seen[slot][0] || !seen[slot][1]) {
      schema_error(source, fmt::format("expected 8 count rows; row group {} incomplete", slot + 1));
    }
  }
  return out;
}

std::string counts_to_csv(const CountsInput& input) {
  const auto& c = input.counts;
  std::string out = "context,observable,outcome,count\n";
  for (std::size_t x = 0; x < 2; ++x) out += fmt::format("context,a,{},{}\n", x + 1, c.n_a[x]);
  for (std::size_t y = 0; y < 2; ++y) out += fmt::format("context,b,{},{}\n", y + 1, c.n_b[y]);
  for (std::size_t y = 0; y < 2; ++y) {
    for (std::size_t x = 0; x < 2; ++x) {
      out += fmt::format("filtration_y{},a,{},{}\n", y + 1, x + 1, c.n_a_given_y[x][y]);
    }
  }
  return out;
}

LoadedInput load_input(const std::filesystem::path& path, InputFormat format) {
  const std::string text = read_file(path);
  if (format == InputFormat::Auto && path.extension() == ".csv") format = InputFormat::CountsCsv;
  if (format == InputFormat::CountsCsv) {
    std::istringstream in(text);
    return counts_from_csv(in, path.string());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, fmt::format("{}: byte {}: {}", path.string(), e.byte, e.what()));
  }
  try {
    return input_from_json(doc, format);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

json to_json(const EnsembleSpec& spec) {
  return {{"context_id", spec.context_id},
          {"space", to_json(spec.space)},
          {"joint", spec.joint},
          {"disturbance", spec.disturbance.entries},
          {"mode", to_string(spec.mode)}};
}

EnsembleSpec spec_from_json(const json& j) {
  EnsembleSpec spec;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) schema_error("preset", "expected a string");
    spec = preset(j["preset"].get<std::string>());
  }
  if (j.contains("context_id")) spec.context_id = optional_string(j, "context_id", "");
  if (j.contains("space")) spec.space = space_from_json(j["space"], "space");
  if (j.contains("joint") || !j.contains("preset")) spec.joint = number_matrix(field(j, "joint", ""), "joint");
  if (j.contains("disturbance") || !j.contains("preset")) {
    spec.disturbance.entries = number_matrix(field(j, "disturbance", ""), "disturbance");
  }
  if (j.contains("mode")) spec.mode = mode_from_string(optional_string(j, "mode", "disturbing"));
  try {
    validate_spec(spec);
  } catch (const Error& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
  return spec;
}

json matrix_to_json(const Matrix2c& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < 2; ++i) {
    re.push_back({m(i, 0).real(), m(i, 1).real()});
    im.push_back({m(i, 0).imag(), m(i, 1).imag()});
  }
  return {{"re", re}, {"im", im}};
}

Matrix2c matrix_from_json(const json& j, const std::string& where) {
  const auto re = number_matrix(field(j, "re", where), child(where, "re"));
  std::array<Pair, 2> im{};
  if (j.contains("im")) im = number_matrix(j["im"], child(where, "im"));
  Matrix2c m;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index k = 0; k < 2; ++k) {
      const auto r = static_cast<std::size_t>(i);
      const auto c = static_cast<std::size_t>(k);
      m(i, k) = Complex(re[r][c], im[r][c]);
    }
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::IoError, fmt::format("short write to '{}'", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::IoError, fmt::format("cannot rename onto '{}'", path.string()));
  }
}

std::string checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("fnv1a64:{:016x}", h);
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace qlrep::io
