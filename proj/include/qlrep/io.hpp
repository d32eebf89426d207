#pragma once

// File formats: counts (JSON and CSV), probabilities (JSON), ensemble specs,
// and the small helpers shared by the command implementations.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "qlrep/complex_repr.hpp"
#include "qlrep/ensemble.hpp"

namespace qlrep::io {

using nlohmann::json;

enum class InputFormat { Auto, CountsJson, CountsCsv, ProbabilitiesJson };

InputFormat input_format_from_string(const std::string& s);

struct CountsInput {
  std::string context_id;
  OutcomeSpace space;
  CountTable counts;
};

struct ProbabilitiesInput {
  ContextualData data;
};

using LoadedInput = std::variant<CountsInput, ProbabilitiesInput>;

/// Reads and schema-checks an input file. A JSON file that is itself an
/// analysis report is accepted and its embedded "input" document is used.
/// Throws Error(ParseError | SchemaError | IoError) with a file location.
LoadedInput load_input(const std::filesystem::path& path, InputFormat format = InputFormat::Auto);

LoadedInput input_from_json(const json& doc, InputFormat format = InputFormat::Auto);

/// counts-csv: header "context,observable,outcome,count"; context is one of
/// context, filtration_y1, filtration_y2; outcome is 1, 2, or a label of the
/// default outcome space.
CountsInput counts_from_csv(std::istream& in, const std::string& source = "<csv>");
std::string counts_to_csv(const CountsInput& input);

json to_json(const OutcomeSpace& space);
OutcomeSpace space_from_json(const json& j, const std::string& where);

json to_json(const CountsInput& input);
json to_json(const ProbabilitiesInput& input);
json to_json(const LoadedInput& input);

json to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const json& j);

json matrix_to_json(const Matrix2c& m);
Matrix2c matrix_from_json(const json& j, const std::string& where);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// "fnv1a64:" followed by 16 hex digits.
std::string checksum(std::string_view bytes);

/// 17 significant digits.
std::string format_number(double v);

}  // namespace qlrep::io
