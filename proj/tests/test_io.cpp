#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qlrep/error.hpp"
#include "qlrep/io.hpp"

namespace qlrep::io {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("qlrep_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name) << content;
    return path_ / name;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ErrorKind kind_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

const char* kCanonical = R"({"context_id": "canon", "pa": [0.75, 0.25], "pb": [0.5, 0.5],
                             "P": [[0.5, 0.5], [0.5, 0.5]], "provenance": "analytic"})";

const char* kCsv =
    "context,observable,outcome,count\n"
    "context,a,1,750\n"
    "context,a,2,250\n"
    "context,b,1,500\n"
    "context,b,2,500\n"
    "filtration_y1,a,1,300\n"
    "filtration_y1,a,2,200\n"
    "filtration_y2,a,1,100\n"
    "filtration_y2,a,2,400\n";

TEST(LoadInput, CanonicalProbabilities) {
  TempDir dir;
  const auto loaded = load_input(dir.file("canon.json", kCanonical));
  const auto& p = std::get<ProbabilitiesInput>(loaded).data;
  EXPECT_EQ(p.context_id, "canon");
  EXPECT_EQ(p.pa(), (Pair{0.75, 0.25}));
  EXPECT_EQ(p.P()(kSecond, kFirst), 0.5);
  EXPECT_EQ(p.provenance, Provenance::Analytic);
  EXPECT_EQ(p.space, OutcomeSpace{});
}

TEST(LoadInput, CountsCsvByExtension) {
  TempDir dir;
  const auto loaded = load_input(dir.file("c.csv", kCsv));
  const auto& c = std::get<CountsInput>(loaded).counts;
  EXPECT_EQ(c.n_a, (CountPair{750, 250}));
  EXPECT_EQ(c.n_b, (CountPair{500, 500}));
  EXPECT_EQ(c.n_a_given_y[kFirst][kSecond], 100u);
  EXPECT_EQ(c.n_a_given_y[kSecond][kFirst], 200u);
}

TEST(CountsCsv, RoundTrip) {
  std::istringstream in(kCsv);
  const auto parsed = counts_from_csv(in);
  EXPECT_EQ(counts_to_csv(parsed), kCsv);
}

TEST(CountsCsv, NegativeCountNamesRow) {
  std::string text = kCsv;
  text.replace(text.find("filtration_y1,a,2,200"), 21, "filtration_y1,a,2,-5");
  std::istringstream in(text);
  std::string message;
  EXPECT_EQ(kind_of([&] { counts_from_csv(in, "bad.csv"); }, &message), ErrorKind::SchemaError);
  EXPECT_NE(message.find("bad.csv:7"), std::string::npos) << message;
  EXPECT_NE(message.find("negative count"), std::string::npos) << message;
}

TEST(CountsCsv, StructuralErrors) {
  const auto fails = [](const std::string& text) {
    std::istringstream in(text);
    return kind_of([&] { counts_from_csv(in); });
  };
  EXPECT_EQ(fails(""), ErrorKind::SchemaError);
  EXPECT_EQ(fails("ctx,obs,out,n\n"), ErrorKind::SchemaError);
  EXPECT_EQ(fails(std::string(kCsv) + "context,a,1,1\n"), ErrorKind::SchemaError);
  EXPECT_EQ(fails("context,observable,outcome,count\ncontext,a,1,5\n"), ErrorKind::SchemaError);
  EXPECT_EQ(fails(std::string(kCsv) + "context,c,1,1\n"), ErrorKind::SchemaError);
  EXPECT_EQ(fails(std::string(kCsv) + "context,a,3,1\n"), ErrorKind::SchemaError);
}

TEST(CountsCsv, LabelsAccepted) {
  std::string text = kCsv;
  text.replace(text.find("context,a,1,750"), 15, "context,a,x1,750");
  text.replace(text.find("context,b,2,500"), 15, "context,b,y2,500");
  std::istringstream in(text);
  EXPECT_EQ(counts_from_csv(in).counts.n_a[0], 750u);
}

TEST(CountsJson, RoundTrip) {
  std::istringstream in(kCsv);
  CountsInput counts = counts_from_csv(in);
  counts.context_id = "survey";
  counts.counts.seed = 42;
  const json j = to_json(counts);
  const auto back = std::get<CountsInput>(input_from_json(j));
  EXPECT_EQ(back.counts, counts.counts);
  EXPECT_EQ(back.context_id, "survey");
  EXPECT_EQ(to_json(back), j);
}

TEST(CountsJson, NegativeCountNamesField) {
  json j = json::parse(R"({"counts": {"context": {"a": [1, 2], "b": [3, 4]},
                                      "filtration_y1": {"a": [5, -6]}, "filtration_y2": {"a": [7, 8]}}})");
  std::string message;
  EXPECT_EQ(kind_of([&] { input_from_json(j); }, &message), ErrorKind::SchemaError);
  EXPECT_NE(message.find("filtration_y1"), std::string::npos) << message;
  EXPECT_NE(message.find("negative count"), std::string::npos) << message;
}

TEST(ProbabilitiesJson, RoundTripIsExact) {
  ContextualData d;
  d.context_id = "r";
  d.space.a_labels = {"up", "down"};
  d.space.a_values = {0.5, -2.0};
  d.marginals.pa = {0.1 + 0.2, 1 - (0.1 + 0.2)};
  d.marginals.pb = {1.0 / 3.0, 2.0 / 3.0};
  d.transitions.entries = {{{0.123456789012345678, 0.9}, {1 - 0.123456789012345678, 0.1}}};
  d.provenance = Provenance::Empirical;
  const json j = to_json(ProbabilitiesInput{d});
  const auto back = std::get<ProbabilitiesInput>(input_from_json(json::parse(j.dump()))).data;
  EXPECT_EQ(back.pa(), d.pa());
  EXPECT_EQ(back.pb(), d.pb());
  EXPECT_EQ(back.P().entries, d.P().entries);
  EXPECT_EQ(back.space, d.space);
  EXPECT_EQ(back.provenance, Provenance::Empirical);
}

TEST(ProbabilitiesJson, SchemaErrors) {
  EXPECT_EQ(kind_of([] { input_from_json(json::parse(R"({"pa": [0.5, 0.5], "pb": [0.5, 0.5]})")); }),
            ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] {
              input_from_json(json::parse(R"({"pa": [0.5], "pb": [0.5, 0.5], "P": [[1, 0], [0, 1]]})"));
            }),
            ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] {
              input_from_json(json::parse(R"({"pa": ["a", 0.5], "pb": [0.5, 0.5], "P": [[1, 0], [0, 1]]})"));
            }),
            ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] {
              input_from_json(json::parse(
                  R"({"pa": [0.5, 0.5], "pb": [0.5, 0.5], "P": [[1, 0], [0, 1]], "provenance": "guess"})"));
            }),
            ErrorKind::SchemaError);
}

TEST(LoadInput, ParseErrorCarriesOffset) {
  TempDir dir;
  std::string message;
  EXPECT_EQ(kind_of([&] { load_input(dir.file("bad.json", "{\"pa\": [0.5,, 0.5]}")); }, &message),
            ErrorKind::ParseError);
  EXPECT_NE(message.find("byte"), std::string::npos) << message;
  EXPECT_NE(message.find("bad.json"), std::string::npos) << message;
}

TEST(LoadInput, MissingFile) {
  EXPECT_EQ(kind_of([] { load_input("/nonexistent/qlrep.json"); }), ErrorKind::IoError);
}

TEST(LoadInput, ReportDocumentUsesEmbeddedInput) {
  TempDir dir;
  json report = {{"input", json::parse(kCanonical)}, {"classification", "trigonometric"}};
  const auto loaded = load_input(dir.file("report.json", report.dump()));
  EXPECT_EQ(std::get<ProbabilitiesInput>(loaded).data.pa(), (Pair{0.75, 0.25}));
}

TEST(SpecJson, RoundTripAndPresetOverride) {
  const auto spec = preset("opinion-poll");
  const auto back = spec_from_json(to_json(spec));
  EXPECT_EQ(back.joint, spec.joint);
  EXPECT_EQ(back.disturbance.entries, spec.disturbance.entries);
  EXPECT_EQ(back.space, spec.space);
  EXPECT_EQ(back.mode, spec.mode);

  const auto over = spec_from_json(json::parse(R"({"preset": "opinion-poll", "mode": "non-disturbing"})"));
  EXPECT_EQ(over.mode, DisturbanceMode::NonDisturbing);
  EXPECT_EQ(over.joint, spec.joint);

  EXPECT_EQ(kind_of([] { spec_from_json(json::parse(R"({"joint": [[0.5, 0.5], [0.5, 0.5]],
                                                      "disturbance": [[0.5, 0.5], [0.5, 0.5]]})")); }),
            ErrorKind::SchemaError);
}

TEST(MatrixJson, RoundTrip) {
  Matrix2c m;
  m << Complex(1, 0), Complex(0.25, -0.5), Complex(0.25, 0.5), Complex(-3, 0);
  EXPECT_EQ(matrix_from_json(matrix_to_json(m), "m"), m);
  EXPECT_EQ(kind_of([] { matrix_from_json(json::parse(R"({"re": [[1]]})"), "m"); }), ErrorKind::SchemaError);
}

TEST(WriteAtomic, ReplacesContentAndLeavesNoTemp) {
  TempDir dir;
  const auto target = dir.path() / "out.json";
  write_atomic(target, "first");
  write_atomic(target, "second");
  EXPECT_EQ(read_file(target), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_EQ(kind_of([] { write_atomic("/nonexistent/dir/out.json", "x"); }), ErrorKind::IoError);
}

TEST(Checksum, KnownVectors) {
  // FNV-1a 64 reference values.
  EXPECT_EQ(checksum(""), "fnv1a64:cbf29ce484222325");
  EXPECT_EQ(checksum("a"), "fnv1a64:af63dc4c8601ec8c");
  EXPECT_EQ(checksum("foobar"), "fnv1a64:85944171f73967e8");
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(InputFormat, Names) {
  EXPECT_EQ(input_format_from_string("counts-csv"), InputFormat::CountsCsv);
  EXPECT_EQ(input_format_from_string("counts-json"), InputFormat::CountsJson);
  EXPECT_EQ(input_format_from_string("probabilities-json"), InputFormat::ProbabilitiesJson);
  EXPECT_EQ(input_format_from_string("auto"), InputFormat::Auto);
  EXPECT_THROW(input_format_from_string("xml"), Error);
}

}  // namespace
}  // namespace qlrep::io
