#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "experiment/config.hpp"
#include "experiment/result_table.hpp"
#include "experiment/runners.hpp"

namespace flatcone::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string ErrorPointer(const json& document) {
  try {
    ParseConfig(document);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

json Minimal() { return json::parse(R"({"k_list": [5, 10]})"); }

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("flatcone_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path WriteConfig(const std::string& name, const json& document) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << document.dump(2);
    return path;
  }

  int Invoke(const std::string& arguments) {
    const std::string command =
        std::string(FLATCONE_CLI) + " " + arguments + " > " + (dir_ / "stdout").string() + " 2> " + (dir_ / "stderr").string();
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Stderr() const { return ReadFile(dir_ / "stderr"); }

  fs::path dir_;
};

TEST(ConfigTest, ErrorsCarryJsonPointers) {
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": []})")), "/k_list");
  EXPECT_EQ(ErrorPointer(json::object()), "/k_list");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5, 5]})")), "/k_list/1");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5, "x"]})")), "/k_list/1");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "p_list": [2, 0.5]})")), "/p_list/1");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "bogus": 1})")), "/bogus");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "model": {"kind": "pl_potential", "breakpoints": [0],
                                         "slopes": [0, 2]}})")),
            "/model");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "functions": {"a/b": {"breakpoints": [0, 1],
                                         "values": [0, 1]}}})")),
            "/functions/a~1b");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "functions": {"f": {"breakpoints": [0, 0.5],
                                         "values": [0, -1]}}})")),
            "/functions/f/breakpoints");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "functions": {"f": {"breakpoints": [0, 1],
                                         "values": [0, -1]}}, "pairs": [["f", "g"]]})")),
            "/pairs/0/1");
  EXPECT_EQ(ErrorPointer(json::parse(R"({"k_list": [5], "output": {"format": "xml"}})")), "/output/format");
}

TEST(ConfigTest, Defaults) {
  const ExperimentConfig config = ParseConfig(Minimal());
  EXPECT_EQ(config.model.kind(), p1::TorusMetric::Kind::kFubiniStudy);
  EXPECT_EQ(config.filtration.choice, FiltrationChoice::kVanishingOrder);
  EXPECT_EQ(config.p_list, std::vector<double>{2.0});
  EXPECT_EQ(config.k_list, (std::vector<int>{5, 10}));
  EXPECT_EQ(config.normalization, Normalization::kProbability);
  EXPECT_DOUBLE_EQ(config.tolerance, 1e-10);
}

TEST(ConfigTest, ParsesFunctionsExactly) {
  json document = Minimal();
  document["functions"]["f"] = json::parse(R"({"breakpoints": [0, "1/3", 1], "values": [0.5, 0.1, "-1/3"]})");
  document["functions"]["g"] = json::parse(R"({"breakpoints": [0, 1], "values": [0, 0]})");
  document["p_list"] = json::parse(R"([1, "inf"])");
  const ExperimentConfig config = ParseConfig(document);
  ASSERT_EQ(config.functions.size(), 2u);
  EXPECT_EQ(config.functions[0].exact.breakpoints()[1], Rational(1, 3));
  EXPECT_EQ(config.functions[0].exact.values()[1], Rational(1, 10));
  EXPECT_EQ(config.pairs, (std::vector<std::pair<std::string, std::string>>{{"f", "g"}}));
  EXPECT_TRUE(std::isinf(config.p_list[1]));

  document["functions"]["up"] = json::parse(R"({"breakpoints": [0, 1], "values": [0, 1]})");
  EXPECT_EQ(ErrorPointer(document), "/functions/up");
  document["allow_nondecreasing"] = true;
  EXPECT_EQ(ErrorPointer(document), "<accepted>");
}

TEST(ConfigTest, Fixtures) {
  const NANorm standard = ParseNANorm(json::parse(R"({"values": ["1/2", 0]})"), "");
  EXPECT_EQ(standard.values(), (std::vector<double>{0.5, 0.0}));
  const NANorm skew =
      ParseNANorm(json::parse(R"({"basis": [[[1, 0], [0, 0]], [[1, 0], [1, 0]]], "values": [1, 0]})"), "");
  EXPECT_NEAR(skew.basis()(0, 1).real(), 1.0, 0);
  try {
    ParseNANorm(json::parse(R"({"basis": [[[1, 0], [0, 0]], [[2, 0], [0, 0]]], "values": [1, 0]})"), "/x");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/x");
  }
  const DiscreteMeasure sigma =
      ParseDiscreteMeasure(json::parse(R"({"atoms": [0, 1], "weights": [1, 3], "normalization": "raw"})"), "");
  EXPECT_DOUBLE_EQ(sigma.mass(), 4.0);
  const p1::TorusMetric metric =
      ParseTorusMetric(json::parse(R"({"kind": "pl_potential", "breakpoints": [-1, 1], "slopes": [0, 0.5, 1]})"), "");
  EXPECT_DOUBLE_EQ(metric.Potential(1.0), 1.0);
}

TEST(ResultTableTest, CsvFormatting) {
  ResultTable table;
  table.Add({"b", 2, 1.0, 0.1, 0.2, 0.1, false});
  table.Add({"a,\"q\"", 3, std::nullopt, 1.0 / 3.0, 0.0, kInfinity, false});
  table.Add({"b", 1, 2.0, 1e-300, -0.0, std::nan(""), false});
  table.Add({"b", 1, std::nullopt, 0.0, 0.0, 0.0, false});
  table.Sort();
  EXPECT_EQ(table.ToCsv(),
            "experiment,k,p,lhs,rhs,gap\r\n"
            "\"a,\"\"q\"\"\",3,,0.33333333333333331,0,inf\r\n"
            "b,1,,0,0,0\r\n"
            "b,1,2,1e-300,-0,nan\r\n"
            "b,2,1,0.10000000000000001,0.20000000000000001,0.10000000000000001\r\n");
  const std::string jsonl = table.ToJsonLines();
  EXPECT_EQ(jsonl.substr(0, jsonl.find('\n')), R"({"experiment":"a,\"q\"","k":3,"p":null,"lhs":0.3333333333333333,"rhs":0.0,"gap":"inf"})");
}

TEST(ResultTableTest, Violations) {
  ResultTable table;
  table.Add({"checked", 1, 1.0, 1.0, 100.0, 5e-9, true});
  table.Add({"loose", 1, 1.0, 1.0, 1.0, 1.0, false});
  table.Add({"nan", 1, 1.0, 1.0, 1.0, std::nan(""), true});
  ResultRow exact{"exact", 1, std::nullopt, 0.0, 0.0, 0.0, true};
  exact.failed = true;
  table.Add(exact);
  const auto violations = table.Violations(1e-10);
  ASSERT_EQ(violations.size(), 2u);
  EXPECT_EQ(violations[0]->experiment, "nan");
  EXPECT_EQ(violations[1]->experiment, "exact");
  EXPECT_EQ(table.Violations(1e-12).size(), 3u);
}

TEST(ResultTableTest, Hash) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  // Key order in the source text does not matter.
  EXPECT_EQ(ConfigHash(json::parse(R"({"a": 1, "b": 2})")), ConfigHash(json::parse(R"({"b": 2, "a": 1})")));
  EXPECT_NE(ConfigHash(json::parse(R"({"a": 1})")), ConfigHash(json::parse(R"({"a": 2})")));
}

TEST(RunnerTest, IsometryExample) {
  json document = json::parse(R"({
    "functions": {"f": {"breakpoints": [0, 1], "values": [0, -1]}, "g": {"breakpoints": [0, 1], "values": [0, 0]}},
    "p_list": [2], "k_list": [100]})");
  const ResultTable table = RunIsometry(ParseConfig(document));
  const ResultRow& row = table.rows().front();
  EXPECT_EQ(row.experiment, "isometry:f,g");
  EXPECT_NEAR(row.lhs, std::sqrt(201.0 / 600.0), 1e-10);
  EXPECT_NEAR(row.lhs, 0.578792, 5e-7);
  EXPECT_LE(row.gap, 1e-10);
  EXPECT_TRUE(table.Violations(1e-10).empty());
}

TEST(RunnerTest, DhDiagnosticsDecrease) {
  json document = json::parse(R"({"k_list": [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]})");
  const ResultTable table = RunDh(ParseConfig(document));
  double previous = kInfinity;
  int kolmogorov_rows = 0;
  for (const ResultRow& row : table.rows()) {
    if (row.experiment == "dh_kolmogorov") {
      EXPECT_LT(row.lhs, previous);
      previous = row.lhs;
      ++kolmogorov_rows;
    }
    if (row.experiment == "dh_uniform") EXPECT_NEAR(row.lhs, 1.0 / (row.k + 1), 1e-15);
  }
  EXPECT_EQ(kolmogorov_rows, 9);
  EXPECT_TRUE(table.Violations(1e-10).empty());
}

TEST(RunnerTest, QuantiseFubiniStudyIdentity) {
  const ResultTable table = RunQuantise(ParseConfig(json::parse(R"({"k_list": [10, 40, 80]})")));
  for (const ResultRow& row : table.rows()) {
    if (row.experiment != "fs_weight") continue;
    EXPECT_NEAR(row.rhs, std::log(row.k + 1.0) / row.k, 1e-15);
    EXPECT_LE(row.gap, 1e-9);
  }
  EXPECT_TRUE(table.Violations(1e-10).empty());
}

TEST(RunnerTest, SeededSweepsAreDeterministic) {
  const ExperimentConfig config = ParseConfig(json::parse(R"({"k_list": [1], "p_list": [1, 2, "inf"],
                                                              "distortion": {"trials": 20}})"));
  EXPECT_EQ(RunDistortion(config, 5).ToCsv(), RunDistortion(config, 5).ToCsv());
  EXPECT_NE(RunDistortion(config, 5).ToCsv(), RunDistortion(config, 6).ToCsv());
  EXPECT_TRUE(RunDistortion(config, 5).Violations(1e-9).empty());
}

TEST_F(CliRun, ByteReproducible) {
  const fs::path config = WriteConfig("isometry.json", json::parse(R"({
    "functions": {"f": {"breakpoints": [0, 1], "values": [0, -1]}, "g": {"breakpoints": [0, 1], "values": [0, 0]},
                  "h": {"breakpoints": [0, 0.25, 0.5, 1], "values": [1, 0.25, -0.25, -1]}},
    "p_list": [1, 2, 3], "k_list": [5, 20, 40]})"));
  for (const char* format : {"csv", "jsonl"}) {
    const std::string base = std::string("--config ") + config.string() + " --format " + format + " --out ";
    ASSERT_EQ(Invoke("isometry " + base + (dir_ / "a").string()), 0) << Stderr();
    ASSERT_EQ(Invoke("isometry " + base + (dir_ / "b").string()), 0) << Stderr();
    const std::string first = ReadFile(dir_ / "a");
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, ReadFile(dir_ / "b"));
    const json meta = json::parse(ReadFile(dir_ / "a.meta.json"));
    EXPECT_EQ(meta["subcommand"], "isometry");
    EXPECT_EQ(meta["config_hash"], ConfigHash(json::parse(ReadFile(config))));
    EXPECT_EQ(meta["violations"], 0);
  }
}

TEST_F(CliRun, ExitCodes) {
  const fs::path empty = WriteConfig("empty.json", json::parse(R"({"k_list": []})"));
  EXPECT_EQ(Invoke("dh --config " + empty.string() + " --out " + (dir_ / "out.csv").string()), 2);
  EXPECT_NE(Stderr().find("/k_list"), std::string::npos);

  std::ofstream(dir_ / "broken.json") << "{\"k_list\": [";
  EXPECT_EQ(Invoke("dh --config " + (dir_ / "broken.json").string() + " --out " + (dir_ / "out.csv").string()), 2);
  EXPECT_EQ(Invoke("dh --config " + (dir_ / "missing.json").string() + " --out " + (dir_ / "out.csv").string()), 2);
  EXPECT_EQ(Invoke("nonsense --config x --out y"), 2);

  const fs::path ok = WriteConfig("ok.json", json::parse(R"({"k_list": [10, 20]})"));
  EXPECT_EQ(Invoke("dh --config " + ok.string() + " --out " + (dir_ / "out.csv").string()), 0);
  EXPECT_EQ(Invoke("dh --config " + ok.string() + " --out " + (dir_ / "out.csv").string() + " --format xml"), 2);

  // An impossible tolerance turns rounding noise into a property violation;
  // the table is still written.
  const fs::path strict = WriteConfig("strict.json", json::parse(R"({
    "functions": {"f": {"breakpoints": [0, 1], "values": [0, -1]}, "g": {"breakpoints": [0, 1], "values": [0, -0.3]}},
    "p_list": [2], "k_list": [7, 13], "tolerance": 1e-300})"));
  fs::remove(dir_ / "strict.csv");
  EXPECT_EQ(Invoke("ray --config " + strict.string() + " --out " + (dir_ / "strict.csv").string()), 4);
  EXPECT_TRUE(fs::exists(dir_ / "strict.csv"));
}

TEST_F(CliRun, OutputPathFromConfig) {
  json document = json::parse(R"({"k_list": [10, 20]})");
  document["output"] = {{"path", (dir_ / "from_config.jsonl").string()}, {"format", "jsonl"}};
  const fs::path config = WriteConfig("config.json", document);
  ASSERT_EQ(Invoke("dh --config " + config.string()), 0) << Stderr();
  const std::string text = ReadFile(dir_ / "from_config.jsonl");
  EXPECT_EQ(text.substr(0, 2), "{\"");

  const fs::path bare = WriteConfig("bare.json", json::parse(R"({"k_list": [10]})"));
  EXPECT_EQ(Invoke("dh --config " + bare.string()), 2);
}

}  // namespace
}  // namespace flatcone::tools
