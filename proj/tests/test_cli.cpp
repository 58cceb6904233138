#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "thoma_rsk/io.hpp"

using thoma::json;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation cli(std::vector<std::string> args) {
  args.insert(args.begin(), "thoma-rsk");
  std::ostringstream out, err;
  const int code = thoma::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("thoma_rsk_test_" + name);
  std::ofstream(path) << content;
  return path;
}

// Command line that reproduces a document from its echoed config.
std::vector<std::string> args_from_echo(const json& doc) {
  std::vector<std::string> args{doc.at("command").get<std::string>()};
  for (const auto& [key, value] : doc.at("config").items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    if (value.is_array()) {
      if (value.empty()) continue;
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + v.dump();
      args.push_back("--" + key);
      args.push_back(joined);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

class SeedEnv : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv("THOMA_RSK_SEED"); }
  void TearDown() override { unsetenv("THOMA_RSK_SEED"); }
};

}  // namespace

TEST(Exact, TwoLetterCsv) {
  Invocation r = cli({"exact", "--alphas", "0.6", "--betas", "0.4", "--n", "2", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n2;0.6\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\n1,1;0.4\n"), std::string::npos) << r.out;
}

TEST(Exact, SingleRowLetter) {
  Invocation r = cli({"exact", "--alphas", "1", "--n", "3", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("partition;probability\n3;1\n#"), std::string::npos) << r.out;
}

TEST(Exact, JsonDocument) {
  Invocation r = cli({"exact", "--alphas", "0.5,0.3", "--betas", "0.2", "--n", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["command"], "exact");
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_LE(doc["results"]["coherency_residual"].get<double>(), 1e-10);
  EXPECT_EQ(doc["config"]["order"], "x1<x2<y1<G");
  EXPECT_FALSE(doc["build"].get<std::string>().empty());
}

TEST(Exact, AboveTheCapIsAUsageError) {
  Invocation r = cli({"exact", "--n", "40"});
  EXPECT_EQ(r.code, thoma::cli::kExitUsage);
  EXPECT_NE(r.err.find("cap"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Usage, BadInputsExitTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"exact"}).code, 2);
  EXPECT_EQ(cli({"exact", "--n", "2", "--bogus"}).code, 2);
  EXPECT_EQ(cli({"exact", "--n", "2", "--alphas", "0.5"}).code, 2);
  EXPECT_EQ(cli({"exact", "--n", "2", "--alphas", "0.5,0.5", "--order", "x1<x3"}).code, 2);
  EXPECT_EQ(cli({"exact", "--n", "2", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"walk", "--q1", "0.5", "--q3", "0.4"}).code, 2);
  EXPECT_EQ(cli({"clt", "--alphas", "0.5,0.5", "--K", "2", "--L", "0", "--trials", "10"}).code, 2);
  EXPECT_EQ(cli({"exact", "--n", "2", "--params", "/nonexistent/params.json"}).code, 2);
}

TEST(Usage, HelpExitsZero) {
  Invocation r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("exact"), std::string::npos);
}

TEST(Params, FromFile) {
  auto path = temp_file("params.json", R"({"alphas": [0.6], "betas": [0.4]})");
  Invocation r = cli({"exact", "--params", path.string(), "--n", "2", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n2;0.6\n"), std::string::npos);
  EXPECT_EQ(cli({"exact", "--params", path.string(), "--alphas", "1", "--n", "2"}).code, 2);
  auto bad = temp_file("bad.json", R"({"alphas": [0.6], "extra": 1})");
  EXPECT_EQ(cli({"exact", "--params", bad.string(), "--n", "2"}).code, 2);
}

TEST(Sample, FrequencyMatchesExactMeasure) {
  Invocation r = cli({"sample", "--alphas", "0.6", "--betas", "0.4", "--n", "2", "--trials", "100000", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  bool found = false;
  for (const auto& row : doc["results"]["histogram"]) {
    if (row["partition"] == json::array({2})) {
      found = true;
      EXPECT_NEAR(row["frequency"].get<double>(), 0.6, 4.0 * row["se"].get<double>());
      EXPECT_EQ(row["exact"].get<double>(), 0.6);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Sample, ZeroTrials) {
  Invocation r = cli({"sample", "--trials", "0", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::size_t data = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++data;
  EXPECT_EQ(data, 1u) << r.out;  // header only
}

TEST(Sample, PerTrialShapes) {
  Invocation r = cli({"sample", "--n", "5", "--trials", "4", "--per-trial", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("trial;partition\n0;"), std::string::npos) << r.out;
}

TEST(Sample, PoissonLength) {
  Invocation r = cli({"sample", "--nu", "3", "--trials", "200"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["config"]["nu"], 3.0);
}

TEST(Determinism, SameSeedSameBytes) {
  std::vector<std::string> args{"sample", "--n", "12", "--trials", "3000", "--seed", "17"};
  EXPECT_EQ(cli(args).out, cli(args).out);
  auto other = args;
  other.back() = "18";
  EXPECT_NE(cli(args).out, cli(other).out);
}

TEST(Determinism, WorkerCountDoesNotChangeOutput) {
  for (const char* fmt : {"json", "csv"}) {
    std::vector<std::string> base{"clt", "--n", "100", "--trials", "2000", "--format", fmt};
    auto a = base, b = base;
    a.insert(a.end(), {"--workers", "1"});
    b.insert(b.end(), {"--workers", "5"});
    Invocation ra = cli(a), rb = cli(b);
    EXPECT_EQ(ra.out, rb.out);
    EXPECT_FALSE(ra.out.empty());
  }
}

TEST(Determinism, EchoedConfigReproducesTheOutput) {
  const std::vector<std::vector<std::string>> runs{
      {"sample", "--alphas", "0.5,0.3", "--betas", "0.2", "--n", "8", "--trials", "500", "--seed", "4"},
      {"sample", "--nu", "4.5", "--trials", "300", "--per-trial", "--order", "G<y1<x2<x1"},
      {"clt", "--n", "50", "--trials", "300", "--seed", "9"},
      {"drift", "--n-grid", "10,40", "--trials", "200", "--compare-order", "y1<x2<x1<G", "--independence-n", "20"},
      {"lln", "--n-grid", "20,80", "--trials", "100", "--alphas", "0.7", "--betas", "0.3", "--K", "1"},
      {"poisson", "--nu", "50", "--trials", "300", "--nu-grid", "10,20"},
      {"walk", "--q1", "0.1", "--q3", "0.8", "--n", "30", "--trials", "100", "--series"},
      {"exact", "--alphas", "0.4,0.25", "--betas", "0.2", "--gamma", "0.15", "--n", "5"},
  };
  for (const auto& args : runs) {
    Invocation first = cli(args);
    ASSERT_LE(first.code, 1) << args[0] << ": " << first.err;
    json doc = json::parse(first.out);
    Invocation again = cli(args_from_echo(doc));
    EXPECT_EQ(again.out, first.out) << args[0];
    EXPECT_EQ(again.code, first.code);
  }
}

TEST_F(SeedEnv, EnvironmentSeedIsAFallback) {
  setenv("THOMA_RSK_SEED", "123", 1);
  json doc = json::parse(cli({"sample", "--n", "3", "--trials", "5"}).out);
  EXPECT_EQ(doc["config"]["seed"], 123);
  doc = json::parse(cli({"sample", "--n", "3", "--trials", "5", "--seed", "7"}).out);
  EXPECT_EQ(doc["config"]["seed"], 7);
  unsetenv("THOMA_RSK_SEED");
  doc = json::parse(cli({"sample", "--n", "3", "--trials", "5"}).out);
  EXPECT_EQ(doc["config"]["seed"], 0);
}

TEST_F(SeedEnv, FlagsOverConfigOverDefaults) {
  auto path = temp_file("config.toml", "[sample]\nn = 6\ntrials = 11\nseed = 5\nalphas = [0.7]\nbetas = [0.3]\n");
  json doc = json::parse(cli({"--config", path.string(), "sample", "--trials", "3"}).out);
  EXPECT_EQ(doc["config"]["n"], 6);
  EXPECT_EQ(doc["config"]["trials"], 3);
  EXPECT_EQ(doc["config"]["seed"], 5);
  EXPECT_EQ(doc["config"]["alphas"], json::array({0.7}));
  EXPECT_EQ(doc["config"]["gamma"], 0.0);
  setenv("THOMA_RSK_SEED", "99", 1);
  doc = json::parse(cli({"--config", path.string(), "sample"}).out);
  EXPECT_EQ(doc["config"]["seed"], 5);
}

TEST(Config, UnknownKeysAreRejected) {
  auto path = temp_file("bad.toml", "[sample]\nbogus = 1\n");
  EXPECT_EQ(cli({"--config", path.string(), "sample"}).code, 2);
  EXPECT_EQ(cli({"--config", "/nonexistent/config.toml", "sample"}).code, 2);
}

TEST(Output, FileAndProgress) {
  auto path = std::filesystem::temp_directory_path() / "thoma_rsk_test_out.json";
  std::filesystem::remove(path);
  Invocation r = cli({"sample", "--n", "4", "--trials", "10", "--output", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("[sample]"), std::string::npos);
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(json::parse(content.str())["command"], "sample");
  Invocation quiet = cli({"sample", "--n", "4", "--trials", "10", "--quiet"});
  EXPECT_TRUE(quiet.err.empty());
}

TEST(Walk, ReportsTheBound) {
  Invocation r = cli({"walk", "--q1", "0.2", "--q3", "0.5", "--n", "1000"});
  ASSERT_EQ(r.code, 0);
  json doc = json::parse(r.out);
  EXPECT_NEAR(doc["results"]["bound"].get<double>(), 20.0 / 9.0, 1e-15);
  EXPECT_LE(doc["results"]["expectation"].get<double>(), doc["results"]["bound"].get<double>());
}

TEST(Walk, SimulationAgreesWithExactValue) {
  Invocation r = cli({"walk", "--q1", "0.2", "--q3", "0.5", "--n", "200", "--trials", "20000"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Checks, FailureExitsOneAndNamesTheCheck) {
  Invocation r = cli({"clt", "--alphas", "1", "--K", "1", "--L", "0", "--n", "50", "--trials", "20", "--ks-threshold", "0"});
  EXPECT_EQ(r.code, thoma::cli::kExitCheckFailed);
  EXPECT_NE(r.err.find("check failed: marginal KS"), std::string::npos) << r.err;
  EXPECT_FALSE(json::parse(r.out)["passed"].get<bool>());
}

TEST(Checks, DeterministicDiagramPasses) {
  EXPECT_EQ(cli({"clt", "--alphas", "1", "--K", "1", "--L", "0", "--n", "30", "--trials", "20"}).code, 0);
  EXPECT_EQ(cli({"drift", "--alphas", "1", "--K", "1", "--L", "0", "--trials", "20"}).code, 0);
  EXPECT_EQ(cli({"lln", "--alphas", "1", "--K", "1", "--L", "0", "--trials", "20"}).code, 0);
}

TEST(Checks, CsvCarriesTheChecks) {
  Invocation r = cli({"lln", "--n-grid", "6400", "--trials", "200", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# check PASS scaled lengths"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("# n-grid=6400"), std::string::npos);
}

TEST(Lemmas, FullSuitePasses) {
  Invocation r = cli({"lemmas", "--exhaustive-cap", "8"});
  EXPECT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  EXPECT_GE(doc["checks"].size(), 25u);
  EXPECT_EQ(cli({"lemmas", "--exhaustive-cap", "11"}).code, 2);
}
