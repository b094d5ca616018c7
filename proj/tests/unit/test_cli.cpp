#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/cli.hpp"
#include "cli/results_io.hpp"
#include "json.hpp"
#include "shrinkcov/error.hpp"

namespace shrinkcov::cli {
namespace {

namespace fs = std::filesystem;

CliConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "shrinkcov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "shrinkcov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("shrinkcov_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// --- n grid ----------------------------------------------------------------------

TEST(NGrid, Parsing) {
  EXPECT_EQ(parse_n_grid("6:30:2").values().size(), 13u);
  EXPECT_EQ(parse_n_grid("6:31:2").values().back(), 30);
  EXPECT_EQ(parse_n_grid("7").values(), std::vector<Index>{7});
  EXPECT_EQ(parse_n_grid("3:5").values(), (std::vector<Index>{3, 4, 5}));
  for (const char* bad : {"", "a:b", "5:3", "0:4", "1:2:0", "1:2:3:4", "2.5"}) {
    EXPECT_THROW(parse_n_grid(bad), UsageError) << bad;
  }
}

// --- parse_args -------------------------------------------------------------------

TEST(ParseArgs, Figure2Config) {
  const CliConfig c = parse({"mse", "--model", "ar1", "--r", "0.5", "--p", "100", "--n",
                             "6:30:2", "--trials", "5000", "--seed", "42", "--out",
                             "fig2.csv"});
  EXPECT_EQ(c.subcommand, Subcommand::Mse);
  EXPECT_EQ(c.model, "ar1");
  EXPECT_EQ(c.r, 0.5);
  EXPECT_EQ(c.p, 100);
  EXPECT_EQ(c.n.min, 6);
  EXPECT_EQ(c.n.max, 30);
  EXPECT_EQ(c.n.step, 2);
  EXPECT_EQ(c.trials, 5000);
  EXPECT_EQ(c.seed, 42u);
  ASSERT_TRUE(c.output.has_value());
  EXPECT_EQ(*c.output, "fig2.csv");
  EXPECT_EQ(c.format, OutputFormat::Csv);
  EXPECT_EQ(c.methods.size(), 4u);
}

TEST(ParseArgs, MseDefaults) {
  const CliConfig c = parse({"mse"});
  EXPECT_EQ(c.p, 100);
  EXPECT_EQ(c.trials, 5000);
  EXPECT_EQ(c.n.values().front(), 6);
  EXPECT_EQ(c.n.values().back(), 30);
  EXPECT_EQ(c.seed, 20100u);
}

TEST(ParseArgs, VerifyConfig) {
  const CliConfig c = parse({"verify", "--check", "haar", "--p", "3", "--n", "5",
                             "--trials", "100000"});
  EXPECT_EQ(c.subcommand, Subcommand::Verify);
  EXPECT_EQ(c.check, VerifyCheck::Haar);
  EXPECT_EQ(c.p, 3);
  EXPECT_EQ(c.n.values(), std::vector<Index>{5});
  EXPECT_EQ(c.trials, 100000);
  EXPECT_EQ(c.model, "identity");
}

TEST(ParseArgs, VerifyDiagonal) {
  const CliConfig c = parse({"verify", "--check", "wishart", "--diag", "2,1"});
  EXPECT_EQ(c.model, "diag");
  EXPECT_EQ(c.p, 2);
  Matrix want = Matrix::Zero(2, 2);
  want.diagonal() << 2, 1;
  EXPECT_EQ(c.covariance(), want);
}

TEST(ParseArgs, BeamformDefaultsAreReferenceScenario) {
  const CliConfig c = parse({"beamform"});
  EXPECT_EQ(c.subcommand, Subcommand::Beamform);
  EXPECT_EQ(c.p, 10);
  EXPECT_EQ(c.n.values().front(), 10);
  EXPECT_EQ(c.n.values().back(), 60);
  EXPECT_EQ(c.n.values().size(), 11u);
  EXPECT_EQ(c.trials, 5000);
  EXPECT_EQ(c.signal_db, 10.0);
  EXPECT_EQ(c.interference_db, 15.0);
  EXPECT_EQ(c.theta_s_deg, 20.0);
  EXPECT_EQ(c.theta_i1_deg, -30.0);
  EXPECT_EQ(c.gamma, 0.9);
  EXPECT_FALSE(c.coefficient_dim.has_value());
}

TEST(ParseArgs, UsageErrors) {
  const std::vector<std::vector<std::string>> bad = {
      {"mse", "--r", "1.5"},
      {"mse", "--r", "-1"},
      {"mse", "--model", "fbm", "--H", "0.4"},
      {"mse", "--model", "bogus"},
      {"mse", "--methods", "OAS,Nope"},
      {"mse", "--trials", "0"},
      {"mse", "--p", "1"},
      {"mse", "--format", "xml"},
      {"mse", "--n", "10:5"},
      {"mse", "--unknown"},
      {},
      {"verify"},
      {"verify", "--check", "magic"},
      {"verify", "--check", "haar", "--trials", "500"},
      {"verify", "--check", "wishart", "--diag", "1,-2"},
      {"verify", "--check", "wishart", "--model", "diag"},
      {"beamform", "--coefficient-dim", "1"},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_THROW(parse(args), UsageError) << joined;
  }
}

TEST(ParseArgs, UsageErrorNamesFlag) {
  try {
    parse({"mse", "--r", "1.5"});
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("--r"), std::string::npos);
  }
}

// --- main_entry / run -------------------------------------------------------------

TEST(MainEntry, ExitCodes) {
  EXPECT_EQ(invoke({"mse", "--r", "1.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--bogus"}).code, kExitUsage);
  const Outcome help = invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("mse"), std::string::npos);
}

TEST(Run, MseCsvSchemaAndDeterminism) {
  TempDir dir;
  const fs::path a = dir.file("a.csv"), b = dir.file("b.csv");
  const std::vector<std::string> base = {"mse", "--p", "12", "--n", "4:8:2", "--trials",
                                         "40", "--seed", "5", "--methods",
                                         "Oracle,OAS,RBLW,LW,SampleOnly"};
  auto with_out = [&](const fs::path& path, const std::string& workers) {
    auto args = base;
    args.insert(args.end(), {"--out", path.string(), "--workers", workers});
    return args;
  };
  const Outcome run_a = invoke(with_out(a, "1"));
  ASSERT_EQ(run_a.code, kExitOk) << run_a.err;
  ASSERT_EQ(invoke(with_out(b, "3")).code, kExitOk);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,method,mean_mse,ci95,mean_rho");
  const ExperimentResult parsed = parse_csv(text);
  EXPECT_EQ(parsed.rows.size(), 15u);
  EXPECT_NE(run_a.out.find("n = 6"), std::string::npos);
  EXPECT_NE(run_a.out.find("RBLW"), std::string::npos);
}

TEST(Run, BeamformCsvSchema) {
  TempDir dir;
  const fs::path out = dir.file("beam.csv");
  const Outcome r = invoke({"beamform", "--n", "10:20:10", "--trials", "30", "--out",
                            out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,method,mean_sinr_db,ci95");
  EXPECT_EQ(parse_csv(text).rows.size(), 10u);
}

TEST(Run, JsonMirrorsRows) {
  TempDir dir;
  const fs::path out = dir.file("r.json");
  const Outcome r = invoke({"mse", "--model", "fbm", "--H", "0.7", "--p", "10", "--n",
                            "5", "--trials", "20", "--format", "json", "--out",
                            out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(doc["config"]["subcommand"], "mse");
  EXPECT_EQ(doc["config"]["model"], "fbm");
  EXPECT_EQ(doc["config"]["H"], 0.7);
  ASSERT_EQ(doc["results"].size(), 4u);
  EXPECT_EQ(doc["results"][0]["method"], "Oracle");
  EXPECT_TRUE(doc["results"][0].contains("mean_mse"));
  EXPECT_TRUE(doc["results"][0].contains("mean_rho"));
}

TEST(Run, VerifyPassAndFailExitCodes) {
  const Outcome pass = invoke({"verify", "--check", "haar", "--p", "3", "--n", "5",
                               "--trials", "20000"});
  EXPECT_EQ(pass.code, kExitOk) << pass.out;
  EXPECT_NE(pass.out.find("PASS"), std::string::npos);

  TempDir dir;
  const fs::path out = dir.file("v.csv");
  const Outcome fail = invoke({"verify", "--check", "wishart", "--p", "3", "--n", "4",
                               "--trials", "10000", "--z", "1e-9", "--out",
                               out.string()});
  EXPECT_EQ(fail.code, kExitVerificationFailed);
  EXPECT_NE(fail.out.find("FAIL"), std::string::npos);
  EXPECT_NE(fail.out.find(" z "), std::string::npos);
  const std::string text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), "check,n,quantity,estimate,target,std_error,z,pass");
}

TEST(Run, UnwritableOutputIsRuntimeError) {
  const std::string path = "/nonexistent-dir/sub/out.csv";
  const Outcome r = invoke({"mse", "--p", "5", "--n", "4", "--trials", "5", "--out", path});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find(path), std::string::npos);
}

// --- results_io -------------------------------------------------------------------

TEST(ResultsIo, FormatNumber) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(428.9972), "428.9972");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(HUGE_VAL), "inf");
  EXPECT_EQ(format_number(-HUGE_VAL), "-inf");
}

TEST(ResultsIo, CsvRoundTrip) {
  ExperimentResult r;
  r.metric = Metric::Mse;
  r.rows.push_back({20, Method::Oracle, 428.99721234567891, 1.2345678901234, 0.26751, 5000, 0});
  r.rows.push_back({20, Method::OAS, 1.0 / 3.0, 0.0, 0.30431, 5000, 0});
  const ExperimentResult back = parse_csv(to_csv(r));
  ASSERT_EQ(back.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.rows[i].n, r.rows[i].n);
    EXPECT_EQ(back.rows[i].method, r.rows[i].method);
    EXPECT_NEAR(back.rows[i].mean, r.rows[i].mean, 1e-12 * std::abs(r.rows[i].mean));
    EXPECT_NEAR(back.rows[i].ci95, r.rows[i].ci95, 1e-12 * std::abs(r.rows[i].ci95));
    EXPECT_NEAR(back.rows[i].mean_rho, r.rows[i].mean_rho, 1e-12);
  }

  ExperimentResult s;
  s.metric = Metric::SinrDb;
  s.rows.push_back({10, Method::Oracle, 19.5, 0.0, std::nan(""), 100, 0});
  const ExperimentResult sb = parse_csv(to_csv(s));
  EXPECT_EQ(sb.metric, Metric::SinrDb);
  EXPECT_EQ(sb.rows[0].mean, 19.5);
}

TEST(ResultsIo, ParseCsvRejectsMalformed) {
  EXPECT_THROW(parse_csv(""), Error);
  EXPECT_THROW(parse_csv("a,b,c\n"), Error);
  EXPECT_THROW(parse_csv("n,method,mean_mse,ci95,mean_rho\n1,OAS,2\n"), Error);
  EXPECT_THROW(parse_csv("n,method,mean_mse,ci95,mean_rho\n1,Nope,2,3,4\n"), Error);
}

}  // namespace
}  // namespace shrinkcov::cli
