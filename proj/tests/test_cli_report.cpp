#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmt/cli.hpp"

namespace cli = rmt::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "rmt");
  std::ostringstream out, err;
  cli::RunConfig c;
  if (auto code = cli::parse(static_cast<int>(args.size()), args.data(), c, out, err)) return {*code, out.str(), err.str()};
  const int code = cli::run(c, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("rmt_test_" + name); }

}  // namespace

TEST(Csv, HeaderAndQuoting) {
  rmt::Report r;
  r.rows.push_back({"a,b", 1, std::nullopt, 8, std::nullopt, "0.5", "", "say \"hi\"", rmt::Verdict::pass});
  std::ostringstream os;
  rmt::write_csv(os, r);
  EXPECT_EQ(os.str(), std::string(rmt::kCsvHeader) + "\n\"a,b\",1,,8,,0.5,,\"say \"\"hi\"\"\",PASS\n");
}

TEST(Csv, EmptyReportIsHeaderOnly) {
  std::ostringstream os;
  rmt::write_csv(os, rmt::Report{});
  EXPECT_EQ(os.str(), std::string(rmt::kCsvHeader) + "\n");
  std::ostringstream plot;
  rmt::emit_plot_data(plot, rmt::Report{});
  EXPECT_EQ(plot.str(), "series,x,y,yerr\n");
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3, 1e-300, -2.5e17, 0.0}) EXPECT_EQ(std::stod(rmt::format_double(v)), v);
}

TEST(Cli, ExactRowsAreInfo) {
  const auto o = invoke({"exact", "--kmax", "3"});
  EXPECT_EQ(o.code, cli::kAllPass) << o.err;
  EXPECT_NE(o.out.find("hz_moment_poly,2,1,,,1/16,,,INFO"), std::string::npos) << o.out;
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"mc", "--N", "8", "--samples", "0", "--seed", "1"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"mc", "--N", "8", "--samples", "1000"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"mc", "--samples", "1000", "--seed", "1"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"band-norm", "--N", "8", "--b", "9", "--samples", "20", "--seed", "1"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"bounds", "--A", "x"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(invoke({}).code, cli::kUsage);
  EXPECT_EQ(invoke({"--format", "xml", "exact"}).code, cli::kUsage);
}

TEST(Cli, BoundsDefaultsPass) {
  const auto o = invoke({"bounds", "--N", "16", "--kmax", "12"});
  EXPECT_EQ(o.code, cli::kAllPass) << o.out << o.err;
  EXPECT_NE(o.out.find("constants_admissible"), std::string::npos);
}

TEST(Cli, JsonOutputParses) {
  const auto o = invoke({"--format", "json", "mc", "--N", "6", "--samples", "400", "--seed", "9", "--kmax", "2"});
  ASSERT_NE(o.code, cli::kUsage) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["command"], "mc");
  EXPECT_TRUE(j["rows"].is_array());
  EXPECT_GT(j["rows"].size(), 0u);
  EXPECT_TRUE(j.contains("summary"));
}

TEST(Cli, PlotFileIsWritten) {
  const auto plot = temp_path("plot.csv");
  fs::remove(plot);
  const auto o = invoke({"--plot", plot.c_str(), "mc", "--N", "6", "--samples", "400", "--seed", "9", "--kmax", "2"});
  ASSERT_NE(o.code, cli::kUsage) << o.err;
  const auto text = slurp(plot);
  EXPECT_EQ(text.rfind("series,x,y,yerr\n", 0), 0u);
  EXPECT_NE(text.find("gue_N2_excess_k2"), std::string::npos);
  fs::remove(plot);
}

TEST(Cli, ConfigPrecedence) {
  const auto cfg = temp_path("config.json");
  {
    std::ofstream f(cfg);
    f << R"({"format": "json", "mc": {"N": 6, "samples": 300, "seed": 4, "kmax": 1}})";
  }
  cli::RunConfig c;
  std::vector<const char*> args{"rmt", "--config", cfg.c_str(), "mc", "--seed", "11"};
  std::ostringstream out, err;
  ASSERT_FALSE(cli::parse(static_cast<int>(args.size()), args.data(), c, out, err).has_value()) << err.str();
  EXPECT_EQ(c.command, "mc");
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.N, 6);
  EXPECT_EQ(c.samples, 300);
  EXPECT_EQ(c.k_max, 1);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.ensemble, "gue");
  fs::remove(cfg);
}

TEST(Cli, OutputIsReproducibleAcrossRunsAndWorkers) {
  auto run_with = [](const char* threads) {
    setenv("RMT_THREADS", threads, 1);
    const auto o = invoke({"mc", "--ensemble", "goe", "--N", "10", "--samples", "2000", "--seed", "5", "--kmax", "3"});
    unsetenv("RMT_THREADS");
    return o.out;
  };
  const auto a = run_with("1");
  EXPECT_EQ(a, run_with("1"));
  EXPECT_EQ(a, run_with("5"));
  EXPECT_FALSE(a.empty());
}

TEST(Cli, OutputFileMatchesStdout) {
  const auto path = temp_path("out.csv");
  const auto direct = invoke({"exact", "--kmax", "5"});
  invoke({"--output", path.c_str(), "exact", "--kmax", "5"});
  EXPECT_EQ(slurp(path), direct.out);
  fs::remove(path);
}

TEST(Cli, GlobalOptionsAfterSubcommand) {
  const auto before = invoke({"--format", "json", "exact", "--kmax", "2"});
  const auto after = invoke({"exact", "--kmax", "2", "--format", "json"});
  EXPECT_EQ(after.code, cli::kAllPass) << after.err;
  EXPECT_EQ(before.out, after.out);
}
