#include "cli.hpp"
#include "verification.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace telegame::cli {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ChannelReport) {
  const CliRun r = run({"channel", "--alpha", "2"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out,
            "alpha=2 beta=1.5 gamma=1 delta=1.5 kappa=1.5 physical=true symmetric=true\n");

  const CliRun j = run({"channel", "--alpha", "0.5", "--json"});
  ASSERT_EQ(j.code, kSuccess);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_DOUBLE_EQ(doc["kappa"].get<double>(), 2.25);
  EXPECT_TRUE(doc["physical"].get<bool>());
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run({"channel", "--alpha", "0.3"}).code, kInvalidInput);
  EXPECT_NE(run({"channel", "--alpha", "0.3"}).err.find("alpha"), std::string::npos);
  EXPECT_EQ(run({"channel"}).code, kInvalidInput);
  EXPECT_EQ(run({"channel", "--alpha", "two"}).code, kInvalidInput);
  EXPECT_EQ(run({"channel", "--alpha", "2", "--bogus"}).code, kInvalidInput);
  EXPECT_EQ(run({}).code, kInvalidInput);
  EXPECT_EQ(run({"teleport"}).code, kInvalidInput);
  EXPECT_EQ(run({"sweep", "3", "2", "10"}).code, kInvalidInput);
  EXPECT_EQ(run({"threshold", "--tol", "0"}).code, kInvalidInput);
}

TEST(Cli, HelpSucceeds) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, SweepCsv) {
  const CliRun a = run({"sweep", "0.5", "12", "200"});
  ASSERT_EQ(a.code, kSuccess);
  EXPECT_EQ(a.out, run({"sweep", "0.5", "12", "200"}).out);
  EXPECT_EQ(a.out, run({"sweep"}).out);
  EXPECT_EQ(a.out.rfind(std::string(kSweepHeader) + "\n", 0), 0u);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 201);
  EXPECT_EQ(a.out.find('\r'), std::string::npos);
}

TEST(Cli, SweepRowFormatting) {
  const CliRun r = run({"sweep", "2", "3", "2"});
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n', r.out.find('\n') + 1) + 1),
            std::string(kSweepHeader) + "\n2,0.666666666667,0.727272727273,0.4,0.563636363636\n");
}

TEST(Cli, SweepToFile) {
  const auto path = std::filesystem::temp_directory_path() / "telegame_cli_sweep.csv";
  const CliRun r = run({"sweep", "0.5", "12", "200", "--out", path.string()});
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path, std::ios::binary);
  const std::string content{std::istreambuf_iterator<char>(in), {}};
  EXPECT_EQ(content, run({"sweep", "0.5", "12", "200"}).out);
  std::filesystem::remove(path);

  EXPECT_EQ(run({"sweep", "--out", "/nonexistent-dir/x.csv"}).code, kIoFailure);
}

TEST(Cli, ThresholdJson) {
  const CliRun r = run({"threshold", "--json"});
  ASSERT_EQ(r.code, kSuccess);
  const auto doc = nlohmann::json::parse(r.out);
  const double a = doc["alpha_th"].get<double>();
  EXPECT_GE(a, 5.70);
  EXPECT_LE(a, 5.82);
  EXPECT_LE(doc["residual"].get<double>(), 1e-9);
  EXPECT_GT(doc["iterations"].get<int>(), 0);
}

TEST(Cli, SimulateDeterministic) {
  const std::vector<std::string> base{"simulate", "--alpha", "2", "--shots", "3000", "--seed", "7"};
  auto with_threads = [&](const char* t) {
    auto args = base;
    args.insert(args.end(), {"--threads", t});
    return run(args);
  };
  const CliRun a = with_threads("1");
  EXPECT_EQ(a.code, kSuccess) << a.out;
  EXPECT_EQ(a.out, with_threads("1").out);
  EXPECT_EQ(a.out, with_threads("3").out);
  EXPECT_NE(a.out.find("f_ab"), std::string::npos);

  auto json_args = base;
  json_args.push_back("--json");
  const auto doc = nlohmann::json::parse(run(json_args).out);
  EXPECT_EQ(doc["shots"].get<int>(), 3000);
  EXPECT_NEAR(doc["f_tr"].get<double>(), 2.0 / 3.0, 1e-15);
}

TEST(Cli, SimulateRejectsBadInput) {
  EXPECT_EQ(run({"simulate", "--shots", "0"}).code, kInvalidInput);
  EXPECT_EQ(run({"simulate", "--alpha", "0.1", "--shots", "10"}).code, kInvalidInput);
  EXPECT_EQ(run({"simulate", "--ensemble-std", "-1", "--shots", "10"}).code, kInvalidInput);
}

ComplexAmplitude flipped_shift(ComplexAmplitude eta, ComplexAmplitude mu, const ChannelParams& p) {
  return eta - ((p.delta - p.gamma) / (p.beta + 0.5)) * (mu - eta);
}

const CheckResult* find(const std::vector<CheckResult>& results, const std::string& name) {
  const auto it = std::find_if(results.begin(), results.end(),
                               [&](const CheckResult& r) { return r.name == name; });
  return it == results.end() ? nullptr : &*it;
}

TEST(Verification, FastChecksPass) {
  VerifyOptions fast;
  fast.include_monte_carlo = false;
  fast.include_cli_artifacts = false;
  const auto results = run_verification(fast);
  EXPECT_GE(results.size(), 10u);
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(Verification, DetectsWrongShiftRule) {
  VerifyOptions mutated;
  mutated.shift = flipped_shift;
  mutated.include_monte_carlo = false;
  mutated.include_cli_artifacts = false;
  const auto results = run_verification(mutated);
  const CheckResult* ab = find(results, "pipeline_f_ab_matches_closed_form");
  ASSERT_NE(ab, nullptr);
  EXPECT_FALSE(ab->passed);
  EXPECT_TRUE(find(results, "pipeline_f_tr_matches_closed_form")->passed);
}

TEST(Verification, CliArtifactsPass) {
  VerifyOptions opts;
  opts.include_monte_carlo = false;
  opts.determinism_shots = 4000;
  const auto results = run_verification(opts);
  EXPECT_TRUE(find(results, "sweep_csv_single_crossing")->passed);
  EXPECT_TRUE(find(results, "simulate_bit_identical")->passed);
}

TEST(Verification, VerifyCommandReportsSpreadFailure) {
  // The per-shot spread requirement cannot hold for outcome-dependent
  // trajectories; verify must say so rather than exit 0.
  const CliRun r = run({"verify"});
  EXPECT_EQ(r.code, kVerificationFailure);
  EXPECT_NE(r.out.find("FAIL monte_carlo_per_shot_spread"), std::string::npos);
  EXPECT_NE(r.out.find("PASS monte_carlo_within_3_sigma"), std::string::npos);
  EXPECT_NE(r.out.find("failed: monte_carlo_per_shot_spread\n"), std::string::npos);
}

}  // namespace
}  // namespace telegame::cli
