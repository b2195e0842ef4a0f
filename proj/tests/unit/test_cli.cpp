#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "json_writer.hpp"
#include "model_io.hpp"

using namespace zonovol::cli;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "zonovol");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ZONOVOL_TEST_DATA) + "/" + name; }

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell.empty() ? NAN : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(CliVolume, DiagonalExample) {
  const CliResult r = run({"volume", "--model", data("diag05_08.json"), "--N", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["volume"].get<double>(), 1.2, 1e-15);
  EXPECT_EQ(j["route"], "analytic");
  EXPECT_EQ(j["terms"].size(), 4u);
}

TEST(CliVolume, DirectAndAnalyticAgree) {
  const CliResult d = run({"volume", "--model", data("companion.json"), "--N", "6", "--route", "direct"});
  const CliResult a = run({"volume", "--model", data("companion.json"), "--N", "6", "--route", "analytic"});
  ASSERT_EQ(d.code, kOk);
  ASSERT_EQ(a.code, kOk);
  const double vd = nlohmann::json::parse(d.out)["volume"].get<double>();
  const double va = nlohmann::json::parse(a.out)["volume"].get<double>();
  EXPECT_NEAR(va, vd, 1e-9 * vd);
}

TEST(CliVolume, MixedSpectrumIsDomainError) {
  const CliResult r = run({"volume", "--model", data("mixed.json"), "--N", "4", "--route", "analytic"});
  EXPECT_EQ(r.code, kDomain);
  EXPECT_NE(r.err.find("MixedSign"), std::string::npos);
}

TEST(CliVolume, MalformedJsonReportsLocation) {
  const CliResult r = run({"volume", "--model", data("truncated.json"), "--N", "2"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("line"), std::string::npos);
}

TEST(CliVolume, MissingFileAndBadFlags) {
  EXPECT_EQ(run({"volume", "--model", data("nope.json"), "--N", "2"}).code, kUsage);
  EXPECT_EQ(run({"volume", "--model", data("diag05_08.json"), "--N", "-3"}).code, kUsage);
  EXPECT_EQ(run({"volume", "--model", data("diag05_08.json"), "--N", "2", "--route", "fast"}).code, kUsage);
  EXPECT_EQ(run({}).code, kUsage);
}

TEST(CliVolume, ModesProduceOracleValues) {
  const CliResult neg = run({"volume", "--model", data("negative.json"), "--N", "4", "--mode", "negative",
                       "--format", "csv"});
  ASSERT_EQ(neg.code, kOk) << neg.err;
  const CliResult negd = run({"volume", "--model", data("negative.json"), "--N", "4", "--route", "direct",
                        "--format", "csv"});
  EXPECT_NEAR(csv_rows(neg.out)[0][1], csv_rows(negd.out)[0][1], 1e-9 * csv_rows(negd.out)[0][1]);

  const CliResult nar = run({"volume", "--model", data("narrow.json"), "--N", "4", "--mode", "narrow"});
  const CliResult nard = run({"volume", "--model", data("narrow.json"), "--N", "4", "--mode", "narrow",
                        "--route", "direct"});
  ASSERT_EQ(nar.code, kOk) << nar.err;
  ASSERT_EQ(nard.code, kOk) << nard.err;
  const double a = nlohmann::json::parse(nar.out)["volume"].get<double>();
  EXPECT_NEAR(a, nlohmann::json::parse(nard.out)["volume"].get<double>(), 1e-9 * a);

  const CliResult ct = run({"volume", "--model", data("stable_ct.json"), "--T", "1", "--mode", "continuous"});
  ASSERT_EQ(ct.code, kOk) << ct.err;
  const CliResult ctd = run({"volume", "--model", data("stable_ct.json"), "--T", "1", "--mode", "continuous",
                       "--route", "direct"});
  EXPECT_EQ(ctd.code, kUsage);  // direct needs --dt
}

TEST(CliFactors, Report) {
  const CliResult r = run({"factors", "--model", data("diag05_08.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["F2"][0].get<double>(), 2.0, 1e-15);
  EXPECT_NEAR(j["F2"][1].get<double>(), 5.0, 1e-14);
  EXPECT_NEAR(j["F1"].get<double>(), 0.5, 1e-15);
  EXPECT_TRUE(j.contains("normalization"));
  const CliResult c = run({"factors", "--model", data("diag05_08.json"), "--N", "3", "--format", "csv"});
  ASSERT_EQ(c.code, kOk);
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "i,lambda,beta,F1,F2,F3");
}

TEST(CliSweep, MonotoneAndApproachesLimit) {
  const CliResult r = run({"sweep", "--model", data("diag05_08.json"), "--from", "2", "--to", "20", "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 19u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i][1], rows[i - 1][1]);
  EXPECT_NEAR(rows.back()[1], 5.0, 25.0 * std::pow(0.8, 20));
  EXPECT_NEAR(rows.back()[3], 5.0, 1e-14);
}

TEST(CliSweep, NarrowBoundedAndEmptyRange) {
  const CliResult r = run({"sweep", "--model", data("narrow.json"), "--mode", "narrow", "--from", "2", "--to",
                     "150", "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(r.out);
  // |det A|^-1 * 4 * Phi(0.5, 0.8)
  EXPECT_NEAR(rows.back()[2], 4.0 * 5.0 / 2.5, 1e-9);
  EXPECT_EQ(run({"sweep", "--model", data("diag05_08.json"), "--from", "5", "--to", "3"}).code, kUsage);
}

TEST(CliBench, DeterminantCounts) {
  const CliResult r = run({"bench", "--model", data("diag3.json"), "--N", "32", "--reps", "1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = nlohmann::json::parse(r.out)["rows"];
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["determinant_count"], 56);
  EXPECT_EQ(rows[1]["determinant_count"], 560);
  EXPECT_EQ(rows[2]["determinant_count"], 4960);
}

TEST(CliBench, BudgetSkipsDirectRoute) {
  const CliResult r = run({"bench", "--model", data("diag3.json"), "--N", "32", "--reps", "1", "--budget",
                     "1000", "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(r.out);
  EXPECT_EQ(rows[1][5], 0.0);
  EXPECT_EQ(rows[2][5], 1.0);
  EXPECT_EQ(run({"bench", "--model", data("mixed.json"), "--N", "16"}).code, kDomain);
}

TEST(CliCheck, DefaultSeedPasses) {
  const CliResult r = run({"check", "--trials", "40"});
  EXPECT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["properties"].size(), 8u);
}

TEST(CliCheck, ZeroTrialsIsUsageError) { EXPECT_EQ(run({"check", "--trials", "0"}).code, kUsage); }

TEST(CliCheck, Deterministic) {
  EXPECT_EQ(run({"check", "--trials", "10", "--seed", "9"}).out, run({"check", "--trials", "10", "--seed", "9"}).out);
}

TEST(ModelIo, SpectralAndMatrixForms) {
  const LoadedModel s = parse_model(R"({"lambda":[0.8,0.5],"beta":[1,2]})");
  ASSERT_TRUE(s.spectral);
  EXPECT_EQ(s.spectral->lambdas[0], 0.5);
  EXPECT_EQ(s.model.A()(1, 1), 0.8);
  const LoadedModel m = parse_model(R"({"A":[[1,2],[3,4]],"B":[5,6]})");
  EXPECT_FALSE(m.spectral);
  EXPECT_EQ(m.model.B()(1, 0), 6.0);
  EXPECT_THROW(parse_model(R"({"A":[[1,2]],"B":[1]})"), std::exception);
  EXPECT_THROW(parse_model(R"({"lambda":[0.5],"A":[[1]]})"), ModelFormatError);
  EXPECT_THROW(parse_model("{"), ModelFormatError);
}

TEST(JsonWriter, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(NAN), "null");
}
