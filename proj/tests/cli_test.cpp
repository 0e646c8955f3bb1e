#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FINSLER_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string run_stderr(const std::string& args) {
  const std::string cmd = std::string(FINSLER_CLI_PATH) + " " + args + " 2>&1 >/dev/null";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("finsler_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_F(Cli, ReportLieGroup) {
  auto r = run("report --metric lie_group --out " + path("r.json"));
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path("r.json"));
  json j = json::parse(in);
  EXPECT_EQ(j["metric"], "lie_group");
  EXPECT_TRUE(j["classification"]["gb"]["verdict"].get<bool>());
  EXPECT_FALSE(j["classification"]["s_zero"]["verdict"].get<bool>());
  EXPECT_EQ(j["classification"]["verdict"], "SNonzero");
  ASSERT_FALSE(j["samples"].empty());
  const auto& s0 = j["samples"][0];
  for (const char* key : {"x", "y", "F", "g", "G", "K", "S_def", "S_formula"}) EXPECT_TRUE(s0.contains(key)) << key;
}

TEST_F(Cli, ReportFishTankToStdout) {
  auto r = run("report --metric fish_tank");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  const auto& c = j["classification"];
  EXPECT_FALSE(c["gb"]["verdict"].get<bool>());
  EXPECT_TRUE(c["s_zero"]["verdict"].get<bool>());
  EXPECT_EQ(c["verdict"], "NotGeneralizedBerwald");
  double kmax = 0.0;
  for (const auto& s : j["samples"])
    if (s.contains("K")) kmax = std::max(kmax, std::abs(s["K"].get<double>()));
  EXPECT_LT(kmax, 1e-5);
}

TEST_F(Cli, ReportIsByteStable) {
  auto a = run("report --metric sphere_randers --param eps=0.5");
  auto b = run("report --metric sphere_randers --param eps=0.5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, CustomConfigEuclideanRanders) {
  const auto cfg = write("custom.json", R"({
    "schema": 1,
    "metric": {"custom": {"dim": 2, "a": [["1", "0"], ["0", "1"]], "b": ["0.3", "0.1"],
                          "domain": {"lower": [-1, -1], "upper": [1, 1]}}},
    "phi": {"variant": "randers"},
    "grid": {"counts": [3, 3]},
    "directions": 8
  })");
  auto r = run("report --config " + cfg);
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(j["classification"]["berwald"]["verdict"].get<bool>());
  EXPECT_EQ(j["classification"]["verdict"], "LocallyMinkowskiLike");
  EXPECT_EQ(j["samples"].size(), 9u * 8u);
}

TEST_F(Cli, TableSOnLieGroup) {
  // s_ij = 1/2 (b_i;j - b_j;i) gives s_12 = -1/(2 y^2) on this chart.
  auto r = run("table --metric lie_group --quantity s");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_GT(rows.size(), 1u);
  const int c = column(rows[0], "s_12");
  const int y = column(rows[0], "x2");
  ASSERT_GE(c, 0);
  ASSERT_GE(y, 0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double yv = std::stod(rows[i][y]);
    EXPECT_NEAR(std::stod(rows[i][c]), -0.5 / (yv * yv), 1e-6 / (yv * yv));
  }
}

TEST_F(Cli, TableBnormFishTank) {
  auto r = run("table --metric fish_tank --quantity bnorm");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_GT(rows.size(), 1u);
  const int c = column(rows[0], "bnorm");
  ASSERT_GE(c, 0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x1 = std::stod(rows[i][0]), x2 = std::stod(rows[i][1]);
    EXPECT_NEAR(std::stod(rows[i][c]), std::hypot(x1, x2), 1e-12);
  }
}

TEST_F(Cli, TableSigmaEuclid) {
  auto r = run("table --metric euclid --quantity sigma --out " + path("t.csv"));
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path("t.csv"), std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(text.find("\r\n"), std::string::npos);
  auto rows = csv_rows(text);
  ASSERT_EQ(rows.size(), 26u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][2]), 1.0, 1e-12);
}

TEST_F(Cli, ClassifyJson) {
  auto r = run("classify --metric euclid_randers --param eps=0.3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["verdict"], "LocallyMinkowskiLike");
}

TEST_F(Cli, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run("report --metric nope").code, 2);
  EXPECT_EQ(run("report").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("table --metric euclid --quantity zeta").code, 2);
  EXPECT_EQ(run("table --metric euclid").code, 2);
  EXPECT_EQ(run("report --metric euclid_randers --param eps=2").code, 2);
  EXPECT_EQ(run("report --metric euclid_randers --param eps").code, 2);
  EXPECT_EQ(run("report --config /nonexistent/cfg.json").code, 2);
}

TEST_F(Cli, UnknownConfigFieldNamesItsPath) {
  const auto cfg = write("bad.json", R"({"schema": 1, "metric": {"name": "euclid"}, "grid": {"countz": [3, 3]}})");
  EXPECT_EQ(run("report --config " + cfg).code, 2);
  EXPECT_NE(run_stderr("report --config " + cfg).find("$.grid.countz"), std::string::npos);
  const auto v2 = write("v2.json", R"({"schema": 2, "metric": {"name": "euclid"}})");
  EXPECT_NE(run_stderr("report --config " + v2).find("$.schema"), std::string::npos);
  const auto few = write("few.json", R"({"schema": 1, "metric": {"name": "euclid"}, "directions": 3})");
  EXPECT_NE(run_stderr("report --config " + few).find("$.directions"), std::string::npos);
}

TEST_F(Cli, CheckExitMatchesSummary) {
  auto r = run("check");
  std::istringstream in(r.out);
  std::string line;
  int lines = 0, failed = 0;
  while (std::getline(in, line)) {
    if (line.rfind("PASS AC", 0) == 0) ++lines;
    else if (line.rfind("FAIL AC", 0) == 0) ++lines, ++failed;
  }
  EXPECT_EQ(lines, 13);
  EXPECT_EQ(r.code, failed > 0 ? 1 : 0);
}
