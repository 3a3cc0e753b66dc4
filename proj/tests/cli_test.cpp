#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "normderiv/cli.hpp"

namespace cli = normderiv::cli;

namespace {

struct outcome {
  int code;
  std::string out, err;
};

outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

cli::json parsed(const outcome& o) { return cli::json::parse(o.out); }

}  // namespace

TEST(cli, rho_linf_example) {
  const auto o = run({"rho", "--norm", "linf", "--dim", "2", "--u", "1,1", "--v", "1,-1", "--alpha", "0.5", "--beta",
                      "0.333333333333"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = parsed(o);
  EXPECT_EQ(j["rho_minus"].get<double>(), -1.0);
  EXPECT_EQ(j["rho_plus"].get<double>(), 1.0);
  EXPECT_NEAR(j["rho_ab"].get<double>(), -1.0 / 6, 1e-12);
  EXPECT_NE(o.out.find("-0.16666666666699997"), std::string::npos);
}

TEST(cli, ortho_euclidean) {
  const auto o = run({"ortho", "--relation", "birkhoff", "--norm", "l2", "--u", "1,0", "--v", "0,1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = parsed(o);
  EXPECT_TRUE(j["holds"].get<bool>());
  EXPECT_EQ(j["residual"].get<double>(), 0.0);
}

TEST(cli, exit_codes) {
  EXPECT_EQ(run({"rho", "--norm", "lp(0.5)", "--u", "1,0", "--v", "0,1"}).code, 2);
  EXPECT_EQ(run({"rho", "--norm", "l2", "--u", "1,0", "--v", "0,1", "--bogus"}).code, 2);
  EXPECT_EQ(run({"rho", "--norm", "l2", "--u", "1,0", "--v", "0,1", "--alpha", "0.7", "--beta", "0.5"}).code, 2);
  EXPECT_EQ(run({"rho", "--u", "1,0", "--v", "0,1"}).code, 2);
  EXPECT_EQ(run({"rho", "--norm", "l2", "--u", "1,x", "--v", "0,1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"rho", "--norm", "l2", "--u", "1,0", "--v", "0,1,2"}).code, 1);
  EXPECT_EQ(run({"ortho", "--relation", "semi", "--norm", "linf", "--u", "1,1", "--v", "1,-1"}).code, 1);
  const auto bad = run({"rho", "--norm", "lp(0.5)", "--u", "1,0", "--v", "0,1"});
  EXPECT_NE(bad.err.find("lp exponent"), std::string::npos);
}

TEST(cli, every_subcommand_has_help) {
  for (const char* sub : {"rho", "ortho", "solve", "interval", "locus", "angle", "probe", "identity", "constant",
                          "preserver", "mine", "audit"}) {
    const auto o = run({sub, "--help"});
    EXPECT_EQ(o.code, 0) << sub;
    EXPECT_NE(o.out.find("--norm"), std::string::npos) << sub;
  }
}

TEST(cli, output_is_byte_identical_across_runs) {
  const std::vector<std::string> args{"probe", "--norm", "linf", "--kind", "symmetry", "--alpha", "0.3", "--beta",
                                      "0.4", "--seed", "5", "--samples", "200"};
  EXPECT_EQ(run(args).out, run(args).out);
  std::vector<std::string> threaded = {"mine", "--norm", "l1", "--relation", "rho_minus", "--relation2", "rho_ab",
                                       "--alpha", "0.3", "--beta", "0.4", "--samples", "50", "--resolution", "180"};
  const auto one = run(threaded);
  threaded.insert(threaded.end(), {"--threads", "3"});
  const auto three = run(threaded);
  ASSERT_EQ(one.code, 0) << one.err;
  auto a = parsed(one), b = parsed(three);
  a.erase("replay");
  b.erase("replay");
  EXPECT_EQ(a, b);
}

TEST(cli, solve_interval_angle_identity) {
  auto j = parsed(run({"solve", "--norm", "l2", "--u", "1,0", "--v", "1,1", "--alpha", "0.2", "--beta", "0.3"}));
  EXPECT_EQ(j["s"].get<double>(), -1.0);
  EXPECT_TRUE(j["holds"].get<bool>());
  j = parsed(run({"interval", "--norm", "l1", "--u", "1,0", "--v", "0,2"}));
  EXPECT_EQ(j["lower"].get<double>(), -2.0);
  EXPECT_EQ(j["upper"].get<double>(), 2.0);
  j = parsed(run({"angle", "--norm", "l2", "--u", "1,0", "--v", "0,1", "--alpha", "0.2", "--beta", "0.3", "--scale-a",
                  "-2"}));
  EXPECT_NEAR(j["theta"].get<double>(), std::acos(0.0), 1e-15);
  EXPECT_NEAR(j["homogeneity"]["residual"].get<double>(), 0.0, 1e-15);
  j = parsed(run({"identity", "--norm", "l1", "--u", "1,0", "--v", "1,1", "--alpha", "0.2", "--beta", "0.2"}));
  EXPECT_NEAR(j["quartic_residual"].get<double>(), 3.2, 1e-13);
}

TEST(cli, locus_streams_records) {
  const std::string path = ::testing::TempDir() + "normderiv_locus.jsonl";
  const auto o = run({"locus", "--norm", "l2", "--u", "1,0", "--relation", "rho_ab", "--alpha", "0.3", "--beta", "0.3",
                      "--resolution", "64", "--out", path});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = parsed(o);
  EXPECT_FALSE(j.contains("records"));
  EXPECT_EQ(j["zeros"].size(), 2u);
  std::ifstream f(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(f, line)) {
    const auto r = cli::json::parse(line);
    for (const char* key : {"theta", "x", "y", "residual", "is_zero_crossing"}) EXPECT_TRUE(r.contains(key)) << line;
    ++lines;
  }
  EXPECT_EQ(lines, j["rows"].get<std::size_t>());
  std::remove(path.c_str());
}

TEST(cli, preserver_and_constant_and_audit) {
  auto o = run({"preserver", "--norm", "l2", "--matrix", "1,1;0,1", "--alpha", "0.3", "--beta", "0.3", "--samples", "200"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto j = parsed(o);
  EXPECT_FALSE(j["all_pass"].get<bool>());
  EXPECT_TRUE(j["operator_norm"]["lower_bound"].get<bool>());
  EXPECT_EQ(run({"preserver", "--norm", "l2", "--matrix", "1,1;0", "--alpha", "0.3", "--beta", "0.3"}).code, 2);

  o = run({"constant", "--kind", "equivalence", "--norm", "l1", "--norm2", "linf", "--alpha", "0.3", "--beta", "0.3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_LE(parsed(o)["estimate"].get<double>(), 5.0);

  o = run({"audit", "--norm", "sum(l1, linf)", "--seed", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  j = parsed(o);
  EXPECT_EQ(j["violations"].get<int>(), 0);
  EXPECT_EQ(j["tolerance"].get<double>(), 1e-10);
}

TEST(cli, table_and_csv_formats) {
  const std::vector<std::string> base{"interval", "--norm", "linf", "--u", "1,1", "--v", "1,-1"};
  auto args = base;
  args.insert(args.end(), {"--format", "csv"});
  const auto csv = run(args);
  EXPECT_EQ(csv.out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(csv.out.find("lower,-1\n"), std::string::npos);
  args = base;
  args.insert(args.end(), {"--format", "table"});
  EXPECT_NE(run(args).out.find("upper"), std::string::npos);
}
