#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "susy/io.hpp"
#include "susy/verify.hpp"

using namespace susy;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "susy_spectra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SUSY_TEST_DATA_DIR) + "/" + name; }

std::string tmp_prefix(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("susy_cli_" + name)).string();
}

cplx to_c(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::vector<double> energies(const json& pts) {
  std::vector<double> e;
  for (const auto& p : pts) e.push_back(p.at("E").at(0).get<double>());
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST(Cli, JostOnZeroPotential) {
  const auto r = run({"jost", data("zero.json"), "1+0i"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_LT(std::abs(to_c(j.at("A")) - cplx(1.0)), 1e-12);
  EXPECT_EQ(j.at("spec_hash").get<std::string>().size(), 16u);
  EXPECT_TRUE(j.at("config").contains("numeric"));
}

TEST(Cli, JostAtSolitonSingularity) {
  const auto r = run({"jost", data("soliton_b_ipi4.json"), "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(std::abs(to_c(json::parse(r.out).at("A"))), 1e-6);
}

TEST(Cli, JostCsvTrace) {
  const auto r = run({"--format", "csv", "--points", "50", "--xmax", "5", "jost", data("zero.json"), "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# spec ", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 52);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"jost", data("missing.json"), "1"}).code, 2);
  EXPECT_EQ(run({"jost", data("zero.json"), "one"}).code, 2);
  EXPECT_EQ(run({"jost", data("zero.json"), "0"}).code, 2);
  EXPECT_EQ(run({"verify", "--example", "7"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"spectrum", data("zero.json"), "--rect", "1,2,3"}).code, 2);
  EXPECT_EQ(run({"transform", data("zero.json"), data("example1-steps.json")}).code, 2);
}

TEST(Cli, SpectrumOfSechWell) {
  const auto r = run({"spectrum", data("sech20.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto e = energies(j.at("bound_states"));
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e[0], -9.0, 1e-6);
  EXPECT_NEAR(e[1], -1.0, 1e-6);
  EXPECT_TRUE(j.at("singularities").empty());
  EXPECT_TRUE(j.at("consistent").get<bool>());
}

TEST(Cli, SpectrumOfZeroAndExample1) {
  const auto z = json::parse(run({"spectrum", data("zero.json")}).out);
  EXPECT_TRUE(z.at("bound_states").empty());
  EXPECT_TRUE(z.at("singularities").empty());
  const auto r = run({"spectrum", data("ex1_a2_k1.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto e = energies(json::parse(r.out).at("singularities"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0], 1.0, 1e-6);
}

TEST(Cli, TransformExample1) {
  const std::string prefix = tmp_prefix("ex1");
  const auto r = run({"transform", data("zero.json"), data("example1-steps.json"), "--out", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("spec"), prefix + ".json");
  const auto v = io::load_potential(prefix + ".json");
  const auto c = compare_on_grid(v, PotentialSpec::closed_form_2susy(1.0, 1.0), uniform_grid(0.0, 25.0, 2000));
  EXPECT_LT(c.max_deviation, 1e-7 * c.max_modulus);
  std::ifstream csv(prefix + ".csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "x,re_V,im_V");
}

TEST(Cli, TransformRemovesSingularity) {
  const std::string prefix = tmp_prefix("remove");
  const auto r = run({"transform", data("soliton_b_ipi4.json"), data("remove-singularity-steps.json"), "--out", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("origin_strength").get<double>(), 1.0, 1e-12);
  const auto v = io::load_potential(prefix + ".json");
  EXPECT_LT(compare_on_grid(v, PotentialSpec::sinh_barrier(1.0), uniform_grid(0.05, 25.0, 2000)).max_deviation, 1e-7);
}

TEST(Cli, DuplicatedStepsAreDegenerate) {
  const auto r = run({"transform", data("zero.json"), data("duplicated-steps.json"), "--out", tmp_prefix("dup")});
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.err.find("(x = "), std::string::npos) << r.err;
}

TEST(Cli, VerifyAll) {
  const auto r = run({"verify", "--example", "all"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("reports").size(), 3u);
  EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Cli, VerifyCsv) {
  const auto r = run({"--format", "csv", "verify", "--example", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("example,check,max_deviation,tolerance,pass\n", 0), 0u);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"spectrum", data("ex1_a2_k1.json")};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> j{"jost", data("sech20.json"), "0.5+0.25i"};
  EXPECT_EQ(run(j).out, run(j).out);
}
