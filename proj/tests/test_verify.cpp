#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "susy/errors.hpp"
#include "susy/verify.hpp"

using namespace susy;

namespace {

std::string failures(const ExampleReport& r) {
  std::string s;
  for (const auto& c : r.checks)
    if (!c.pass) s += c.name + " (" + std::to_string(c.max_deviation) + ") " + c.note + "; ";
  return s;
}

bool has_failed(const ExampleReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return !c.pass;
  return false;
}

}  // namespace

TEST(Verify, Example1Passes) {
  for (auto [a1, k0] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {1.0, 0.5}}) {
    Example1Params p;
    p.a1 = a1;
    p.k0 = k0;
    const auto r = run_example_1(p);
    EXPECT_TRUE(r.overall) << failures(r);
    EXPECT_EQ(r.example_id, 1);
  }
}

TEST(Verify, Example1DegenerateAlphaFails) {
  Example1Params p;
  p.alpha1 = cplx(2.86818612480111, -1.9413112949848);
  const auto r = run_example_1(p);
  EXPECT_FALSE(r.overall);
  EXPECT_TRUE(has_failed(r, "validation"));
}

TEST(Verify, Example2Passes) {
  const auto r = run_example_2();
  EXPECT_TRUE(r.overall) << failures(r);
  EXPECT_GE(r.checks.size(), 6u);
}

TEST(Verify, Example2NodeBearingSeedFails) {
  Example2Params p;
  p.u1 = TransformStep::custom(-1.0, 0.0, 1.0, 0.0);
  const auto r = run_example_2(p);
  EXPECT_FALSE(r.overall);
}

TEST(Verify, Example3Passes) {
  for (double k0 : {1.0, 2.0}) {
    Example3Params p;
    p.k0 = k0;
    const auto r = run_example_3(p);
    EXPECT_TRUE(r.overall) << failures(r);
  }
}

TEST(Verify, Example3TightToleranceReportsFailure) {
  Example3Params p;
  p.wronskian_tol = 1e-18;
  const auto r = run_example_3(p);
  EXPECT_FALSE(r.overall);
  EXPECT_TRUE(has_failed(r, "wronskian_profile"));
}

TEST(Verify, RemovalRoundTrips) {
  const auto so = verify_removal_roundtrip(PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4)), 1.0);
  EXPECT_TRUE(so.overall) << failures(so);
  EXPECT_EQ(so.example_id, 0);
  const auto cf = verify_removal_roundtrip(PotentialSpec::closed_form_2susy(2.0, 1.0), 1.0);
  EXPECT_TRUE(cf.overall) << failures(cf);
  const auto sw = verify_removal_roundtrip(PotentialSpec::sech_well(2), 1.0);
  EXPECT_FALSE(sw.overall);
}

TEST(Verify, CompareOnGrid) {
  const auto grid = uniform_grid(0.0, 10.0, 1001);
  const auto a = compare_on_grid(PotentialSpec::sech_well(2), PotentialSpec::sech_well(2), grid);
  EXPECT_EQ(a.max_deviation, 0.0);
  EXPECT_NEAR(a.max_modulus, 6.0, 1e-12);
  const auto b = compare_on_grid(PotentialSpec::zero(), PotentialSpec::sech_well(1), grid);
  EXPECT_NEAR(b.max_deviation, 2.0, 1e-12);
  EXPECT_EQ(b.location, 0.0);
  try {
    compare_on_grid(PotentialSpec::zero(), PotentialSpec::sinh_barrier(), grid);
    FAIL() << "expected an error at the singular origin";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
    EXPECT_NE(std::string(e.what()).find("x = 0"), std::string::npos);
  }
}

TEST(Verify, WronskianProfileClosedForm) {
  // cosh(4x) sech^7(x) decays like e^{-3x}
  const cplx w1 = example3_wronskian_profile(1.0, 20.0), w2 = example3_wronskian_profile(1.0, 21.0);
  EXPECT_NEAR(std::abs(w2 / w1), std::exp(-3.0), 1e-6);
  EXPECT_TRUE(std::isfinite(std::abs(example3_wronskian_profile(2.0, 0.0))));
}

TEST(Verify, ReportJson) {
  ExampleReport r;
  r.example_id = 2;
  r.add("a", 1e-9, 1e-7);
  r.add("b", std::numeric_limits<double>::infinity(), 1e-7, "diverged");
  r.finalize();
  EXPECT_FALSE(r.overall);
  const auto j = report_to_json(r);
  EXPECT_EQ(j.at("example"), 2);
  EXPECT_FALSE(j.at("overall").get<bool>());
  EXPECT_TRUE(j.at("checks").at(1).at("max_deviation").is_null());
  EXPECT_EQ(j.at("checks").at(1).at("note"), "diverged");
  EXPECT_TRUE(j.at("checks").at(0).at("pass").get<bool>());
}
