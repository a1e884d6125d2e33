#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "susy/darboux.hpp"
#include "susy/errors.hpp"
#include "susy/verify.hpp"

using namespace susy;
using oracle::sech;

namespace {

double max_rel_dev(const PotentialSpec& a, const PotentialSpec& b, double lo, double hi, std::size_t n = 2000) {
  const GridComparison c = compare_on_grid(a, b, uniform_grid(lo, hi, n));
  return c.max_deviation / c.max_modulus;
}

struct Ex1 {
  double a1, k0;
};
const Ex1 kEx1[] = {{1.0, 1.0}, {2.0, 1.0}, {1.0, 0.5}};

}  // namespace

TEST(Darboux, Example1FrozenValues) {
  // V0 - 2 (log W)'' with u1 = sinh(a1 x), u2 = exp(i k0 x), evaluated in 30-digit arithmetic
  struct Row {
    double a1, k0, x;
    cplx v;
  };
  const Row rows[] = {
      {1.0, 1.0, 0.3, {-2.8463110503488912, -1.8121141261127447}},
      {1.0, 1.0, 2.0, {-0.0053638027321035875, -0.14637773242083452}},
      {2.0, 1.0, 0.3, {-5.7444154844604802, -3.3247702685187225}},
      {2.0, 1.0, 2.0, {-0.0064428956952410869, -0.0085809303897337961}},
      {1.0, 0.5, 0.3, {-2.1472274811486312, -0.63907286325883181}},
      {1.0, 0.5, 2.0, {-0.089282944543521824, -0.1121211441870152}},
  };
  for (const auto& r : rows) {
    // exp(i k0 x) is e+(x, k0) of the zero potential
    const auto v = susy2_potential(PotentialSpec::zero(2 * r.a1), TransformStep::regular(-r.a1 * r.a1),
                                   TransformStep::jost(r.k0));
    EXPECT_LT(std::abs(eval_potential(v, r.x) - r.v), 1e-9) << r.a1 << " " << r.k0 << " " << r.x;
  }
}

TEST(Darboux, Example1ClosedFormAndSoliton) {
  for (const auto& [a1, k0] : kEx1) {
    const auto v = susy2_potential(PotentialSpec::zero(2 * a1), TransformStep::regular(-a1 * a1),
                                   TransformStep::jost(k0));
    EXPECT_LT(max_rel_dev(v, PotentialSpec::closed_form_2susy(a1, k0), 0.0, 25.0), 1e-7);
    const cplx b = -I * std::atan(k0 / a1);
    EXPECT_LT(max_rel_dev(v, PotentialSpec::shifted_one_soliton(a1, b), 0.0, 25.0), 1e-7);
    EXPECT_EQ(v.nu(), 0.0);
  }
}

TEST(Darboux, Example3FrozenValues) {
  // -20 sech^2 with u1 = psi0, u2 = e(x, 1): V0 - 2 (log W)'' in 30-digit arithmetic
  const auto v = susy2_potential(PotentialSpec::sech_well(4), TransformStep::jost(3.0 * I), TransformStep::jost(1.0));
  const std::pair<double, cplx> rows[] = {{0.25, {-13.118570329247292, -12.037543563014328}},
                                          {1.0, {-5.502049999262627, 3.5331601339663661}},
                                          {3.0, {-0.0014309471607741277, 0.10054574284065365}}};
  for (const auto& [x, ref] : rows) EXPECT_LT(std::abs(eval_potential(v, x) - ref), 1e-8) << x;
}

TEST(Darboux, Example2ClosedForm) {
  for (double k0 : {1.0, 0.5}) {
    const auto v = susy2_potential(PotentialSpec::sech_well(2), TransformStep::jost(I), TransformStep::jost(k0));
    EXPECT_LT(max_rel_dev(v, PotentialSpec::closed_form_2susy(2.0, k0), 0.0, 25.0), 1e-7);
  }
}

TEST(Darboux, FactorizationMatchesSecondOrder) {
  struct Case {
    PotentialSpec base;
    TransformStep u1, u2;
  };
  std::vector<Case> cases;
  for (const auto& [a1, k0] : kEx1)
    cases.push_back({PotentialSpec::zero(2 * a1), TransformStep::regular(-a1 * a1), TransformStep::jost(k0)});
  for (double k0 : {1.0, 0.5}) cases.push_back({PotentialSpec::sech_well(2), TransformStep::jost(I), TransformStep::jost(k0)});
  for (double k0 : {1.0, 2.0})
    cases.push_back({PotentialSpec::sech_well(4), TransformStep::jost(3.0 * I), TransformStep::jost(k0)});
  for (const auto& c : cases) {
    const auto two = susy2_potential(c.base, c.u1, c.u2);
    const auto steps = chain_transform(c.base, {c.u1, c.u2});
    const double dev = max_rel_dev(steps, two, 0.0, 25.0);
    EXPECT_LT(dev, 1e-8) << c.base.kind_name() << " alpha2 = " << c.u2.alpha;
  }
}

TEST(Darboux, WronskianIdentityAndProfile) {
  const auto base = PotentialSpec::sech_well(4);
  const auto grid = uniform_grid(0.0, 15.0, 3001);
  const TransformStep s1 = TransformStep::jost(3.0 * I), s2 = TransformStep::jost(1.0);
  const auto u1 = build_transformation_function(base, s1, grid), u2 = build_transformation_function(base, s2, grid);
  const WronskianProfile p = wronskian_profile(u1, u2, s1.alpha, s2.alpha);
  EXPECT_LT(p.identity_deviation, 1e-6);
  EXPECT_TRUE(p.validated);
  EXPECT_GT(p.min_modulus, 0.0);
}

TEST(Darboux, MappedSolutionsSolveThePartner) {
  const auto base = PotentialSpec::sech_well(2);
  const auto v = susy2_potential(base, TransformStep::jost(I), TransformStep::jost(0.5));
  const auto grid = uniform_grid(0.05, 12.0, 2400);
  const auto V1 = potential_function(v);
  for (cplx s : {cplx(1.3), cplx(0.4, 0.3), cplx(2.0, 1.0)}) {
    const auto psi = jost_solution(base, s, grid);
    const auto phi = map_through_chain(v, psi);
    EXPECT_LT(schrodinger_residual(phi, V1), 1e-6) << s;
    // mapped Jost solutions keep the e^{isx} asymptotics up to a constant
    const cplx c = phi.states.back().y / std::exp(I * s * grid.back());
    const cplx c2 = phi.states[phi.size() - 200].y / std::exp(I * s * grid[phi.size() - 200]);
    EXPECT_LT(std::abs(c - c2), 1e-6 * std::abs(c)) << s;
  }
}

TEST(Darboux, MappedWronskianIsConstant) {
  const auto base = PotentialSpec::shifted_one_soliton(1.0, cplx(0.1, 0.3));
  const auto grid = uniform_grid(0.0, 12.0, 1201);
  const TransformStep st = TransformStep::regular(-2.0);
  const auto v = susy1_potential(base, st);
  const auto a = map_through_chain(v, jost_solution(base, 1.1, grid));
  const auto b = map_through_chain(v, jost_solution(base, -1.1, grid));
  const auto W = wronskian(a, b);
  for (std::size_t i = 1; i < W.size(); ++i) EXPECT_LT(std::abs(W[i] - W[1]), 1e-6 * std::abs(W[1]));
}

TEST(Darboux, Fi1MatchesFi2) {
  const auto base = PotentialSpec::sech_well(2);
  const auto grid = uniform_grid(0.0, 10.0, 1001);
  const auto V0 = potential_function(base);
  const auto u1 = build_transformation_function(base, TransformStep::jost(I), grid);
  const auto u2 = build_transformation_function(base, TransformStep::jost(0.7), grid);
  for (cplx s : {cplx(1.5), cplx(0.3, 0.8)}) {
    const auto psi = jost_solution(base, s, grid);
    const auto f1 = susy2_map(psi, u1, u2, V0, Susy2Form::Fi1);
    const auto f2 = susy2_map(psi, u1, u2, V0, Susy2Form::Fi2);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      num = std::max(num, std::abs(f1.states[i].y - f2.states[i].y));
      den = std::max(den, std::abs(f1.states[i].y));
    }
    EXPECT_LT(num / den, 1e-9) << s;
  }
}

TEST(Darboux, FialFunctionsSolveAtAlphas) {
  const auto base = PotentialSpec::zero(2.0);
  const TransformStep s1 = TransformStep::regular(-1.0, 2), s2 = TransformStep::jost(1.0);
  const auto v = chain_transform(base, {s1, s2});
  const auto grid = uniform_grid(0.05, 10.0, 2000);
  const auto V0 = potential_function(base), V2 = potential_function(v);
  const auto u1 = build_transformation_function(base, s1, grid), u2 = build_transformation_function(base, s2, grid);
  const auto a1 = susy2_map(u1, u1, u2, V0, Susy2Form::Alpha1);
  const auto a2 = susy2_map(u2, u1, u2, V0, Susy2Form::Alpha2);
  EXPECT_LT(schrodinger_residual(a1, V2), 1e-6);
  EXPECT_LT(schrodinger_residual(a2, V2), 1e-6);
}

TEST(Darboux, ReciprocalMapIsOneOverU) {
  const auto base = PotentialSpec::sech_well(1);
  const auto grid = uniform_grid(0.05, 5.0, 100);
  const auto u = build_transformation_function(base, TransformStep::regular(-0.25), grid);
  const auto r = susy1_map(u, u, potential_function(base));
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(std::abs(r.states[i].y * u.states[i].y - 1.0), 1e-12);
}

TEST(Darboux, InverseChainRecoversBase) {
  for (const auto& [a1, k0] : kEx1) {
    const auto z = PotentialSpec::zero(2 * a1);
    const std::vector<TransformStep> chain{TransformStep::regular(-a1 * a1, 2), TransformStep::jost(k0)};
    const auto back = chain_transform(z, inverse_chain(chain));
    EXPECT_LT(compare_on_grid(back, z, uniform_grid(0.0, 25.0, 2000)).max_deviation, 1e-7);
  }
  const auto so = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4));
  const auto back = chain_transform(so, inverse_chain({TransformStep::regular(1.0)}));
  EXPECT_LT(compare_on_grid(back, so, uniform_grid(0.0, 25.0, 2000)).max_deviation, 1e-7);
  EXPECT_EQ(inverse_chain({TransformStep::regular(1.0)}).size(), 2u);
}

TEST(Darboux, RemovalGivesSinhBarrier) {
  const auto so = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4));
  for (std::optional<double> guess : {std::optional<double>(1.0), std::optional<double>()}) {
    const RemovalResult r = remove_spectral_singularity(so, guess);
    EXPECT_NEAR(r.k0, 1.0, 1e-6);
    EXPECT_TRUE(r.simple);
    EXPECT_NEAR(r.potential.nu(), 1.0, 1e-12);
    EXPECT_LT(compare_on_grid(r.potential, PotentialSpec::sinh_barrier(1.0), uniform_grid(0.05, 25.0, 2000)).max_deviation,
              1e-7);
    EXPECT_NEAR(estimate_origin_strength(r.potential), 1.0, 1e-3);
  }
  EXPECT_THROW(remove_spectral_singularity(PotentialSpec::sech_well(2), 1.0), PreconditionError);
  EXPECT_THROW(remove_spectral_singularity(PotentialSpec::sech_well(2)), PreconditionError);
}

TEST(Darboux, JostSeedAtTheZeroAlsoRemoves) {
  const auto so = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4));
  const auto v = chain_transform(so, {TransformStep::jost(1.0)});
  EXPECT_NEAR(v.nu(), 1.0, 1e-12);
  EXPECT_LT(compare_on_grid(v, PotentialSpec::sinh_barrier(1.0), uniform_grid(0.05, 25.0, 2000)).max_deviation, 1e-7);
}

TEST(Darboux, DegenerateTransformations) {
  // duplicated seed: the second transformation function vanishes identically
  const auto z = PotentialSpec::zero(2.0);
  const TransformStep c = TransformStep::custom(-1.0, 0.0, 1.0, 0.0);
  EXPECT_THROW(chain_transform(z, {c, c}), DegenerateTransformError);
  // cos x has a node at pi/2
  try {
    chain_transform(z, {TransformStep::custom(1.0, 0.0, 1.0, 0.0)});
    FAIL() << "expected a degenerate transformation";
  } catch (const DegenerateTransformError& e) {
    EXPECT_NEAR(e.location(), std::numbers::pi / 2, 1e-3);
  }
  // W(sinh(c x)/c, e^{ix}) vanishes at x = 1 for this alpha
  EXPECT_THROW(susy2_potential(z, TransformStep::regular(cplx(2.86818612480111, -1.9413112949848)), TransformStep::jost(1.0)),
               DegenerateTransformError);
  EXPECT_THROW(susy2_potential(z, TransformStep::regular(1.0), TransformStep::regular(1.0)), DomainError);
}

TEST(Darboux, ChainStructureErrors) {
  const auto z = PotentialSpec::zero(2.0);
  EXPECT_THROW(chain_transform(z, {TransformStep::reciprocal(0, -1.0)}), Error);
  EXPECT_THROW(chain_transform(z, {TransformStep{4.0, JostSeed{1.0}, 1}}), Error);
  EXPECT_THROW(eval_potential(PotentialSpec::transformed_unvalidated(z, {TransformStep::regular(-1.0)}), 1.0), Error);
}

TEST(Darboux, ThreeStepChainMatchesCrumWronskian) {
  const auto z = PotentialSpec::zero(4.0);
  const std::vector<TransformStep> steps{TransformStep::regular(-1.0), TransformStep::jost(1.0),
                                         TransformStep::regular(-4.0)};
  const auto v = chain_transform(z, steps);
  for (double x0 : {0.4, 1.3, 3.0}) {
    const double h = 1e-3;
    const auto grid = uniform_grid(x0 - 2 * h, x0 + 2 * h, 5);
    std::vector<SolutionTrace> seeds;
    for (const auto& s : steps) seeds.push_back(build_transformation_function(z, s, grid));
    const auto W = crum_wronskian_oracle(z, seeds);
    std::vector<cplx> L;
    for (const cplx w : W) L.push_back(std::log(w));
    const cplx d2 = (-L[4] + 16.0 * L[3] - 30.0 * L[2] + 16.0 * L[1] - L[0]) / (12.0 * h * h);
    EXPECT_LT(std::abs(eval_potential(v, x0) - (-2.0 * d2)), 1e-5) << x0;
  }
}

TEST(Darboux, RealizeIsIdempotentAndDeterministic) {
  const auto z = PotentialSpec::zero(2.0);
  const auto a = chain_transform(z, {TransformStep::regular(-1.0, 2), TransformStep::jost(1.0)});
  const auto b = chain_transform(z, {TransformStep::regular(-1.0, 2), TransformStep::jost(1.0)});
  for (double x = 0.0; x < 20.0; x += 0.37) EXPECT_EQ(eval_potential(a, x), eval_potential(b, x));
  const auto c = realize(a);
  EXPECT_EQ(eval_potential(c, 1.0), eval_potential(a, 1.0));
}
