#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "susy/errors.hpp"
#include "susy/kernels.hpp"
#include "susy/schrodinger.hpp"

using namespace susy;
using oracle::sech;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Jost, ZeroPotential) {
  const JostEngine e(PotentialSpec::zero());
  for (cplx s : {cplx(1.0), cplx(0.3, 0.2), cplx(-4.0, 2.0)}) EXPECT_NEAR(std::abs(e.evaluate(s).A - 1.0), 0.0, 1e-10);
  const auto grid = uniform_grid(0.0, 5.0, 51);
  const auto t = e.solution(2.0, grid);
  for (const auto& st : t.states) EXPECT_NEAR(std::abs(st.y - std::exp(2.0 * I * st.x)), 0.0, 1e-10);
}

TEST(Jost, SechWellsAgainstRk4Oracle) {
  // frozen closed-form values of (s^2+1)(s^2+9)/prod(s+ij) and an independent RK4 sweep
  const PotentialSpec sw4 = PotentialSpec::sech_well(4);
  const JostEngine e(sw4);
  const std::pair<cplx, cplx> frozen[] = {
      {cplx(0.5, 0.0), cplx(0.22171945701357466, 0.34389140271493213)},
      {cplx(2.0, 0.5), cplx(-0.4181543877294443, 0.020115665074176515)},
      {cplx(-1.0, -0.3), cplx(-0.13012541977211996, -0.7367339760360212)},
  };
  for (const auto& [s, A] : frozen) {
    EXPECT_LT(rel(e.evaluate(s).A, A), 1e-8) << s;
    EXPECT_LT(rel(closed_form_jost(sw4, s), A), 1e-14) << s;
  }
  auto V4 = [](double x) { return cplx(-20.0 * sech(x) * sech(x)); };
  for (cplx s : {cplx(0.7), cplx(1.5, 0.4)}) EXPECT_LT(rel(e.evaluate(s).A, oracle::jost_rk4(V4, s)), 1e-7) << s;
}

TEST(Jost, ClosedFormsOnTheRealAxisAndStrip) {
  const PotentialSpec specs[] = {PotentialSpec::sech_well(1), PotentialSpec::sech_well(2), PotentialSpec::sech_well(4),
                                 PotentialSpec::sech_well(2, 1.7),
                                 PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4)),
                                 PotentialSpec::shifted_one_soliton(0.8, cplx(0.4, -0.3)),
                                 PotentialSpec::closed_form_2susy(2.0, 1.0), PotentialSpec::sinh_barrier(1.0)};
  for (const auto& spec : specs) {
    const JostEngine e(spec);
    const double q = -spec.decay_rate() / 5.0;
    for (cplx s : {cplx(0.1), cplx(0.9), cplx(3.0), cplx(-2.0), cplx(0.5, 0.7), cplx(-1.0, q), cplx(2.0, q)}) {
      const cplx ref = closed_form_jost(spec, s);
      EXPECT_LT(std::abs(e.evaluate(s).A - ref), 1e-7 * std::max(1.0, std::abs(ref))) << spec.kind_name() << " " << s;
    }
  }
}

TEST(Jost, ScalingRelation) {
  // e+(x, s; a) = e+(a x, s / a; 1)
  const double a = 1.7;
  const auto grid = uniform_grid(0.0, 4.0, 41);
  const cplx s(1.3, 0.2);
  const auto ta = jost_solution(PotentialSpec::sech_well(2, a), s, grid);
  for (const auto& st : ta.states) {
    const cplx ref = closed_form_jost_solution(PotentialSpec::sech_well(2), s / a, a * st.x).y;
    EXPECT_LT(std::abs(st.y - ref), 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Jost, LargeKAsymptotics) {
  // A = 1 - 3i/k + O(1/k^2) for -6 sech^2
  const JostEngine e(PotentialSpec::sech_well(2));
  for (double k : {100.0, 1000.0}) EXPECT_LT(std::abs(k * (e.evaluate(k).A - 1.0) + 3.0 * I), 20.0 / k) << k;
}

TEST(Jost, ParameterDomain) {
  const JostEngine e(PotentialSpec::sech_well(1));
  EXPECT_THROW(e.evaluate(0.0), DomainError);
  EXPECT_THROW(e.evaluate(cplx(1.0, -0.6)), DomainError);
  EXPECT_NO_THROW(e.evaluate(cplx(1.0, -0.49)));
}

TEST(Jost, CutoffGrowsBelowTheAxis) {
  const auto spec = PotentialSpec::sech_well(2);
  const double up = jost_cutoff(spec, 1.0), down = jost_cutoff(spec, cplx(1.0, -0.4));
  EXPECT_GT(down, up);
  NumericConfig cfg;
  cfg.cutoff_cap_factor = 2.0;
  EXPECT_THROW(jost_cutoff(spec, 1.0, cfg), NonConvergenceError);
}

TEST(Jost, SolitonZeroSignDoesNotChangeEnergy) {
  for (double sgn : {1.0, -1.0}) {
    const auto spec = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, sgn * std::numbers::pi / 4));
    const JostEngine e(spec);
    EXPECT_LT(std::abs(e.evaluate(sgn).A), 1e-8);
    EXPECT_GT(std::abs(e.evaluate(-sgn).A), 0.5);
  }
}

TEST(Solutions, RegularAndPhysical) {
  const auto zero = PotentialSpec::zero();
  const auto grid = uniform_grid(0.0, 6.0, 61);
  const auto reg = regular_solution(zero, cplx(-4.0), grid);
  for (const auto& st : reg.states) EXPECT_NEAR(std::abs(st.y - std::sinh(2 * st.x) / 2.0), 0.0, 1e-8 * std::cosh(2 * st.x));
  const auto phys = physical_solution(zero, 1.5, grid);
  EXPECT_FALSE(phys.at_spectral_singularity);
  for (const auto& st : phys.trace.states) EXPECT_NEAR(std::abs(st.y - std::sin(1.5 * st.x) / 1.5), 0.0, 1e-9);
}

TEST(Solutions, PhysicalSolutionAtSingularity) {
  const auto spec = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4));
  const auto grid = uniform_grid(0.0, 8.0, 81);
  const auto phys = physical_solution(spec, 1.0, grid);
  EXPECT_TRUE(phys.at_spectral_singularity);
  // proportional to e+(x, k0)
  const auto e = jost_solution(spec, 1.0, grid);
  const cplx c = phys.trace.states[40].y / e.states[40].y;
  for (std::size_t i = 1; i < grid.size(); ++i)
    EXPECT_LT(std::abs(phys.trace.states[i].y - c * e.states[i].y), 1e-6 * std::abs(c));
}

TEST(Solutions, WronskianConstancyAndResidual) {
  const auto spec = PotentialSpec::shifted_one_soliton(1.0, cplx(0.2, 0.5));
  const auto grid = uniform_grid(0.0, 15.0, 1501);
  const cplx k = 1.3;
  const auto a = jost_solution(spec, k, grid), b = jost_solution(spec, -k, grid);
  const auto W = wronskian(a, b);
  for (const cplx w : W) EXPECT_LT(std::abs(w - W.front()), 1e-6 * std::abs(W.front()));
  // W(e+(k), e+(-k)) = -2ik
  EXPECT_LT(std::abs(W.front() + 2.0 * I * k), 1e-8);
  const auto V = potential_function(spec);
  EXPECT_LT(schrodinger_residual(a, V), 1e-6);
  EXPECT_LT(schrodinger_residual(regular_solution(spec, cplx(0.3, 0.1), grid), V), 1e-6);
}

TEST(Solutions, SingularOriginJostFunction) {
  // generalized A for 2a^2/sinh^2(ax) is 1/(a - is)
  for (double a : {1.0, 2.0}) {
    const JostEngine e(PotentialSpec::sinh_barrier(a));
    for (cplx s : {cplx(0.5), cplx(2.0, 0.5), cplx(-1.0)}) EXPECT_LT(rel(e.evaluate(s).A, 1.0 / (a - I * s)), 1e-6) << a;
  }
}

TEST(Kernels, BatchSerialMatchesParallel) {
  const JostEngine e(PotentialSpec::sech_well(2));
  std::vector<cplx> s;
  for (int i = 0; i < 24; ++i) s.emplace_back(-3.0 + 0.25 * i, 0.1 * (i % 4) - 0.1);
  s.push_back(0.0);  // captured as a per-sample failure
  const auto p = jost_batch(e, s), q = jost_batch_serial(e, s);
  ASSERT_EQ(p.size(), q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p[i].ok, q[i].ok);
    EXPECT_EQ(p[i].A, q[i].A);
    EXPECT_EQ(p[i].error, q[i].error);
  }
  EXPECT_FALSE(p.back().ok);
}

TEST(Kernels, ThreadCap) {
  set_max_threads(1);
  EXPECT_EQ(max_threads(), 1);
  set_max_threads(0);
  EXPECT_GE(max_threads(), 1);
}
