#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "susy/errors.hpp"
#include "susy/io.hpp"
#include "susy/kernels.hpp"
#include "susy/potential.hpp"

using namespace susy;
using oracle::sech;

TEST(Potentials, CatalogValues) {
  EXPECT_EQ(eval_potential(PotentialSpec::zero(), 1.0), cplx(0.0));
  EXPECT_NEAR(std::abs(eval_potential(PotentialSpec::shifted_one_soliton(1.0, 0.0), 0.0) - cplx(-2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_potential(PotentialSpec::closed_form_2susy(1.0, 1.0), 0.0) - cplx(-4.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_potential(PotentialSpec::sech_well(2), 0.0) - cplx(-6.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_potential(PotentialSpec::sech_well(4), 0.0) - cplx(-20.0)), 0.0, 1e-15);
  const double x = 0.37;
  EXPECT_NEAR(eval_potential(PotentialSpec::sinh_barrier(2.0), x).real(), 8.0 / std::pow(std::sinh(2 * x), 2), 1e-12);
  EXPECT_NEAR(eval_potential(PotentialSpec::sech_well(1, 3.0), x).real(), -18.0 * std::pow(sech(3 * x), 2), 1e-12);
}

TEST(Potentials, ConstructionErrors) {
  EXPECT_THROW(PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, 1.6)), DomainError);
  EXPECT_THROW(PotentialSpec::shifted_one_soliton(-1.0, 0.0), DomainError);
  EXPECT_THROW(PotentialSpec::sech_well(0), DomainError);
  EXPECT_THROW(PotentialSpec::closed_form_2susy(1.0, 0.0), DomainError);
  EXPECT_THROW(eval_potential(PotentialSpec::sinh_barrier(), 0.0), DomainError);
}

TEST(Potentials, SolitonDecayEnvelope) {
  // e^{2ax}|V| tends to a constant for b = i beta
  const auto v = PotentialSpec::shifted_one_soliton(1.0, cplx(0.0, std::numbers::pi / 4));
  double prev = 0.0;
  for (double x = 20.0; x <= 30.0; x += 2.0) {
    const double env = std::exp(2 * x) * std::abs(eval_potential(v, x));
    if (prev > 0.0) EXPECT_NEAR(env / prev, 1.0, 1e-8);
    prev = env;
  }
  for (double x = 0.0; x <= 30.0; x += 0.01) EXPECT_TRUE(std::isfinite(std::abs(eval_potential(v, x))));
}

TEST(Potentials, DerivativeMatchesFiniteDifference) {
  const PotentialSpec specs[] = {PotentialSpec::sech_well(2), PotentialSpec::shifted_one_soliton(1.0, cplx(0.3, 0.5)),
                                 PotentialSpec::sinh_barrier(1.5), PotentialSpec::closed_form_2susy(2.0, 1.0)};
  for (const auto& s : specs) {
    for (double x : {0.3, 1.1, 2.7}) {
      const double h = 1e-4;
      const cplx fd1 = (eval_potential(s, x + h) - eval_potential(s, x - h)) / (2 * h);
      const cplx fd2 = (eval_potential(s, x + h) - 2.0 * eval_potential(s, x) + eval_potential(s, x - h)) / (h * h);
      const cplx d1 = eval_potential_derivative(s, x, 1), d2 = eval_potential_derivative(s, x, 2);
      EXPECT_LE(std::abs(d1 - fd1), 1e-6 * std::max(1.0, std::abs(d1))) << s.kind_name() << " x=" << x;
      EXPECT_LE(std::abs(d2 - fd2), 1e-4 * std::max(1.0, std::abs(d2))) << s.kind_name() << " x=" << x;
    }
  }
  EXPECT_EQ(eval_potential_derivative(PotentialSpec::zero(), 2.0, 1), cplx(0.0));
  EXPECT_NEAR(std::abs(eval_potential_derivative(PotentialSpec::sech_well(1), 0.0, 1)), 0.0, 1e-15);
  const double x = 0.8;
  EXPECT_NEAR(std::abs(eval_potential_derivative(PotentialSpec::shifted_one_soliton(1.0, 0.0), x, 1) -
                       cplx(4.0 * std::sinh(x) / std::pow(std::cosh(x), 3))),
              0.0, 1e-13);
}

TEST(Potentials, ExponentialDecayCheck) {
  const auto v = PotentialSpec::shifted_one_soliton(1.0, 0.0);
  const DecayReport ok = check_exponential_decay(v, 1.0, 40.0);
  EXPECT_TRUE(std::isfinite(ok.integral));
  EXPECT_FALSE(ok.tail_growing);
  EXPECT_TRUE(check_exponential_decay(v, 3.0, 40.0).tail_growing);
  const DecayReport z = check_exponential_decay(PotentialSpec::zero(), 5.0, 100.0);
  EXPECT_EQ(z.integral, 0.0);
  EXPECT_FALSE(z.tail_growing);
  EXPECT_THROW(check_exponential_decay(PotentialSpec::sinh_barrier(), 1.0, 10.0), DomainError);
  EXPECT_NO_THROW(check_exponential_decay(PotentialSpec::sinh_barrier(), 1.0, 10.0, 1e-3));
}

TEST(Potentials, OriginStrength) {
  EXPECT_NEAR(estimate_origin_strength(PotentialSpec::sinh_barrier(1.0)), 1.0, 1e-3);
  EXPECT_NEAR(estimate_origin_strength(PotentialSpec::sinh_barrier(3.0)), 1.0, 1e-3);
  EXPECT_EQ(estimate_origin_strength(PotentialSpec::zero()), 0.0);
  EXPECT_EQ(estimate_origin_strength(PotentialSpec::sech_well(2)), 0.0);
}

TEST(Potentials, SerializationRoundTrip) {
  const PotentialSpec specs[] = {PotentialSpec::zero(3.0), PotentialSpec::sech_well(4, 0.5),
                                 PotentialSpec::shifted_one_soliton(1.2, cplx(0.1, -0.7)),
                                 PotentialSpec::sinh_barrier(2.0), PotentialSpec::closed_form_2susy(2.0, -0.5)};
  const auto grid = uniform_grid(0.01, 10.0, 100);
  for (const auto& s : specs) {
    const auto j = io::spec_to_json(s);
    const PotentialSpec back = io::spec_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(io::spec_to_json(back), j);
    for (double x : grid) EXPECT_EQ(eval_potential(back, x), eval_potential(s, x)) << s.kind_name();
  }
}

TEST(Potentials, SampleSerialMatchesParallel) {
  const auto v = PotentialSpec::shifted_one_soliton(1.0, cplx(0.2, 0.6));
  const auto grid = uniform_grid(0.0, 20.0, 4001);
  EXPECT_EQ(sample_potential(v, grid), sample_potential_serial(v, grid));
}
