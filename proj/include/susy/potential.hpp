#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "susy/config.hpp"

namespace susy {

// ---------------------------------------------------------------------------
// Transformation steps (declared here because Transformed potentials own them)
// ---------------------------------------------------------------------------

/// u = e+(x, s), the Jost solution of the base potential.
struct JostSeed {
  cplx s;
};
/// u vanishing at the origin: (0, 1) for a regular base, Frobenius branch otherwise.
struct RegularSeed {};
/// u integrated from arbitrary Cauchy data.
struct CustomSeed {
  double x0 = 0.0;
  cplx y0;
  cplx dy0;
};
/// Backward function of an earlier step: 1/u for a first-order step,
/// u_{2,1}/W(u1,u2) for a member of a second-order block.
struct ReciprocalSeed {
  std::size_t of = 0;
};

using Seed = std::variant<JostSeed, RegularSeed, CustomSeed, ReciprocalSeed>;

/// One Darboux step. `order == 2` marks this step and the next one as a second-order
/// block evaluated through W(u1, u2).
struct TransformStep {
  cplx alpha;
  Seed seed;
  int order = 1;

  static TransformStep jost(cplx s, int order = 1) { return {s * s, JostSeed{s}, order}; }
  static TransformStep regular(cplx alpha, int order = 1) { return {alpha, RegularSeed{}, order}; }
  static TransformStep custom(cplx alpha, double x0, cplx y0, cplx dy0, int order = 1) {
    return {alpha, CustomSeed{x0, y0, dy0}, order};
  }
  static TransformStep reciprocal(std::size_t of, cplx alpha, int order = 1) {
    return {alpha, ReciprocalSeed{of}, order};
  }
};

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

class PotentialSpec;

/// Evaluates a validated transformation chain. Implemented by the darboux module.
class ChainEvaluator {
 public:
  virtual ~ChainEvaluator() = default;
  virtual cplx potential(double x) const = 0;
};

struct ZeroPotential {};

/// V(x) = -lambda (lambda + 1) a^2 sech^2(a x)
struct SechWell {
  int lambda = 1;
  double a = 1.0;
};

/// V(x) = -2 a^2 / cosh^2(a x + b), |Im b| < pi/2
struct ShiftedOneSoliton {
  double a = 1.0;
  cplx b;
};

/// V(x) = 2 a^2 / sinh^2(a x)
struct SinhBarrier {
  double a = 1.0;
};

/// V(x) = -2 a1^2 (a1^2 + k0^2) / [a1 cosh(a1 x) - i k0 sinh(a1 x)]^2
struct ClosedForm2Susy {
  double a1 = 1.0;
  double k0 = 1.0;
};

struct Transformed {
  std::shared_ptr<const PotentialSpec> base;
  std::vector<TransformStep> chain;
  std::shared_ptr<const ChainEvaluator> evaluator;  // null until validated
};

using PotentialKind =
    std::variant<ZeroPotential, SechWell, ShiftedOneSoliton, SinhBarrier, ClosedForm2Susy, Transformed>;

/// Immutable, declarative description of a potential on the half-line.
class PotentialSpec {
 public:
  static PotentialSpec zero(double decay_rate = 2.0);
  static PotentialSpec sech_well(int lambda, double a = 1.0);
  static PotentialSpec shifted_one_soliton(double a, cplx b);
  static PotentialSpec sinh_barrier(double a = 1.0);
  static PotentialSpec closed_form_2susy(double a1, double k0);

  /// Declarative transformed spec; not evaluable until passed through darboux::realize.
  static PotentialSpec transformed_unvalidated(PotentialSpec base, std::vector<TransformStep> chain);
  /// Used by the darboux module once the chain has passed its nodeless checks.
  static PotentialSpec transformed_validated(std::shared_ptr<const PotentialSpec> base,
                                             std::vector<TransformStep> chain,
                                             std::shared_ptr<const ChainEvaluator> evaluator,
                                             std::optional<double> origin_strength);

  const PotentialKind& kind() const noexcept { return kind_; }
  double decay_rate() const noexcept { return decay_rate_; }
  std::optional<double> origin_strength() const noexcept { return origin_strength_; }
  /// Effective nu: origin_strength or 0.
  double nu() const noexcept { return origin_strength_.value_or(0.0); }

  bool is_catalog() const noexcept { return !std::holds_alternative<Transformed>(kind_); }
  bool is_validated() const noexcept;
  std::string kind_name() const;
  /// Natural length scale 1/a of the catalog family (1 for Zero; inherited for Transformed).
  double length_scale() const noexcept;
  /// Smallest abscissa at which solutions are seeded: 0, or origin_x_min * scale when nu > 0.
  double origin_abscissa(const NumericConfig& cfg) const noexcept;

  PotentialSpec with_decay_rate(double rate) const;
  PotentialSpec with_origin_strength(std::optional<double> nu) const;

 private:
  PotentialSpec(PotentialKind kind, double decay_rate, std::optional<double> origin_strength);

  PotentialKind kind_;
  double decay_rate_;
  std::optional<double> origin_strength_;
};

cplx eval_potential(const PotentialSpec& spec, double x);

/// Exact first or second derivative of a catalog closed form.
cplx eval_potential_derivative(const PotentialSpec& spec, double x, int order);

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

struct DecayReport {
  double integral = 0.0;      // \int_{x_min}^{x_max} e^{eps x} |V(x)| dx
  double abs_error = 0.0;
  bool tail_growing = false;  // integrand still increasing at x_max
};

DecayReport check_exponential_decay(const PotentialSpec& spec, double eps, double x_max,
                                    double x_min = 0.0);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Default window [1e-4, 1e-2] times the potential's length scale.
FitWindow default_origin_window(const PotentialSpec& spec);

/// Fits V(x) ~ nu (nu + 1) / x^2 near the origin; returns the non-negative root.
double estimate_origin_strength(const PotentialSpec& spec, std::optional<FitWindow> window = {},
                                double zero_threshold = 1e-3, double max_dispersion = 0.05);

}  // namespace susy
