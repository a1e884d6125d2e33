#include "susy/potential.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "susy/errors.hpp"

namespace susy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << v;
    throw DomainError(os.str());
  }
}

cplx sech_sq(cplx z) {
  const cplx c = std::cosh(z);
  return 1.0 / (c * c);
}

}  // namespace

PotentialSpec::PotentialSpec(PotentialKind kind, double decay_rate,
                             std::optional<double> origin_strength)
    : kind_(std::move(kind)), decay_rate_(decay_rate), origin_strength_(origin_strength) {
  require_positive(decay_rate_, "decay_rate");
  if (origin_strength_ && (*origin_strength_ < 0.0 || !std::isfinite(*origin_strength_)))
    throw DomainError("origin_strength must be non-negative");
}

PotentialSpec PotentialSpec::zero(double decay_rate) {
  return PotentialSpec(ZeroPotential{}, decay_rate, std::nullopt);
}

PotentialSpec PotentialSpec::sech_well(int lambda, double a) {
  if (lambda < 1) throw DomainError("SechWell lambda must be >= 1");
  require_positive(a, "SechWell a");
  return PotentialSpec(SechWell{lambda, a}, 2.0 * a, std::nullopt);
}

PotentialSpec PotentialSpec::shifted_one_soliton(double a, cplx b) {
  require_positive(a, "ShiftedOneSoliton a");
  if (!(std::abs(b.imag()) < std::numbers::pi / 2))
    throw DomainError("ShiftedOneSoliton requires |Im b| < pi/2 (cosh(ax+b) has a zero on the half-line)");
  return PotentialSpec(ShiftedOneSoliton{a, b}, 2.0 * a, std::nullopt);
}

PotentialSpec PotentialSpec::sinh_barrier(double a) {
  require_positive(a, "SinhBarrier a");
  return PotentialSpec(SinhBarrier{a}, 2.0 * a, 1.0);
}

PotentialSpec PotentialSpec::closed_form_2susy(double a1, double k0) {
  require_positive(a1, "ClosedForm2Susy a1");
  if (k0 == 0.0 || !std::isfinite(k0)) throw DomainError("ClosedForm2Susy k0 must be real and nonzero");
  return PotentialSpec(ClosedForm2Susy{a1, k0}, 2.0 * a1, std::nullopt);
}

PotentialSpec PotentialSpec::transformed_unvalidated(PotentialSpec base,
                                                     std::vector<TransformStep> chain) {
  const double rate = base.decay_rate();
  return PotentialSpec(
      Transformed{std::make_shared<const PotentialSpec>(std::move(base)), std::move(chain), nullptr},
      rate, std::nullopt);
}

PotentialSpec PotentialSpec::transformed_validated(std::shared_ptr<const PotentialSpec> base,
                                                   std::vector<TransformStep> chain,
                                                   std::shared_ptr<const ChainEvaluator> evaluator,
                                                   std::optional<double> origin_strength) {
  if (!base || !evaluator) throw PreconditionError("validated transform needs base and evaluator");
  const double rate = base->decay_rate();
  return PotentialSpec(Transformed{std::move(base), std::move(chain), std::move(evaluator)}, rate,
                       origin_strength);
}

bool PotentialSpec::is_validated() const noexcept {
  if (const auto* t = std::get_if<Transformed>(&kind_)) return t->evaluator != nullptr;
  return true;
}

std::string PotentialSpec::kind_name() const {
  return std::visit(overloaded{
                        [](const ZeroPotential&) { return std::string("zero"); },
                        [](const SechWell&) { return std::string("sech_well"); },
                        [](const ShiftedOneSoliton&) { return std::string("shifted_one_soliton"); },
                        [](const SinhBarrier&) { return std::string("sinh_barrier"); },
                        [](const ClosedForm2Susy&) { return std::string("closed_form_2susy"); },
                        [](const Transformed&) { return std::string("transformed"); },
                    },
                    kind_);
}

double PotentialSpec::length_scale() const noexcept {
  return std::visit(overloaded{
                        [](const ZeroPotential&) { return 1.0; },
                        [](const SechWell& p) { return 1.0 / p.a; },
                        [](const ShiftedOneSoliton& p) { return 1.0 / p.a; },
                        [](const SinhBarrier& p) { return 1.0 / p.a; },
                        [](const ClosedForm2Susy& p) { return 1.0 / p.a1; },
                        [](const Transformed& p) { return p.base->length_scale(); },
                    },
                    kind_);
}

double PotentialSpec::origin_abscissa(const NumericConfig& cfg) const noexcept {
  return nu() > 0.0 ? cfg.origin_x_min * length_scale() : 0.0;
}

PotentialSpec PotentialSpec::with_decay_rate(double rate) const {
  PotentialSpec copy = *this;
  require_positive(rate, "decay_rate");
  copy.decay_rate_ = rate;
  return copy;
}

PotentialSpec PotentialSpec::with_origin_strength(std::optional<double> nu) const {
  return PotentialSpec(kind_, decay_rate_, nu);
}

cplx eval_potential(const PotentialSpec& spec, double x) {
  if (!(x >= 0.0)) throw DomainError("potential evaluated at negative or NaN abscissa");
  if (x == 0.0 && spec.nu() > 0.0)
    throw DomainError("potential with origin_strength > 0 is singular at x = 0");

  return std::visit(
      overloaded{
          [](const ZeroPotential&) { return cplx{}; },
          [x](const SechWell& p) {
            const double c = p.lambda * (p.lambda + 1.0);
            const double ch = std::cosh(p.a * x);
            return cplx{-c * p.a * p.a / (ch * ch)};
          },
          [x](const ShiftedOneSoliton& p) { return -2.0 * p.a * p.a * sech_sq(p.a * x + p.b); },
          [x](const SinhBarrier& p) {
            const double sh = std::sinh(p.a * x);
            return cplx{2.0 * p.a * p.a / (sh * sh)};
          },
          [x](const ClosedForm2Susy& p) {
            const cplx d = p.a1 * std::cosh(p.a1 * x) - I * p.k0 * std::sinh(p.a1 * x);
            return -2.0 * p.a1 * p.a1 * (p.a1 * p.a1 + p.k0 * p.k0) / (d * d);
          },
          [x](const Transformed& p) {
            if (!p.evaluator)
              throw PreconditionError("transformed potential evaluated before its chain was validated");
            return p.evaluator->potential(x);
          },
      },
      spec.kind());
}

cplx eval_potential_derivative(const PotentialSpec& spec, double x, int order) {
  if (order != 1 && order != 2) throw DomainError("derivative order must be 1 or 2");
  if (!(x >= 0.0)) throw DomainError("derivative evaluated at negative abscissa");
  if (x == 0.0 && spec.nu() > 0.0) throw DomainError("potential is singular at x = 0");

  // -c a^2 sech^2(z), z = a x + b:  V' = 2 c a^3 sech^2 tanh,  V'' = 2 c a^4 sech^2 (sech^2 - 2 tanh^2)
  auto sech_family = [order](double c, double a, cplx z) -> cplx {
    const cplx s2 = sech_sq(z);
    const cplx t = std::tanh(z);
    if (order == 1) return 2.0 * c * a * a * a * s2 * t;
    return 2.0 * c * a * a * a * a * s2 * (s2 - 2.0 * t * t);
  };

  return std::visit(
      overloaded{
          [](const ZeroPotential&) { return cplx{}; },
          [&](const SechWell& p) { return sech_family(p.lambda * (p.lambda + 1.0), p.a, cplx{p.a * x}); },
          [&](const ShiftedOneSoliton& p) { return sech_family(2.0, p.a, p.a * x + p.b); },
          [&](const SinhBarrier& p) -> cplx {
            const double a = p.a;
            const double sh = std::sinh(a * x);
            const double cs2 = 1.0 / (sh * sh);
            const double cth = 1.0 / std::tanh(a * x);
            if (order == 1) return -4.0 * a * a * a * cs2 * cth;
            return 4.0 * a * a * a * a * cs2 * (2.0 * cth * cth + cs2);
          },
          [&](const ClosedForm2Susy& p) -> cplx {
            // V = -K / D^2 with D'' = a1^2 D
            const double a1 = p.a1;
            const double K = 2.0 * a1 * a1 * (a1 * a1 + p.k0 * p.k0);
            const cplx D = a1 * std::cosh(a1 * x) - I * p.k0 * std::sinh(a1 * x);
            const cplx Dp = a1 * a1 * std::sinh(a1 * x) - I * p.k0 * a1 * std::cosh(a1 * x);
            if (order == 1) return 2.0 * K * Dp / (D * D * D);
            return 2.0 * K * (a1 * a1 / (D * D) - 3.0 * Dp * Dp / (D * D * D * D));
          },
          [](const Transformed&) -> cplx {
            throw UnsupportedOperation("analytic derivatives are only available for catalog potentials");
          },
      },
      spec.kind());
}

}  // namespace susy
