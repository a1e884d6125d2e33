#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <vector>

#include "gsl_util.hpp"
#include "susy/errors.hpp"
#include "susy/potential.hpp"

namespace susy {

namespace {

struct WeightedModulus {
  const PotentialSpec* spec;
  double eps;
  std::exception_ptr error;
};

double weighted_modulus(double x, void* params) {
  auto* p = static_cast<WeightedModulus*>(params);
  try {
    return std::exp(p->eps * x) * std::abs(eval_potential(*p->spec, x));
  } catch (...) {
    if (!p->error) p->error = std::current_exception();
    return 0.0;
  }
}

}  // namespace

DecayReport check_exponential_decay(const PotentialSpec& spec, double eps, double x_max,
                                    double x_min) {
  if (!(eps > 0.0)) throw DomainError("check_exponential_decay: eps must be positive");
  if (!(x_max > x_min) || x_min < 0.0) throw DomainError("check_exponential_decay: need 0 <= x_min < x_max");
  if (spec.nu() >= 0.5 && x_min <= 0.0)
    throw DomainError("origin singularity is not integrable; pass x_min > 0");

  detail::silence_gsl();
  WeightedModulus params{&spec, eps, nullptr};
  gsl_function f{&weighted_modulus, &params};

  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(2000), &gsl_integration_workspace_free);
  DecayReport report;
  // x_min == 0 with a weak singularity (nu < 1/2) needs an endpoint-singular rule
  const int status =
      (spec.nu() > 0.0 && x_min == 0.0)
          ? gsl_integration_qags(&f, x_min, x_max, 0.0, 1e-10, 2000, ws.get(), &report.integral,
                                 &report.abs_error)
          : gsl_integration_qag(&f, x_min, x_max, 0.0, 1e-10, 2000, GSL_INTEG_GAUSS61, ws.get(),
                                &report.integral, &report.abs_error);
  if (params.error) std::rethrow_exception(params.error);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw NonConvergenceError(std::string("decay quadrature failed: ") + gsl_strerror(status), x_max);

  const double delta = std::min(1.0 / eps, 0.5 * (x_max - x_min));
  const double f_end = weighted_modulus(x_max, &params);
  const double f_before = weighted_modulus(x_max - delta, &params);
  report.tail_growing = f_end > 0.0 && f_end > f_before * (1.0 + 1e-12);
  return report;
}

FitWindow default_origin_window(const PotentialSpec& spec) {
  const double L = spec.length_scale();
  return {1e-4 * L, 1e-2 * L};
}

double estimate_origin_strength(const PotentialSpec& spec, std::optional<FitWindow> window,
                                double zero_threshold, double max_dispersion) {
  const FitWindow w = window.value_or(default_origin_window(spec));
  if (!(w.lo > 0.0) || !(w.hi > w.lo)) throw DomainError("origin fit window must satisfy 0 < lo < hi");

  constexpr int kSamples = 41;
  std::vector<double> vals(kSamples);
  const double ratio = std::log(w.hi / w.lo) / (kSamples - 1);
  for (int i = 0; i < kSamples; ++i) {
    const double x = w.lo * std::exp(ratio * i);
    vals[i] = x * x * eval_potential(spec, x).real();
  }
  std::vector<double> sorted = vals;
  std::nth_element(sorted.begin(), sorted.begin() + kSamples / 2, sorted.end());
  const double median = sorted[kSamples / 2];

  if (std::abs(median) < zero_threshold) return 0.0;

  const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
  if ((*mx - *mn) > max_dispersion * std::abs(median))
    throw InconclusiveFit("x^2 V(x) is not approximately constant over the fit window");
  if (median < 0.0)
    throw InconclusiveFit("attractive 1/x^2 behaviour has no non-negative singularity strength");

  return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * median));
}

}  // namespace susy
