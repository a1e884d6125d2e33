#include <gsl/gsl_odeiv2.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>

#include "gsl_util.hpp"
#include "susy/errors.hpp"
#include "susy/solution.hpp"

namespace susy {

namespace {

struct OdeContext {
  const PotentialFn* V;
  cplx energy;
  std::exception_ptr error;
};

// State layout: Re y, Im y, Re y', Im y'
int schrodinger_rhs(double x, const double y[], double f[], void* params) {
  auto* ctx = static_cast<OdeContext*>(params);
  try {
    const cplx yy{y[0], y[1]};
    const cplx curvature = ((*ctx->V)(x) - ctx->energy) * yy;
    f[0] = y[2];
    f[1] = y[3];
    f[2] = curvature.real();
    f[3] = curvature.imag();
    if (!std::isfinite(f[2]) || !std::isfinite(f[3])) return GSL_EBADFUNC;
    return GSL_SUCCESS;
  } catch (...) {
    if (!ctx->error) ctx->error = std::current_exception();
    return GSL_EBADFUNC;
  }
}

// Step control on complex moduli: the error of (Re y, Im y) is measured against
// atol + rtol |y|, likewise for y'. Componentwise control stalls when one part is tiny.
struct ComplexControl {
  double atol, rtol;
};

void* cc_alloc() { return new ComplexControl{0.0, 0.0}; }

int cc_init(void* state, double eps_abs, double eps_rel, double, double) {
  *static_cast<ComplexControl*>(state) = {eps_abs, eps_rel};
  return GSL_SUCCESS;
}

double cc_ratio(const ComplexControl& c, const double y[], const double yerr[]) {
  const double ry = std::hypot(yerr[0], yerr[1]) / (c.atol + c.rtol * std::hypot(y[0], y[1]));
  const double rd = std::hypot(yerr[2], yerr[3]) / (c.atol + c.rtol * std::hypot(y[2], y[3]));
  return std::max(ry, rd);
}

int cc_hadjust(void* state, size_t, unsigned int ord, const double y[], const double yerr[], const double[],
               double* h) {
  const double r = cc_ratio(*static_cast<ComplexControl*>(state), y, yerr);
  constexpr double safety = 0.9;
  if (r > 1.1) {
    *h *= std::max(safety / std::pow(r, 1.0 / ord), 0.2);
    return GSL_ODEIV_HADJ_DEC;
  }
  if (r < 0.5) {
    *h *= std::clamp(safety / std::pow(r, 1.0 / (ord + 1.0)), 1.0, 5.0);
    return GSL_ODEIV_HADJ_INC;
  }
  return GSL_ODEIV_HADJ_NIL;
}

int cc_errlevel(void* state, double y, double dydt, double, size_t, double* errlev) {
  const auto* c = static_cast<ComplexControl*>(state);
  *errlev = c->atol + c->rtol * std::max(std::abs(y), std::abs(dydt));
  return GSL_SUCCESS;
}

int cc_set_driver(void*, const gsl_odeiv2_driver*) { return GSL_SUCCESS; }

void cc_free(void* state) { delete static_cast<ComplexControl*>(state); }

const gsl_odeiv2_control_type complex_control_type = {"complex-modulus", &cc_alloc, &cc_init, &cc_hadjust,
                                                       &cc_errlevel, &cc_set_driver, &cc_free};

struct StepDeleter {
  void operator()(gsl_odeiv2_step* s) const { gsl_odeiv2_step_free(s); }
};
struct ControlDeleter {
  void operator()(gsl_odeiv2_control* c) const { gsl_odeiv2_control_free(c); }
};
struct EvolveDeleter {
  void operator()(gsl_odeiv2_evolve* e) const { gsl_odeiv2_evolve_free(e); }
};

DenseNode make_node(const PotentialFn& V, cplx energy, double x, const double y[]) {
  const cplx yy{y[0], y[1]};
  return {x, yy, cplx{y[2], y[3]}, (V(x) - energy) * yy};
}

[[noreturn]] void fail(const std::string& what, double x) {
  std::ostringstream os;
  os << "integration failed: " << what << " at x = " << x;
  throw NonConvergenceError(os.str(), x);
}

}  // namespace

std::vector<double> SolutionTrace::grid() const {
  std::vector<double> g;
  g.reserve(states.size());
  for (const auto& s : states) g.push_back(s.x);
  return g;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("uniform_grid needs n >= 2 and hi > lo");
  std::vector<double> g(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<SolutionState> integrate_to_targets(const PotentialFn& V, cplx energy,
                                                const SolutionState& start,
                                                std::span<const double> targets,
                                                const IntegrationOptions& opts,
                                                std::vector<DenseNode>* nodes) {
  detail::silence_gsl();
  std::vector<SolutionState> out;
  out.reserve(targets.size());
  if (targets.empty()) return out;

  const double far = targets.back();
  const double dir = far >= start.x ? 1.0 : -1.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double prev = i == 0 ? start.x : targets[i - 1];
    if ((targets[i] - prev) * dir < 0.0) throw DomainError("integration targets must be monotone away from the start");
  }

  OdeContext ctx{&V, energy, nullptr};
  gsl_odeiv2_system sys{&schrodinger_rhs, nullptr, 4, &ctx};
  std::unique_ptr<gsl_odeiv2_step, StepDeleter> step(gsl_odeiv2_step_alloc(gsl_odeiv2_step_rk8pd, 4));
  std::unique_ptr<gsl_odeiv2_control, ControlDeleter> control(
      gsl_odeiv2_control_alloc(&complex_control_type));
  gsl_odeiv2_control_init(control.get(), opts.atol, opts.rtol, 1.0, 0.0);
  std::unique_ptr<gsl_odeiv2_evolve, EvolveDeleter> evolve(gsl_odeiv2_evolve_alloc(4));

  double y[4] = {start.y.real(), start.y.imag(), start.dy.real(), start.dy.imag()};
  double x = start.x;
  const double span = std::abs(far - start.x);
  double h = dir * std::min(1e-3 * std::max(1.0, span), opts.max_step > 0.0 ? opts.max_step : span);
  if (h == 0.0) h = dir * 1e-3;

  if (nodes) nodes->push_back(make_node(V, energy, x, y));

  std::size_t steps = 0;
  for (const double target : targets) {
    while (x != target) {
      if (opts.max_step > 0.0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;
      const double x_before = x;
      const int status = gsl_odeiv2_evolve_apply(evolve.get(), control.get(), step.get(), &sys, &x,
                                                 target, &h, y);
      if (ctx.error) std::rethrow_exception(ctx.error);
      if (status != GSL_SUCCESS) fail(gsl_strerror(status), x);
      if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) || !std::isfinite(y[3]))
        fail("solution overflowed", x);
      if (x == x_before || std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)))
        fail("step size underflow", x);
      if (++steps > opts.max_steps) fail("step budget exhausted", x);
      if (nodes) nodes->push_back(make_node(V, energy, x, y));
    }
    out.push_back({target, cplx{y[0], y[1]}, cplx{y[2], y[3]}});
  }
  return out;
}

DenseSolution integrate_dense(const PotentialFn& V, cplx energy, const SolutionState& start,
                              double end, const IntegrationOptions& opts) {
  std::vector<DenseNode> nodes;
  const double target[1] = {end};
  integrate_to_targets(V, energy, start, target, opts, &nodes);
  if (end < start.x) std::reverse(nodes.begin(), nodes.end());
  return DenseSolution(energy, std::move(nodes));
}

}  // namespace susy
