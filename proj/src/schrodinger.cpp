#include "susy/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

struct Cutoff {
  double x = 0.0;
  double tail = 0.0;
};

Cutoff search_cutoff(const PotentialSpec& spec, const PotentialFn& V, cplx s, const NumericConfig& cfg) {
  const double eps = spec.decay_rate();
  if (cfg.x_max_override) return {*cfg.x_max_override, 0.0};
  const double gamma = 2.0 * std::max(0.0, -s.imag());
  const double rate = eps - gamma;
  if (!(rate > 0.0)) throw DomainError("spectral parameter lies outside the Jost strip");

  const double lattice = 0.5 / eps;
  const double window = 2.0 / eps;
  const double cap = cfg.cutoff_cap_factor / eps;
  constexpr int samples = 33;
  for (double X = std::max(1.0 / eps, spec.origin_abscissa(cfg)); X <= cap; X += lattice) {
    double C = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double x = X + window * j / (samples - 1);
      C = std::max(C, std::abs(V(x)) * std::exp(eps * x));
    }
    const double tail = C * std::exp(-rate * X) / rate;
    // below the real axis the backward sweep amplifies rounding by e^{gamma X}; stop once
    // the tail is under that floor
    const double floor = std::numeric_limits<double>::epsilon() * std::exp(gamma * X);
    if (tail < std::max(cfg.tail_tol, floor)) return {X, std::max(tail, floor)};
  }
  std::ostringstream os;
  os << "Jost cutoff search exceeded cap x = " << cap << " (decay_rate " << eps << " too small for tail_tol "
     << cfg.tail_tol << ")";
  throw NonConvergenceError(os.str(), cap);
}

}  // namespace

SolutionState frobenius_seed(const PotentialFn& V, double nu, cplx E, double x) {
  const cplx v0 = V(x) - nu * (nu + 1.0) / (x * x);
  const cplx c2 = (v0 - E) / (2.0 * (2.0 * nu + 3.0));
  const double xn = std::pow(x, nu);
  return {x, xn * x * (1.0 + c2 * x * x), (nu + 1.0) * xn + c2 * (nu + 3.0) * xn * x * x};
}

namespace {

std::vector<double> checked_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
  if (grid.front() < 0.0) throw DomainError("grid abscissae must be non-negative");
  return {grid.begin(), grid.end()};
}

/// e+ of the reflectionless sech^2 wells at a = 1: e^{isx} P(x) / D.
struct Rational {
  cplx P, dP, D;
};

Rational sech_well_unit(int lambda, cplx s, double x) {
  const double S = 1.0 / std::cosh(x);
  const double T = std::tanh(x);
  const double S2 = S * S;
  switch (lambda) {
    case 1:
      return {s + I * T, I * S2, s + I};
    case 2:
      return {s * s - 2.0 + 3.0 * S2 + 3.0 * I * s * T, -6.0 * S2 * T + 3.0 * I * s * S2, (s + I) * (s + 2.0 * I)};
    case 4: {
      const cplx s2 = s * s;
      const cplx inner = 3.0 * s2 - 8.0 + 7.0 * I * s * T;
      const cplx P = s2 * s2 - 35.0 * s2 + 24.0 + 105.0 * S2 * S2 + 10.0 * I * s * (s2 - 5.0) * T + 15.0 * S2 * inner;
      const cplx dP = -420.0 * S2 * S2 * T + 10.0 * I * s * (s2 - 5.0) * S2 - 30.0 * S2 * T * inner +
                      105.0 * I * s * S2 * S2;
      return {P, dP, (s + I) * (s + 2.0 * I) * (s + 3.0 * I) * (s + 4.0 * I)};
    }
    default:
      throw UnsupportedOperation("closed-form Jost data exists only for lambda in {1, 2, 4}");
  }
}

SolutionState from_rational(const Rational& r, cplx s, double x) {
  const cplx e = std::exp(I * s * x);
  return {x, e * r.P / r.D, e * (I * s * r.P + r.dP) / r.D};
}

SolutionState shifted_jost(double a, cplx b, cplx s, double x) {
  const cplx z = a * x + b;
  const cplx c = std::cosh(z);
  return from_rational({s + I * a * std::tanh(z), I * a * a / (c * c), s + I * a}, s, x);
}

}  // namespace

PotentialFn potential_function(const PotentialSpec& spec) {
  return [spec](double x) { return eval_potential(spec, x); };
}

std::vector<double> default_grid(const PotentialSpec& spec, double x_max, const NumericConfig& cfg) {
  return uniform_grid(spec.origin_abscissa(cfg), x_max, cfg.grid_points);
}

SolutionTrace integrate(const PotentialSpec& spec, cplx E, const SolutionState& from,
                        std::span<const double> grid, const NumericConfig& cfg) {
  const auto g = checked_grid(grid);
  const PotentialFn V = potential_function(spec);
  const auto opts = IntegrationOptions::from(cfg);

  const auto split = std::lower_bound(g.begin(), g.end(), from.x);
  std::vector<double> backward(g.begin(), split);
  std::reverse(backward.begin(), backward.end());
  const std::vector<double> forward(split, g.end());

  SolutionTrace trace;
  trace.parameter = {std::sqrt(E)};
  trace.energy = E;
  trace.kind = TraceKind::Custom;
  auto back = integrate_to_targets(V, E, from, backward, opts);
  std::reverse(back.begin(), back.end());
  auto fwd = integrate_to_targets(V, E, from, forward, opts);
  trace.states = std::move(back);
  trace.states.insert(trace.states.end(), fwd.begin(), fwd.end());
  return trace;
}

void check_jost_parameter(const PotentialSpec& spec, cplx s) {
  if (s == cplx{}) throw DomainError("s = 0 is an exceptional point");
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("non-finite spectral parameter");
  if (s.imag() < -spec.decay_rate() / 4.0) {
    std::ostringstream os;
    os << "Im s = " << s.imag() << " is below the allowed -decay_rate/4 = " << -spec.decay_rate() / 4.0;
    throw DomainError(os.str());
  }
}

double jost_cutoff(const PotentialSpec& spec, cplx s, const NumericConfig& cfg) {
  return search_cutoff(spec, potential_function(spec), s, cfg).x;
}

JostEngine::JostEngine(PotentialSpec spec, NumericConfig cfg)
    : spec_(std::move(spec)), cfg_(cfg), V_(potential_function(spec_)) {
  const Cutoff c = search_cutoff(spec_, V_, cplx{1.0, 0.0}, cfg_);
  cutoff_upper_ = c.x;
  tail_upper_ = c.tail;
}

double JostEngine::cutoff(cplx s) const {
  if (s.imag() >= 0.0) return cutoff_upper_;
  return search_cutoff(spec_, V_, s, cfg_).x;
}

JostEvaluation JostEngine::evaluate(cplx s) const {
  check_jost_parameter(spec_, s);
  const Cutoff cut = s.imag() >= 0.0 ? Cutoff{cutoff_upper_, tail_upper_} : search_cutoff(spec_, V_, s, cfg_);
  const double X = cut.x;
  const double x_lo = spec_.origin_abscissa(cfg_);
  const cplx E = s * s;
  const double target[1] = {x_lo};
  const auto st = integrate_to_targets(V_, E, {X, 1.0, I * s}, target, IntegrationOptions::from(cfg_));
  const cplx phase = std::exp(I * s * X);
  const cplx y = st[0].y * phase;
  const cplx dy = st[0].dy * phase;

  JostEvaluation out;
  out.parameter = {s};
  out.x_max = X;
  out.tol_achieved = cut.tail;
  const double nu = spec_.nu();
  if (nu == 0.0) {
    out.A = y;
  } else {
    const SolutionState phi = frobenius_seed(V_, nu, E, x_lo);
    out.A = (y * phi.dy - dy * phi.y) / (2.0 * nu + 1.0);
  }
  return out;
}

SolutionTrace JostEngine::solution(cplx s, std::span<const double> grid) const {
  check_jost_parameter(spec_, s);
  const auto g = checked_grid(grid);
  if (spec_.nu() > 0.0 && g.front() < spec_.origin_abscissa(cfg_))
    throw DomainError("Jost solution of a singular-origin potential requested below x_min");
  const double X = std::max(cutoff(s), g.back());
  std::vector<double> targets(g.rbegin(), g.rend());
  auto states = integrate_to_targets(V_, s * s, {X, 1.0, I * s}, targets, IntegrationOptions::from(cfg_));
  const cplx phase = std::exp(I * s * X);
  for (auto& st : states) {
    st.y *= phase;
    st.dy *= phase;
  }
  std::reverse(states.begin(), states.end());
  return {{s}, s * s, TraceKind::JostPlus, std::move(states)};
}

SolutionTrace jost_solution(const PotentialSpec& spec, cplx s, std::span<const double> grid,
                            const NumericConfig& cfg) {
  return JostEngine(spec, cfg).solution(s, grid);
}

JostEvaluation jost_function(const PotentialSpec& spec, cplx s, const NumericConfig& cfg) {
  return JostEngine(spec, cfg).evaluate(s);
}

cplx closed_form_jost(const PotentialSpec& spec, cplx s) {
  return std::visit(
      overloaded{
          [](const ZeroPotential&) { return cplx{1.0}; },
          [s](const SechWell& p) {
            const Rational r = sech_well_unit(p.lambda, s / p.a, 0.0);
            return r.P / r.D;
          },
          [s](const ShiftedOneSoliton& p) { return (s + I * p.a * std::tanh(p.b)) / (s + I * p.a); },
          [s](const SinhBarrier& p) { return 1.0 / (p.a - I * s); },
          [s](const ClosedForm2Susy& p) { return (s + p.k0) / (s + I * p.a1); },
          [](const Transformed&) -> cplx {
            throw UnsupportedOperation("no closed-form Jost function for transformed potentials");
          },
      },
      spec.kind());
}

SolutionState closed_form_jost_solution(const PotentialSpec& spec, cplx s, double x) {
  return std::visit(
      overloaded{
          [&](const ZeroPotential&) -> SolutionState {
            const cplx e = std::exp(I * s * x);
            return {x, e, I * s * e};
          },
          [&](const SechWell& p) -> SolutionState {
            const cplx su = s / p.a;
            SolutionState st = from_rational(sech_well_unit(p.lambda, su, p.a * x), su, p.a * x);
            return {x, st.y, p.a * st.dy};
          },
          [&](const ShiftedOneSoliton& p) { return shifted_jost(p.a, p.b, s, x); },
          [&](const SinhBarrier& p) -> SolutionState {
            if (!(x > 0.0)) throw DomainError("SinhBarrier Jost solution is singular at x = 0");
            const double sh = std::sinh(p.a * x);
            return from_rational({p.a / std::tanh(p.a * x) - I * s, -p.a * p.a / (sh * sh), p.a - I * s}, s, x);
          },
          [&](const ClosedForm2Susy& p) { return shifted_jost(p.a1, -I * std::atan(p.k0 / p.a1), s, x); },
          [](const Transformed&) -> SolutionState {
            throw UnsupportedOperation("no closed-form Jost solution for transformed potentials");
          },
      },
      spec.kind());
}

SolutionTrace regular_solution(const PotentialSpec& spec, cplx E, std::span<const double> grid,
                               const NumericConfig& cfg) {
  const double nu = spec.nu();
  if (nu == 0.0) {
    SolutionTrace t = integrate(spec, E, {0.0, 0.0, 1.0}, grid, cfg);
    t.kind = TraceKind::Regular;
    return t;
  }
  const auto g = checked_grid(grid);
  const double x_lo = spec.origin_abscissa(cfg);
  const PotentialFn V = potential_function(spec);
  const auto inner_end = std::lower_bound(g.begin(), g.end(), x_lo);
  std::vector<double> outer(inner_end, g.end());

  SolutionTrace t;
  t.parameter = {std::sqrt(E)};
  t.energy = E;
  t.kind = TraceKind::Regular;
  for (auto it = g.begin(); it != inner_end; ++it)
    t.states.push_back({*it, std::pow(*it, nu + 1.0), (nu + 1.0) * std::pow(*it, nu)});
  auto rest = integrate_to_targets(V, E, frobenius_seed(V, nu, E, x_lo), outer, IntegrationOptions::from(cfg));
  t.states.insert(t.states.end(), rest.begin(), rest.end());
  return t;
}

PhysicalSolution physical_solution(const PotentialSpec& spec, double k, std::span<const double> grid,
                                   const NumericConfig& cfg) {
  if (k == 0.0 || !std::isfinite(k)) throw DomainError("physical solution needs real nonzero k (s = 0 is exceptional)");
  const JostEngine engine(spec, cfg);
  PhysicalSolution out;
  out.A_plus = engine.evaluate(k).A;
  out.A_minus = engine.evaluate(-k).A;
  out.at_spectral_singularity = std::abs(out.A_plus) < cfg.singular_point_threshold;

  const SolutionTrace ep = engine.solution(k, grid);
  const SolutionTrace em = engine.solution(-k, grid);
  const cplx scale = (2.0 * spec.nu() + 1.0) / (2.0 * I * k);
  out.trace.parameter = {k};
  out.trace.energy = k * k;
  out.trace.kind = TraceKind::Regular;
  out.trace.states.reserve(ep.size());
  for (std::size_t i = 0; i < ep.size(); ++i) {
    const auto& p = ep.states[i];
    const auto& m = em.states[i];
    out.trace.states.push_back(
        {p.x, scale * (out.A_minus * p.y - out.A_plus * m.y), scale * (out.A_minus * p.dy - out.A_plus * m.dy)});
  }
  return out;
}

cplx wronskian(const SolutionState& a, const SolutionState& b) {
  if (a.x != b.x) {
    std::ostringstream os;
    os << "Wronskian of states at different abscissae (" << a.x << " vs " << b.x << ")";
    throw DomainError(os.str());
  }
  return a.y * b.dy - a.dy * b.y;
}

std::vector<cplx> wronskian(const SolutionTrace& a, const SolutionTrace& b) {
  if (a.size() != b.size()) throw DomainError("Wronskian of traces on different grids");
  std::vector<cplx> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = wronskian(a.states[i], b.states[i]);
  return w;
}

double schrodinger_residual(const SolutionTrace& trace, const PotentialFn& V) {
  const auto& st = trace.states;
  const std::size_t n = st.size();
  if (n < 5) throw DomainError("residual check needs at least five grid points");
  const double h0 = st[1].x - st[0].x;
  bool uniform = true;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((st[i].x - st[i - 1].x) - h0) > 1e-9 * h0) uniform = false;

  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx rhs = (V(st[i].x) - trace.energy) * st[i].y;
    scale = std::max({scale, std::abs(rhs), std::abs(st[i].y)});
    cplx fd;
    if (uniform) {
      if (i < 2 || i + 2 >= n) continue;
      fd = (-st[i + 2].dy + 8.0 * st[i + 1].dy - 8.0 * st[i - 1].dy + st[i - 2].dy) / (12.0 * h0);
    } else {
      if (i < 1 || i + 1 >= n) continue;
      fd = (st[i + 1].dy - st[i - 1].dy) / (st[i + 1].x - st[i - 1].x);
    }
    worst = std::max(worst, std::abs(fd - rhs));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace susy
