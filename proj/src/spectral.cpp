#include "susy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "susy/errors.hpp"

namespace susy {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const Rect& r) {
  std::ostringstream os;
  os << "[" << r.re0 << ", " << r.re1 << "] x [" << r.im0 << ", " << r.im1 << "]";
  return os.str();
}

void check_rect(const Rect& r) {
  if (!(r.re1 > r.re0) || !(r.im1 > r.im0)) throw DomainError("degenerate rectangle " + describe(r));
}

cplx eval_A(const JostEngine& engine, cplx s) { return engine.evaluate(s).A; }

std::vector<cplx> linspace(cplx a, cplx b, std::size_t segments) {
  std::vector<cplx> pts(segments + 1);
  for (std::size_t j = 0; j <= segments; ++j) pts[j] = a + (b - a) * (static_cast<double>(j) / segments);
  pts.back() = b;
  return pts;
}

class WindingCounter {
 public:
  WindingCounter(const JostEngine& engine) : engine_(engine), cfg_(engine.config()) {}

  int count(const Rect& rect) {
    check_rect(rect);
    const cplx corners[4] = {{rect.re0, rect.im0}, {rect.re1, rect.im0}, {rect.re1, rect.im1}, {rect.re0, rect.im1}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
      const auto pts = linspace(corners[e], corners[(e + 1) % 4], cfg_.edge_samples);
      const auto samples = jost_batch(engine_, pts);
      for (const auto& smp : samples) guard(smp.s, smp);
      for (std::size_t j = 0; j + 1 < samples.size(); ++j)
        total += segment(samples[j].s, samples[j + 1].s, samples[j].A, samples[j + 1].A, 0);
    }
    const double w = total / (2.0 * kPi);
    const double n = std::round(w);
    if (std::abs(w - n) > 0.05) {
      std::ostringstream os;
      os << "argument principle gave non-integer winding " << w << " on " << describe(rect);
      throw NonConvergenceError(os.str(), rect.im0);
    }
    return static_cast<int>(n);
  }

 private:
  void guard(cplx s, const JostSample& smp) const {
    if (!smp.ok) throw NonConvergenceError("Jost evaluation failed on contour: " + smp.error, s.real());
    if (std::abs(smp.A) < cfg_.boundary_min_modulus) {
      std::ostringstream os;
      os << "Jost function nearly vanishes on the contour at s = " << s.real() << (s.imag() < 0 ? "" : "+")
         << s.imag() << "i (|A| = " << std::abs(smp.A) << ")";
      throw DomainError(os.str());
    }
  }

  double segment(cplx sa, cplx sb, cplx Aa, cplx Ab, int depth) {
    const double d = std::arg(Ab / Aa);
    if (std::abs(d) <= kPi / 2) return d;
    if (depth >= cfg_.max_phase_refinements) {
      std::ostringstream os;
      os << "phase increment stayed above pi/2 after " << depth << " refinements near s = " << sa.real() << ","
         << sa.imag();
      throw NonConvergenceError(os.str(), sa.real());
    }
    const cplx sm = 0.5 * (sa + sb);
    JostSample mid{sm, {}, false, {}};
    try {
      mid.A = eval_A(engine_, sm);
      mid.ok = true;
    } catch (const std::exception& e) {
      mid.error = e.what();
    }
    guard(sm, mid);
    return segment(sa, sm, Aa, mid.A, depth + 1) + segment(sm, sb, mid.A, Ab, depth + 1);
  }

  const JostEngine& engine_;
  const NumericConfig& cfg_;
};

std::optional<SpectralPoint> complex_newton(const JostEngine& engine, cplx s0) {
  const auto& cfg = engine.config();
  const double floor_im = -engine.spec().decay_rate() / 4.0;
  cplx s = s0;
  double prev_step = INFINITY;
  for (int step = 1; step <= cfg.newton_max_steps; ++step) {
    cplx A, dA;
    try {
      A = eval_A(engine, s);
      dA = jost_derivative(engine, s);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (dA == cplx{}) return std::nullopt;
    const cplx ds = A / dA;
    const double size = std::abs(ds);
    // converged once the step is negligible or stagnates at the evaluation noise floor
    const bool small = size < 1e-11 * std::max(1.0, std::abs(s));
    const bool stalled = size >= 0.5 * prev_step && size < 1e-6 * std::max(1.0, std::abs(s));
    if ((small || stalled) && std::abs(A) <= cfg.zero_residual * std::max(1.0, std::abs(dA))) {
      const PointKind kind =
          s.imag() > cfg.real_axis_tolerance ? PointKind::BoundState : PointKind::SpectralSingularity;
      return SpectralPoint{s, s * s, kind, std::abs(A), step};
    }
    prev_step = size;
    s -= ds;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || s.imag() <= floor_im ||
        std::abs(s) < cfg.exclusion_radius)
      return std::nullopt;
  }
  return std::nullopt;
}

struct Search {
  const JostEngine& engine;
  WindingCounter counter;
  std::vector<SpectralPoint> found;

  void solve(const Rect& rect, int n) {
    if (n <= 0) return;
    const auto& cfg = engine.config();
    if (n == 1) {
      if (auto p = complex_newton(engine, rect.center()); p && rect.contains(p->s)) {
        found.push_back(*p);
        return;
      }
    }
    if (rect.diameter() < cfg.min_rect_diameter) {
      if (n == 1) throw NonConvergenceError("Newton polish failed inside " + describe(rect), rect.re0);
      std::ostringstream os;
      os << "winding " << n << " persists in " << describe(rect) << " (multiple or clustered zero)";
      throw InconsistencyError(os.str());
    }
    // off-center splits keep new edges away from zeros lying on symmetry lines
    for (const double ratio : {0.5 + 0.0371, 0.5 - 0.0421, 0.5 + 0.1113, 0.5 - 0.1237}) {
      const double xm = rect.re0 + ratio * (rect.re1 - rect.re0);
      const double ym = rect.im0 + ratio * (rect.im1 - rect.im0);
      const Rect kids[4] = {{rect.re0, xm, rect.im0, ym},
                            {xm, rect.re1, rect.im0, ym},
                            {xm, rect.re1, ym, rect.im1},
                            {rect.re0, xm, ym, rect.im1}};
      int counts[4];
      try {
        for (int q = 0; q < 4; ++q) counts[q] = counter.count(kids[q]);
      } catch (const DomainError&) {
        continue;
      }
      if (counts[0] + counts[1] + counts[2] + counts[3] != n) continue;
      for (int q = 0; q < 4; ++q) solve(kids[q], counts[q]);
      return;
    }
    std::ostringstream os;
    os << "could not split " << describe(rect) << " consistently with winding " << n;
    throw InconsistencyError(os.str());
  }
};

std::pair<std::vector<SpectralPoint>, int> bound_state_search(const JostEngine& engine, const Rect& rect) {
  Search search{engine, WindingCounter(engine), {}};
  const int n = search.counter.count(rect);
  search.solve(rect, n);
  std::vector<SpectralPoint> unique;
  for (const auto& p : search.found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const SpectralPoint& q) {
      return std::abs(p.s - q.s) < 1e-7 * std::max(1.0, std::abs(p.s));
    });
    if (!dup) unique.push_back(p);
  }
  if (static_cast<int>(unique.size()) != n) {
    std::ostringstream os;
    os << "found " << unique.size() << " zeros but winding is " << n << " in " << describe(rect);
    throw InconsistencyError(os.str());
  }
  std::sort(unique.begin(), unique.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return a.s.imag() != b.s.imag() ? a.s.imag() > b.s.imag() : a.s.real() < b.s.real();
  });
  return {unique, n};
}

RealAxisScan build_scan(std::vector<JostSample> raw, const NumericConfig& cfg, std::size_t n) {
  RealAxisScan scan;
  scan.samples.reserve(raw.size());
  for (auto& r : raw) scan.samples.push_back({r.s.real(), r.A, r.ok, false, std::move(r.error)});
  // each half is scanned independently
  for (std::size_t half = 0; half < 2; ++half) {
    const std::size_t lo = half * n, hi = lo + n;
    for (std::size_t i = lo; i < hi; ++i) {
      auto& s = scan.samples[i];
      if (!s.ok || std::abs(s.A) >= cfg.candidate_threshold) continue;
      const double m = std::abs(s.A);
      const bool left = i == lo || (scan.samples[i - 1].ok && m < std::abs(scan.samples[i - 1].A));
      const bool right = i + 1 == hi || (scan.samples[i + 1].ok && m < std::abs(scan.samples[i + 1].A));
      if (left && right) {
        s.candidate = true;
        scan.candidates.push_back(i);
      }
    }
  }
  return scan;
}

std::vector<cplx> scan_points(double k_min, double k_max, std::size_t n) {
  if (!(k_min > 0.0) || !(k_max > k_min)) throw DomainError("scan needs 0 < k_min < k_max");
  if (n < 2) throw DomainError("scan needs at least two samples per side");
  std::vector<cplx> pts;
  pts.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) pts.emplace_back(-k_max + (k_max - k_min) * i / (n - 1.0), 0.0);
  for (std::size_t i = 0; i < n; ++i) pts.emplace_back(k_min + (k_max - k_min) * i / (n - 1.0), 0.0);
  return pts;
}

}  // namespace

double Rect::diameter() const noexcept { return std::hypot(re1 - re0, im1 - im0); }

cplx jost_derivative(const JostEngine& engine, cplx s) {
  const double h = engine.config().newton_step_rel * std::max(1.0, std::abs(s));
  return (eval_A(engine, s + h) - eval_A(engine, s - h)) / (2.0 * h);
}

RealAxisScan scan_real_axis(const JostEngine& engine, double k_min, double k_max, std::size_t n) {
  const auto pts = scan_points(k_min, k_max, n);
  return build_scan(jost_batch(engine, pts), engine.config(), n);
}

RealAxisScan scan_real_axis_serial(const JostEngine& engine, double k_min, double k_max, std::size_t n) {
  const auto pts = scan_points(k_min, k_max, n);
  return build_scan(jost_batch_serial(engine, pts), engine.config(), n);
}

SpectralPoint refine_real_zero(const JostEngine& engine, double k_guess) {
  const auto& cfg = engine.config();
  double k = k_guess;
  double prev_step = INFINITY;
  for (int step = 1; step <= cfg.newton_max_steps; ++step) {
    if (std::abs(k) < cfg.exclusion_radius) {
      std::ostringstream os;
      os << "real Newton iteration from k = " << k_guess << " ran into the exceptional point s = 0";
      throw NonConvergenceError(os.str(), k);
    }
    const cplx A = eval_A(engine, k);
    const cplx dA = jost_derivative(engine, k);
    if (dA == cplx{}) break;
    const double dk = (A / dA).real();
    const double size = std::abs(dk);
    const bool small = size < 1e-11 * std::max(1.0, std::abs(k));
    const bool stalled = size >= 0.5 * prev_step && size < 1e-6 * std::max(1.0, std::abs(k));
    if ((small || stalled) && std::abs(A) < cfg.zero_residual)
      return {k, k * k, PointKind::SpectralSingularity, std::abs(A), step};
    prev_step = size;
    k -= dk;
    if (!std::isfinite(k)) break;
  }
  std::ostringstream os;
  os << "no real zero of the Jost function found from k = " << k_guess << " within " << cfg.newton_max_steps
     << " steps";
  throw NonConvergenceError(os.str(), k);
}

int count_zeros(const JostEngine& engine, const Rect& rect) { return WindingCounter(engine).count(rect); }

std::vector<SpectralPoint> find_bound_states(const JostEngine& engine, const Rect& rect) {
  return bound_state_search(engine, rect).first;
}

SpectrumReport classify_spectrum(const JostEngine& engine, double k_min, double k_max, std::size_t n,
                                 const Rect& rect) {
  check_rect(rect);
  SpectrumReport report;
  report.contour = rect;
  report.k_min = k_min;
  report.k_max = k_max;

  const RealAxisScan scan = scan_real_axis(engine, k_min, k_max, n);
  for (const auto& s : scan.samples)
    if (!s.ok) report.diagnostics.push_back("scan k = " + std::to_string(s.k) + ": " + s.error);
  for (const std::size_t idx : scan.candidates) {
    const double guess = scan.samples[idx].k;
    try {
      const SpectralPoint p = refine_real_zero(engine, guess);
      const bool dup = std::any_of(report.singularities.begin(), report.singularities.end(), [&](const auto& q) {
        return std::abs(p.s - q.s) < 1e-6 * std::max(1.0, std::abs(p.s));
      });
      if (!dup) report.singularities.push_back(p);
    } catch (const NonConvergenceError& e) {
      report.diagnostics.push_back("candidate k = " + std::to_string(guess) + " rejected: " + e.what());
    }
  }
  std::sort(report.singularities.begin(), report.singularities.end(),
            [](const auto& a, const auto& b) { return a.s.real() < b.s.real(); });

  auto [points, winding] = bound_state_search(engine, rect);
  report.winding_total = winding;
  int inside_real = 0;
  for (auto& p : points) {
    if (p.kind == PointKind::BoundState)
      report.bound_states.push_back(p);
    else
      ++inside_real;
  }
  int singular_inside = 0;
  for (const auto& p : report.singularities)
    if (rect.contains(p.s)) ++singular_inside;
  report.consistent = winding == static_cast<int>(report.bound_states.size()) + std::max(singular_inside, inside_real);
  return report;
}

}  // namespace susy
