#include "susy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "susy/errors.hpp"
#include "susy/kernels.hpp"

namespace susy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kAxisSamples = 200;

std::string describe(const std::exception& e) {
  if (const auto* d = dynamic_cast<const DegenerateTransformError*>(&e)) {
    std::ostringstream os;
    os << d->what() << " (location x = " << d->location() << ")";
    return os.str();
  }
  return e.what();
}

double relative(const GridComparison& c) { return c.max_deviation / std::max(c.max_modulus, 1e-300); }

std::vector<double> grid_of(const VerifyGrid& g, double lo = 0.0) { return uniform_grid(lo, g.x_max, g.points); }

/// 25 points on [0.1, 5] and 25 strip points with -eps/4 <= Im s.
std::vector<cplx> jost_sample_points(double decay_rate) {
  std::vector<cplx> s;
  for (int j = 0; j < 25; ++j) s.emplace_back(0.1 + 4.9 * j / 24.0, 0.0);
  const double ims[] = {0.3, 1.0, -0.2 * decay_rate};
  for (int j = 0; j < 25; ++j) s.emplace_back(-3.0 + 6.0 * j / 24.0, ims[j % 3]);
  return s;
}

/// max over the sample points of |A - A_closed| / |A_closed|.
double jost_function_deviation(const PotentialSpec& spec, const NumericConfig& cfg) {
  const JostEngine engine(spec, cfg);
  const auto s = jost_sample_points(spec.decay_rate());
  double dev = 0.0;
  for (const auto& r : jost_batch(engine, s)) {
    if (!r.ok) return kInf;
    const cplx ref = closed_form_jost(spec, r.s);
    dev = std::max(dev, std::abs(r.A - ref) / std::abs(ref));
  }
  return dev;
}

/// sup |e_num - e_closed| / sup |e_closed| on the grid.
double jost_solution_deviation(const PotentialSpec& spec, double k, std::span<const double> grid,
                               const NumericConfig& cfg) {
  const SolutionTrace t = jost_solution(spec, k, grid, cfg);
  double num = 0.0, den = 0.0;
  for (const auto& st : t.states) {
    const cplx ref = closed_form_jost_solution(spec, k, st.x).y;
    num = std::max(num, std::abs(st.y - ref));
    den = std::max(den, std::abs(ref));
  }
  return num / den;
}

/// Bound states in the contour compared with the expected energies (sorted ascending).
void check_bound_states(ExampleReport& rep, const std::string& name, const std::vector<SpectralPoint>& found,
                        std::vector<double> expected, double tol) {
  std::vector<cplx> E;
  for (const auto& p : found) E.push_back(p.E);
  std::sort(E.begin(), E.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  std::sort(expected.begin(), expected.end());
  std::ostringstream os;
  os << "found";
  for (const cplx e : E) os << ' ' << e.real() << (e.imag() < 0 ? "" : "+") << e.imag() << 'i';
  if (E.empty()) os << " none";
  if (E.size() != expected.size()) {
    rep.add(name, kInf, tol, os.str());
    return;
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < E.size(); ++i) dev = std::max(dev, std::abs(E[i] - expected[i]));
  rep.add(name, dev, tol, os.str());
}

/// Every reported singularity must sit at E = k0^2 and at least one must be present.
void check_singularity(ExampleReport& rep, const SpectrumReport& sr, double k0, double tol) {
  if (sr.singularities.empty()) {
    rep.add("singularity_energy", kInf, tol, "no spectral singularity found");
    return;
  }
  double dev = 0.0;
  for (const auto& p : sr.singularities) dev = std::max(dev, std::abs(p.E - k0 * k0));
  rep.add("singularity_energy", dev, tol);
}

void spectrum_checks(ExampleReport& rep, const PotentialSpec& v, double k_min, double k_max, const Rect& rect,
                     std::vector<double> bound, double k0, double tol, const NumericConfig& cfg) {
  try {
    const SpectrumReport sr = classify_spectrum(JostEngine(v, cfg), k_min, k_max, kAxisSamples, rect);
    check_bound_states(rep, "partner_bound_states", sr.bound_states, std::move(bound), tol);
    check_singularity(rep, sr, k0, tol);
  } catch (const std::exception& e) {
    rep.fail("partner_spectrum", describe(e));
  }
}

}  // namespace

void ExampleReport::add(std::string name, double deviation, double tolerance, std::string note) {
  const bool ok = std::isfinite(deviation) && deviation <= tolerance;
  checks.push_back({std::move(name), deviation, tolerance, ok, std::move(note)});
}

void ExampleReport::fail(std::string name, std::string note) {
  checks.push_back({std::move(name), kInf, 0.0, false, std::move(note)});
}

void ExampleReport::finalize() {
  overall = !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

GridComparison compare_on_grid(const PotentialSpec& a, const PotentialSpec& b, std::span<const double> grid) {
  GridComparison out;
  for (const double x : grid) {
    cplx va, vb;
    try {
      va = eval_potential(a, x);
      vb = eval_potential(b, x);
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " (while comparing at x = " << x << ")";
      throw Error(e.kind(), os.str());
    }
    const double d = std::abs(va - vb);
    if (d > out.max_deviation || std::isnan(d)) {
      out.max_deviation = d;
      out.location = x;
    }
    out.max_modulus = std::max(out.max_modulus, std::abs(vb));
  }
  return out;
}

ExampleReport run_example_1(const Example1Params& p, const NumericConfig& cfg) {
  ExampleReport rep{1, {}, false};
  const auto grid = grid_of(p.grid);
  const PotentialSpec zero = PotentialSpec::zero(2.0 * p.a1);
  const cplx alpha1 = p.alpha1.value_or(-p.a1 * p.a1);
  try {
    const PotentialSpec v = susy2_potential(zero, TransformStep::regular(alpha1), TransformStep::jost(p.k0), cfg);
    if (!p.alpha1) {
      rep.add("closed_form", relative(compare_on_grid(v, PotentialSpec::closed_form_2susy(p.a1, p.k0), grid)),
              p.potential_tol);
      // e^{-i k0 x} as the second seed reproduces the closed form with k0 -> -k0
      const PotentialSpec lit =
          susy2_potential(zero, TransformStep::regular(alpha1), TransformStep::jost(-p.k0), cfg);
      rep.add("literal_seed", relative(compare_on_grid(lit, PotentialSpec::closed_form_2susy(p.a1, -p.k0), grid)),
              p.potential_tol);
      const cplx b = -I * std::atan(p.k0 / p.a1);
      std::ostringstream note;
      note << "b = " << b.imag() << "i";
      rep.add("shifted_soliton",
              relative(compare_on_grid(v, PotentialSpec::shifted_one_soliton(p.a1, b), grid)), p.potential_tol,
              note.str());
    }
    const SpectrumReport sr =
        classify_spectrum(JostEngine(v, cfg), p.k_min, p.k_max, kAxisSamples, Rect{-5.0, 5.0, 0.05, 5.0});
    check_singularity(rep, sr, p.k0, p.energy_tol);
  } catch (const std::exception& e) {
    rep.fail("validation", describe(e));
  }
  rep.finalize();
  return rep;
}

ExampleReport run_example_2(const Example2Params& p, const NumericConfig& cfg) {
  ExampleReport rep{2, {}, false};
  const PotentialSpec sw = PotentialSpec::sech_well(2);
  const auto grid = grid_of(p.grid);
  try {
    rep.add("jost_function", jost_function_deviation(sw, cfg), p.jost_tol);
    rep.add("jost_solution", jost_solution_deviation(sw, p.k0, grid, cfg), p.jost_tol);
    check_bound_states(rep, "base_bound_states", find_bound_states(JostEngine(sw, cfg), p.contour), {-1.0},
                       p.energy_tol);
  } catch (const std::exception& e) {
    rep.fail("base_potential", describe(e));
  }
  const TransformStep u1 = p.u1.value_or(TransformStep::jost(I));
  try {
    // the intermediate first-order partner needs u1 free of nodes on (0, inf)
    (void)susy1_potential(sw, u1, cfg);
    const PotentialSpec v = susy2_potential(sw, u1, TransformStep::jost(p.k0), cfg);
    rep.add("closed_form", relative(compare_on_grid(v, PotentialSpec::closed_form_2susy(2.0, p.k0), grid)),
            p.potential_tol);
    spectrum_checks(rep, v, p.k_min, p.k_max, p.contour, {}, p.k0, p.energy_tol, cfg);
  } catch (const std::exception& e) {
    rep.fail("validation", describe(e));
  }
  rep.finalize();
  return rep;
}

cplx example3_wronskian_profile(double k0, double x) {
  const double k2 = k0 * k0;
  const cplx A1 = 4.0 * (16.0 + k2), A2 = 7.0 * k2 - 8.0;
  const cplx B1 = -2.0 * I * k0 * (16.0 + k2), B2 = -I * k0 * (k2 - 14.0);
  const cplx c = -3.0 * (k2 + 16.0);
  const cplx w0 = A1 * std::cosh(2 * x) + A2 * std::cosh(4 * x) + B1 * std::sinh(2 * x) + B2 * std::sinh(4 * x) + c;
  return std::exp(I * k0 * x) * w0 * std::pow(1.0 / std::cosh(x), 7);
}

namespace {

/// -6 sech^2 x + 2 (w0'^2 - w0'' w0) / w0^2
cplx example3_partner(double k0, double x) {
  const double k2 = k0 * k0;
  const cplx A1 = 4.0 * (16.0 + k2), A2 = 7.0 * k2 - 8.0;
  const cplx B1 = -2.0 * I * k0 * (16.0 + k2), B2 = -I * k0 * (k2 - 14.0);
  const cplx c = -3.0 * (k2 + 16.0);
  const double c2 = std::cosh(2 * x), c4 = std::cosh(4 * x), s2 = std::sinh(2 * x), s4 = std::sinh(4 * x);
  const cplx w = A1 * c2 + A2 * c4 + B1 * s2 + B2 * s4 + c;
  const cplx dw = 2.0 * A1 * s2 + 4.0 * A2 * s4 + 2.0 * B1 * c2 + 4.0 * B2 * c4;
  const cplx ddw = 4.0 * A1 * c2 + 16.0 * A2 * c4 + 4.0 * B1 * s2 + 16.0 * B2 * s4;
  const double sech = 1.0 / std::cosh(x);
  return -6.0 * sech * sech + 2.0 * (dw * dw - ddw * w) / (w * w);
}

}  // namespace

ExampleReport run_example_3(const Example3Params& p, const NumericConfig& cfg) {
  ExampleReport rep{3, {}, false};
  const PotentialSpec sw = PotentialSpec::sech_well(4);
  const auto grid = grid_of(p.grid);
  try {
    rep.add("jost_function", jost_function_deviation(sw, cfg), p.jost_tol);
    rep.add("jost_solution", jost_solution_deviation(sw, p.k0, grid, cfg), p.jost_tol);
    check_bound_states(rep, "base_bound_states", find_bound_states(JostEngine(sw, cfg), p.contour), {-9.0, -1.0},
                       p.energy_tol);
  } catch (const std::exception& e) {
    rep.fail("base_potential", describe(e));
  }
  try {
    const auto wg = uniform_grid(p.wronskian_lo, p.wronskian_hi, p.grid.points);
    const auto W = wronskian(jost_solution(sw, 3.0 * I, wg, cfg), jost_solution(sw, p.k0, wg, cfg));
    // constant fitted at the midpoint, away from the small tail values
    const std::size_t mid = wg.size() / 2;
    const cplx fit = W[mid] / example3_wronskian_profile(p.k0, wg[mid]);
    double dev = 0.0;
    for (std::size_t i = 0; i < wg.size(); ++i) {
      const cplx ref = fit * example3_wronskian_profile(p.k0, wg[i]);
      dev = std::max(dev, std::abs(W[i] - ref) / std::abs(ref));
    }
    rep.add("wronskian_profile", dev, p.wronskian_tol);
  } catch (const std::exception& e) {
    rep.fail("wronskian_profile", describe(e));
  }
  try {
    const PotentialSpec v = susy2_potential(sw, TransformStep::jost(3.0 * I), TransformStep::jost(p.k0), cfg);
    double dev = 0.0, scale = 0.0;
    for (const double x : grid) {
      const cplx ref = example3_partner(p.k0, x);
      dev = std::max(dev, std::abs(eval_potential(v, x) - ref));
      scale = std::max(scale, std::abs(ref));
    }
    rep.add("partner_formula", dev / scale, p.potential_tol);
    spectrum_checks(rep, v, p.k_min, p.k_max, p.contour, {-1.0}, p.k0, p.energy_tol, cfg);
  } catch (const std::exception& e) {
    rep.fail("validation", describe(e));
  }
  rep.finalize();
  return rep;
}

ExampleReport verify_removal_roundtrip(const PotentialSpec& spec, double k0, const RoundTripParams& p,
                                       const NumericConfig& cfg) {
  ExampleReport rep{0, {}, false};
  try {
    const RemovalResult r = remove_spectral_singularity(spec, k0, cfg);
    const JostEngine engine(r.potential, cfg);
    double min_a = kInf;
    for (const auto& s : scan_real_axis(engine, p.removal_k_min, p.removal_k_max, p.removal_samples).samples)
      min_a = std::min(min_a, s.ok ? std::abs(s.A) : 0.0);
    // pass iff min |A| stays above the threshold
    std::ostringstream note;
    note << "min |A| on the axis = " << min_a;
    rep.add("singularity_absent", p.absence_threshold / min_a, 1.0, note.str());

    const double nu_hat = estimate_origin_strength(r.potential);
    rep.add("origin_strength", std::abs(nu_hat - r.potential.nu()), 1e-3);

    const auto& chain = std::get<Transformed>(r.potential.kind()).chain;
    const PotentialSpec back = chain_transform(spec, inverse_chain(chain), cfg);
    const double lo = spec.origin_abscissa(cfg);
    const auto grid = uniform_grid(lo, p.grid.x_max * spec.length_scale(), p.grid.points);
    const GridComparison c = compare_on_grid(back, realize(spec, cfg), grid);
    std::ostringstream where;
    where << "at x = " << c.location;
    rep.add("roundtrip", c.max_deviation, p.roundtrip_tol, where.str());
  } catch (const std::exception& e) {
    rep.fail("removal", describe(e));
  }
  rep.finalize();
  return rep;
}

nlohmann::json report_to_json(const ExampleReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j{{"name", c.name},
                     {"max_deviation", std::isfinite(c.max_deviation) ? nlohmann::json(c.max_deviation) : nlohmann::json(nullptr)},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  return {{"example", r.example_id}, {"overall", r.overall}, {"checks", checks}};
}

}  // namespace susy
