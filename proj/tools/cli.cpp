#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "susy/darboux.hpp"
#include "susy/errors.hpp"
#include "susy/io.hpp"
#include "susy/kernels.hpp"
#include "susy/spectral.hpp"
#include "susy/verify.hpp"

namespace susy::cli {

namespace {

using io::json;

struct RunConfig {
  NumericConfig numeric;
  double x_max = 25.0;
  std::size_t points = 2000;
  std::string format = "json";
  std::string out;
};

json run_config_json(const RunConfig& rc) {
  return {{"numeric", io::config_to_json(rc.numeric)},
          {"x_max", rc.x_max},
          {"points", rc.points},
          {"format", rc.format}};
}

int exit_code_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Domain:
    case ErrorKind::Precondition:
      return kUsage;
    case ErrorKind::Inconsistency:
      return kInconsistent;
    case ErrorKind::Degenerate:
      return kDegenerate;
    default:
      return kNumerics;
  }
}

/// Writes to --out when given, otherwise to the command's stdout.
void emit(const RunConfig& rc, std::ostream& out, const std::string& text) {
  if (rc.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.out);
  if (!f) throw ParseError("cannot write '" + rc.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> output_grid(const PotentialSpec& spec, const RunConfig& rc) {
  return uniform_grid(spec.origin_abscissa(rc.numeric), rc.x_max, rc.points);
}

Rect parse_rect(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("--rect expects re0,re1,im0,im1; got '" + text + "'");
    }
  }
  if (v.size() != 4) throw ParseError("--rect expects four numbers re0,re1,im0,im1");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_jost(const RunConfig& rc, const std::string& file, const std::string& s_text, std::ostream& out) {
  const cplx s = io::parse_complex(s_text);
  const PotentialSpec spec = io::load_potential(file, rc.numeric);
  const JostEngine engine(spec, rc.numeric);
  if (rc.format == "csv") {
    std::ostringstream os;
    io::write_trace_csv(os, engine.solution(s, output_grid(spec, rc)), spec);
    emit(rc, out, os.str());
    return kOk;
  }
  const JostEvaluation ev = engine.evaluate(s);
  emit(rc, out,
       dump({{"s", io::complex_to_json(s)},
             {"A", io::complex_to_json(ev.A)},
             {"x_max", ev.x_max},
             {"tol", ev.tol_achieved},
             {"spec_hash", io::spec_hash(spec)},
             {"config", run_config_json(rc)}}));
  return kOk;
}

int cmd_spectrum(const RunConfig& rc, const std::string& file, double k_min, double k_max, std::size_t samples,
                 const std::string& rect_text, std::ostream& out, std::ostream& err) {
  const Rect rect = parse_rect(rect_text);
  const PotentialSpec spec = io::load_potential(file, rc.numeric);
  const SpectrumReport rep = classify_spectrum(JostEngine(spec, rc.numeric), k_min, k_max, samples, rect);
  if (rc.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(17) << "kind,re_s,im_s,re_E,im_E,residual\n";
    auto rows = [&](const std::vector<SpectralPoint>& pts, const char* kind) {
      for (const auto& p : pts)
        os << kind << ',' << p.s.real() << ',' << p.s.imag() << ',' << p.E.real() << ',' << p.E.imag() << ','
           << p.residual << '\n';
    };
    rows(rep.bound_states, "bound_state");
    rows(rep.singularities, "singularity");
    emit(rc, out, os.str());
  } else {
    json j = io::spectrum_to_json(rep);
    j["samples"] = samples;
    j["config"] = run_config_json(rc);
    emit(rc, out, dump(j));
  }
  if (!rep.consistent) {
    err << "error: winding number " << rep.winding_total << " disagrees with the located zeros\n";
    return kInconsistent;
  }
  return kOk;
}

int cmd_transform(const RunConfig& rc, const std::string& file, const std::string& steps_file, std::ostream& out) {
  if (rc.out.empty()) throw ParseError("transform needs --out PREFIX");
  const PotentialSpec base = io::load_potential(file, rc.numeric);
  const PotentialSpec v = chain_transform(base, io::load_steps(steps_file), rc.numeric);

  const std::string spec_path = rc.out + ".json", csv_path = rc.out + ".csv";
  const auto grid = output_grid(v, rc);
  const auto values = sample_potential(v, grid);
  {
    std::ofstream f(spec_path);
    if (!f) throw ParseError("cannot write '" + spec_path + "'");
    f << dump(io::spec_to_json(v));
  }
  {
    std::ofstream f(csv_path);
    if (!f) throw ParseError("cannot write '" + csv_path + "'");
    io::write_potential_csv(f, grid, values);
  }
  json j{{"spec", spec_path},
         {"csv", csv_path},
         {"spec_hash", io::spec_hash(v)},
         {"decay_rate", v.decay_rate()},
         {"config", run_config_json(rc)}};
  j["origin_strength"] = v.origin_strength() ? json(*v.origin_strength()) : json(nullptr);
  out << dump(j);
  return kOk;
}

int cmd_verify(const RunConfig& rc, const std::string& which, std::ostream& out) {
  std::vector<ExampleReport> reports;
  const bool all = which == "all";
  if (all || which == "1") reports.push_back(run_example_1({}, rc.numeric));
  if (all || which == "2") reports.push_back(run_example_2({}, rc.numeric));
  if (all || which == "3") reports.push_back(run_example_3({}, rc.numeric));
  bool ok = true;
  json arr = json::array();
  for (const auto& r : reports) {
    ok = ok && r.overall;
    arr.push_back(report_to_json(r));
  }
  if (rc.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(17) << "example,check,max_deviation,tolerance,pass\n";
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        os << r.example_id << ',' << c.name << ',' << c.max_deviation << ',' << c.tolerance << ','
           << (c.pass ? "true" : "false") << '\n';
    emit(rc, out, os.str());
  } else {
    emit(rc, out, dump({{"reports", arr}, {"pass", ok}, {"config", run_config_json(rc)}}));
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jost functions, spectral singularities and SUSY transformations on the half-line"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_help_all_flag("--help-all", "Expand all help");

  RunConfig rc;
  double tol = rc.numeric.rtol, atol = rc.numeric.atol;
  double zero_residual = rc.numeric.zero_residual, nodeless = rc.numeric.nodeless_threshold;
  int threads = 0;
  app.add_option("--tol", tol, "Relative integration tolerance")->check(CLI::PositiveNumber);
  app.add_option("--atol", atol, "Absolute integration tolerance")->check(CLI::PositiveNumber);
  app.add_option("--zero-residual", zero_residual, "Residual |A| accepted for a zero")->check(CLI::PositiveNumber);
  app.add_option("--nodeless", nodeless, "Nodeless threshold for transformation functions")
      ->check(CLI::PositiveNumber);
  app.add_option("--xmax", rc.x_max, "Upper end of output grids")->check(CLI::PositiveNumber);
  app.add_option("--points", rc.points, "Output grid points")->check(CLI::Range(std::size_t{16}, std::size_t{10'000'000}));
  app.add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", rc.out, "Output file (transform: path prefix)");
  app.add_option("--threads", threads, "Thread cap for parallel scans (0: SUSY_SPECTRA_THREADS or default)")
      ->check(CLI::NonNegativeNumber);

  std::string file, steps_file, s_text, rect_text = "-5,5,0.05,5", which;
  double k_min = 0.05, k_max = 5.0;
  std::size_t samples = 200;

  auto* jost = app.add_subcommand("jost", "Evaluate A(s); --format csv writes e+(x, s) on the output grid");
  jost->add_option("potential", file, "Potential spec JSON")->required();
  jost->add_option("s", s_text, "Spectral parameter, e.g. 1+0.5i")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Spectral singularities and bound states");
  spectrum->add_option("potential", file, "Potential spec JSON")->required();
  spectrum->add_option("--kmin", k_min, "Smallest |k| on the real-axis scan")->check(CLI::PositiveNumber);
  spectrum->add_option("--kmax", k_max, "Largest |k| on the real-axis scan")->check(CLI::PositiveNumber);
  spectrum->add_option("--rect", rect_text, "Bound-state contour re0,re1,im0,im1");
  spectrum->add_option("--samples", samples, "Scan samples per half-axis")->check(CLI::Range(std::size_t{16}, std::size_t{1'000'000}));

  auto* transform = app.add_subcommand("transform", "Apply transformation steps; writes PREFIX.json and PREFIX.csv");
  transform->add_option("potential", file, "Potential spec JSON")->required();
  transform->add_option("steps", steps_file, "Steps JSON (array or {\"chain\": [...]})")->required();

  auto* verify = app.add_subcommand("verify", "Run the worked-example checks");
  verify->add_option("--example", which, "1, 2, 3 or all")->required()->check(CLI::IsMember({"1", "2", "3", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    return code;
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    return code;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    app.exit(e, o, x);
    err << x.str();
    return kUsage;
  }

  rc.numeric.rtol = tol;
  rc.numeric.atol = atol;
  rc.numeric.zero_residual = zero_residual;
  rc.numeric.nodeless_threshold = nodeless;
  rc.numeric.grid_points = rc.points;
  set_max_threads(threads);

  try {
    if (*jost) return cmd_jost(rc, file, s_text, out);
    if (*spectrum) {
      if (!(k_min < k_max)) throw ParseError("--kmin must be below --kmax");
      return cmd_spectrum(rc, file, k_min, k_max, samples, rect_text, out, err);
    }
    if (*transform) return cmd_transform(rc, file, steps_file, out);
    return cmd_verify(rc, which, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_of(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerics;
  }
}

}  // namespace susy::cli
