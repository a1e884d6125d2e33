#include "susy/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "susy/darboux.hpp"
#include "susy/errors.hpp"

namespace susy::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_real(std::string_view t, std::string_view whole) {
  double v = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (!t.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) throw ParseError("cannot parse complex number '" + std::string(whole) + "'");
  return v;
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing parameter '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("parameter '") + key + "' is not a number");
  return v.get<double>();
}

std::size_t parse_index(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError("reciprocal seed needs a non-negative index 'of'");
  return j.get<std::size_t>();
}

}  // namespace

cplx parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, text), 0.0};
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? std::string() : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  throw ParseError("expected a complex number [re, im], got " + j.dump());
}

json step_to_json(const TransformStep& step) {
  json seed = std::visit(overloaded{
                             [](const JostSeed& s) { return json{{"type", "jost"}, {"s", complex_to_json(s.s)}}; },
                             [](const RegularSeed&) { return json{{"type", "regular"}}; },
                             [](const CustomSeed& s) {
                               return json{{"type", "custom"},
                                           {"x0", s.x0},
                                           {"y0", complex_to_json(s.y0)},
                                           {"dy0", complex_to_json(s.dy0)}};
                             },
                             [](const ReciprocalSeed& s) { return json{{"type", "reciprocal"}, {"of", s.of}}; },
                         },
                         step.seed);
  json j{{"alpha", complex_to_json(step.alpha)}, {"seed", seed}};
  if (step.order != 1) j["order"] = step.order;
  return j;
}

TransformStep step_from_json(const json& j) {
  if (!j.is_object() || !j.contains("seed")) throw ParseError("transformation step needs a 'seed' object");
  const json& seed = j.at("seed");
  const std::string type = seed.value("type", "");
  TransformStep st;
  if (type == "jost") {
    st.seed = JostSeed{complex_from_json(seed.at("s"))};
  } else if (type == "regular") {
    st.seed = RegularSeed{};
  } else if (type == "custom") {
    st.seed = CustomSeed{number(seed, "x0"), complex_from_json(seed.at("y0")), complex_from_json(seed.at("dy0"))};
  } else if (type == "reciprocal") {
    if (!seed.contains("of")) throw ParseError("reciprocal seed needs 'of'");
    st.seed = ReciprocalSeed{parse_index(seed.at("of"))};
  } else {
    throw ParseError("unknown seed type '" + type + "'");
  }
  if (j.contains("alpha")) {
    st.alpha = complex_from_json(j.at("alpha"));
  } else if (const auto* js = std::get_if<JostSeed>(&st.seed)) {
    st.alpha = js->s * js->s;
  } else {
    throw ParseError("transformation step needs 'alpha'");
  }
  st.order = j.value("order", 1);
  if (st.order != 1 && st.order != 2) throw ParseError("step order must be 1 or 2");
  return st;
}

std::vector<TransformStep> steps_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("chain")) throw ParseError("steps file needs a 'chain' array");
    arr = &j.at("chain");
  }
  if (!arr->is_array()) throw ParseError("steps must be a JSON array");
  std::vector<TransformStep> out;
  for (const auto& s : *arr) out.push_back(step_from_json(s));
  return out;
}

json spec_to_json(const PotentialSpec& spec) {
  json params = json::object();
  json chain = json::array();
  std::visit(overloaded{
                 [](const ZeroPotential&) {},
                 [&](const SechWell& p) { params = {{"lambda", p.lambda}, {"a", p.a}}; },
                 [&](const ShiftedOneSoliton& p) { params = {{"a", p.a}, {"b", complex_to_json(p.b)}}; },
                 [&](const SinhBarrier& p) { params = {{"a", p.a}}; },
                 [&](const ClosedForm2Susy& p) { params = {{"a1", p.a1}, {"k0", p.k0}}; },
                 [&](const Transformed& t) {
                   params = {{"base", spec_to_json(*t.base)}};
                   for (const auto& st : t.chain) chain.push_back(step_to_json(st));
                 },
             },
             spec.kind());
  json j{{"kind", spec.kind_name()}, {"params", params}, {"decay_rate", spec.decay_rate()}};
  j["origin_strength"] = spec.origin_strength() ? json(*spec.origin_strength()) : json(nullptr);
  j["chain"] = chain;
  return j;
}

PotentialSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("potential spec must be a JSON object");
  const std::string kind = j.value("kind", "");
  const json params = j.value("params", json::object());
  try {
    PotentialSpec spec = PotentialSpec::zero();
    if (kind == "zero") {
      spec = PotentialSpec::zero(j.contains("decay_rate") ? number(j, "decay_rate") : 2.0);
    } else if (kind == "sech_well") {
      if (!params.contains("lambda") || !params.at("lambda").is_number_integer())
        throw ParseError("sech_well needs an integer 'lambda'");
      spec = PotentialSpec::sech_well(params.at("lambda").get<int>(), params.contains("a") ? number(params, "a") : 1.0);
    } else if (kind == "shifted_one_soliton") {
      spec = PotentialSpec::shifted_one_soliton(number(params, "a"), complex_from_json(params.at("b")));
    } else if (kind == "sinh_barrier") {
      spec = PotentialSpec::sinh_barrier(params.contains("a") ? number(params, "a") : 1.0);
    } else if (kind == "closed_form_2susy") {
      spec = PotentialSpec::closed_form_2susy(number(params, "a1"), number(params, "k0"));
    } else if (kind == "transformed") {
      if (!params.contains("base")) throw ParseError("transformed spec needs params.base");
      return PotentialSpec::transformed_unvalidated(spec_from_json(params.at("base")),
                                                    steps_from_json(j.value("chain", json::array())));
    } else {
      throw ParseError("unknown potential kind '" + kind + "'");
    }
    if (j.contains("decay_rate") && kind != "zero") spec = spec.with_decay_rate(number(j, "decay_rate"));
    if (j.contains("origin_strength") && !j.at("origin_strength").is_null()) {
      const double nu = number(j, "origin_strength");
      if (nu < 0.0) throw ParseError("origin_strength must be non-negative");
      spec = spec.with_origin_strength(nu > 0.0 ? std::optional<double>(nu) : std::nullopt);
    }
    if (j.contains("chain") && !j.at("chain").empty())
      return PotentialSpec::transformed_unvalidated(spec, steps_from_json(j.at("chain")));
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed potential spec: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid potential parameters: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

PotentialSpec load_potential(const std::filesystem::path& path, const NumericConfig& cfg) {
  return realize(spec_from_json(read_json_file(path)), cfg);
}

std::vector<TransformStep> load_steps(const std::filesystem::path& path) {
  try {
    return steps_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw ParseError("malformed steps file: " + std::string(e.what()));
  }
}

json config_to_json(const NumericConfig& c) {
  json j{{"rtol", c.rtol},
         {"atol", c.atol},
         {"max_steps", c.max_steps},
         {"tail_tol", c.tail_tol},
         {"cutoff_cap_factor", c.cutoff_cap_factor},
         {"origin_x_min", c.origin_x_min},
         {"grid_points", c.grid_points},
         {"dense_node_spacing", c.dense_node_spacing},
         {"seed_extent_factor", c.seed_extent_factor},
         {"nodeless_threshold", c.nodeless_threshold},
         {"simplicity_threshold", c.simplicity_threshold},
         {"zero_residual", c.zero_residual},
         {"candidate_threshold", c.candidate_threshold},
         {"exclusion_radius", c.exclusion_radius},
         {"newton_step_rel", c.newton_step_rel},
         {"newton_max_steps", c.newton_max_steps},
         {"real_axis_tolerance", c.real_axis_tolerance},
         {"singular_point_threshold", c.singular_point_threshold},
         {"edge_samples", c.edge_samples},
         {"max_phase_refinements", c.max_phase_refinements},
         {"boundary_min_modulus", c.boundary_min_modulus},
         {"min_rect_diameter", c.min_rect_diameter}};
  j["x_max_override"] = c.x_max_override ? json(*c.x_max_override) : json(nullptr);
  return j;
}

json spectral_point_to_json(const SpectralPoint& p) {
  return {{"s", complex_to_json(p.s)}, {"E", complex_to_json(p.E)}, {"residual", p.residual}};
}

json spectrum_to_json(const SpectrumReport& r) {
  json bs = json::array(), sg = json::array();
  for (const auto& p : r.bound_states) bs.push_back(spectral_point_to_json(p));
  for (const auto& p : r.singularities) sg.push_back(spectral_point_to_json(p));
  return {{"bound_states", bs},
          {"singularities", sg},
          {"winding", r.winding_total},
          {"consistent", r.consistent},
          {"k_range", {r.k_min, r.k_max}},
          {"rect", {r.contour.re0, r.contour.re1, r.contour.im0, r.contour.im1}},
          {"diagnostics", r.diagnostics}};
}

std::string spec_hash(const PotentialSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : spec_to_json(spec).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_trace_csv(std::ostream& os, const SolutionTrace& trace, const PotentialSpec& spec) {
  const cplx s = trace.parameter.s;
  os << "# spec " << spec_hash(spec) << " s " << std::setprecision(17) << s.real() << (s.imag() < 0 ? "" : "+")
     << s.imag() << "i\n";
  os << "x,re_y,im_y,re_dy,im_dy\n";
  for (const auto& st : trace.states)
    os << st.x << ',' << st.y.real() << ',' << st.y.imag() << ',' << st.dy.real() << ',' << st.dy.imag() << '\n';
}

void write_potential_csv(std::ostream& os, std::span<const double> grid, std::span<const cplx> values) {
  os << std::setprecision(17) << "x,re_V,im_V\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << grid[i] << ',' << values[i].real() << ',' << values[i].imag() << '\n';
}

}  // namespace susy::io
