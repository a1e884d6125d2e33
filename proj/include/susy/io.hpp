#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "susy/potential.hpp"
#include "susy/solution.hpp"
#include "susy/spectral.hpp"

namespace susy::io {

using json = nlohmann::json;

/// "a+bi", "a-bi", "bi", "a", "i" with optional whitespace. Throws ParseError.
cplx parse_complex(std::string_view text);

json complex_to_json(cplx z);
/// [re, im] or a bare number.
cplx complex_from_json(const json& j);

json step_to_json(const TransformStep& step);
TransformStep step_from_json(const json& j);
/// Either a bare array of steps or an object with a "chain" array.
std::vector<TransformStep> steps_from_json(const json& j);

json spec_to_json(const PotentialSpec& spec);
/// Catalog specs are returned ready to evaluate; transformed specs still need darboux::realize.
PotentialSpec spec_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
/// Parses and realizes a spec file. File and JSON problems raise ParseError.
PotentialSpec load_potential(const std::filesystem::path& path, const NumericConfig& cfg = {});
std::vector<TransformStep> load_steps(const std::filesystem::path& path);

json config_to_json(const NumericConfig& cfg);
json spectral_point_to_json(const SpectralPoint& p);
json spectrum_to_json(const SpectrumReport& report);

/// 64-bit FNV-1a of the compact spec JSON, as 16 hex digits.
std::string spec_hash(const PotentialSpec& spec);

/// x, Re y, Im y, Re y', Im y'; header comment carries the spec hash and s.
void write_trace_csv(std::ostream& os, const SolutionTrace& trace, const PotentialSpec& spec);
/// x, Re V, Im V.
void write_potential_csv(std::ostream& os, std::span<const double> grid, std::span<const cplx> values);

}  // namespace susy::io
